#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dqcsched/execmodel.hpp"
#include "dqcsched/metrics.hpp"
#include "dqcsched/netmodel.hpp"
#include "dqcsched/rl/ppo.hpp"
#include "dqcsched/schedulers.hpp"
#include "dqcsched/workload.hpp"

namespace dqc::bench {

enum class ArrivalMode { Poisson, Fixed };

/// One (arrival rate, bias) combination of an experiment.
struct Setting {
  ArrivalMode mode = ArrivalMode::Poisson;
  double lambda = 5.0;
  std::size_t fixed_count = 0;
  double bias_alpha = 0.0;

  /// "lambda=5 alpha=0.5" or "fixed=5 alpha=0".
  std::string label() const;
};

struct ExperimentConfig {
  // [network]
  std::size_t n_nodes = 6;
  std::size_t capacity = 3;
  std::size_t comm_qubits = 1;
  QualityMix quality_mix;
  /// Every link of this class instead of a random mix.
  std::optional<LinkQuality> uniform_quality;
  // [workload]
  ArrivalMode mode = ArrivalMode::Poisson;
  std::vector<double> lambdas{5.0, 8.0};
  std::size_t fixed_count = 5;
  std::vector<double> bias_alphas{0.0, 0.5};
  std::size_t n_slots = 200;
  std::vector<CatalogEntry> catalog = default_catalog_entries();
  // [exec]
  ExecModelParams exec;
  // [schedulers]
  std::vector<SchedulerKind> schedulers{SchedulerKind::Fifo, SchedulerKind::List,
                                        SchedulerKind::ResourcePrioritize, SchedulerKind::Epr,
                                        SchedulerKind::EprNodeSelection, SchedulerKind::Asap};
  std::size_t resource_enumeration_cap = 12;
  bool epr_strict_order = true;
  // [replication]
  std::vector<std::uint64_t> seeds{1};
  // [ppo]
  std::string ppo_weights;
  rl::PpoConfig ppo;
  std::size_t ppo_updates = 200;
  bool ppo_node_selection = false;
  std::string ppo_training_log;
  // [output]
  std::string output_dir = "results";

  /// Cartesian product of lambdas (or the fixed count) and bias values.
  std::vector<Setting> settings() const;
  /// Throws ConfigError.
  void validate() const;
};

/// Parses the INI text. `source` names the input in error messages. Relative
/// catalog_file paths resolve against `base_dir`.
ExperimentConfig parse_config(std::string_view text, const std::string& source = "<config>",
                              const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

/// "GHZ:5", "qft:10:2" etc.: kind, qubits, optional repetitions.
CatalogEntry parse_catalog_entry(std::string_view text);

struct SlotRecord {
  std::string setting;
  std::uint64_t seed = 0;
  std::size_t slot = 0;
  std::string scheduler;
  std::size_t n_jobs = 0;
  /// Empty for slots without placed jobs.
  std::optional<MetricsReport> metrics;
  /// Arrival-order job labels joined by ';'.
  std::string job_kinds;
};

/// Network of replication `seed`.
Network experiment_network(const ExperimentConfig& config, std::uint64_t seed);
/// Seed of the job stream for (seed, setting); shared by every scheduler.
std::uint64_t workload_seed(std::uint64_t seed, std::size_t setting_index);

/// Runs one scheduler on one queue.
Schedule run_scheduler(SchedulerKind kind, std::span<const JobDescriptor> queue,
                       const Network& network, const ExperimentConfig& config,
                       const rl::PpoPolicy* policy);

using ProgressFn = std::function<void(const Setting&, std::uint64_t seed)>;

/// Every scheduler sees the same job list per (setting, seed, slot). Each
/// scheduler keeps its own clock: a slot is released when the scheduler's
/// previous slot has finished. Records come sorted by setting, seed, slot
/// and then configured scheduler order. `policy` is required for PPO kinds.
std::vector<SlotRecord> run_experiment(const ExperimentConfig& config,
                                       const rl::PpoPolicy* policy = nullptr,
                                       const ProgressFn& progress = {});

/// Shortest round-trip decimal form.
std::string format_double(double v);

extern const std::vector<std::string> kSlotColumns;
extern const std::vector<std::string> kSummaryColumns;
/// Metric columns accepted by cdf_export.
extern const std::vector<std::string> kMetricColumns;

void write_slot_records(std::ostream& out, const std::vector<SlotRecord>& records);

/// A parsed CSV file: header plus rows of raw fields.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of `name` in the header; throws std::runtime_error when absent.
  std::size_t column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in);
void write_csv(std::ostream& out, const CsvTable& table);

/// Means of the summary metrics per (setting, scheduler), skipping empty
/// fields. Works on slot records or on an earlier summary.
CsvTable summarize(const CsvTable& records);
CsvTable summarize(const std::vector<SlotRecord>& records);

/// Empirical CDF of `metric` per scheduler; rows restricted to `setting`
/// when given. Throws std::invalid_argument for an unknown metric.
CsvTable cdf_export(const CsvTable& records, std::string_view metric,
                    const std::optional<std::string>& setting = std::nullopt);

/// Setting labels in first-appearance order.
std::vector<std::string> settings_in(const CsvTable& records);

}  // namespace dqc::bench
