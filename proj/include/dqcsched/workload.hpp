#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "dqcsched/circuit.hpp"
#include "dqcsched/execmodel.hpp"
#include "dqcsched/job.hpp"
#include "dqcsched/netmodel.hpp"
#include "dqcsched/random.hpp"

namespace dqc {

/// Splits a circuit into contiguous blocks of `qpu_capacity` qubits and counts
/// the gates that cross blocks. The estimate uses the network's nominal delay.
JobDescriptor partition_job(const CircuitProfile& profile, std::size_t qpu_capacity,
                            const Network& network, const ExecModelParams& params);

/// Poisson(lambda) draw. Counts unit-rate exponential inter-arrival gaps that
/// fit in [0, lambda], which is exact for every lambda.
std::size_t sample_arrival_count(double lambda, Rng& rng);

/// p_i = i^alpha / sum_j j^alpha for i = 1..n.
std::vector<double> selection_probabilities(std::size_t n, double bias_alpha);

struct CatalogEntry {
  CircuitKind kind = CircuitKind::GHZ;
  std::size_t n_qubits = 5;
  std::size_t reps = 1;
  friend bool operator==(const CatalogEntry&, const CatalogEntry&) = default;
};

/// The five families at 5, 10 and 15 qubits, one repetition each.
std::vector<CatalogEntry> default_catalog_entries();

/// Partitioned job templates ordered by ascending non-local gate count
/// (stable with respect to the entry order).
struct Catalog {
  std::vector<JobDescriptor> jobs;

  /// Largest nominal execution time; the PPO state divides t_j by it.
  std::int64_t max_est_exec_ns() const;
};

Catalog build_catalog(const std::vector<CatalogEntry>& entries,
                      const Network& network, const ExecModelParams& params);

struct WorkloadConfig {
  double lambda = 5.0;
  /// When set, every slot receives exactly this many jobs.
  std::optional<std::size_t> fixed_count;
  double bias_alpha = 0.0;
  std::size_t n_slots = 200;
  std::size_t min_qubits = 5;
  std::size_t max_qubits = 15;

  void validate() const;
};

/// Jobs arriving in one slot. Kinds are drawn i.i.d. from the catalog with
/// selection_probabilities; ids are (slot_index << 32) | arrival_index.
std::vector<JobDescriptor> generate_slot_jobs(const WorkloadConfig& config,
                                              const Catalog& catalog,
                                              std::size_t slot_index, Rng& rng);

}  // namespace dqc
