// dqcbench: run scheduling experiments, summarize them, export CDFs and
// train the PPO scheduler.
//
// Exit codes: 0 success, 2 configuration or usage error, 1 runtime error.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dqcsched/bench.hpp"
#include "dqcsched/error.hpp"
#include "dqcsched/rl/ppo.hpp"

namespace fs = std::filesystem;
using namespace dqc;

namespace {

void apply_overrides(bench::ExperimentConfig& config, const std::vector<std::uint64_t>& seeds,
                     const std::string& schedulers) {
  if (!seeds.empty()) config.seeds = seeds;
  if (!schedulers.empty()) {
    config.schedulers.clear();
    std::size_t start = 0;
    for (;;) {
      const auto pos = schedulers.find(',', start);
      const std::string name =
          schedulers.substr(start, pos == std::string::npos ? pos : pos - start);
      try {
        config.schedulers.push_back(parse_scheduler_kind(name));
      } catch (const std::exception& e) {
        throw ConfigError(e.what(), "--schedulers");
      }
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
  }
  config.validate();
}

std::string resolve(const std::string& path, const std::string& config_path) {
  fs::path p(path);
  if (p.is_relative()) p = fs::path(config_path).parent_path() / p;
  return p.string();
}

void write_file(const fs::path& path, const bench::CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  bench::write_csv(out, table);
}

bench::CsvTable read_records(const std::string& in) {
  fs::path p(in);
  if (fs::is_directory(p)) p /= "slots.csv";
  std::ifstream file(p, std::ios::binary);
  if (!file) throw ConfigError("cannot open results file '" + p.string() + "'", "--in");
  return bench::read_csv(file);
}

std::string slug(std::string s) {
  for (char& c : s) {
    if (c == ' ') c = '_';
    if (c == '=') c = '-';
  }
  return s;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::vector<std::uint64_t>& seeds, const std::string& schedulers) {
  auto config = bench::load_config(config_path);
  apply_overrides(config, seeds, schedulers);
  std::optional<rl::PpoPolicy> policy;
  if (std::any_of(config.schedulers.begin(), config.schedulers.end(), is_ppo)) {
    if (config.ppo_weights.empty()) {
      throw ConfigError("PPO schedulers need a weights file", "[ppo] weights");
    }
    policy = rl::load_policy(resolve(config.ppo_weights, config_path));
  }
  const fs::path dir = out_dir.empty() ? fs::path(config.output_dir) : fs::path(out_dir);
  fs::create_directories(dir);

  const auto records = bench::run_experiment(
      config, policy ? &*policy : nullptr, [](const bench::Setting& s, std::uint64_t seed) {
        std::cerr << "  " << s.label() << " seed " << seed << '\n';
      });
  {
    std::ofstream out(dir / "slots.csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / "slots.csv").string());
    bench::write_slot_records(out, records);
  }
  const auto summary = bench::summarize(records);
  write_file(dir / "summary.csv", summary);
  bench::write_csv(std::cout, summary);
  std::cerr << "wrote " << (dir / "slots.csv").string() << " and "
            << (dir / "summary.csv").string() << '\n';
  return 0;
}

int cmd_summarize(const std::string& in, const std::string& out) {
  const auto summary = bench::summarize(read_records(in));
  fs::path target = out.empty() ? (fs::is_directory(in) ? fs::path(in) / "summary.csv" : fs::path())
                                : fs::path(out);
  if (!target.empty()) write_file(target, summary);
  bench::write_csv(std::cout, summary);
  return 0;
}

int cmd_cdf(const std::string& in, const std::string& metric,
            const std::optional<std::string>& setting, const std::string& out) {
  if (std::find(bench::kMetricColumns.begin(), bench::kMetricColumns.end(), metric) ==
      bench::kMetricColumns.end()) {
    throw ConfigError("unknown metric '" + metric + "'", "--metric");
  }
  const auto records = read_records(in);
  const fs::path dir = fs::is_directory(in) ? fs::path(in) : fs::path(in).parent_path();
  if (setting) {
    const fs::path target = out.empty() ? dir / ("cdf_" + metric + "_" + slug(*setting) + ".csv")
                                        : fs::path(out);
    write_file(target, bench::cdf_export(records, metric, setting));
    std::cerr << "wrote " << target.string() << '\n';
    return 0;
  }
  for (const auto& s : bench::settings_in(records)) {
    const fs::path target = dir / ("cdf_" + metric + "_" + slug(s) + ".csv");
    write_file(target, bench::cdf_export(records, metric, s));
    std::cerr << "wrote " << target.string() << '\n';
  }
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& out,
              const std::vector<std::uint64_t>& seeds, std::optional<std::size_t> updates,
              const std::string& log_path) {
  auto config = bench::load_config(config_path);
  if (!seeds.empty()) config.ppo.seed = seeds.front();
  config.validate();
  rl::TrainingEnv env{bench::experiment_network(config, config.ppo.seed), {}, {}, config.exec,
                      config.ppo_node_selection};
  env.catalog = build_catalog(config.catalog, env.network, config.exec);
  env.workload.fixed_count = config.ppo.j_max;
  env.workload.bias_alpha = config.bias_alphas.front();
  const std::size_t n_updates = updates.value_or(config.ppo_updates);

  std::cerr << "training " << n_updates << " updates of " << config.ppo.update_every
            << " transitions\n";
  const auto result = rl::train(env, config.ppo, n_updates);
  rl::save_policy(result.policy, out);

  std::string log = log_path;
  if (log.empty()) {
    log = config.ppo_training_log.empty() ? out + ".log.csv"
                                          : resolve(config.ppo_training_log, config_path);
  }
  std::ofstream log_out(log, std::ios::binary);
  if (!log_out) throw std::runtime_error("cannot write " + log);
  rl::write_training_log(log_out, result.log);
  if (!result.log.empty()) {
    std::cerr << "final mean reward " << result.log.back().mean_reward << '\n';
  }
  std::cerr << "wrote " << out << " and " << log << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed quantum job scheduling benchmark"};
  app.require_subcommand(1);

  std::string config_path, out, in, metric, schedulers, log_path;
  std::vector<std::uint64_t> seeds;
  std::optional<std::string> setting;
  std::optional<std::size_t> updates;

  auto* run = app.add_subcommand("run", "Run an experiment and write slots.csv and summary.csv");
  run->add_option("--config", config_path, "INI config file")->required();
  run->add_option("--out", out, "Output directory (default: [output] dir)");
  run->add_option("--seed", seeds, "Replication seed(s), overriding [replication] seeds");
  run->add_option("--schedulers", schedulers, "Comma-separated scheduler names");

  auto* sum = app.add_subcommand("summarize", "Average the per-slot metrics");
  sum->add_option("--in", in, "Results directory or slots CSV")->required();
  sum->add_option("--out", out, "Summary CSV path");

  auto* cdf = app.add_subcommand("cdf", "Export an empirical CDF of one metric");
  cdf->add_option("--in", in, "Results directory or slots CSV")->default_val("results");
  cdf->add_option("--metric", metric, "Metric column")->required();
  cdf->add_option("--setting", setting, "Only this setting label, e.g. \"lambda=5 alpha=0\"");
  cdf->add_option("--out", out, "CDF CSV path (with --setting)");

  auto* train = app.add_subcommand("train-ppo", "Train the PPO scheduler");
  train->add_option("--config", config_path, "INI config file")->required();
  train->add_option("--out", out, "Weights file")->required();
  train->add_option("--seed", seeds, "Training seed, overriding [ppo] seed")->expected(1);
  train->add_option("--updates", updates, "Number of PPO updates");
  train->add_option("--log", log_path, "Training log CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(config_path, out, seeds, schedulers);
    if (*sum) return cmd_summarize(in, out);
    if (*cdf) return cmd_cdf(in, metric, setting, out);
    if (*train) return cmd_train(config_path, out, seeds, updates, log_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
