#include <stdexcept>

#include "dqcsched/bench.hpp"
#include "dqcsched/error.hpp"

namespace dqc::bench {

Network experiment_network(const ExperimentConfig& config, std::uint64_t seed) {
  if (config.uniform_quality) {
    return build_uniform_network(config.n_nodes, config.capacity, *config.uniform_quality);
  }
  return build_network(config.n_nodes, config.capacity, config.quality_mix, derive_seed(seed, 0),
                       config.comm_qubits);
}

std::uint64_t workload_seed(std::uint64_t seed, std::size_t setting_index) {
  return derive_seed(derive_seed(seed, 1), setting_index);
}

Schedule run_scheduler(SchedulerKind kind, std::span<const JobDescriptor> queue,
                       const Network& network, const ExperimentConfig& config,
                       const rl::PpoPolicy* policy) {
  switch (kind) {
    case SchedulerKind::Fifo:
      return fifo_schedule(queue, network, config.exec);
    case SchedulerKind::List:
      return list_schedule(queue, network, config.exec);
    case SchedulerKind::ResourcePrioritize:
      return resource_prioritize_schedule(queue, network, config.exec,
                                          config.resource_enumeration_cap);
    case SchedulerKind::Epr:
    case SchedulerKind::EprNodeSelection:
      return epr_schedule(queue, network, config.exec,
                          {kind == SchedulerKind::EprNodeSelection, config.epr_strict_order});
    case SchedulerKind::Asap:
      return asap_schedule(queue, network, config.exec);
    case SchedulerKind::Ppo:
    case SchedulerKind::PpoNodeSelection:
      if (policy == nullptr) throw DomainError("PPO schedulers need trained weights");
      return rl::ppo_schedule(queue, network, config.exec, *policy,
                              kind == SchedulerKind::PpoNodeSelection);
  }
  throw DomainError("unknown scheduler kind");
}

std::vector<SlotRecord> run_experiment(const ExperimentConfig& config,
                                       const rl::PpoPolicy* policy, const ProgressFn& progress) {
  config.validate();
  const auto settings = config.settings();
  std::vector<SlotRecord> records;
  records.reserve(settings.size() * config.seeds.size() * config.n_slots *
                  config.schedulers.size());

  for (std::size_t si = 0; si < settings.size(); ++si) {
    const Setting& setting = settings[si];
    const std::string label = setting.label();
    WorkloadConfig wl;
    wl.lambda = setting.lambda;
    if (setting.mode == ArrivalMode::Fixed) wl.fixed_count = setting.fixed_count;
    wl.bias_alpha = setting.bias_alpha;
    wl.n_slots = config.n_slots;

    for (std::uint64_t seed : config.seeds) {
      if (progress) progress(setting, seed);
      const Network network = experiment_network(config, seed);
      const Catalog catalog = build_catalog(config.catalog, network, config.exec);
      Rng rng(workload_seed(seed, si));
      std::vector<Network> clocks(config.schedulers.size(), network);

      for (std::size_t slot = 0; slot < config.n_slots; ++slot) {
        const auto jobs = generate_slot_jobs(wl, catalog, slot, rng);
        std::string kinds;
        for (const auto& j : jobs) {
          if (!kinds.empty()) kinds += ';';
          kinds += j.label();
        }
        for (std::size_t k = 0; k < config.schedulers.size(); ++k) {
          const SchedulerKind kind = config.schedulers[k];
          Network& clock = clocks[k];
          const Schedule schedule = run_scheduler(kind, jobs, clock, config, policy);
          if (auto err = check_schedule(schedule, jobs, clock); !err.empty()) {
            throw std::runtime_error(std::string(to_string(kind)) + " produced an invalid schedule: " +
                                     err);
          }
          SlotRecord rec;
          rec.setting = label;
          rec.seed = seed;
          rec.slot = slot;
          rec.scheduler = std::string(to_string(kind));
          rec.n_jobs = jobs.size();
          rec.job_kinds = kinds;
          if (!schedule.placements.empty()) {
            rec.metrics = compute_metrics(schedule, config.n_nodes);
            std::int64_t end = clock.all_free_at();
            for (const auto& p : schedule.placements) end = std::max(end, p.finish_ns);
            for (NodeId n = 0; n < clock.n_nodes(); ++n) clock.set_availability(n, end);
          }
          records.push_back(std::move(rec));
        }
      }
    }
  }
  return records;
}

}  // namespace dqc::bench
