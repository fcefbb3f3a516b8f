#include <ostream>

#include "dqcsched/error.hpp"
#include "dqcsched/rl/ppo.hpp"
#include "dqcsched/schedulers.hpp"

namespace dqc::rl {

Episode run_episode(std::span<const JobDescriptor> queue, const Network& network,
                    const ExecModelParams& exec, const PpoPolicy& policy,
                    const PpoConfig& config, bool node_selection, SelectMode mode, Rng* rng) {
  StagedPlacer placer(network, exec, network.all_free_at());
  std::vector<JobDescriptor> admitted;
  for (const JobDescriptor* job : admit_jobs(queue, network, placer.schedule())) {
    admitted.push_back(*job);
  }
  PpoState state = encode_state(admitted, policy.j_max, policy.time_scale);

  Episode ep;
  while (state.any_available()) {
    StageSelection sel = select_stage(policy, state, network.n_nodes(), mode, rng);
    std::vector<double> exec_times;
    std::vector<double> eprs;
    for (std::size_t row : sel.order) {
      const JobDescriptor& job = admitted[row];
      if (node_selection) {
        placer.place_on(job, select_nodes(placer.free_nodes(), job.required_qpus, network));
      } else {
        placer.place(job);
      }
      exec_times.push_back(static_cast<double>(placer.schedule().placements.back().duration_ns()));
      eprs.push_back(static_cast<double>(job.epr_pairs));
    }
    placer.close_stage();
    ep.exec_by_stage.push_back(std::move(exec_times));
    ep.epr_by_stage.push_back(std::move(eprs));
    for (auto& t : sel.transitions) ep.transitions.push_back(std::move(t));
  }
  ep.schedule = std::move(placer).finish();

  if (!ep.transitions.empty()) {
    ep.reward = episode_reward(ep.exec_by_stage, ep.epr_by_stage, config);
    for (auto& t : ep.transitions) {
      t.reward = config.reward_assignment == RewardAssignment::EveryTransition
                     ? ep.reward.reward
                     : 0.0;
    }
    ep.transitions.back().reward = ep.reward.reward;
    ep.transitions.back().terminal = true;
  }
  return ep;
}

Schedule ppo_schedule(std::span<const JobDescriptor> queue, const Network& network,
                      const ExecModelParams& exec, const PpoPolicy& policy,
                      bool node_selection) {
  // Rewards are irrelevant at inference; the default config only feeds them.
  PpoConfig config;
  config.j_max = policy.j_max;
  return run_episode(queue, network, exec, policy, config, node_selection, SelectMode::Greedy)
      .schedule;
}

namespace {

void check_env(const TrainingEnv& env, const PpoConfig& config) {
  config.validate();
  if (!env.workload.fixed_count) {
    throw DomainError("train: the workload needs a fixed job count per slot");
  }
  if (*env.workload.fixed_count > config.j_max) {
    throw DomainError("train: fixed job count exceeds j_max");
  }
  if (*env.workload.fixed_count == 0) throw DomainError("train: fixed job count must be positive");
  if (env.catalog.jobs.empty()) throw DomainError("train: empty catalog");
}

}  // namespace

PpoPolicy initial_policy(const TrainingEnv& env, const PpoConfig& config) {
  check_env(env, config);
  Rng init_rng(derive_seed(config.seed, 1));
  return PpoPolicy::create(config, catalog_feature_scale(env.catalog),
                           static_cast<double>(env.catalog.max_est_exec_ns()), init_rng);
}

TrainingResult train(const TrainingEnv& env, const PpoConfig& config, std::size_t n_updates) {
  TrainingResult result{initial_policy(env, config), {}};
  PpoPolicy& policy = result.policy;
  PpoOptimizer optimizer(policy, config.learning_rate);
  Rng workload_rng(derive_seed(config.seed, 2));
  Rng action_rng(derive_seed(config.seed, 3));
  Rng shuffle_rng(derive_seed(config.seed, 4));

  std::size_t slot = 0;
  std::vector<Transition> buffer;
  for (std::size_t u = 0; u < n_updates; ++u) {
    double reward_sum = 0.0;
    std::size_t episodes = 0;
    while (buffer.size() < config.update_every) {
      const auto jobs = generate_slot_jobs(env.workload, env.catalog, slot++, workload_rng);
      Episode ep = run_episode(jobs, env.network, env.exec, policy, config, env.node_selection,
                               SelectMode::Sample, &action_rng);
      if (ep.transitions.empty()) continue;
      reward_sum += ep.reward.reward;
      ++episodes;
      for (auto& t : ep.transitions) buffer.push_back(std::move(t));
    }
    compute_advantages(buffer, config.discount, config.gae_lambda);
    const auto losses = ppo_update(buffer, policy, optimizer, config, shuffle_rng);
    TrainingLogRow row;
    row.update = u;
    row.mean_reward = reward_sum / static_cast<double>(episodes);
    for (const auto& l : losses) {
      row.policy_loss += l.policy_loss / static_cast<double>(losses.size());
      row.value_loss += l.value_loss / static_cast<double>(losses.size());
      row.entropy += l.entropy / static_cast<double>(losses.size());
    }
    result.log.push_back(row);
  }
  return result;
}

void write_training_log(std::ostream& out, const std::vector<TrainingLogRow>& log) {
  const auto old_precision = out.precision(17);
  out << "update,mean_reward,loss_pi,loss_v,entropy\n";
  for (const auto& r : log) {
    out << r.update << ',' << r.mean_reward << ',' << r.policy_loss << ',' << r.value_loss << ','
        << r.entropy << '\n';
  }
  out.precision(old_precision);
}

}  // namespace dqc::rl
