#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dqcsched/execmodel.hpp"
#include "dqcsched/job.hpp"
#include "dqcsched/netmodel.hpp"
#include "dqcsched/random.hpp"
#include "dqcsched/rl/mlp.hpp"
#include "dqcsched/schedule.hpp"
#include "dqcsched/workload.hpp"

namespace dqc::rl {

/// Per-job features: required QPUs, EPR pairs, non-local gates, normalized
/// estimated time.
inline constexpr std::size_t kFeatures = 4;

enum class RewardVariant { Plain, NodeSelection };
/// How a stage's start offset enters the per-job latency.
/// Cumulative: sum of all preceding stage maxima (true waiting time).
/// PreviousStage: only the immediately preceding stage's maximum.
enum class LatencyOffset { Cumulative, PreviousStage };
/// Which transitions of an episode receive the episode reward.
enum class RewardAssignment { EveryTransition, FinalTransition };

std::string_view to_string(RewardVariant v);
RewardVariant parse_reward_variant(std::string_view s);
std::string_view to_string(LatencyOffset v);
LatencyOffset parse_latency_offset(std::string_view s);
std::string_view to_string(RewardAssignment v);
RewardAssignment parse_reward_assignment(std::string_view s);

struct PpoConfig {
  std::size_t j_max = 5;
  std::size_t n_features = kFeatures;
  double clip_eps = 0.2;
  double value_coef = 0.5;
  double entropy_coef = 0.01;
  std::size_t minibatch = 64;
  std::size_t update_every = 1024;
  std::size_t n_epochs = 4;
  RewardVariant reward_variant = RewardVariant::Plain;
  double alpha_reward = 1.0;
  double gamma_pressure = 0.5;
  double beta_positional = 1.0;
  LatencyOffset latency_offset = LatencyOffset::Cumulative;
  RewardAssignment reward_assignment = RewardAssignment::EveryTransition;
  double discount = 0.99;
  double gae_lambda = 0.95;
  double learning_rate = 3e-4;
  double max_grad_norm = 0.5;
  bool normalize_advantages = true;
  std::vector<std::size_t> hidden = {64, 64};
  std::uint64_t seed = 1;

  void validate() const;
};

enum class RowMask : std::uint8_t { Available, Selected, Padding };

/// J x 4 feature matrix (row-major) with a per-row selection mask.
struct PpoState {
  std::size_t j_max = 0;
  std::vector<double> features;
  std::vector<RowMask> mask;

  double required_qpus(std::size_t row) const { return features[row * kFeatures]; }
  double epr_pairs(std::size_t row) const { return features[row * kFeatures + 1]; }
  bool any_available() const;
};

/// Rows follow queue order; t_j is divided by `time_scale`. Throws
/// DomainError when the queue holds more than j_max jobs.
PpoState encode_state(std::span<const JobDescriptor> queue, std::size_t j_max,
                      double time_scale);

/// Actor and critic over the flattened, scaled state.
struct PpoPolicy {
  std::size_t j_max = 0;
  /// Divisors applied to the four raw features before they reach the networks.
  std::array<double, kFeatures> feature_scale{1.0, 1.0, 1.0, 1.0};
  /// Divisor of est_exec_ns in encode_state.
  double time_scale = 1.0;
  Mlp actor;
  Mlp critic;

  /// Randomly initialized networks with the configured hidden sizes.
  static PpoPolicy create(const PpoConfig& config, std::array<double, kFeatures> feature_scale,
                          double time_scale, Rng& rng);

  /// Rows that are not available are zeroed.
  std::vector<double> observation(const PpoState& state) const;
};

/// Scales the features by the catalog maxima; time_scale is the largest
/// nominal estimated time.
std::array<double, kFeatures> catalog_feature_scale(const Catalog& catalog);

/// Softmax restricted to entries with mask != 0; masked entries get 0.
std::vector<double> masked_softmax(std::span<const double> logits,
                                   std::span<const std::uint8_t> mask);
/// Shannon entropy (nats) of a probability vector; zero entries contribute 0.
double entropy(std::span<const double> probs);

struct Transition {
  std::vector<double> observation;
  std::vector<std::uint8_t> feasible;
  std::size_t action = 0;
  double log_prob = 0.0;
  double value = 0.0;
  double reward = 0.0;
  /// Last transition of its episode.
  bool terminal = false;
  double advantage = 0.0;
  double ret = 0.0;
};

enum class SelectMode { Greedy, Sample };

struct StageSelection {
  /// Row indices in pick order.
  std::vector<std::size_t> order;
  /// Binary action vector over the J rows.
  std::vector<std::uint8_t> action;
  std::vector<Transition> transitions;
};

/// Fills one stage. Each pick recomputes the masked softmax over available
/// rows whose QPU demand fits the capacity left in the stage, then takes the
/// argmax (Greedy) or a sample (Sample, needs `rng`). Picked rows are marked
/// Selected in `state`.
StageSelection select_stage(const PpoPolicy& policy, PpoState& state, std::size_t n_max,
                            SelectMode mode, Rng* rng = nullptr);

struct LatencyBreakdown {
  /// l_i per stage, same shape as the input.
  std::vector<std::vector<double>> latency;
  double total = 0.0;
  double worst = 0.0;
  double r_lat = 0.0;
};

/// Latency of every job given execution times grouped by stage. `worst`
/// is the fully serial descending-order bound sum_k (n-k+1) e_(k).
LatencyBreakdown stage_latencies(const std::vector<std::vector<double>>& exec_by_stage,
                                 LatencyOffset offset = LatencyOffset::Cumulative);

/// R_EPR for EPR counts grouped by stage (intra-stage order = execution
/// order o_i). A zero denominator is replaced by 1.
double epr_reward(const std::vector<std::vector<double>>& epr_by_stage, RewardVariant variant,
                  double alpha, double gamma, double beta);

struct EpisodeReward {
  double r_lat = 0.0;
  double r_epr = 0.0;
  /// -r_lat + r_epr
  double reward = 0.0;
};

EpisodeReward episode_reward(const std::vector<std::vector<double>>& exec_by_stage,
                             const std::vector<std::vector<double>>& epr_by_stage,
                             const PpoConfig& config);

/// min(ratio * A, clip(ratio, 1-eps, 1+eps) * A)
double clipped_surrogate(double ratio, double advantage, double clip_eps);

/// Generalized advantage estimation over consecutive episodes; episode
/// boundaries are the terminal flags.
void compute_advantages(std::vector<Transition>& buffer, double discount, double gae_lambda);

struct LossComponents {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
};

struct LossWeights {
  double policy = 1.0;
  double value = 0.5;
  double entropy = -0.01;
};

struct LossEvaluation {
  LossComponents components;
  /// Gradients of policy*L_pi + value*L_v + entropy*H.
  std::vector<double> actor_grad;
  std::vector<double> critic_grad;
};

/// Batch means of L_pi, L_v and H over the transitions at `indices`.
LossEvaluation evaluate_loss(const PpoPolicy& policy, std::span<const Transition> buffer,
                             std::span<const std::size_t> indices, double clip_eps,
                             const LossWeights& weights, bool with_gradients = true);

class PpoOptimizer {
 public:
  PpoOptimizer(const PpoPolicy& policy, double learning_rate);
  void step(PpoPolicy& policy, std::vector<double>& actor_grad,
            std::vector<double>& critic_grad, double max_grad_norm);

 private:
  Adam actor_;
  Adam critic_;
};

/// Minibatch epochs on L_pi + c_v L_v - c_e H. Returns the components
/// averaged per epoch and clears the buffer. Throws DomainError when empty.
std::vector<LossComponents> ppo_update(std::vector<Transition>& buffer, PpoPolicy& policy,
                                       PpoOptimizer& optimizer, const PpoConfig& config,
                                       Rng& rng);

struct Episode {
  Schedule schedule;
  std::vector<Transition> transitions;
  std::vector<std::vector<double>> exec_by_stage;
  std::vector<std::vector<double>> epr_by_stage;
  EpisodeReward reward;
};

/// Schedules one queue stage by stage with the policy and scores the result.
Episode run_episode(std::span<const JobDescriptor> queue, const Network& network,
                    const ExecModelParams& exec, const PpoPolicy& policy,
                    const PpoConfig& config, bool node_selection, SelectMode mode,
                    Rng* rng = nullptr);

/// Greedy inference. Nodes come from select_nodes when `node_selection` is
/// set, else the lowest free ids.
Schedule ppo_schedule(std::span<const JobDescriptor> queue, const Network& network,
                      const ExecModelParams& exec, const PpoPolicy& policy,
                      bool node_selection);

struct TrainingEnv {
  Network network;
  Catalog catalog;
  WorkloadConfig workload;
  ExecModelParams exec;
  bool node_selection = false;
};

struct TrainingLogRow {
  std::size_t update = 0;
  double mean_reward = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
};

struct TrainingResult {
  PpoPolicy policy;
  std::vector<TrainingLogRow> log;
};

/// The initial policy PPO training starts from for this config and env.
PpoPolicy initial_policy(const TrainingEnv& env, const PpoConfig& config);

/// Runs `n_updates` rounds of rollout collection (update_every transitions
/// each) followed by ppo_update. Slots use the env's fixed job count.
TrainingResult train(const TrainingEnv& env, const PpoConfig& config, std::size_t n_updates);

void write_training_log(std::ostream& out, const std::vector<TrainingLogRow>& log);

/// Versioned binary weights file. Throws std::runtime_error on I/O or
/// format problems.
void save_policy(const PpoPolicy& policy, const std::string& path);
PpoPolicy load_policy(const std::string& path);
void write_policy(std::ostream& out, const PpoPolicy& policy);
PpoPolicy read_policy(std::istream& in);

}  // namespace dqc::rl
