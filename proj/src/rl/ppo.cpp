#include "dqcsched/rl/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dqcsched/error.hpp"

namespace dqc::rl {

std::string_view to_string(RewardVariant v) {
  return v == RewardVariant::Plain ? "plain" : "node_selection";
}

RewardVariant parse_reward_variant(std::string_view s) {
  if (s == "plain") return RewardVariant::Plain;
  if (s == "node_selection" || s == "node-selection") return RewardVariant::NodeSelection;
  throw std::invalid_argument("unknown reward variant '" + std::string(s) + "'");
}

std::string_view to_string(LatencyOffset v) {
  return v == LatencyOffset::Cumulative ? "cumulative" : "previous_stage";
}

LatencyOffset parse_latency_offset(std::string_view s) {
  if (s == "cumulative") return LatencyOffset::Cumulative;
  if (s == "previous_stage" || s == "previous-stage") return LatencyOffset::PreviousStage;
  throw std::invalid_argument("unknown latency offset '" + std::string(s) + "'");
}

std::string_view to_string(RewardAssignment v) {
  return v == RewardAssignment::EveryTransition ? "every" : "final";
}

RewardAssignment parse_reward_assignment(std::string_view s) {
  if (s == "every") return RewardAssignment::EveryTransition;
  if (s == "final") return RewardAssignment::FinalTransition;
  throw std::invalid_argument("unknown reward assignment '" + std::string(s) + "'");
}

void PpoConfig::validate() const {
  auto fail = [](const std::string& m) { throw DomainError("PpoConfig: " + m); };
  if (j_max == 0) fail("j_max must be positive");
  if (n_features != kFeatures) fail("n_features must be 4");
  if (!(clip_eps > 0.0 && clip_eps < 1.0)) fail("clip_eps must lie in (0,1)");
  if (minibatch == 0 || update_every == 0) fail("minibatch and update_every must be positive");
  if (minibatch > update_every) fail("minibatch must not exceed update_every");
  if (n_epochs == 0) fail("n_epochs must be positive");
  if (!(value_coef >= 0.0) || !(entropy_coef >= 0.0) || !(alpha_reward >= 0.0) ||
      !(gamma_pressure >= 0.0) || !(beta_positional >= 0.0)) {
    fail("coefficients must be non-negative");
  }
  if (!(discount >= 0.0 && discount <= 1.0)) fail("discount must lie in [0,1]");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) fail("gae_lambda must lie in [0,1]");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) fail("learning_rate must be positive");
  if (!(max_grad_norm >= 0.0)) fail("max_grad_norm must be non-negative");
  if (hidden.empty()) fail("at least one hidden layer is required");
  for (std::size_t h : hidden) {
    if (h == 0) fail("hidden sizes must be positive");
  }
}

bool PpoState::any_available() const {
  return std::find(mask.begin(), mask.end(), RowMask::Available) != mask.end();
}

PpoState encode_state(std::span<const JobDescriptor> queue, std::size_t j_max,
                      double time_scale) {
  if (queue.size() > j_max) {
    throw DomainError("encode_state: queue of " + std::to_string(queue.size()) +
                      " jobs exceeds j_max = " + std::to_string(j_max));
  }
  if (!(time_scale > 0.0)) throw DomainError("encode_state: time_scale must be positive");
  PpoState s;
  s.j_max = j_max;
  s.features.assign(j_max * kFeatures, 0.0);
  s.mask.assign(j_max, RowMask::Padding);
  for (std::size_t j = 0; j < queue.size(); ++j) {
    double* row = s.features.data() + j * kFeatures;
    row[0] = static_cast<double>(queue[j].required_qpus);
    row[1] = static_cast<double>(queue[j].epr_pairs);
    row[2] = static_cast<double>(queue[j].nonlocal_gates);
    row[3] = static_cast<double>(queue[j].est_exec_ns) / time_scale;
    s.mask[j] = RowMask::Available;
  }
  return s;
}

PpoPolicy PpoPolicy::create(const PpoConfig& config, std::array<double, kFeatures> feature_scale,
                            double time_scale, Rng& rng) {
  config.validate();
  for (double f : feature_scale) {
    if (!(f > 0.0)) throw DomainError("PpoPolicy: feature scales must be positive");
  }
  PpoPolicy p;
  p.j_max = config.j_max;
  p.feature_scale = feature_scale;
  p.time_scale = time_scale;
  std::vector<std::size_t> sizes{config.j_max * kFeatures};
  sizes.insert(sizes.end(), config.hidden.begin(), config.hidden.end());
  auto actor_sizes = sizes;
  actor_sizes.push_back(config.j_max);
  sizes.push_back(1);
  p.actor = Mlp(actor_sizes);
  p.critic = Mlp(sizes);
  // Small output weights start the actor near the uniform policy.
  p.actor.initialize(rng, 0.01);
  p.critic.initialize(rng, 1.0);
  return p;
}

std::vector<double> PpoPolicy::observation(const PpoState& state) const {
  if (state.j_max != j_max) throw DomainError("observation: state has the wrong j_max");
  std::vector<double> obs(j_max * kFeatures, 0.0);
  for (std::size_t j = 0; j < j_max; ++j) {
    if (state.mask[j] != RowMask::Available) continue;
    for (std::size_t f = 0; f < kFeatures; ++f) {
      obs[j * kFeatures + f] = state.features[j * kFeatures + f] / feature_scale[f];
    }
  }
  return obs;
}

std::array<double, kFeatures> catalog_feature_scale(const Catalog& catalog) {
  std::array<double, kFeatures> scale{1.0, 1.0, 1.0, 1.0};
  for (const auto& job : catalog.jobs) {
    scale[0] = std::max(scale[0], static_cast<double>(job.required_qpus));
    scale[1] = std::max(scale[1], static_cast<double>(job.epr_pairs));
    scale[2] = std::max(scale[2], static_cast<double>(job.nonlocal_gates));
  }
  return scale;
}

std::vector<double> masked_softmax(std::span<const double> logits,
                                   std::span<const std::uint8_t> mask) {
  if (logits.size() != mask.size()) throw DomainError("masked_softmax: size mismatch");
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (mask[i]) top = std::max(top, logits[i]);
  }
  if (top == -std::numeric_limits<double>::infinity()) {
    throw DomainError("masked_softmax: no selectable entry");
  }
  std::vector<double> p(logits.size(), 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (mask[i]) {
      p[i] = std::exp(logits[i] - top);
      sum += p[i];
    }
  }
  for (double& v : p) v /= sum;
  return p;
}

double entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

StageSelection select_stage(const PpoPolicy& policy, PpoState& state, std::size_t n_max,
                            SelectMode mode, Rng* rng) {
  if (n_max == 0) throw DomainError("select_stage: n_max must be positive");
  if (mode == SelectMode::Sample && rng == nullptr) {
    throw DomainError("select_stage: sampling needs a random source");
  }
  const std::size_t J = state.j_max;
  StageSelection out;
  out.action.assign(J, 0);
  double remaining = static_cast<double>(n_max);
  std::vector<std::uint8_t> feasible(J, 0);
  for (;;) {
    bool any = false;
    for (std::size_t j = 0; j < J; ++j) {
      feasible[j] = state.mask[j] == RowMask::Available && state.required_qpus(j) <= remaining;
      any = any || feasible[j];
    }
    if (!any) break;
    Transition t;
    t.observation = policy.observation(state);
    t.feasible = feasible;
    const auto logits = policy.actor.forward(t.observation);
    const auto probs = masked_softmax(logits, feasible);
    std::size_t a = 0;
    if (mode == SelectMode::Greedy) {
      for (std::size_t j = 0; j < J; ++j) {
        if (feasible[j] && (!feasible[a] || probs[j] > probs[a])) a = j;
      }
    } else {
      a = rng->categorical(probs);
    }
    t.action = a;
    t.log_prob = std::log(probs[a]);
    t.value = policy.critic.forward(t.observation)[0];
    out.transitions.push_back(std::move(t));
    out.order.push_back(a);
    out.action[a] = 1;
    state.mask[a] = RowMask::Selected;
    remaining -= state.required_qpus(a);
  }
  return out;
}

LatencyBreakdown stage_latencies(const std::vector<std::vector<double>>& exec_by_stage,
                                 LatencyOffset offset) {
  LatencyBreakdown out;
  std::vector<double> all;
  double cumulative = 0.0;
  double previous_max = 0.0;
  for (const auto& stage : exec_by_stage) {
    if (stage.empty()) throw DomainError("stage_latencies: empty stage");
    const double shift = offset == LatencyOffset::Cumulative ? cumulative : previous_max;
    std::vector<double> l;
    double stage_max = 0.0;
    for (double e : stage) {
      if (!(e > 0.0)) throw DomainError("stage_latencies: execution times must be positive");
      l.push_back(e + shift);
      out.total += e + shift;
      stage_max = std::max(stage_max, e);
      all.push_back(e);
    }
    out.latency.push_back(std::move(l));
    cumulative += stage_max;
    previous_max = stage_max;
  }
  if (all.empty()) throw DomainError("stage_latencies: empty job set");
  std::sort(all.begin(), all.end(), std::greater<>());
  const std::size_t n = all.size();
  for (std::size_t k = 0; k < n; ++k) out.worst += static_cast<double>(n - k) * all[k];
  out.r_lat = out.total / out.worst;
  return out;
}

double epr_reward(const std::vector<std::vector<double>>& epr_by_stage, RewardVariant variant,
                  double alpha, double gamma, double beta) {
  double sum = 0.0;
  std::size_t n = 0;
  double previous_max = 0.0;
  for (const auto& stage : epr_by_stage) {
    double stage_max = 0.0;
    for (std::size_t o = 0; o < stage.size(); ++o) {
      const double d = stage[o];
      if (!(d >= 0.0)) throw DomainError("epr_reward: EPR counts must be non-negative");
      double denom = variant == RewardVariant::Plain
                         ? d + gamma * previous_max
                         : beta * d * static_cast<double>(o + 1) + gamma * previous_max;
      if (denom == 0.0) denom = 1.0;
      sum += 1.0 / denom;
      stage_max = std::max(stage_max, d);
      ++n;
    }
    previous_max = stage_max;
  }
  if (n == 0) throw DomainError("epr_reward: empty job set");
  return alpha * sum / static_cast<double>(n);
}

EpisodeReward episode_reward(const std::vector<std::vector<double>>& exec_by_stage,
                             const std::vector<std::vector<double>>& epr_by_stage,
                             const PpoConfig& config) {
  EpisodeReward r;
  r.r_lat = stage_latencies(exec_by_stage, config.latency_offset).r_lat;
  r.r_epr = epr_reward(epr_by_stage, config.reward_variant, config.alpha_reward,
                       config.gamma_pressure, config.beta_positional);
  r.reward = -r.r_lat + r.r_epr;
  return r;
}

double clipped_surrogate(double ratio, double advantage, double clip_eps) {
  const double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
  return std::min(ratio * advantage, clipped * advantage);
}

void compute_advantages(std::vector<Transition>& buffer, double discount, double gae_lambda) {
  double gae = 0.0;
  for (std::size_t i = buffer.size(); i-- > 0;) {
    Transition& t = buffer[i];
    const bool bootstrap = !t.terminal && i + 1 < buffer.size();
    const double next_value = bootstrap ? buffer[i + 1].value : 0.0;
    if (!bootstrap) gae = 0.0;
    const double delta = t.reward + discount * next_value - t.value;
    gae = delta + discount * gae_lambda * gae;
    t.advantage = gae;
    t.ret = gae + t.value;
  }
}

LossEvaluation evaluate_loss(const PpoPolicy& policy, std::span<const Transition> buffer,
                             std::span<const std::size_t> indices, double clip_eps,
                             const LossWeights& weights, bool with_gradients) {
  if (indices.empty()) throw DomainError("evaluate_loss: empty batch");
  LossEvaluation out;
  if (with_gradients) {
    out.actor_grad.assign(policy.actor.parameters().size(), 0.0);
    out.critic_grad.assign(policy.critic.parameters().size(), 0.0);
  }
  const double inv_b = 1.0 / static_cast<double>(indices.size());
  Mlp::Tape actor_tape;
  Mlp::Tape critic_tape;
  std::vector<double> d_logits;
  for (std::size_t idx : indices) {
    const Transition& t = buffer[idx];
    const auto& logits = policy.actor.forward(t.observation, actor_tape);
    const auto probs = masked_softmax(logits, t.feasible);
    const double logp = std::log(probs[t.action]);
    const double ratio = std::exp(logp - t.log_prob);
    const double unclipped = ratio * t.advantage;
    const double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps) * t.advantage;
    out.components.policy_loss -= std::min(unclipped, clipped) * inv_b;
    const double h = entropy(probs);
    out.components.entropy += h * inv_b;
    const double v = policy.critic.forward(t.observation, critic_tape)[0];
    out.components.value_loss += (v - t.ret) * (v - t.ret) * inv_b;
    if (!with_gradients) continue;

    // d(-objective)/d(log p_a): zero when the clipped branch is active.
    const double g = unclipped <= clipped ? -unclipped : 0.0;
    d_logits.assign(logits.size(), 0.0);
    for (std::size_t k = 0; k < logits.size(); ++k) {
      if (!t.feasible[k]) continue;
      const double dlogp = (k == t.action ? 1.0 : 0.0) - probs[k];
      const double dh = probs[k] > 0.0 ? -probs[k] * (std::log(probs[k]) + h) : 0.0;
      d_logits[k] = inv_b * (weights.policy * g * dlogp + weights.entropy * dh);
    }
    policy.actor.backward(actor_tape, d_logits, out.actor_grad);
    const double dv = inv_b * weights.value * 2.0 * (v - t.ret);
    policy.critic.backward(critic_tape, std::span<const double>(&dv, 1), out.critic_grad);
  }
  return out;
}

PpoOptimizer::PpoOptimizer(const PpoPolicy& policy, double learning_rate)
    : actor_(policy.actor.parameters().size(), learning_rate),
      critic_(policy.critic.parameters().size(), learning_rate) {}

void PpoOptimizer::step(PpoPolicy& policy, std::vector<double>& actor_grad,
                        std::vector<double>& critic_grad, double max_grad_norm) {
  if (max_grad_norm > 0.0) {
    double sq = 0.0;
    for (double g : actor_grad) sq += g * g;
    for (double g : critic_grad) sq += g * g;
    const double norm = std::sqrt(sq);
    if (norm > max_grad_norm) {
      const double s = max_grad_norm / norm;
      for (double& g : actor_grad) g *= s;
      for (double& g : critic_grad) g *= s;
    }
  }
  actor_.step(policy.actor.parameters(), actor_grad);
  critic_.step(policy.critic.parameters(), critic_grad);
}

std::vector<LossComponents> ppo_update(std::vector<Transition>& buffer, PpoPolicy& policy,
                                       PpoOptimizer& optimizer, const PpoConfig& config,
                                       Rng& rng) {
  if (buffer.empty()) throw DomainError("ppo_update: empty buffer");
  const std::size_t n = buffer.size();
  if (config.normalize_advantages) {
    double mean = 0.0;
    for (const auto& t : buffer) mean += t.advantage;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& t : buffer) var += (t.advantage - mean) * (t.advantage - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    for (auto& t : buffer) {
      t.advantage = sd > 1e-12 ? (t.advantage - mean) / (sd + 1e-8) : t.advantage - mean;
    }
  }
  const LossWeights weights{1.0, config.value_coef, -config.entropy_coef};
  std::vector<std::size_t> order(n);
  std::vector<LossComponents> history;
  for (std::size_t epoch = 0; epoch < config.n_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
      std::swap(order[i - 1], order[rng.uniform_index(i)]);
    }
    LossComponents acc;
    for (std::size_t start = 0; start < n; start += config.minibatch) {
      const std::size_t len = std::min(config.minibatch, n - start);
      std::span<const std::size_t> batch(order.data() + start, len);
      auto eval = evaluate_loss(policy, buffer, batch, config.clip_eps, weights);
      const double w = static_cast<double>(len) / static_cast<double>(n);
      acc.policy_loss += w * eval.components.policy_loss;
      acc.value_loss += w * eval.components.value_loss;
      acc.entropy += w * eval.components.entropy;
      optimizer.step(policy, eval.actor_grad, eval.critic_grad, config.max_grad_norm);
    }
    history.push_back(acc);
  }
  buffer.clear();
  return history;
}

}  // namespace dqc::rl
