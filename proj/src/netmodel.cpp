#include "dqcsched/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dqcsched/error.hpp"
#include "dqcsched/random.hpp"

namespace dqc {

namespace {

void require_unit_interval(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw DomainError(std::string(name) + " must lie in [0, 1], got " +
                      std::to_string(value));
  }
}

}  // namespace

std::string_view to_string(LinkQuality quality) {
  switch (quality) {
    case LinkQuality::Bad: return "bad";
    case LinkQuality::Medium: return "medium";
    case LinkQuality::Good: return "good";
  }
  return "unknown";
}

void LinkParams::validate() const {
  require_unit_interval(eta_ion, "eta_ion");
  require_unit_interval(eta_fc, "eta_fc");
  require_unit_interval(eta_det, "eta_det");
  require_unit_interval(eta_penalty, "eta_penalty");
  if (!(alpha_db_per_km >= 0.0)) throw DomainError("alpha_db_per_km must be >= 0");
  if (!(distance_km >= 0.0)) throw DomainError("distance_km must be >= 0");
  if (!(cycle_time_ns > 0.0)) throw DomainError("cycle_time_ns must be > 0");
  if (!(fidelity > 0.0 && fidelity <= 1.0)) throw DomainError("fidelity must lie in (0, 1]");
}

LinkParams link_preset(LinkQuality quality) {
  LinkParams p;
  p.eta_ion = 0.87;
  p.alpha_db_per_km = 0.2;
  p.distance_km = 0.1;
  switch (quality) {
    case LinkQuality::Bad:
      p.eta_fc = 0.5;
      p.eta_det = 0.75;
      p.eta_penalty = 0.12;
      p.cycle_time_ns = 1.8e6;
      p.fidelity = 0.88;
      break;
    case LinkQuality::Medium:
      p.eta_fc = 0.5;
      p.eta_det = 0.75;
      p.eta_penalty = 0.20;
      p.cycle_time_ns = 1.0e6;
      p.fidelity = 0.95;
      break;
    case LinkQuality::Good:
      p.eta_fc = 0.7;
      p.eta_det = 0.90;
      p.eta_penalty = 0.20;
      p.cycle_time_ns = 2.0e5;
      p.fidelity = 0.95;
      break;
  }
  return p;
}

double entanglement_success_probability(const LinkParams& params) {
  params.validate();
  const double chain = params.eta_ion * params.eta_fc * params.eta_det;
  const double attenuation =
      std::pow(10.0, -(params.alpha_db_per_km / 10.0) * (params.distance_km / 2.0));
  return 0.5 * params.eta_penalty * chain * chain * attenuation;
}

double state_delay(double cycle_time_ns, double success_prob) {
  if (!(cycle_time_ns > 0.0)) throw DomainError("cycle_time_ns must be > 0");
  if (!(success_prob > 0.0 && success_prob <= 1.0)) {
    throw DomainError("success probability must lie in (0, 1]");
  }
  return cycle_time_ns / success_prob;
}

LinkProfile LinkProfile::from_params(const LinkParams& params,
                                     std::optional<LinkQuality> quality) {
  LinkProfile profile;
  profile.params = params;
  profile.success_prob = entanglement_success_probability(params);
  profile.state_delay_ns = state_delay(params.cycle_time_ns, profile.success_prob);
  profile.quality = quality;
  return profile;
}

LinkProfile LinkProfile::from_quality(LinkQuality quality) {
  return from_params(link_preset(quality), quality);
}

void QualityMix::validate() const {
  if (!(bad >= 0.0 && medium >= 0.0 && good >= 0.0)) {
    throw DomainError("quality mix proportions must be non-negative");
  }
  if (std::abs(bad + medium + good - 1.0) > 1e-6) {
    throw DomainError("quality mix proportions must sum to 1");
  }
}

Network::Network(std::size_t n_nodes, std::size_t qpu_capacity,
                 std::vector<LinkProfile> links, std::size_t comm_qubits_per_node)
    : n_nodes_(n_nodes),
      qpu_capacity_(qpu_capacity),
      comm_qubits_(comm_qubits_per_node),
      links_(std::move(links)),
      availability_(n_nodes, 0) {
  if (n_nodes < 2) throw DomainError("network needs at least 2 nodes");
  if (qpu_capacity < 1) throw DomainError("qpu_capacity must be >= 1");
  if (links_.size() != pair_count(n_nodes)) {
    throw DomainError("expected " + std::to_string(pair_count(n_nodes)) +
                      " links, got " + std::to_string(links_.size()));
  }
  double sum = 0.0;
  for (const auto& l : links_) {
    if (!(l.state_delay_ns > 0.0)) throw DomainError("link state delay must be > 0");
    sum += l.state_delay_ns;
    max_delay_ = std::max(max_delay_, l.state_delay_ns);
  }
  mean_delay_ = sum / static_cast<double>(links_.size());
}

std::size_t Network::pair_index(NodeId a, NodeId b) const {
  if (a == b) throw DomainError("no self-links in the network");
  if (a >= n_nodes_ || b >= n_nodes_) throw DomainError("node id out of range");
  if (a > b) std::swap(a, b);
  const std::size_t i = a;
  return i * n_nodes_ - i * (i + 1) / 2 + (b - a - 1);
}

const LinkProfile& Network::link(NodeId a, NodeId b) const {
  return links_[pair_index(a, b)];
}

void Network::set_availability(NodeId node, std::int64_t time_ns) {
  if (node >= n_nodes_) throw DomainError("node id out of range");
  if (time_ns < availability_[node]) {
    throw DomainError("node availability may not move backwards");
  }
  availability_[node] = time_ns;
}

std::int64_t Network::all_free_at() const noexcept {
  return *std::max_element(availability_.begin(), availability_.end());
}

Network build_network(std::size_t n_nodes, std::size_t qpu_capacity,
                      const QualityMix& mix, std::uint64_t seed,
                      std::size_t comm_qubits_per_node) {
  if (n_nodes < 2) throw DomainError("network needs at least 2 nodes");
  mix.validate();
  const LinkProfile presets[] = {LinkProfile::from_quality(LinkQuality::Bad),
                                 LinkProfile::from_quality(LinkQuality::Medium),
                                 LinkProfile::from_quality(LinkQuality::Good)};
  const double weights[] = {mix.bad, mix.medium, mix.good};
  Rng rng(seed);
  std::vector<LinkProfile> links;
  links.reserve(Network::pair_count(n_nodes));
  for (std::size_t a = 0; a < n_nodes; ++a) {
    for (std::size_t b = a + 1; b < n_nodes; ++b) {
      links.push_back(presets[rng.categorical(weights)]);
    }
  }
  return Network(n_nodes, qpu_capacity, std::move(links), comm_qubits_per_node);
}

Network build_uniform_network(std::size_t n_nodes, std::size_t qpu_capacity,
                              LinkQuality quality) {
  if (n_nodes < 2) throw DomainError("network needs at least 2 nodes");
  std::vector<LinkProfile> links(Network::pair_count(n_nodes),
                                 LinkProfile::from_quality(quality));
  return Network(n_nodes, qpu_capacity, std::move(links));
}

}  // namespace dqc
