#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace dqc {

using NodeId = std::uint32_t;

enum class LinkQuality { Bad, Medium, Good };

std::string_view to_string(LinkQuality quality);

/// Physical parameters of one trapped-ion QPU-to-QPU link.
struct LinkParams {
  double eta_ion = 1.0;       // photon emission and collection efficiency
  double eta_fc = 1.0;        // ion-to-telecom frequency conversion efficiency
  double eta_det = 1.0;       // telecom detector efficiency
  double eta_penalty = 1.0;   // detection-window truncation penalty
  double alpha_db_per_km = 0.0;
  double distance_km = 0.0;
  double cycle_time_ns = 1.0; // duration of one entanglement attempt
  double fidelity = 1.0;

  /// Throws DomainError when an invariant is violated.
  void validate() const;
};

/// The three trapped-ion link presets at 0.1 km.
LinkParams link_preset(LinkQuality quality);

/// Probability that a single entanglement generation attempt succeeds:
///   P_s = 1/2 * eta_penalty * (eta_ion * eta_fc * eta_det)^2 * 10^(-(alpha/10)(d/2))
double entanglement_success_probability(const LinkParams& params);

/// Expected time to produce one entangled pair: cycle_time / P_s.
double state_delay(double cycle_time_ns, double success_prob);

struct LinkProfile {
  LinkParams params;
  double success_prob = 0.0;
  double state_delay_ns = 0.0;
  std::optional<LinkQuality> quality;

  static LinkProfile from_params(const LinkParams& params,
                                 std::optional<LinkQuality> quality = {});
  static LinkProfile from_quality(LinkQuality quality);
};

/// Proportions of Bad/Medium/Good links. Must sum to 1.
struct QualityMix {
  double bad = 1.0 / 3.0;
  double medium = 1.0 / 3.0;
  double good = 1.0 / 3.0;

  void validate() const;
};

/// Fully connected QPU network. Links are stored once per unordered pair;
/// node availability is the only mutable state.
class Network {
 public:
  /// `links` is indexed by pair_index(a, b) and must hold n(n-1)/2 entries.
  Network(std::size_t n_nodes, std::size_t qpu_capacity,
          std::vector<LinkProfile> links, std::size_t comm_qubits_per_node = 1);

  std::size_t n_nodes() const noexcept { return n_nodes_; }
  std::size_t qpu_capacity() const noexcept { return qpu_capacity_; }
  std::size_t comm_qubits_per_node() const noexcept { return comm_qubits_; }

  static std::size_t pair_count(std::size_t n_nodes) noexcept {
    return n_nodes * (n_nodes - 1) / 2;
  }
  std::size_t pair_index(NodeId a, NodeId b) const;

  const LinkProfile& link(NodeId a, NodeId b) const;
  std::span<const LinkProfile> links() const noexcept { return links_; }

  /// Node-selection weight of a link: its state delay in ns.
  double weight(NodeId a, NodeId b) const { return link(a, b).state_delay_ns; }

  double mean_state_delay_ns() const noexcept { return mean_delay_; }
  double max_state_delay_ns() const noexcept { return max_delay_; }

  std::span<const std::int64_t> availability_ns() const noexcept {
    return availability_;
  }
  /// Moves a node's next-free time forward. Throws if it would go backwards.
  void set_availability(NodeId node, std::int64_t time_ns);
  /// Earliest instant at which every node is free.
  std::int64_t all_free_at() const noexcept;

 private:
  std::size_t n_nodes_;
  std::size_t qpu_capacity_;
  std::size_t comm_qubits_;
  std::vector<LinkProfile> links_;
  std::vector<std::int64_t> availability_;
  double mean_delay_ = 0.0;
  double max_delay_ = 0.0;
};

/// Builds a fully connected network whose link classes are drawn i.i.d. from
/// `mix`. Pairs are visited in (a, b) lexicographic order, one uniform draw
/// per pair, so the result is a pure function of `seed`.
Network build_network(std::size_t n_nodes, std::size_t qpu_capacity,
                      const QualityMix& mix, std::uint64_t seed,
                      std::size_t comm_qubits_per_node = 1);

/// Every link set to the same preset.
Network build_uniform_network(std::size_t n_nodes, std::size_t qpu_capacity,
                              LinkQuality quality);

}  // namespace dqc
