#include "dqcsched/execmodel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "dqcsched/error.hpp"

namespace dqc {

namespace {

std::int64_t to_ns(double t) { return static_cast<std::int64_t>(std::llround(t)); }

double local_time(const JobDescriptor& job, const ExecModelParams& params) {
  return static_cast<double>(job.local_depth) * params.local_gate_ns;
}

}  // namespace

void ExecModelParams::validate() const {
  if (!(local_gate_ns > 0.0)) throw DomainError("local_gate_ns must be > 0");
}

EprSerialization parse_epr_serialization(std::string_view name) {
  if (name == "serial") return EprSerialization::Serial;
  if (name == "per-link-parallel") return EprSerialization::PerLinkParallel;
  throw DomainError("unknown EPR serialization policy '" + std::string(name) + "'");
}

NominalDelay parse_nominal_delay(std::string_view name) {
  if (name == "mean") return NominalDelay::Mean;
  if (name == "worst") return NominalDelay::Worst;
  throw DomainError("unknown nominal delay '" + std::string(name) + "'");
}

std::int64_t estimate_execution_time(const JobDescriptor& job,
                                     std::span<const NodeId> assigned_nodes,
                                     const Network& network,
                                     const ExecModelParams& params) {
  if (assigned_nodes.size() != job.required_qpus) {
    throw DomainError("job " + std::to_string(job.id) + " needs " +
                      std::to_string(job.required_qpus) + " nodes, got " +
                      std::to_string(assigned_nodes.size()));
  }
  double entanglement = 0.0;
  if (params.epr_serialization == EprSerialization::Serial) {
    for (const auto& g : job.cross_block_gates) {
      entanglement += network.weight(assigned_nodes[g.lo], assigned_nodes[g.hi]);
    }
  } else {
    std::map<std::size_t, double> per_link;
    for (const auto& g : job.cross_block_gates) {
      const NodeId a = assigned_nodes[g.lo];
      const NodeId b = assigned_nodes[g.hi];
      per_link[network.pair_index(a, b)] += network.weight(a, b);
    }
    for (const auto& [link, total] : per_link) entanglement = std::max(entanglement, total);
  }
  return to_ns(local_time(job, params) + entanglement);
}

std::int64_t estimate_execution_time_nominal(const JobDescriptor& job,
                                             const Network& network,
                                             const ExecModelParams& params) {
  const double delay = params.nominal_delay == NominalDelay::Mean
                           ? network.mean_state_delay_ns()
                           : network.max_state_delay_ns();
  double gates = static_cast<double>(job.cross_block_gates.size());
  if (params.epr_serialization == EprSerialization::PerLinkParallel) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> per_pair;
    std::size_t busiest = 0;
    for (const auto& g : job.cross_block_gates) {
      busiest = std::max(busiest, ++per_pair[{g.lo, g.hi}]);
    }
    gates = static_cast<double>(busiest);
  }
  return to_ns(local_time(job, params) + gates * delay);
}

}  // namespace dqc
