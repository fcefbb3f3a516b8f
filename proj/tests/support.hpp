#pragma once

#include <cstdint>
#include <vector>

#include "dqcsched/execmodel.hpp"
#include "dqcsched/job.hpp"
#include "dqcsched/netmodel.hpp"

namespace dqc::testing {

/// Execution parameters under which a job without non-local gates runs for
/// exactly local_depth nanoseconds.
inline ExecModelParams unit_exec() {
  ExecModelParams p;
  p.local_gate_ns = 1.0;
  return p;
}

/// Synthetic job that occupies `qpus` nodes for `t` ns under unit_exec().
inline JobDescriptor job(JobId id, std::size_t qpus, std::int64_t t, std::size_t epr = 0) {
  JobDescriptor j;
  j.id = id;
  j.required_qpus = qpus;
  j.epr_pairs = epr;
  j.nonlocal_gates = epr;
  j.est_exec_ns = t;
  j.local_depth = static_cast<std::size_t>(t);
  return j;
}

/// Link whose state delay is exactly 2 * cycle (P_s = 1/2).
inline LinkProfile ideal_link(double cycle_ns) {
  LinkParams p;
  p.cycle_time_ns = cycle_ns;
  return LinkProfile::from_params(p);
}

/// Fully connected network whose pair (a, b) delay comes from `weight(a, b)`.
template <typename Fn>
Network weighted_network(std::size_t n, std::size_t capacity, Fn weight) {
  std::vector<LinkProfile> links;
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) links.push_back(ideal_link(weight(a, b) / 2.0));
  }
  return Network(n, capacity, std::move(links));
}

inline Network homogeneous_network(std::size_t n, std::size_t capacity = 3) {
  return build_uniform_network(n, capacity, LinkQuality::Good);
}

}  // namespace dqc::testing
