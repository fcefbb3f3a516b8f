#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dqcsched/schedule.hpp"

namespace dqc {

struct MetricsReport {
  std::int64_t makespan_ns = 0;
  double qpu_utilization = 0.0;
  double nonlocal_gate_density = 0.0;
  /// Per placement, in schedule order.
  std::vector<double> elp;
  double selp = 0.0;
  double fairness = 0.0;
  std::int64_t t_overlap_ns = 0;
  std::int64_t t_max_ns = 0;
};

/// Latest finish minus earliest start. Throws on an empty schedule.
std::int64_t makespan(const Schedule& schedule);

/// sum(duration_i * nodes_i) / (makespan * n_qpu).
double qpu_utilization(const Schedule& schedule, std::size_t n_qpu);

struct GateDensity {
  std::int64_t t_overlap_ns = 0;  // sum over pairs of interval overlap
  std::int64_t t_max_ns = 0;      // sum over pairs of e_i + e_j
  double density = 0.0;           // t_overlap / t_max, 0 for a single job
};

GateDensity nonlocal_gate_density(const Schedule& schedule);

struct LatencyReport {
  std::vector<double> elp;
  double selp = 0.0;
  double fairness = 0.0;
};

/// ELP_j = execution / (finish - release). SELP is the geometric mean of the
/// ELPs and fairness is 1 minus their population standard deviation.
LatencyReport elp_selp_fairness(const Schedule& schedule);

MetricsReport compute_metrics(const Schedule& schedule, std::size_t n_qpu);

}  // namespace dqc
