#include "dqcsched/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dqcsched/error.hpp"

namespace dqc {

namespace {

void require_placements(const Schedule& schedule, const char* what) {
  if (schedule.placements.empty()) {
    throw DomainError(std::string(what) + " is undefined for an empty schedule");
  }
}

}  // namespace

std::int64_t makespan(const Schedule& schedule) {
  require_placements(schedule, "makespan");
  std::int64_t first = std::numeric_limits<std::int64_t>::max();
  std::int64_t last = std::numeric_limits<std::int64_t>::min();
  for (const auto& p : schedule.placements) {
    first = std::min(first, p.start_ns);
    last = std::max(last, p.finish_ns);
  }
  return last - first;
}

double qpu_utilization(const Schedule& schedule, std::size_t n_qpu) {
  require_placements(schedule, "QPU utilization");
  if (n_qpu == 0) throw DomainError("n_qpu must be >= 1");
  double occupied = 0.0;
  for (const auto& p : schedule.placements) {
    occupied += static_cast<double>(p.duration_ns()) *
                static_cast<double>(p.assigned_nodes.size());
  }
  const double span = static_cast<double>(makespan(schedule));
  return occupied / (span * static_cast<double>(n_qpu));
}

GateDensity nonlocal_gate_density(const Schedule& schedule) {
  require_placements(schedule, "non-local gate density");
  GateDensity out;
  const auto& ps = schedule.placements;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      const std::int64_t overlap = std::min(ps[i].finish_ns, ps[j].finish_ns) -
                                   std::max(ps[i].start_ns, ps[j].start_ns);
      out.t_overlap_ns += std::max<std::int64_t>(0, overlap);
      out.t_max_ns += ps[i].duration_ns() + ps[j].duration_ns();
    }
  }
  if (out.t_max_ns > 0) {
    out.density = static_cast<double>(out.t_overlap_ns) / static_cast<double>(out.t_max_ns);
  }
  return out;
}

LatencyReport elp_selp_fairness(const Schedule& schedule) {
  require_placements(schedule, "ELP");
  LatencyReport out;
  out.elp.reserve(schedule.placements.size());
  for (const auto& p : schedule.placements) {
    const std::int64_t latency = p.finish_ns - schedule.release_ns;
    const std::int64_t exec = p.duration_ns();
    if (latency <= 0 || exec <= 0) {
      throw DomainError("job " + std::to_string(p.job_id) + " has zero latency");
    }
    out.elp.push_back(static_cast<double>(exec) / static_cast<double>(latency));
  }
  const double n = static_cast<double>(out.elp.size());
  double product = 1.0;
  double sum = 0.0;
  for (double e : out.elp) {
    product *= e;
    sum += e;
  }
  if (product > std::numeric_limits<double>::min()) {
    out.selp = std::pow(product, 1.0 / n);
  } else {
    double log_sum = 0.0;
    for (double e : out.elp) log_sum += std::log(e);
    out.selp = std::exp(log_sum / n);
  }
  const bool uniform = std::all_of(out.elp.begin(), out.elp.end(),
                                   [&](double e) { return e == out.elp.front(); });
  if (uniform) {
    out.fairness = 1.0;
  } else {
    const double mean = sum / n;
    double var = 0.0;
    for (double e : out.elp) var += (e - mean) * (e - mean);
    out.fairness = 1.0 - std::sqrt(var / n);
  }
  return out;
}

MetricsReport compute_metrics(const Schedule& schedule, std::size_t n_qpu) {
  MetricsReport r;
  r.makespan_ns = makespan(schedule);
  r.qpu_utilization = qpu_utilization(schedule, n_qpu);
  const GateDensity g = nonlocal_gate_density(schedule);
  r.nonlocal_gate_density = g.density;
  r.t_overlap_ns = g.t_overlap_ns;
  r.t_max_ns = g.t_max_ns;
  LatencyReport l = elp_selp_fairness(schedule);
  r.elp = std::move(l.elp);
  r.selp = l.selp;
  r.fairness = l.fairness;
  return r;
}

}  // namespace dqc
