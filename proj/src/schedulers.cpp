#include "dqcsched/schedulers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <string>

#include "dqcsched/error.hpp"

namespace dqc {

__extension__ typedef __int128 i128;

std::string_view to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::Fifo: return "fifo";
    case SchedulerKind::List: return "list";
    case SchedulerKind::ResourcePrioritize: return "resource";
    case SchedulerKind::Epr: return "epr";
    case SchedulerKind::EprNodeSelection: return "epr-ns";
    case SchedulerKind::Asap: return "asap";
    case SchedulerKind::Ppo: return "ppo";
    case SchedulerKind::PpoNodeSelection: return "ppo-ns";
  }
  return "unknown";
}

SchedulerKind parse_scheduler_kind(std::string_view name) {
  for (auto kind : {SchedulerKind::Fifo, SchedulerKind::List,
                    SchedulerKind::ResourcePrioritize, SchedulerKind::Epr,
                    SchedulerKind::EprNodeSelection, SchedulerKind::Asap,
                    SchedulerKind::Ppo, SchedulerKind::PpoNodeSelection}) {
    if (to_string(kind) == name) return kind;
  }
  throw DomainError("unknown scheduler '" + std::string(name) + "'");
}

bool is_ppo(SchedulerKind kind) noexcept {
  return kind == SchedulerKind::Ppo || kind == SchedulerKind::PpoNodeSelection;
}

// ---------------------------------------------------------------------------

StagedPlacer::StagedPlacer(const Network& network, const ExecModelParams& params,
                           std::int64_t release_ns)
    : network_(network),
      params_(params),
      used_(network.n_nodes(), false),
      free_count_(network.n_nodes()),
      stage_start_(release_ns),
      stage_end_(release_ns) {
  schedule_.release_ns = release_ns;
}

std::vector<NodeId> StagedPlacer::free_nodes() const {
  std::vector<NodeId> out;
  for (NodeId n = 0; n < used_.size(); ++n) {
    if (!used_[n]) out.push_back(n);
  }
  return out;
}

void StagedPlacer::place(const JobDescriptor& job) {
  auto nodes = free_nodes();
  if (nodes.size() < job.required_qpus) throw DomainError("not enough free nodes");
  nodes.resize(job.required_qpus);
  place_on(job, std::move(nodes));
}

void StagedPlacer::place_on(const JobDescriptor& job, std::vector<NodeId> nodes) {
  for (NodeId n : nodes) {
    if (n >= used_.size() || used_[n]) throw DomainError("node is not free in this stage");
  }
  const std::int64_t duration = estimate_execution_time(job, nodes, network_, params_);
  for (NodeId n : nodes) used_[n] = true;
  free_count_ -= nodes.size();
  Placement p;
  p.job_id = job.id;
  p.assigned_nodes = std::move(nodes);
  p.start_ns = stage_start_;
  p.finish_ns = stage_start_ + duration;
  p.stage_index = stage_;
  stage_end_ = std::max(stage_end_, p.finish_ns);
  schedule_.placements.push_back(std::move(p));
  ++stage_jobs_;
}

void StagedPlacer::close_stage() {
  if (stage_jobs_ == 0) return;
  stage_start_ = stage_end_;
  ++stage_;
  stage_jobs_ = 0;
  std::fill(used_.begin(), used_.end(), false);
  free_count_ = used_.size();
}

Schedule StagedPlacer::finish() && {
  close_stage();
  return std::move(schedule_);
}

std::vector<const JobDescriptor*> admit_jobs(std::span<const JobDescriptor> queue,
                                             const Network& network, Schedule& schedule) {
  std::vector<const JobDescriptor*> admitted;
  admitted.reserve(queue.size());
  for (const auto& job : queue) {
    if (job.required_qpus > network.n_nodes() || job.required_qpus == 0) {
      schedule.rejected.push_back(
          {job.id, "needs " + std::to_string(job.required_qpus) + " QPUs, network has " +
                       std::to_string(network.n_nodes())});
    } else {
      admitted.push_back(&job);
    }
  }
  return admitted;
}

// ---------------------------------------------------------------------------

Schedule fifo_schedule(std::span<const JobDescriptor> queue, const Network& network,
                       const ExecModelParams& params) {
  StagedPlacer placer(network, params, network.all_free_at());
  for (const JobDescriptor* job : admit_jobs(queue, network, placer.schedule())) {
    if (!placer.fits(*job)) placer.close_stage();
    placer.place(*job);
  }
  return std::move(placer).finish();
}

Schedule list_schedule(std::span<const JobDescriptor> queue, const Network& network,
                       const ExecModelParams& params) {
  StagedPlacer placer(network, params, network.all_free_at());
  auto admitted = admit_jobs(queue, network, placer.schedule());
  std::list<const JobDescriptor*> remaining(admitted.begin(), admitted.end());
  while (!remaining.empty()) {
    auto it = std::find_if(remaining.begin(), remaining.end(),
                           [&](const JobDescriptor* j) { return placer.fits(*j); });
    if (it == remaining.end()) {
      placer.close_stage();
      continue;
    }
    placer.place(**it);
    remaining.erase(it);
  }
  return std::move(placer).finish();
}

Schedule resource_prioritize_schedule(std::span<const JobDescriptor> queue,
                                      const Network& network,
                                      const ExecModelParams& params,
                                      std::size_t enumeration_cap) {
  if (enumeration_cap < 1 || enumeration_cap > 24) {
    throw DomainError("enumeration_cap must lie in [1, 24]");
  }
  StagedPlacer placer(network, params, network.all_free_at());
  std::vector<const JobDescriptor*> remaining = admit_jobs(queue, network, placer.schedule());
  const std::size_t capacity = network.n_nodes();

  auto sorted_ids = [&](std::uint32_t mask) {
    std::vector<JobId> ids;
    for (std::size_t i = 0; mask != 0; ++i, mask >>= 1) {
      if (mask & 1U) ids.push_back(remaining[i]->id);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
  };

  while (!remaining.empty()) {
    const std::size_t m = std::min(enumeration_cap, remaining.size());
    std::uint32_t best_mask = 0;
    std::size_t best_util = 0;
    i128 best_sum = 0;
    std::size_t best_size = 0;
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << m); ++mask) {
      std::size_t util = 0;
      i128 sum = 0;
      std::size_t size = 0;
      for (std::size_t i = 0; i < m; ++i) {
        if (mask & (std::uint32_t{1} << i)) {
          util += remaining[i]->required_qpus;
          sum += remaining[i]->est_exec_ns;
          ++size;
        }
      }
      if (util > capacity) continue;
      bool better = false;
      if (best_mask == 0 || util > best_util) {
        better = true;
      } else if (util == best_util) {
        // Compare mean times sum/size exactly by cross-multiplication.
        const i128 lhs = sum * static_cast<i128>(best_size);
        const i128 rhs = best_sum * static_cast<i128>(size);
        better = lhs < rhs || (lhs == rhs && sorted_ids(mask) < sorted_ids(best_mask));
      }
      if (better) {
        best_mask = mask;
        best_util = util;
        best_sum = sum;
        best_size = size;
      }
    }
    std::vector<const JobDescriptor*> rest;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      if (i < m && (best_mask & (std::uint32_t{1} << i))) {
        placer.place(*remaining[i]);
      } else {
        rest.push_back(remaining[i]);
      }
    }
    placer.close_stage();
    remaining = std::move(rest);
  }
  return std::move(placer).finish();
}

Schedule epr_schedule(std::span<const JobDescriptor> queue, const Network& network,
                      const ExecModelParams& params, EprOptions options) {
  StagedPlacer placer(network, params, network.all_free_at());
  auto admitted = admit_jobs(queue, network, placer.schedule());
  std::stable_sort(admitted.begin(), admitted.end(),
                   [](const JobDescriptor* a, const JobDescriptor* b) {
                     if (a->epr_pairs != b->epr_pairs) return a->epr_pairs < b->epr_pairs;
                     if (a->est_exec_ns != b->est_exec_ns) return a->est_exec_ns < b->est_exec_ns;
                     return a->id < b->id;
                   });
  std::list<const JobDescriptor*> remaining(admitted.begin(), admitted.end());
  while (!remaining.empty()) {
    for (auto it = remaining.begin(); it != remaining.end();) {
      const JobDescriptor& job = **it;
      if (!placer.fits(job)) {
        if (options.strict_order) break;
        ++it;
        continue;
      }
      if (options.node_selection) {
        const auto free = placer.free_nodes();
        placer.place_on(job, select_nodes(free, job.required_qpus, network));
      } else {
        placer.place(job);
      }
      it = remaining.erase(it);
    }
    placer.close_stage();
  }
  return std::move(placer).finish();
}

std::vector<NodeId> select_nodes(std::span<const NodeId> free_nodes, std::size_t k,
                                 const Network& network) {
  if (k == 0) throw DomainError("select_nodes: k must be >= 1");
  if (free_nodes.size() < k) {
    throw DomainError("select_nodes: only " + std::to_string(free_nodes.size()) +
                      " free nodes for k = " + std::to_string(k));
  }
  std::vector<NodeId> pool(free_nodes.begin(), free_nodes.end());
  std::sort(pool.begin(), pool.end());
  if (k == 1) return {pool.front()};

  // Walk k-combinations of pool indices in lexicographic order.
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  std::vector<std::size_t> best = idx;
  double best_weight = std::numeric_limits<double>::infinity();
  const std::size_t n = pool.size();
  while (true) {
    double weight = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) weight += network.weight(pool[idx[i]], pool[idx[j]]);
    }
    // Relative slack keeps summation-order rounding from breaking ties.
    if (best_weight == std::numeric_limits<double>::infinity() ||
        weight < best_weight - 1e-12 * std::abs(best_weight)) {
      best_weight = weight;
      best = idx;
    }
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  std::vector<NodeId> out;
  out.reserve(k);
  for (std::size_t i : best) out.push_back(pool[i]);
  return out;
}

Schedule asap_schedule(std::span<const JobDescriptor> queue, const Network& network,
                       const ExecModelParams& params) {
  Schedule schedule;
  schedule.release_ns = network.all_free_at();
  auto admitted = admit_jobs(queue, network, schedule);
  std::list<const JobDescriptor*> remaining(admitted.begin(), admitted.end());
  std::vector<std::int64_t> available(network.n_nodes(), schedule.release_ns);
  std::int64_t now = schedule.release_ns;
  std::size_t round = 0;

  while (!remaining.empty()) {
    std::vector<NodeId> candidates;
    for (NodeId n = 0; n < available.size(); ++n) {
      if (available[n] <= now) candidates.push_back(n);
    }
    bool placed = false;
    for (auto it = remaining.begin(); it != remaining.end();) {
      const JobDescriptor& job = **it;
      if (candidates.size() < job.required_qpus) {
        ++it;
        continue;
      }
      std::vector<NodeId> nodes(candidates.begin(),
                                candidates.begin() + static_cast<std::ptrdiff_t>(job.required_qpus));
      candidates.erase(candidates.begin(),
                       candidates.begin() + static_cast<std::ptrdiff_t>(job.required_qpus));
      Placement p;
      p.job_id = job.id;
      p.start_ns = now;
      p.finish_ns = now + estimate_execution_time(job, nodes, network, params);
      p.stage_index = round;
      for (NodeId n : nodes) available[n] = p.finish_ns;
      p.assigned_nodes = std::move(nodes);
      schedule.placements.push_back(std::move(p));
      placed = true;
      it = remaining.erase(it);
    }
    if (placed) ++round;
    if (remaining.empty()) break;
    std::int64_t next = std::numeric_limits<std::int64_t>::max();
    for (std::int64_t t : available) {
      if (t > now) next = std::min(next, t);
    }
    if (next == std::numeric_limits<std::int64_t>::max()) {
      throw std::logic_error("asap_schedule: no pending completion while jobs remain");
    }
    now = next;
  }
  return schedule;
}

}  // namespace dqc
