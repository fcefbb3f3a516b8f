#include "dqcsched/schedule.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

namespace dqc {

std::vector<std::vector<std::size_t>> Schedule::stages() const {
  std::map<std::size_t, std::vector<std::size_t>> grouped;
  for (std::size_t i = 0; i < placements.size(); ++i) {
    grouped[placements[i].stage_index].push_back(i);
  }
  std::vector<std::vector<std::size_t>> out;
  out.reserve(grouped.size());
  for (auto& [stage, members] : grouped) out.push_back(std::move(members));
  return out;
}

const Placement* Schedule::find(JobId id) const {
  for (const auto& p : placements) {
    if (p.job_id == id) return &p;
  }
  return nullptr;
}

std::string check_schedule(const Schedule& schedule, std::span<const JobDescriptor> queue,
                           const Network& network) {
  std::map<JobId, std::size_t> seen;
  for (const auto& p : schedule.placements) ++seen[p.job_id];
  for (const auto& r : schedule.rejected) ++seen[r.job_id];

  std::map<JobId, const JobDescriptor*> by_id;
  for (const auto& job : queue) {
    if (!by_id.emplace(job.id, &job).second) {
      return "duplicate job id " + std::to_string(job.id) + " in queue";
    }
    auto it = seen.find(job.id);
    if (it == seen.end()) return "job " + std::to_string(job.id) + " was dropped";
    if (it->second != 1) return "job " + std::to_string(job.id) + " appears more than once";
  }
  if (seen.size() != queue.size()) return "schedule mentions jobs not in the queue";

  std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> busy(network.n_nodes());
  std::map<std::size_t, std::set<NodeId>> stage_nodes;
  for (const auto& p : schedule.placements) {
    const JobDescriptor& job = *by_id.at(p.job_id);
    if (p.assigned_nodes.size() != job.required_qpus) {
      return "job " + std::to_string(p.job_id) + " has the wrong node count";
    }
    if (p.start_ns < schedule.release_ns) {
      return "job " + std::to_string(p.job_id) + " starts before the slot release";
    }
    if (p.finish_ns <= p.start_ns) {
      return "job " + std::to_string(p.job_id) + " has a non-positive duration";
    }
    std::set<NodeId> distinct(p.assigned_nodes.begin(), p.assigned_nodes.end());
    if (distinct.size() != p.assigned_nodes.size()) {
      return "job " + std::to_string(p.job_id) + " uses a node twice";
    }
    for (NodeId n : p.assigned_nodes) {
      if (n >= network.n_nodes()) return "node id out of range";
      if (!stage_nodes[p.stage_index].insert(n).second) {
        return "node " + std::to_string(n) + " used twice in stage " +
               std::to_string(p.stage_index);
      }
      busy[n].emplace_back(p.start_ns, p.finish_ns);
    }
  }
  for (std::size_t n = 0; n < busy.size(); ++n) {
    auto& intervals = busy[n];
    std::sort(intervals.begin(), intervals.end());
    for (std::size_t i = 1; i < intervals.size(); ++i) {
      if (intervals[i].first < intervals[i - 1].second) {
        return "node " + std::to_string(n) + " runs two jobs at once";
      }
    }
  }
  return {};
}

}  // namespace dqc
