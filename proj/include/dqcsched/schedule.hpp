#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dqcsched/job.hpp"
#include "dqcsched/netmodel.hpp"

namespace dqc {

struct Placement {
  JobId job_id = 0;
  std::vector<NodeId> assigned_nodes;
  std::int64_t start_ns = 0;
  std::int64_t finish_ns = 0;
  std::size_t stage_index = 0;

  std::int64_t duration_ns() const noexcept { return finish_ns - start_ns; }
};

struct RejectedJob {
  JobId job_id = 0;
  std::string reason;
};

/// Output of a scheduler for one slot's queue. Placements are kept in the
/// order the scheduler made them.
struct Schedule {
  /// Arrival instant of the slot's queue.
  std::int64_t release_ns = 0;
  std::vector<Placement> placements;
  std::vector<RejectedJob> rejected;

  /// Placement indices grouped by stage_index, in ascending stage order.
  std::vector<std::vector<std::size_t>> stages() const;
  const Placement* find(JobId id) const;
};

/// Checks the structural invariants of a schedule against its queue:
/// one placement or rejection per queued job, node counts, node ranges,
/// start >= release, per-node interval disjointness and per-stage node
/// disjointness. Returns an empty string when valid, else a description.
std::string check_schedule(const Schedule& schedule, std::span<const JobDescriptor> queue,
                           const Network& network);

}  // namespace dqc
