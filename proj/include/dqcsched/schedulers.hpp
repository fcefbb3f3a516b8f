#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dqcsched/execmodel.hpp"
#include "dqcsched/job.hpp"
#include "dqcsched/netmodel.hpp"
#include "dqcsched/schedule.hpp"

namespace dqc {

enum class SchedulerKind {
  Fifo,
  List,
  ResourcePrioritize,
  Epr,
  EprNodeSelection,
  Asap,
  Ppo,
  PpoNodeSelection,
};

/// CLI names: fifo|list|resource|epr|epr-ns|asap|ppo|ppo-ns.
std::string_view to_string(SchedulerKind kind);
SchedulerKind parse_scheduler_kind(std::string_view name);
bool is_ppo(SchedulerKind kind) noexcept;

/// Places jobs in barrier-synchronized stages. Every job of a stage starts
/// when the previous stage's last job finishes; durations come from the
/// execution model on the nodes actually assigned.
class StagedPlacer {
 public:
  StagedPlacer(const Network& network, const ExecModelParams& params,
               std::int64_t release_ns);

  std::size_t free_count() const noexcept { return free_count_; }
  std::vector<NodeId> free_nodes() const;
  bool fits(const JobDescriptor& job) const noexcept {
    return job.required_qpus <= free_count_;
  }
  bool stage_empty() const noexcept { return stage_jobs_ == 0; }

  /// Places `job` on the lowest-id free nodes.
  void place(const JobDescriptor& job);
  /// Places `job` on the given free nodes; block b runs on nodes[b].
  void place_on(const JobDescriptor& job, std::vector<NodeId> nodes);
  /// Ends the current stage; the next one starts at its latest finish.
  void close_stage();

  Schedule finish() &&;
  Schedule& schedule() noexcept { return schedule_; }

 private:
  const Network& network_;
  const ExecModelParams& params_;
  Schedule schedule_;
  std::vector<bool> used_;
  std::size_t free_count_;
  std::size_t stage_ = 0;
  std::size_t stage_jobs_ = 0;
  std::int64_t stage_start_;
  std::int64_t stage_end_;
};

/// Splits off jobs that need more QPUs than the network has; they are
/// recorded as rejected in `schedule` and excluded from the returned queue.
std::vector<const JobDescriptor*> admit_jobs(std::span<const JobDescriptor> queue,
                                             const Network& network, Schedule& schedule);

/// Arrival order; a stage closes at the first job that does not fit.
Schedule fifo_schedule(std::span<const JobDescriptor> queue, const Network& network,
                       const ExecModelParams& params);

/// Each stage repeatedly admits the first remaining job that fits the free
/// nodes; the stage closes when no remaining job fits.
Schedule list_schedule(std::span<const JobDescriptor> queue, const Network& network,
                       const ExecModelParams& params);

/// Each stage is the job subset with the largest total QPU demand that fits
/// the network, ties broken by the smallest mean estimated time and then by
/// the lexicographically smallest id set. Subsets are drawn from the first
/// `enumeration_cap` remaining jobs in arrival order.
Schedule resource_prioritize_schedule(std::span<const JobDescriptor> queue,
                                      const Network& network,
                                      const ExecModelParams& params,
                                      std::size_t enumeration_cap = 12);

struct EprOptions {
  /// Choose each job's nodes with select_nodes instead of lowest ids.
  bool node_selection = false;
  /// Close a stage at the first job that does not fit (otherwise skip it).
  bool strict_order = true;
};

/// Jobs sorted by ascending EPR usage (ties: estimated time, then id).
Schedule epr_schedule(std::span<const JobDescriptor> queue, const Network& network,
                      const ExecModelParams& params, EprOptions options = {});

/// The k-subset of `free_nodes` with the smallest total link weight over its
/// internal pairs. Ties go to the lexicographically smallest id set.
/// Returned ids are ascending.
std::vector<NodeId> select_nodes(std::span<const NodeId> free_nodes, std::size_t k,
                                 const Network& network);

/// Event-driven: at every instant some node frees up, walk the queue in
/// arrival order and start each job that fits the nodes free at that instant.
Schedule asap_schedule(std::span<const JobDescriptor> queue, const Network& network,
                       const ExecModelParams& params);

}  // namespace dqc
