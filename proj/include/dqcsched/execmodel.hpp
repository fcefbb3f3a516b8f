#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "dqcsched/job.hpp"
#include "dqcsched/netmodel.hpp"

namespace dqc {

enum class EprSerialization {
  Serial,           // every non-local gate waits for its own entangled pair
  PerLinkParallel,  // links generate in parallel; the slowest link dominates
};

/// Which link delay the node-blind estimate assumes.
enum class NominalDelay { Mean, Worst };

struct ExecModelParams {
  double local_gate_ns = 1e3;
  EprSerialization epr_serialization = EprSerialization::Serial;
  NominalDelay nominal_delay = NominalDelay::Mean;

  void validate() const;
};

EprSerialization parse_epr_serialization(std::string_view name);
NominalDelay parse_nominal_delay(std::string_view name);

/// Duration of `job` on the given nodes: local_depth * local_gate_ns plus the
/// state delays of the links each non-local gate crosses. Block b of the job
/// runs on assigned_nodes[b]. Rounded to the nearest nanosecond.
std::int64_t estimate_execution_time(const JobDescriptor& job,
                                     std::span<const NodeId> assigned_nodes,
                                     const Network& network,
                                     const ExecModelParams& params);

/// Same formula with every link replaced by the network's nominal delay.
std::int64_t estimate_execution_time_nominal(const JobDescriptor& job,
                                             const Network& network,
                                             const ExecModelParams& params);

}  // namespace dqc
