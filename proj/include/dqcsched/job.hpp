#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dqcsched/circuit.hpp"

namespace dqc {

using JobId = std::uint64_t;

/// A two-qubit gate whose operands land in different partition blocks.
/// Block indices are ordered (lo < hi).
struct BlockPair {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;
  friend bool operator==(const BlockPair&, const BlockPair&) = default;
};

/// One distributed job as the schedulers see it.
struct JobDescriptor {
  JobId id = 0;
  std::size_t required_qpus = 1;
  /// One EPR pair is consumed per non-local gate, so this equals
  /// nonlocal_gates.
  std::size_t epr_pairs = 0;
  std::size_t nonlocal_gates = 0;
  /// Node-blind estimated execution time (ns).
  std::int64_t est_exec_ns = 0;
  std::size_t local_depth = 0;
  /// Non-local gates in circuit order, as pairs of partition blocks. Block b
  /// runs on the b-th node of the job's assigned node list.
  std::vector<BlockPair> cross_block_gates;
  std::shared_ptr<const CircuitProfile> profile;

  /// Short kind label such as "QFT-10"; "job" when no profile is attached.
  std::string label() const;
};

}  // namespace dqc
