#include "dqcsched/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "dqcsched/error.hpp"

namespace dqc {

namespace {

// Accumulates gates and tracks per-qubit layer depth as they are appended.
class GateListBuilder {
 public:
  explicit GateListBuilder(std::size_t n_qubits) : depth_(n_qubits, 0) {}

  void single(std::uint32_t q) {
    ++depth_.at(q);
    ++single_;
  }

  void two(std::uint32_t control, std::uint32_t target) {
    if (control == target) throw DomainError("two-qubit gate on a single qubit");
    const std::size_t layer = std::max(depth_.at(control), depth_.at(target)) + 1;
    depth_[control] = layer;
    depth_[target] = layer;
    pairs_.push_back({control, target});
  }

  CircuitProfile finish(CircuitKind kind, std::size_t reps) && {
    CircuitProfile profile;
    profile.kind = kind;
    profile.n_qubits = depth_.size();
    profile.reps = reps;
    profile.two_qubit_gates = std::move(pairs_);
    profile.single_qubit_gates = single_;
    profile.local_depth = *std::max_element(depth_.begin(), depth_.end()) + 1;
    return profile;
  }

 private:
  std::vector<std::size_t> depth_;
  std::vector<QubitPair> pairs_;
  std::size_t single_ = 0;
};

void check_size(std::size_t n_qubits) {
  if (n_qubits < kMinCircuitQubits || n_qubits > kMaxCircuitQubits) {
    throw DomainError("circuit size must lie in [2, 64], got " +
                      std::to_string(n_qubits));
  }
}

std::uint32_t q32(std::size_t q) { return static_cast<std::uint32_t>(q); }

}  // namespace

std::string_view to_string(CircuitKind kind) {
  switch (kind) {
    case CircuitKind::GHZ: return "GHZ";
    case CircuitKind::GraphState: return "GraphState";
    case CircuitKind::QAOA: return "QAOA";
    case CircuitKind::QFT: return "QFT";
    case CircuitKind::VQE: return "VQE";
  }
  return "unknown";
}

CircuitKind parse_circuit_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "ghz") return CircuitKind::GHZ;
  if (lower == "graph" || lower == "graphstate" || lower == "graph_state") {
    return CircuitKind::GraphState;
  }
  if (lower == "qaoa") return CircuitKind::QAOA;
  if (lower == "qft") return CircuitKind::QFT;
  if (lower == "vqe") return CircuitKind::VQE;
  throw DomainError("unknown circuit kind '" + std::string(name) + "'");
}

std::vector<QubitPair> default_graph_state_edges(std::size_t n_qubits) {
  check_size(n_qubits);
  if (n_qubits == 5) return {{0, 1}, {1, 2}, {2, 3}, {0, 4}};
  std::vector<QubitPair> edges;
  for (std::size_t i = 0; i + 1 < n_qubits; ++i) edges.push_back({q32(i), q32(i + 1)});
  if (n_qubits > 2) edges.push_back({0, q32(n_qubits - 1)});
  return edges;
}

std::vector<QubitPair> maxcut_ring_edges(std::size_t n_qubits) {
  check_size(n_qubits);
  std::vector<QubitPair> edges;
  for (std::size_t i = 0; i + 1 < n_qubits; ++i) edges.push_back({q32(i), q32(i + 1)});
  if (n_qubits > 2) edges.push_back({0, q32(n_qubits - 1)});
  return edges;
}

CircuitProfile build_graph_state_profile(std::size_t n_qubits,
                                         std::span<const QubitPair> edges) {
  check_size(n_qubits);
  GateListBuilder g(n_qubits);
  for (std::size_t q = 0; q < n_qubits; ++q) g.single(q32(q));
  for (const auto& e : edges) {
    if (e.a >= n_qubits || e.b >= n_qubits) throw DomainError("graph edge out of range");
    g.two(e.a, e.b);
  }
  return std::move(g).finish(CircuitKind::GraphState, 1);
}

CircuitProfile build_circuit_profile(CircuitKind kind, std::size_t n_qubits,
                                     std::size_t reps) {
  check_size(n_qubits);
  const bool repeated = kind == CircuitKind::QAOA || kind == CircuitKind::VQE;
  if (repeated && reps < 1) throw DomainError("reps must be >= 1");
  if (!repeated) reps = 1;

  GateListBuilder g(n_qubits);
  switch (kind) {
    case CircuitKind::GHZ:
      g.single(0);
      for (std::size_t i = 1; i < n_qubits; ++i) g.two(0, q32(i));
      break;
    case CircuitKind::GraphState: {
      const auto edges = default_graph_state_edges(n_qubits);
      return build_graph_state_profile(n_qubits, edges);
    }
    case CircuitKind::QAOA: {
      const auto ring = maxcut_ring_edges(n_qubits);
      for (std::size_t q = 0; q < n_qubits; ++q) g.single(q32(q));
      for (std::size_t r = 0; r < reps; ++r) {
        for (const auto& e : ring) {
          g.two(e.a, e.b);
          g.single(e.b);  // parity rotation
          g.two(e.a, e.b);
        }
        for (std::size_t q = 0; q < n_qubits; ++q) g.single(q32(q));  // mixer
      }
      break;
    }
    case CircuitKind::QFT:
      for (std::size_t i = 0; i < n_qubits; ++i) {
        g.single(q32(i));
        for (std::size_t j = i + 1; j < n_qubits; ++j) g.two(q32(j), q32(i));
      }
      break;
    case CircuitKind::VQE:
      for (std::size_t r = 0; r < reps; ++r) {
        for (std::size_t q = 0; q < n_qubits; ++q) {
          g.single(q32(q));  // RY
          g.single(q32(q));  // RZ
        }
        for (std::size_t i = 0; i + 1 < n_qubits; ++i) g.two(q32(i), q32(i + 1));
      }
      break;
  }
  return std::move(g).finish(kind, reps);
}

}  // namespace dqc
