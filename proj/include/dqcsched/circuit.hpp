#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace dqc {

enum class CircuitKind { GHZ, GraphState, QAOA, QFT, VQE };

std::string_view to_string(CircuitKind kind);
/// Case-insensitive; accepts "ghz", "graph"/"graphstate", "qaoa", "qft", "vqe".
CircuitKind parse_circuit_kind(std::string_view name);

/// Two-qubit gate operands: control (or first) qubit, then target.
struct QubitPair {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  friend bool operator==(const QubitPair&, const QubitPair&) = default;
};

/// Gate-count profile of one circuit. Only the structure relevant to
/// partitioning is kept; rotation angles and other parameters are dropped.
struct CircuitProfile {
  CircuitKind kind = CircuitKind::GHZ;
  std::size_t n_qubits = 0;
  std::size_t reps = 1;
  std::vector<QubitPair> two_qubit_gates;
  std::size_t single_qubit_gates = 0;
  /// Number of layers of the as-soon-as-possible layering of every gate,
  /// plus one terminal measurement layer.
  std::size_t local_depth = 0;
};

inline constexpr std::size_t kMinCircuitQubits = 2;
inline constexpr std::size_t kMaxCircuitQubits = 64;

/// Edge set of the default graph state: the 5-qubit example graph
/// {(0,1),(1,2),(2,3),(0,4)} for n = 5, otherwise the path 0-1-...-(n-1)
/// closed by the edge (0, n-1).
std::vector<QubitPair> default_graph_state_edges(std::size_t n_qubits);

/// MaxCut ring used as the QAOA problem graph: (i, i+1) for i < n-1, plus
/// (0, n-1) when n > 2.
std::vector<QubitPair> maxcut_ring_edges(std::size_t n_qubits);

/// Materializes the gate list of a circuit family and summarizes it.
///   GHZ:   H(0), then CNOT(0, i) for i = 1..n-1.
///   Graph: H on every qubit, then CZ per edge of the default graph.
///   QAOA:  H on every qubit; per rep, CNOT-Rc-CNOT per ring edge, then one
///          mixer rotation per qubit.
///   QFT:   for each qubit i: H(i), then a controlled rotation from every
///          qubit j > i.
///   VQE:   per rep, RY and RZ on every qubit, then CNOT(i, i+1) chain.
/// `reps` is ignored by the families without repetitions.
CircuitProfile build_circuit_profile(CircuitKind kind, std::size_t n_qubits,
                                     std::size_t reps = 1);

/// Graph state over an explicit edge set.
CircuitProfile build_graph_state_profile(std::size_t n_qubits,
                                         std::span<const QubitPair> edges);

}  // namespace dqc
