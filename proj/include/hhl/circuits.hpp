// Copyright 2026 The hybrid-hhl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Gate-level circuit IR, lowering to {CNOT, one-qubit} and simulation.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hhl/qstate.hpp"

namespace hhl {

enum class GateKind { H, X, Rx, Ry, Rz, Phase, CNOT, Swap, U3, Unitary, Measure };

std::string_view gate_name(GateKind kind);

/// One circuit instruction. Any unitary kind except CNOT may carry extra
/// controls; `controls` act on the subspace where every control is |1>.
struct Gate {
  GateKind kind = GateKind::H;
  std::vector<int> targets;
  std::vector<int> controls;
  std::vector<double> params;  // radians
  Matrix matrix;               // Unitary only
  std::string creg;            // Measure only
  int cbit = 0;                // Measure only
  double duration_ns = 0.0;    // set by compile()

  std::vector<int> qubits() const;
  bool is_measure() const { return kind == GateKind::Measure; }
};

namespace gates {
Gate h(int q);
Gate x(int q);
Gate rx(int q, double theta);
Gate ry(int q, double theta);
Gate rz(int q, double theta);
Gate phase(int q, double phi);  // diag(1, e^{i phi})
Gate cnot(int control, int target);
Gate swap(int a, int b);
Gate u3(int q, double theta, double phi, double lambda);
Gate unitary(std::vector<int> targets, Matrix m);
Gate measure(int q, std::string creg, int cbit);
Gate controlled(Gate g, std::vector<int> controls);
}  // namespace gates

/// Matrix of the gate on its targets, ignoring controls.
Matrix base_matrix(const Gate& g);
Gate inverse(const Gate& g);

struct QubitRole {
  std::string name;
  std::vector<int> qubits;
};

class Circuit {
 public:
  explicit Circuit(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }

  Circuit& add(Gate g);
  Circuit& add(const std::vector<Gate>& gs);
  Circuit& append(const Circuit& other);

  Circuit& set_role(std::string name, std::vector<int> qubits);
  const std::vector<QubitRole>& roles() const { return roles_; }
  const QubitRole* role(std::string_view name) const;

  /// Reversed sequence of inverted gates. Measurements are rejected.
  Circuit adjoint() const;

 private:
  int num_qubits_;
  std::vector<Gate> gates_;
  std::vector<QubitRole> roles_;
};

struct GateDurations {
  double cnot_ns = 200.0;
  double rz_ns = 0.0;
  double single_ns = 60.0;

  double of(const Gate& g) const;
};

struct CompileOptions {
  /// Recognise controlled identity / controlled X (up to phase) and run the
  /// peephole pass over the lowered sequence.
  bool simplify = true;
  GateDurations durations;
};

/// Circuit restricted to CNOT, H, X, Rx, Ry, Rz, U3 and terminal measurements.
class CompiledCircuit {
 public:
  const Circuit& circuit() const { return circuit_; }
  int cnot_count() const { return cnot_count_; }
  int single_qubit_count() const { return single_qubit_count_; }
  double total_duration_ns() const { return total_duration_ns_; }
  int num_qubits() const { return circuit_.num_qubits(); }

 private:
  friend CompiledCircuit compile(const Circuit& circuit, const CompileOptions& options);
  explicit CompiledCircuit(Circuit c) : circuit_(std::move(c)) {}

  Circuit circuit_;
  int cnot_count_ = 0;
  int single_qubit_count_ = 0;
  double total_duration_ns_ = 0.0;
};

CompiledCircuit compile(const Circuit& circuit, const CompileOptions& options = {});

/// u = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta).
struct ZyzAngles {
  double alpha;
  double beta;
  double gamma;
  double delta;
};
ZyzAngles zyz_decompose(const Matrix& u);

/// Controlled-u for a one-qubit u with the two-CNOT A.X.B.X.C construction.
/// With `simplify`, u proportional to I or X lowers to a phase on the control
/// (0 CNOTs) or a single CNOT plus that phase.
std::vector<Gate> decompose_controlled_unitary(const Matrix& u, int control, int target,
                                               bool simplify = true);

/// Gates plus the wire holding each logical register bit afterwards.
struct RegisterBlock {
  std::vector<Gate> gates;
  std::vector<int> output_wires;
};

/// Inverse QFT on `wires` (wires[0] most significant). The bit-reversal
/// SWAPs are emitted unless `absorb_swap`, in which case the reversal is
/// reported through output_wires instead.
RegisterBlock inverse_qft(const std::vector<int>& wires, bool absorb_swap = false);
RegisterBlock inverse_qft2(bool absorb_swap = false);

/// Multiplexed Ry on `target`: every control pattern y (controls[0] most
/// significant) receives total rotation angles[y]. Built from
/// multi-controlled Ry gates whose angles are the inclusion-exclusion
/// differences, e.g. theta_3 - (theta_1 + theta_2) for two controls.
std::vector<Gate> controlled_ry_chain(const std::vector<double>& angles,
                                      const std::vector<int>& controls, int target);

/// Basis-only peephole pass: cancels adjacent CNOT/H/X pairs, merges
/// same-axis rotations and drops identity rotations.
std::vector<Gate> simplify_gates(const std::vector<Gate>& gates);

StateVector run(const Circuit& circuit, const StateVector& input);
DensityMatrix run(const Circuit& circuit, const DensityMatrix& input);
/// Full unitary of the non-measurement gates.
Matrix circuit_unitary(const Circuit& circuit);

bool equal_up_to_global_phase(const Matrix& a, const Matrix& b, double tol);

/// OpenQASM 2.0 text. One qreg q, one creg per measured register.
std::string emit_qasm(const CompiledCircuit& compiled);

}  // namespace hhl
