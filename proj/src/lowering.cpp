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

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "hhl/circuits.hpp"
#include "hhl/errors.hpp"

namespace hhl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleEps = 1e-12;

bool near_zero_angle(double theta) { return std::abs(std::remainder(theta, 2.0 * kPi)) < kAngleEps; }

bool same_wires(const Gate& a, const Gate& b) {
  return a.targets == b.targets && a.controls == b.controls;
}

bool touches(const Gate& g, const Gate& other) {
  for (int q : g.qubits()) {
    for (int p : other.qubits()) {
      if (p == q) return true;
    }
  }
  return false;
}

bool proportional_to_identity(const Matrix& u, Complex* phase) {
  if (std::abs(u(0, 1)) > 1e-10 || std::abs(u(1, 0)) > 1e-10 || std::abs(u(0, 0) - u(1, 1)) > 1e-10) {
    return false;
  }
  *phase = u(0, 0);
  return true;
}

bool proportional_to_x(const Matrix& u, Complex* phase) {
  if (std::abs(u(0, 0)) > 1e-10 || std::abs(u(1, 1)) > 1e-10 || std::abs(u(0, 1) - u(1, 0)) > 1e-10) {
    return false;
  }
  *phase = u(1, 0);
  return true;
}

/// Principal square root of a 2x2 unitary.
Matrix sqrt_unitary(const Matrix& u) {
  Complex p;
  if (proportional_to_identity(u, &p)) return Matrix::Identity(2, 2) * std::sqrt(p);
  Eigen::ComplexEigenSolver<Matrix> es(u);
  const Matrix vecs = es.eigenvectors();
  Vector roots = es.eigenvalues();
  for (Eigen::Index i = 0; i < roots.size(); ++i) roots[i] = std::sqrt(roots[i]);
  return vecs * roots.asDiagonal() * vecs.inverse();
}

class Lowerer {
 public:
  explicit Lowerer(bool simplify) : simplify_(simplify) {}

  void lower(const Gate& g, std::vector<Gate>& out) const {
    if (g.kind == GateKind::Measure) {
      out.push_back(g);
      return;
    }
    if (g.controls.empty()) {
      lower_uncontrolled(g, out);
      return;
    }
    if (g.targets.size() != 1) {
      throw CompileError("controlled multi-qubit " + std::string(gate_name(g.kind)) +
                         " has no lowering");
    }
    const int t = g.targets[0];
    const std::vector<int>& c = g.controls;
    if (g.kind == GateKind::CNOT || (g.kind == GateKind::X && c.size() == 1)) {
      out.push_back(gates::cnot(c[0], t));
      return;
    }
    if (g.kind == GateKind::X && c.size() == 2) {
      toffoli(c[0], c[1], t, out);
      return;
    }
    if (g.kind == GateKind::Ry) {
      const double theta = g.params[0];
      if (c.size() == 1) {
        out.push_back(gates::ry(t, theta / 2));
        out.push_back(gates::cnot(c[0], t));
        out.push_back(gates::ry(t, -theta / 2));
        out.push_back(gates::cnot(c[0], t));
        return;
      }
      const Gate mcx = gates::controlled(gates::x(t), c);
      out.push_back(gates::ry(t, theta / 2));
      lower(mcx, out);
      out.push_back(gates::ry(t, -theta / 2));
      lower(mcx, out);
      return;
    }
    if (g.kind == GateKind::Rz && c.size() == 1) {
      const double theta = g.params[0];
      out.push_back(gates::rz(t, theta / 2));
      out.push_back(gates::cnot(c[0], t));
      out.push_back(gates::rz(t, -theta / 2));
      out.push_back(gates::cnot(c[0], t));
      return;
    }
    if (g.kind == GateKind::Phase && c.size() == 1) {
      const double phi = g.params[0];
      out.push_back(gates::rz(c[0], phi / 2));
      out.push_back(gates::cnot(c[0], t));
      out.push_back(gates::rz(t, -phi / 2));
      out.push_back(gates::cnot(c[0], t));
      out.push_back(gates::rz(t, phi / 2));
      return;
    }
    lower_generic(base_matrix(g), c, t, out);
  }

 private:
  void lower_uncontrolled(const Gate& g, std::vector<Gate>& out) const {
    switch (g.kind) {
      case GateKind::Phase:
        out.push_back(gates::rz(g.targets[0], g.params[0]));
        return;
      case GateKind::Swap: {
        const int a = g.targets[0], b = g.targets[1];
        out.push_back(gates::cnot(a, b));
        out.push_back(gates::cnot(b, a));
        out.push_back(gates::cnot(a, b));
        return;
      }
      case GateKind::Unitary: {
        if (g.targets.size() != 1) {
          throw CompileError("multi-qubit unitary has no lowering");
        }
        const ZyzAngles z = zyz_decompose(g.matrix);
        out.push_back(gates::u3(g.targets[0], z.gamma, z.beta, z.delta));
        return;
      }
      default:
        out.push_back(g);
        return;
    }
  }

  void lower_generic(const Matrix& u, const std::vector<int>& c, int t, std::vector<Gate>& out) const {
    if (c.size() == 1) {
      for (const Gate& g : decompose_controlled_unitary(u, c[0], t, simplify_)) lower(g, out);
      return;
    }
    // C^k U = CV(c_k) . C^{k-1}X(c_k) . CV^dag(c_k) . C^{k-1}X(c_k) . C^{k-1}V, V^2 = U.
    const Matrix v = sqrt_unitary(u);
    const int last = c.back();
    const std::vector<int> rest(c.begin(), c.end() - 1);
    const Gate mcx = gates::controlled(gates::x(last), rest);
    lower_generic(v, {last}, t, out);
    lower(mcx, out);
    lower_generic(v.adjoint(), {last}, t, out);
    lower(mcx, out);
    lower_generic(v, rest, t, out);
  }

  static void toffoli(int a, int b, int t, std::vector<Gate>& out) {
    const double q = kPi / 4;
    out.push_back(gates::h(t));
    out.push_back(gates::cnot(b, t));
    out.push_back(gates::rz(t, -q));
    out.push_back(gates::cnot(a, t));
    out.push_back(gates::rz(t, q));
    out.push_back(gates::cnot(b, t));
    out.push_back(gates::rz(t, -q));
    out.push_back(gates::cnot(a, t));
    out.push_back(gates::rz(b, q));
    out.push_back(gates::rz(t, q));
    out.push_back(gates::h(t));
    out.push_back(gates::cnot(a, b));
    out.push_back(gates::rz(a, q));
    out.push_back(gates::rz(b, -q));
    out.push_back(gates::cnot(a, b));
  }

  bool simplify_;
};

}  // namespace

double GateDurations::of(const Gate& g) const {
  switch (g.kind) {
    case GateKind::CNOT: return cnot_ns;
    case GateKind::Rz: return rz_ns;
    case GateKind::Measure: return 0.0;
    case GateKind::H:
    case GateKind::X:
    case GateKind::Rx:
    case GateKind::Ry:
    case GateKind::U3: return single_ns;
    default: break;
  }
  throw CompileError("no duration for non-basis gate " + std::string(gate_name(g.kind)));
}

std::vector<Gate> decompose_controlled_unitary(const Matrix& u, int control, int target, bool simplify) {
  if (u.rows() != 2 || u.cols() != 2 || !is_unitary(u)) {
    throw ValidationError("controlled decomposition needs a 2x2 unitary");
  }
  std::vector<Gate> out;
  Complex p;
  if (simplify && proportional_to_identity(u, &p)) {
    if (!near_zero_angle(std::arg(p))) out.push_back(gates::phase(control, std::arg(p)));
    return out;
  }
  if (simplify && proportional_to_x(u, &p)) {
    out.push_back(gates::cnot(control, target));
    if (!near_zero_angle(std::arg(p))) out.push_back(gates::phase(control, std::arg(p)));
    return out;
  }
  const ZyzAngles z = zyz_decompose(u);
  out.push_back(gates::rz(target, (z.delta - z.beta) / 2));
  out.push_back(gates::cnot(control, target));
  out.push_back(gates::rz(target, -(z.delta + z.beta) / 2));
  out.push_back(gates::ry(target, -z.gamma / 2));
  out.push_back(gates::cnot(control, target));
  out.push_back(gates::ry(target, z.gamma / 2));
  out.push_back(gates::rz(target, z.beta));
  out.push_back(gates::phase(control, z.alpha));
  return out;
}

std::vector<Gate> simplify_gates(const std::vector<Gate>& input) {
  std::vector<Gate> gs = input;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < gs.size() && !changed; ++i) {
      Gate& g = gs[i];
      const bool rotation = g.kind == GateKind::Rx || g.kind == GateKind::Ry || g.kind == GateKind::Rz;
      if (rotation && g.controls.empty() && near_zero_angle(g.params[0])) {
        gs.erase(gs.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
      if (g.is_measure()) continue;
      std::size_t j = i + 1;
      while (j < gs.size() && !touches(g, gs[j])) ++j;
      if (j == gs.size() || gs[j].kind != g.kind || !same_wires(g, gs[j])) continue;
      if (g.kind == GateKind::CNOT || g.kind == GateKind::H || g.kind == GateKind::X) {
        gs.erase(gs.begin() + static_cast<std::ptrdiff_t>(j));
        gs.erase(gs.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
      } else if (rotation && g.controls.empty()) {
        g.params[0] += gs[j].params[0];
        gs.erase(gs.begin() + static_cast<std::ptrdiff_t>(j));
        changed = true;
      }
    }
  }
  return gs;
}

CompiledCircuit compile(const Circuit& circuit, const CompileOptions& options) {
  const Lowerer lowerer(options.simplify);
  std::vector<Gate> lowered;
  bool measured = false;
  for (const Gate& g : circuit.gates()) {
    if (g.is_measure()) {
      measured = true;
    } else if (measured) {
      throw CompileError("measurements must be terminal");
    }
    lowerer.lower(g, lowered);
  }
  if (options.simplify) lowered = simplify_gates(lowered);

  Circuit out(circuit.num_qubits());
  for (const auto& role : circuit.roles()) out.set_role(role.name, role.qubits);
  CompiledCircuit compiled(std::move(out));
  for (Gate& g : lowered) {
    g.duration_ns = options.durations.of(g);
    if (g.kind == GateKind::CNOT) {
      ++compiled.cnot_count_;
    } else if (!g.is_measure()) {
      ++compiled.single_qubit_count_;
    }
    compiled.total_duration_ns_ += g.duration_ns;
    compiled.circuit_.add(std::move(g));
  }
  return compiled;
}

}  // namespace hhl
