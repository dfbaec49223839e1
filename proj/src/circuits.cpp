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

#include "hhl/circuits.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "hhl/errors.hpp"

namespace hhl {

std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "h";
    case GateKind::X: return "x";
    case GateKind::Rx: return "rx";
    case GateKind::Ry: return "ry";
    case GateKind::Rz: return "rz";
    case GateKind::Phase: return "phase";
    case GateKind::CNOT: return "cx";
    case GateKind::Swap: return "swap";
    case GateKind::U3: return "u3";
    case GateKind::Unitary: return "unitary";
    case GateKind::Measure: return "measure";
  }
  return "?";
}

std::vector<int> Gate::qubits() const {
  std::vector<int> out = controls;
  out.insert(out.end(), targets.begin(), targets.end());
  return out;
}

namespace gates {

namespace {
Gate one(GateKind kind, int q, std::vector<double> params = {}) {
  Gate g;
  g.kind = kind;
  g.targets = {q};
  g.params = std::move(params);
  return g;
}
}  // namespace

Gate h(int q) { return one(GateKind::H, q); }
Gate x(int q) { return one(GateKind::X, q); }
Gate rx(int q, double theta) { return one(GateKind::Rx, q, {theta}); }
Gate ry(int q, double theta) { return one(GateKind::Ry, q, {theta}); }
Gate rz(int q, double theta) { return one(GateKind::Rz, q, {theta}); }
Gate phase(int q, double phi) { return one(GateKind::Phase, q, {phi}); }
Gate u3(int q, double theta, double phi, double lambda) {
  return one(GateKind::U3, q, {theta, phi, lambda});
}

Gate cnot(int control, int target) {
  Gate g = one(GateKind::CNOT, target);
  g.controls = {control};
  return g;
}

Gate swap(int a, int b) {
  Gate g;
  g.kind = GateKind::Swap;
  g.targets = {a, b};
  return g;
}

Gate unitary(std::vector<int> targets, Matrix m) {
  Gate g;
  g.kind = GateKind::Unitary;
  g.targets = std::move(targets);
  g.matrix = std::move(m);
  return g;
}

Gate measure(int q, std::string creg, int cbit) {
  Gate g = one(GateKind::Measure, q);
  g.creg = std::move(creg);
  g.cbit = cbit;
  return g;
}

Gate controlled(Gate g, std::vector<int> controls) {
  if (g.kind == GateKind::Measure || g.kind == GateKind::CNOT) {
    throw DomainError("cannot add controls to " + std::string(gate_name(g.kind)));
  }
  g.controls.insert(g.controls.end(), controls.begin(), controls.end());
  return g;
}

}  // namespace gates

Matrix base_matrix(const Gate& g) {
  using std::numbers::sqrt2;
  const Complex i{0.0, 1.0};
  Matrix m(2, 2);
  auto param = [&g](std::size_t k) { return g.params.at(k); };
  switch (g.kind) {
    case GateKind::H:
      m << 1.0 / sqrt2, 1.0 / sqrt2, 1.0 / sqrt2, -1.0 / sqrt2;
      return m;
    case GateKind::X:
    case GateKind::CNOT:
      m << 0.0, 1.0, 1.0, 0.0;
      return m;
    case GateKind::Rx: {
      const double c = std::cos(param(0) / 2), s = std::sin(param(0) / 2);
      m << c, -i * s, -i * s, c;
      return m;
    }
    case GateKind::Ry: {
      const double c = std::cos(param(0) / 2), s = std::sin(param(0) / 2);
      m << c, -s, s, c;
      return m;
    }
    case GateKind::Rz:
      m << std::polar(1.0, -param(0) / 2), 0.0, 0.0, std::polar(1.0, param(0) / 2);
      return m;
    case GateKind::Phase:
      m << 1.0, 0.0, 0.0, std::polar(1.0, param(0));
      return m;
    case GateKind::U3: {
      const double c = std::cos(param(0) / 2), s = std::sin(param(0) / 2);
      m << c, -std::polar(1.0, param(2)) * s, std::polar(1.0, param(1)) * s,
          std::polar(1.0, param(1) + param(2)) * c;
      return m;
    }
    case GateKind::Swap: {
      Matrix sw = Matrix::Zero(4, 4);
      sw(0, 0) = sw(1, 2) = sw(2, 1) = sw(3, 3) = 1.0;
      return sw;
    }
    case GateKind::Unitary:
      return g.matrix;
    case GateKind::Measure:
      break;
  }
  throw DomainError("measurement has no unitary matrix");
}

Gate inverse(const Gate& g) {
  Gate out = g;
  switch (g.kind) {
    case GateKind::H:
    case GateKind::X:
    case GateKind::CNOT:
    case GateKind::Swap:
      break;
    case GateKind::Rx:
    case GateKind::Ry:
    case GateKind::Rz:
    case GateKind::Phase:
      out.params[0] = -g.params[0];
      break;
    case GateKind::U3:
      out.params = {-g.params[0], -g.params[2], -g.params[1]};
      break;
    case GateKind::Unitary:
      out.matrix = g.matrix.adjoint();
      break;
    case GateKind::Measure:
      throw DomainError("measurements have no inverse");
  }
  return out;
}

// ---------------------------------------------------------------------------

Circuit::Circuit(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1) throw DomainError("circuit needs at least one qubit");
}

Circuit& Circuit::add(Gate g) {
  detail::check_qubits(num_qubits_, g.controls, g.targets);
  for (double p : g.params) {
    if (!std::isfinite(p)) throw ValidationError("gate angle is not finite");
  }
  switch (g.kind) {
    case GateKind::CNOT:
      if (g.controls.size() != 1 || g.targets.size() != 1) {
        throw DomainError("cx takes exactly one control and one target");
      }
      break;
    case GateKind::Swap:
      if (g.targets.size() != 2) throw DomainError("swap takes two targets");
      break;
    case GateKind::Unitary: {
      const Eigen::Index dim = Eigen::Index{1} << g.targets.size();
      if (g.matrix.rows() != dim || g.matrix.cols() != dim) {
        throw DomainError("unitary matrix dimension does not match its targets");
      }
      if (!is_unitary(g.matrix)) throw ValidationError("gate matrix is not unitary");
      break;
    }
    case GateKind::Measure:
      if (!g.controls.empty()) throw DomainError("measurements cannot be controlled");
      [[fallthrough]];
    default:
      if (g.targets.size() != 1) throw DomainError("one-qubit gate with several targets");
      break;
  }
  const std::size_t want = g.kind == GateKind::U3 ? 3
                           : (g.kind == GateKind::Rx || g.kind == GateKind::Ry ||
                              g.kind == GateKind::Rz || g.kind == GateKind::Phase)
                               ? 1
                               : 0;
  if (g.params.size() != want) throw DomainError("wrong parameter count for gate");
  gates_.push_back(std::move(g));
  return *this;
}

Circuit& Circuit::add(const std::vector<Gate>& gs) {
  for (const Gate& g : gs) add(g);
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  if (other.num_qubits_ != num_qubits_) throw DomainError("circuit widths differ");
  return add(other.gates_);
}

Circuit& Circuit::set_role(std::string name, std::vector<int> qubits) {
  for (int q : qubits) {
    if (q < 0 || q >= num_qubits_) throw DomainError("role qubit out of range");
  }
  auto it = std::find_if(roles_.begin(), roles_.end(),
                         [&](const QubitRole& r) { return r.name == name; });
  if (it != roles_.end()) {
    it->qubits = std::move(qubits);
  } else {
    roles_.push_back({std::move(name), std::move(qubits)});
  }
  return *this;
}

const QubitRole* Circuit::role(std::string_view name) const {
  for (const auto& r : roles_) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

Circuit Circuit::adjoint() const {
  Circuit out(num_qubits_);
  out.roles_ = roles_;
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) out.gates_.push_back(inverse(*it));
  return out;
}

// ---------------------------------------------------------------------------

ZyzAngles zyz_decompose(const Matrix& u) {
  if (u.rows() != 2 || u.cols() != 2 || !is_unitary(u)) {
    throw ValidationError("zyz decomposition needs a 2x2 unitary");
  }
  const Complex det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  const double alpha = std::arg(det) / 2.0;
  const Matrix v = u * std::polar(1.0, -alpha);
  const double gamma = 2.0 * std::atan2(std::abs(v(1, 0)), std::abs(v(0, 0)));
  const double sum = std::abs(v(1, 1)) > 1e-12 ? 2.0 * std::arg(v(1, 1)) : 0.0;
  const double diff = std::abs(v(1, 0)) > 1e-12 ? 2.0 * std::arg(v(1, 0)) : 0.0;
  return {alpha, (sum + diff) / 2.0, gamma, (sum - diff) / 2.0};
}

RegisterBlock inverse_qft(const std::vector<int>& wires, bool absorb_swap) {
  const std::size_t n = wires.size();
  if (n == 0) throw DomainError("inverse QFT needs at least one wire");
  // Forward QFT core (without the final bit reversal), then its adjoint.
  std::vector<Gate> core;
  for (std::size_t i = 0; i < n; ++i) {
    core.push_back(gates::h(wires[i]));
    for (std::size_t j = i + 1; j < n; ++j) {
      const double angle = std::numbers::pi / std::ldexp(1.0, static_cast<int>(j - i));
      core.push_back(gates::controlled(gates::phase(wires[i], angle), {wires[j]}));
    }
  }
  std::vector<Gate> core_inverse;
  for (auto it = core.rbegin(); it != core.rend(); ++it) core_inverse.push_back(inverse(*it));

  RegisterBlock block;
  if (!absorb_swap) {
    for (std::size_t i = 0; i < n / 2; ++i) block.gates.push_back(gates::swap(wires[i], wires[n - 1 - i]));
    block.gates.insert(block.gates.end(), core_inverse.begin(), core_inverse.end());
    block.output_wires = wires;
    return block;
  }
  // [reversal, core^-1] == [core^-1 with reversed wire labels, reversal]; the
  // trailing reversal is dropped and reported through output_wires.
  auto relabel = [&](int w) {
    const auto pos = static_cast<std::size_t>(std::find(wires.begin(), wires.end(), w) - wires.begin());
    return wires[n - 1 - pos];
  };
  for (Gate g : core_inverse) {
    for (int& q : g.targets) q = relabel(q);
    for (int& q : g.controls) q = relabel(q);
    block.gates.push_back(std::move(g));
  }
  block.output_wires.assign(wires.rbegin(), wires.rend());
  return block;
}

RegisterBlock inverse_qft2(bool absorb_swap) { return inverse_qft({0, 1}, absorb_swap); }

std::vector<Gate> controlled_ry_chain(const std::vector<double>& angles,
                                      const std::vector<int>& controls, int target) {
  const std::size_t m = controls.size();
  if (angles.size() != (std::size_t{1} << m)) {
    throw DomainError("controlled_ry_chain needs one angle per control pattern");
  }
  for (double a : angles) {
    if (!std::isfinite(a)) throw ValidationError("rotation angle is not finite");
  }
  // Order subsets by size so the uncontrolled part comes first.
  std::vector<std::size_t> masks(angles.size());
  for (std::size_t s = 0; s < masks.size(); ++s) masks[s] = s;
  std::stable_sort(masks.begin(), masks.end(), [](std::size_t a, std::size_t b) {
    return std::popcount(a) < std::popcount(b);
  });

  std::vector<Gate> out;
  for (std::size_t s : masks) {
    double phi = 0.0;
    for (std::size_t t = s;; t = (t - 1) & s) {
      const int sign = ((std::popcount(s) - std::popcount(t)) % 2 == 0) ? 1 : -1;
      phi += sign * angles[t];
      if (t == 0) break;
    }
    if (std::abs(phi) < 1e-15) continue;
    std::vector<int> ctrl;
    for (std::size_t i = 0; i < m; ++i) {
      if ((s >> (m - 1 - i)) & 1U) ctrl.push_back(controls[i]);
    }
    Gate g = gates::ry(target, phi);
    g.controls = std::move(ctrl);
    out.push_back(std::move(g));
  }
  return out;
}

// ---------------------------------------------------------------------------

StateVector run(const Circuit& circuit, const StateVector& input) {
  if (input.num_qubits() != circuit.num_qubits()) throw DomainError("state width does not match circuit");
  Vector amps = input.amplitudes();
  for (const Gate& g : circuit.gates()) {
    if (g.is_measure()) continue;
    detail::apply_to_column(amps.data(), circuit.num_qubits(), base_matrix(g), g.controls, g.targets);
  }
  return StateVector::from_amplitudes(std::move(amps));
}

DensityMatrix run(const Circuit& circuit, const DensityMatrix& input) {
  if (input.num_qubits() != circuit.num_qubits()) throw DomainError("state width does not match circuit");
  Matrix rho = input.matrix();
  for (const Gate& g : circuit.gates()) {
    if (g.is_measure()) continue;
    detail::conjugate(rho, circuit.num_qubits(), base_matrix(g), g.controls, g.targets);
  }
  return DensityMatrixBuilder::trusted(circuit.num_qubits(), std::move(rho));
}

Matrix circuit_unitary(const Circuit& circuit) {
  const Eigen::Index dim = Eigen::Index{1} << circuit.num_qubits();
  Matrix u = Matrix::Identity(dim, dim);
  for (const Gate& g : circuit.gates()) {
    if (g.is_measure()) continue;
    detail::apply_left(u, circuit.num_qubits(), base_matrix(g), g.controls, g.targets);
  }
  return u;
}

bool equal_up_to_global_phase(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  // Align on the largest entry of a.
  Eigen::Index r = 0, c = 0;
  a.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(b(r, c)) < 1e-300) return a.cwiseAbs().maxCoeff() <= tol;
  const Complex ratio = a(r, c) / b(r, c);
  const Complex phase = ratio / std::abs(ratio);
  return (a - phase * b).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace hhl
