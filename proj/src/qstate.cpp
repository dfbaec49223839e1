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

#include "hhl/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <Eigen/Eigenvalues>

#include "hhl/errors.hpp"

namespace hhl {

namespace {

int qubits_for_dimension(Eigen::Index dim) {
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw ValidationError("dimension must be a power of two >= 2, got " + std::to_string(dim));
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

std::uint64_t bit_mask(int num_qubits, int qubit) {
  return std::uint64_t{1} << (num_qubits - 1 - qubit);
}

void check_qubit(int num_qubits, int qubit) {
  if (qubit < 0 || qubit >= num_qubits) {
    throw DomainError("qubit index " + std::to_string(qubit) + " out of range for " +
                      std::to_string(num_qubits) + " qubits");
  }
}

void check_outcome(int outcome) {
  if (outcome != 0 && outcome != 1) throw DomainError("outcome must be 0 or 1");
}

void check_gate_shape(const Matrix& u, const std::vector<int>& targets) {
  const Eigen::Index dim = Eigen::Index{1} << targets.size();
  if (u.rows() != dim || u.cols() != dim) {
    throw DomainError("gate matrix dimension does not match target count");
  }
}

// Removes `qubit` from an index, packing the remaining bits.
std::uint64_t drop_bit(std::uint64_t index, int num_qubits, int qubit) {
  const int pos = num_qubits - 1 - qubit;
  const std::uint64_t low = index & ((std::uint64_t{1} << pos) - 1);
  const std::uint64_t high = index >> (pos + 1);
  return (high << pos) | low;
}

}  // namespace

namespace detail {

void check_qubits(int num_qubits, const std::vector<int>& controls,
                  const std::vector<int>& targets) {
  if (targets.empty()) throw DomainError("at least one target qubit is required");
  std::set<int> seen;
  for (int q : targets) {
    check_qubit(num_qubits, q);
    if (!seen.insert(q).second) throw DomainError("duplicate target qubit");
  }
  for (int q : controls) {
    check_qubit(num_qubits, q);
    if (!seen.insert(q).second) throw DomainError("control qubits overlap targets or repeat");
  }
}

void apply_to_column(Complex* data, int num_qubits, const Matrix& m,
                     const std::vector<int>& controls, const std::vector<int>& targets) {
  const std::size_t k = targets.size();
  const std::size_t local_dim = std::size_t{1} << k;
  const std::uint64_t dim = std::uint64_t{1} << num_qubits;

  std::uint64_t target_mask = 0;
  std::vector<std::uint64_t> offsets(local_dim, 0);
  for (std::size_t local = 0; local < local_dim; ++local) {
    for (std::size_t i = 0; i < k; ++i) {
      if ((local >> (k - 1 - i)) & 1U) offsets[local] |= bit_mask(num_qubits, targets[i]);
    }
  }
  for (int t : targets) target_mask |= bit_mask(num_qubits, t);
  std::uint64_t control_mask = 0;
  for (int c : controls) control_mask |= bit_mask(num_qubits, c);

  std::vector<Complex> in(local_dim);
  for (std::uint64_t base = 0; base < dim; ++base) {
    if ((base & target_mask) != 0 || (base & control_mask) != control_mask) continue;
    for (std::size_t l = 0; l < local_dim; ++l) in[l] = data[base | offsets[l]];
    for (std::size_t r = 0; r < local_dim; ++r) {
      Complex acc{0.0, 0.0};
      for (std::size_t c = 0; c < local_dim; ++c) {
        acc += m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
      }
      data[base | offsets[r]] = acc;
    }
  }
}

void apply_left(Matrix& rho, int num_qubits, const Matrix& m, const std::vector<int>& controls,
                const std::vector<int>& targets) {
  for (Eigen::Index col = 0; col < rho.cols(); ++col) {
    apply_to_column(rho.data() + col * rho.rows(), num_qubits, m, controls, targets);
  }
}

void conjugate(Matrix& rho, int num_qubits, const Matrix& m, const std::vector<int>& controls,
               const std::vector<int>& targets) {
  apply_left(rho, num_qubits, m, controls, targets);
  Matrix adj = rho.adjoint();
  apply_left(adj, num_qubits, m, controls, targets);
  rho = adj.adjoint();
}

double unit_interval(std::uint64_t word) {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

}  // namespace detail

bool is_unitary(const Matrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

StateVector StateVector::from_amplitudes(Vector amplitudes) {
  const int n = qubits_for_dimension(amplitudes.size());
  if (std::abs(amplitudes.squaredNorm() - 1.0) > kAmplitudeTolerance) {
    throw ValidationError("state vector is not normalized");
  }
  return StateVector(n, std::move(amplitudes));
}

StateVector StateVector::normalized(Vector amplitudes) {
  const int n = qubits_for_dimension(amplitudes.size());
  const double norm = amplitudes.norm();
  if (norm == 0.0) throw DomainError("cannot normalize the zero vector");
  amplitudes /= norm;
  return StateVector(n, std::move(amplitudes));
}

Complex StateVector::inner(const StateVector& other) const {
  if (other.dimension() != dimension()) throw DomainError("state dimensions differ");
  return amplitudes_.dot(other.amplitudes_);
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  return DensityMatrix(psi.num_qubits(), psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::from_matrix(Matrix entries) {
  if (entries.rows() != entries.cols()) throw ValidationError("density matrix must be square");
  const int n = qubits_for_dimension(entries.rows());
  if (!is_hermitian(entries)) throw ValidationError("density matrix is not Hermitian");
  if (std::abs(entries.trace() - Complex{1.0, 0.0}) > kAmplitudeTolerance) {
    throw ValidationError("density matrix trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(entries, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kAmplitudeTolerance) {
    throw ValidationError("density matrix is not positive semidefinite");
  }
  return DensityMatrix(n, std::move(entries));
}

double DensityMatrix::purity() const { return (entries_ * entries_).trace().real(); }

DensityMatrix DensityMatrixBuilder::trusted(int num_qubits, Matrix entries) {
  return DensityMatrix(num_qubits, std::move(entries));
}

StateVector basis_state(int num_qubits, std::uint64_t index) {
  if (num_qubits < 1 || num_qubits > 30) throw DomainError("num_qubits must be in [1, 30]");
  const std::uint64_t dim = std::uint64_t{1} << num_qubits;
  if (index >= dim) throw DomainError("basis index out of range");
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(dim));
  amps[static_cast<Eigen::Index>(index)] = 1.0;
  return StateVector::from_amplitudes(std::move(amps));
}

StateVector apply_unitary(const StateVector& state, const Matrix& u,
                          const std::vector<int>& targets) {
  return apply_controlled(state, u, {}, targets);
}

StateVector apply_controlled(const StateVector& state, const Matrix& u,
                             const std::vector<int>& controls,
                             const std::vector<int>& targets) {
  detail::check_qubits(state.num_qubits(), controls, targets);
  check_gate_shape(u, targets);
  if (!is_unitary(u)) throw ValidationError("gate matrix is not unitary");
  Vector amps = state.amplitudes();
  detail::apply_to_column(amps.data(), state.num_qubits(), u, controls, targets);
  return StateVector::from_amplitudes(std::move(amps));
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix& u,
                            const std::vector<int>& targets) {
  return apply_controlled(rho, u, {}, targets);
}

DensityMatrix apply_controlled(const DensityMatrix& rho, const Matrix& u,
                               const std::vector<int>& controls,
                               const std::vector<int>& targets) {
  detail::check_qubits(rho.num_qubits(), controls, targets);
  check_gate_shape(u, targets);
  if (!is_unitary(u)) throw ValidationError("gate matrix is not unitary");
  Matrix m = rho.matrix();
  detail::conjugate(m, rho.num_qubits(), u, controls, targets);
  return DensityMatrixBuilder::trusted(rho.num_qubits(), std::move(m));
}

DensityMatrix apply_kraus(const DensityMatrix& rho, const std::vector<Matrix>& kraus,
                          const std::vector<int>& targets) {
  detail::check_qubits(rho.num_qubits(), {}, targets);
  if (kraus.empty()) throw DomainError("empty Kraus set");
  const Eigen::Index local = Eigen::Index{1} << targets.size();
  Matrix completeness = Matrix::Zero(local, local);
  for (const Matrix& k : kraus) {
    check_gate_shape(k, targets);
    completeness += k.adjoint() * k;
  }
  if ((completeness - Matrix::Identity(local, local)).cwiseAbs().maxCoeff() > kAmplitudeTolerance) {
    throw ValidationError("Kraus operators are not trace preserving");
  }
  Matrix out = Matrix::Zero(rho.matrix().rows(), rho.matrix().cols());
  for (const Matrix& k : kraus) {
    Matrix term = rho.matrix();
    detail::conjugate(term, rho.num_qubits(), k, {}, targets);
    out += term;
  }
  return DensityMatrixBuilder::trusted(rho.num_qubits(), std::move(out));
}

// ---------------------------------------------------------------------------

PostSelected<StateVector> postselect(const StateVector& state, int qubit, int outcome) {
  check_qubit(state.num_qubits(), qubit);
  check_outcome(outcome);
  const std::uint64_t mask = bit_mask(state.num_qubits(), qubit);
  Vector amps = state.amplitudes();
  double p = 0.0;
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    const bool bit = (static_cast<std::uint64_t>(i) & mask) != 0;
    if (bit == (outcome == 1)) {
      p += std::norm(amps[i]);
    } else {
      amps[i] = 0.0;
    }
  }
  if (p <= 0.0) throw ImpossibleOutcomeError("post-selected branch has zero probability");
  amps /= std::sqrt(p);
  return {StateVector::normalized(std::move(amps)), p};
}

PostSelected<StateVector> postselect_discard(const StateVector& state, int qubit, int outcome) {
  if (state.num_qubits() < 2) throw DomainError("cannot discard the only qubit");
  auto collapsed = postselect(state, qubit, outcome);
  const int n = state.num_qubits();
  const std::uint64_t mask = bit_mask(n, qubit);
  Vector rest = Vector::Zero(Eigen::Index{1} << (n - 1));
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(state.dimension()); ++i) {
    const bool bit = (static_cast<std::uint64_t>(i) & mask) != 0;
    if (bit != (outcome == 1)) continue;
    rest[static_cast<Eigen::Index>(drop_bit(static_cast<std::uint64_t>(i), n, qubit))] =
        collapsed.state[static_cast<std::size_t>(i)];
  }
  return {StateVector::normalized(std::move(rest)), collapsed.probability};
}

PostSelected<DensityMatrix> postselect(const DensityMatrix& rho, int qubit, int outcome) {
  check_qubit(rho.num_qubits(), qubit);
  check_outcome(outcome);
  const std::uint64_t mask = bit_mask(rho.num_qubits(), qubit);
  Matrix m = rho.matrix();
  const Eigen::Index dim = m.rows();
  auto keep = [&](Eigen::Index i) {
    return ((static_cast<std::uint64_t>(i) & mask) != 0) == (outcome == 1);
  };
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      if (!keep(r) || !keep(c)) m(r, c) = 0.0;
    }
  }
  const double p = m.trace().real();
  if (p <= 0.0) throw ImpossibleOutcomeError("post-selected branch has zero probability");
  m /= p;
  return {DensityMatrixBuilder::trusted(rho.num_qubits(), std::move(m)), p};
}

PostSelected<DensityMatrix> postselect_discard(const DensityMatrix& rho, int qubit,
                                               int outcome) {
  if (rho.num_qubits() < 2) throw DomainError("cannot discard the only qubit");
  auto collapsed = postselect(rho, qubit, outcome);
  std::vector<int> keep;
  for (int q = 0; q < rho.num_qubits(); ++q) {
    if (q != qubit) keep.push_back(q);
  }
  return {partial_trace(collapsed.state, keep), collapsed.probability};
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  if (keep.empty()) throw DomainError("partial trace must keep at least one qubit");
  const int n = rho.num_qubits();
  std::vector<int> kept = keep;
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw DomainError("duplicate qubit in keep list");
  }
  for (int q : kept) check_qubit(n, q);

  std::vector<int> traced;
  for (int q = 0; q < n; ++q) {
    if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);
  }
  const int nk = static_cast<int>(kept.size());
  const int nt = static_cast<int>(traced.size());

  auto compose = [&](std::uint64_t k_index, std::uint64_t t_index) {
    std::uint64_t full = 0;
    for (int i = 0; i < nk; ++i) {
      if ((k_index >> (nk - 1 - i)) & 1U) full |= bit_mask(n, kept[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < nt; ++i) {
      if ((t_index >> (nt - 1 - i)) & 1U) full |= bit_mask(n, traced[static_cast<std::size_t>(i)]);
    }
    return static_cast<Eigen::Index>(full);
  };

  const std::uint64_t dk = std::uint64_t{1} << nk;
  const std::uint64_t dt = std::uint64_t{1} << nt;
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (std::uint64_t r = 0; r < dk; ++r) {
    for (std::uint64_t c = 0; c < dk; ++c) {
      Complex acc{0.0, 0.0};
      for (std::uint64_t t = 0; t < dt; ++t) acc += rho.matrix()(compose(r, t), compose(c, t));
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
    }
  }
  return DensityMatrixBuilder::trusted(nk, std::move(out));
}

double fidelity_pure(const DensityMatrix& rho, const StateVector& psi) {
  if (rho.dimension() != psi.dimension()) throw DomainError("fidelity dimension mismatch");
  const Complex overlap = psi.amplitudes().dot(rho.matrix() * psi.amplitudes());
  return std::clamp(overlap.real(), 0.0, 1.0);
}

double fidelity_pure_sqrt(const DensityMatrix& rho, const StateVector& psi) {
  return std::sqrt(fidelity_pure(rho, psi));
}

double state_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dimension() != sigma.dimension()) throw DomainError("fidelity dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  Vector roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().cast<Complex>();
  const Matrix sqrt_rho = es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
  const Matrix inner = sqrt_rho * sigma.matrix() * sqrt_rho;
  Eigen::SelfAdjointEigenSolver<Matrix> inner_es(0.5 * (inner + inner.adjoint()));
  const double root_trace = inner_es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(root_trace * root_trace, 0.0, 1.0);
}

// ---------------------------------------------------------------------------

std::string to_bitstring(std::uint64_t value, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if ((value >> (width - 1 - i)) & 1U) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

MeasurementHistogram MeasurementHistogram::from_probabilities(int width,
                                                              std::vector<double> probabilities) {
  if (width < 1 || probabilities.size() != (std::size_t{1} << width)) {
    throw DomainError("histogram needs 2^width entries");
  }
  double total = 0.0;
  for (double p : probabilities) {
    if (p < -1e-12) throw ValidationError("negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("probabilities do not sum to 1");
  MeasurementHistogram h;
  h.width_ = width;
  h.shots_ = 0;
  h.probabilities_ = std::move(probabilities);
  for (double& p : h.probabilities_) p = std::max(p, 0.0);
  h.counts_.assign(h.probabilities_.size(), 0);
  return h;
}

MeasurementHistogram MeasurementHistogram::from_counts(int width,
                                                       std::vector<std::uint64_t> counts) {
  if (width < 1 || counts.size() != (std::size_t{1} << width)) {
    throw DomainError("histogram needs 2^width entries");
  }
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw DomainError("histogram has no shots");
  MeasurementHistogram h;
  h.width_ = width;
  h.shots_ = total;
  h.counts_ = std::move(counts);
  h.probabilities_.resize(h.counts_.size());
  for (std::size_t i = 0; i < h.counts_.size(); ++i) {
    h.probabilities_[i] = static_cast<double>(h.counts_[i]) / static_cast<double>(total);
  }
  return h;
}

std::string MeasurementHistogram::label(std::size_t outcome) const {
  return to_bitstring(outcome, width_);
}

std::size_t MeasurementHistogram::index_of(const std::string& label) const {
  if (static_cast<int>(label.size()) != width_) throw DomainError("outcome label width mismatch");
  std::size_t v = 0;
  for (char ch : label) {
    if (ch != '0' && ch != '1') throw DomainError("outcome label must be a bitstring");
    v = (v << 1) | static_cast<std::size_t>(ch == '1');
  }
  return v;
}

double MeasurementHistogram::probability(const std::string& label) const {
  return probabilities_.at(index_of(label));
}

std::uint64_t MeasurementHistogram::count(std::size_t outcome) const {
  return counts_.at(outcome);
}

std::uint64_t MeasurementHistogram::count(const std::string& label) const {
  return counts_.at(index_of(label));
}

MeasurementHistogram MeasurementHistogram::merged(const MeasurementHistogram& other) const {
  if (is_exact() || other.is_exact()) throw DomainError("only sampled histograms can be pooled");
  if (other.width_ != width_) throw DomainError("histogram widths differ");
  std::vector<std::uint64_t> pooled = counts_;
  for (std::size_t i = 0; i < pooled.size(); ++i) pooled[i] += other.counts_[i];
  return from_counts(width_, std::move(pooled));
}

namespace {

std::vector<double> marginal_from_diagonal(const std::vector<double>& diag, int num_qubits,
                                           const std::vector<int>& qubits) {
  if (qubits.empty()) throw DomainError("no qubits to measure");
  std::set<int> seen;
  for (int q : qubits) {
    check_qubit(num_qubits, q);
    if (!seen.insert(q).second) throw DomainError("duplicate measured qubit");
  }
  const int w = static_cast<int>(qubits.size());
  std::vector<double> probs(std::size_t{1} << w, 0.0);
  for (std::size_t i = 0; i < diag.size(); ++i) {
    std::size_t label = 0;
    for (int q : qubits) {
      label = (label << 1) | static_cast<std::size_t>((i & bit_mask(num_qubits, q)) != 0);
    }
    probs[label] += diag[i];
  }
  return probs;
}

}  // namespace

MeasurementHistogram marginal_distribution(const StateVector& state,
                                           const std::vector<int>& qubits) {
  std::vector<double> diag(state.dimension());
  for (std::size_t i = 0; i < diag.size(); ++i) diag[i] = std::norm(state[i]);
  return MeasurementHistogram::from_probabilities(
      static_cast<int>(qubits.size()), marginal_from_diagonal(diag, state.num_qubits(), qubits));
}

MeasurementHistogram marginal_distribution(const DensityMatrix& rho,
                                           const std::vector<int>& qubits) {
  std::vector<double> diag(rho.dimension());
  for (std::size_t i = 0; i < diag.size(); ++i) diag[i] = rho(i, i).real();
  return MeasurementHistogram::from_probabilities(
      static_cast<int>(qubits.size()), marginal_from_diagonal(diag, rho.num_qubits(), qubits));
}

MeasurementHistogram sample_distribution(const MeasurementHistogram& exact, std::uint64_t shots,
                                         std::uint64_t seed) {
  if (shots == 0) throw DomainError("shots must be >= 1");
  const auto& p = exact.probabilities();
  std::vector<double> cumulative(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    cumulative[i] = acc;
  }
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> counts(p.size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = detail::unit_interval(rng()) * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cumulative.begin());
    if (it == cumulative.end()) {
      idx = p.size() - 1;
      while (idx > 0 && p[idx] == 0.0) --idx;
    }
    ++counts[idx];
  }
  return MeasurementHistogram::from_counts(exact.width(), std::move(counts));
}

MeasurementHistogram sample(const StateVector& state, const std::vector<int>& qubits,
                            std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw DomainError("shots must be >= 1");
  return sample_distribution(marginal_distribution(state, qubits), shots, seed);
}

MeasurementHistogram sample(const DensityMatrix& rho, const std::vector<int>& qubits,
                            std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw DomainError("shots must be >= 1");
  return sample_distribution(marginal_distribution(rho, qubits), shots, seed);
}

}  // namespace hhl
