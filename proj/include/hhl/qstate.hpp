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

// Dense exact simulation substrate.
//
// Qubit q of an N-qubit register is bit (N - 1 - q) of the basis index, so
// qubit 0 is the most significant bit and a bitstring label reads
// left-to-right in qubit order. Multi-qubit gate matrices follow the same
// rule: targets[0] is the most significant bit of the gate's local index.

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hhl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kAmplitudeTolerance = 1e-10;

class StateVector {
 public:
  /// Validates length 2^n (n >= 1) and unit norm within kAmplitudeTolerance.
  static StateVector from_amplitudes(Vector amplitudes);
  /// Rescales to unit norm; throws DomainError on a zero vector.
  static StateVector normalized(Vector amplitudes);

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }
  double norm() const { return amplitudes_.norm(); }
  Complex inner(const StateVector& other) const;

 private:
  StateVector(int num_qubits, Vector amplitudes)
      : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {}

  int num_qubits_;
  Vector amplitudes_;
};

class DensityMatrix {
 public:
  static DensityMatrix from_pure(const StateVector& psi);
  /// Validates Hermitian, unit trace and PSD (eigenvalues >= -1e-10).
  static DensityMatrix from_matrix(Matrix entries);

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return static_cast<std::size_t>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }
  Complex operator()(std::size_t r, std::size_t c) const {
    return entries_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }
  double trace() const { return entries_.trace().real(); }
  double purity() const;

 private:
  friend class DensityMatrixBuilder;
  DensityMatrix(int num_qubits, Matrix entries)
      : num_qubits_(num_qubits), entries_(std::move(entries)) {}

  int num_qubits_;
  Matrix entries_;
};

/// Bypasses validation for internal pipelines that preserve the invariants
/// by construction (unitary evolution, CPTP channels).
class DensityMatrixBuilder {
 public:
  static DensityMatrix trusted(int num_qubits, Matrix entries);
};

StateVector basis_state(int num_qubits, std::uint64_t index);

StateVector apply_unitary(const StateVector& state, const Matrix& u,
                          const std::vector<int>& targets);
StateVector apply_controlled(const StateVector& state, const Matrix& u,
                             const std::vector<int>& controls,
                             const std::vector<int>& targets);
DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix& u,
                            const std::vector<int>& targets);
DensityMatrix apply_controlled(const DensityMatrix& rho, const Matrix& u,
                               const std::vector<int>& controls,
                               const std::vector<int>& targets);

/// rho -> sum_k K rho K^dagger. The Kraus set must satisfy sum K^dagger K = I.
DensityMatrix apply_kraus(const DensityMatrix& rho, const std::vector<Matrix>& kraus,
                          const std::vector<int>& targets);

template <typename State>
struct PostSelected {
  State state;
  double probability;
};

/// Projects `qubit` onto `outcome` and renormalizes; the qubit stays in the
/// register (collapsed). Throws ImpossibleOutcomeError on a zero branch.
PostSelected<StateVector> postselect(const StateVector& state, int qubit, int outcome);
PostSelected<DensityMatrix> postselect(const DensityMatrix& rho, int qubit, int outcome);

/// Same projection, but the measured qubit is removed from the result.
PostSelected<StateVector> postselect_discard(const StateVector& state, int qubit, int outcome);
PostSelected<DensityMatrix> postselect_discard(const DensityMatrix& rho, int qubit,
                                               int outcome);

/// Reduced state on `keep` (result qubits in ascending index order).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

/// <psi|rho|psi>. Library default; reproduces the closed-form fidelity curves.
double fidelity_pure(const DensityMatrix& rho, const StateVector& psi);
/// sqrt(<psi|rho|psi>), the root-fidelity convention.
double fidelity_pure_sqrt(const DensityMatrix& rho, const StateVector& psi);
/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double state_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Outcome labels are bitstrings over the measured qubits, first listed
/// qubit leftmost. Every one of the 2^width outcomes is present.
class MeasurementHistogram {
 public:
  MeasurementHistogram() = default;
  static MeasurementHistogram from_probabilities(int width, std::vector<double> probabilities);
  static MeasurementHistogram from_counts(int width, std::vector<std::uint64_t> counts);

  int width() const { return width_; }
  /// 0 for an exact distribution.
  std::uint64_t shots() const { return shots_; }
  bool is_exact() const { return shots_ == 0; }
  std::size_t size() const { return probabilities_.size(); }

  double probability(std::size_t outcome) const { return probabilities_.at(outcome); }
  double probability(const std::string& label) const;
  std::uint64_t count(std::size_t outcome) const;
  std::uint64_t count(const std::string& label) const;
  const std::vector<double>& probabilities() const { return probabilities_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }

  std::string label(std::size_t outcome) const;
  std::size_t index_of(const std::string& label) const;

  /// Pools counts from several sampled sets of the same width.
  MeasurementHistogram merged(const MeasurementHistogram& other) const;

 private:
  int width_ = 0;
  std::uint64_t shots_ = 0;
  std::vector<double> probabilities_;
  std::vector<std::uint64_t> counts_;
};

std::string to_bitstring(std::uint64_t value, int width);

MeasurementHistogram marginal_distribution(const StateVector& state,
                                           const std::vector<int>& qubits);
MeasurementHistogram marginal_distribution(const DensityMatrix& rho,
                                           const std::vector<int>& qubits);

/// Seeded draws from an exact distribution; bit-reproducible across platforms.
MeasurementHistogram sample_distribution(const MeasurementHistogram& exact, std::uint64_t shots,
                                         std::uint64_t seed);
MeasurementHistogram sample(const StateVector& state, const std::vector<int>& qubits,
                            std::uint64_t shots, std::uint64_t seed);
MeasurementHistogram sample(const DensityMatrix& rho, const std::vector<int>& qubits,
                            std::uint64_t shots, std::uint64_t seed);

bool is_unitary(const Matrix& u, double tol = kAmplitudeTolerance);
bool is_hermitian(const Matrix& m, double tol = kAmplitudeTolerance);
Matrix kron(const Matrix& a, const Matrix& b);

namespace detail {

/// In-place kernel: applies `m` (2^|targets| square, not necessarily unitary)
/// to the amplitudes of one column on the subspace where all controls are 1.
void apply_to_column(Complex* data, int num_qubits, const Matrix& m,
                     const std::vector<int>& controls, const std::vector<int>& targets);
void apply_left(Matrix& rho, int num_qubits, const Matrix& m, const std::vector<int>& controls,
                const std::vector<int>& targets);
/// rho -> M rho M^dagger.
void conjugate(Matrix& rho, int num_qubits, const Matrix& m, const std::vector<int>& controls,
               const std::vector<int>& targets);
void check_qubits(int num_qubits, const std::vector<int>& controls,
                  const std::vector<int>& targets);

/// Uniform double in [0,1) from the top 53 bits of a 64-bit word.
double unit_interval(std::uint64_t word);

}  // namespace detail

}  // namespace hhl
