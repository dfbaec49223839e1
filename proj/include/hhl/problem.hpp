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

// Linear systems A x = b with Hermitian A (spectrum in (0,1)) and unit b,
// the two-by-two family A_lambda, and binary-expansion analysis of spectra.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hhl/qstate.hpp"

namespace hhl {

/// Eigenvalues must lie in (kSpectrumMargin, 1 - kSpectrumMargin).
inline constexpr double kSpectrumMargin = 1e-6;
/// Tolerance for treating 2^n * lambda as an integer.
inline constexpr double kDyadicTolerance = 1e-9;

struct SpectralData {
  std::vector<double> eigenvalues;  // ascending
  Matrix eigenvectors;              // orthonormal columns, matching eigenvalues
  Vector amplitudes;                // alpha_j = <u_j|b>; empty when no b is attached

  std::size_t size() const { return eigenvalues.size(); }
};

class HermitianProblem {
 public:
  /// Validates Hermiticity, unit b, power-of-two dimension and the spectrum range.
  static HermitianProblem create(Matrix a, Vector b);

  const Matrix& matrix() const { return a_; }
  const Vector& rhs() const { return b_; }
  const SpectralData& spectral() const { return spectral_; }
  std::size_t dimension() const { return static_cast<std::size_t>(a_.rows()); }
  int num_qubits() const { return num_qubits_; }
  /// Set when built from the A_lambda family.
  std::optional<double> lambda() const { return lambda_; }

 private:
  friend HermitianProblem build_a_lambda(double lambda);
  HermitianProblem(Matrix a, Vector b, SpectralData spectral, int num_qubits)
      : a_(std::move(a)), b_(std::move(b)), spectral_(std::move(spectral)),
        num_qubits_(num_qubits) {}

  Matrix a_;
  Vector b_;
  SpectralData spectral_;
  int num_qubits_;
  std::optional<double> lambda_;
};

/// A = [[1/2, lambda - 1/2], [lambda - 1/2, 1/2]], b = |0>.
HermitianProblem build_a_lambda(double lambda);

/// Ascending eigenvalues with orthonormal eigenvectors; ValidationError if
/// `a` is not Hermitian within 1e-10.
SpectralData spectral_decompose(const Matrix& a);
SpectralData spectral_decompose(const HermitianProblem& problem);

/// sum_j exp(2 pi i m lambda_j) |u_j><u_j|, i.e. (e^{2 pi i A})^m.
Matrix unitary_power(const SpectralData& spectral, std::int64_t m);

/// First n bits of the binary expansion of lambda (exact when dyadic).
std::string binary_estimate(double lambda, int n);
/// floor(2^n lambda), snapped to the exact integer when lambda is dyadic at n.
std::uint64_t binary_estimate_value(double lambda, int n);

/// Distinct eigenvalues (merged within kDyadicTolerance), ascending.
std::vector<double> distinct_eigenvalues(const SpectralData& spectral);

struct EigenmeanProfile {
  int n = 0;
  std::vector<std::string> bitstrings;  // one per distinct eigenvalue / peak
  std::vector<double> means;            // position k (1-based) at index k-1
  std::vector<bool> fixed;

  int fixed_count() const;
  std::vector<int> fixed_positions() const;  // 1-based
  std::vector<int> free_positions() const;   // 1-based
};

EigenmeanProfile eigenmean_profile(const SpectralData& spectral, int n);
EigenmeanProfile eigenmean_profile_from_bitstrings(const std::vector<std::string>& bitstrings,
                                                   int n);

bool is_perfectly_estimated(double lambda, int n);
bool is_perfectly_estimated(const SpectralData& spectral, int n);

struct ClassicalSolution {
  StateVector state;  // A^{-1} b / ||A^{-1} b||
  double norm;        // ||A^{-1} b||
};

ClassicalSolution classical_solution(const HermitianProblem& problem);

/// 1 / ||A^{-1} b||.
double normalization_constant(const HermitianProblem& problem);

struct EstimableProblemSpec {
  std::size_t dimension = 2;
  int register_size = 2;
  int fixed_count = 1;
  /// Number of distinct eigenvalues; 0 picks one at random.
  std::size_t distinct = 0;
};

/// Random problem whose eigenvalues are all multiples of 2^-n and whose
/// distinct eigenvalues agree at exactly `fixed_count` bit positions.
/// Throws ConstraintError when the request cannot be met.
HermitianProblem make_perfectly_estimated_problem(const EstimableProblemSpec& spec,
                                                  std::uint64_t seed);

/// Haar-ish random unitary (QR of a complex Gaussian matrix).
Matrix random_unitary(std::size_t dimension, std::uint64_t seed);

}  // namespace hhl
