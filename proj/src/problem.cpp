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

#include "hhl/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <Eigen/Eigenvalues>

#include "hhl/errors.hpp"

namespace hhl {

namespace {

int log2_dimension(Eigen::Index dim) {
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw ValidationError("problem dimension must be a power of two >= 2");
  }
  int q = 0;
  while ((Eigen::Index{1} << q) < dim) ++q;
  return q;
}

std::uint64_t bits_to_value(const std::string& bits) {
  std::uint64_t v = 0;
  for (char ch : bits) v = (v << 1) | static_cast<std::uint64_t>(ch == '1');
  return v;
}

}  // namespace

SpectralData spectral_decompose(const Matrix& a) {
  if (!is_hermitian(a)) throw ValidationError("matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success) throw ValidationError("eigensolver failed");
  SpectralData out;
  const auto& values = solver.eigenvalues();
  out.eigenvalues.assign(values.data(), values.data() + values.size());
  out.eigenvectors = solver.eigenvectors();
  return out;
}

SpectralData spectral_decompose(const HermitianProblem& problem) { return problem.spectral(); }

HermitianProblem HermitianProblem::create(Matrix a, Vector b) {
  if (a.rows() != a.cols()) throw ValidationError("matrix must be square");
  const int q = log2_dimension(a.rows());
  if (b.size() != a.rows()) throw ValidationError("b dimension does not match matrix");
  if (std::abs(b.norm() - 1.0) > kAmplitudeTolerance) throw ValidationError("b is not a unit vector");
  SpectralData spectral = spectral_decompose(a);
  for (double lam : spectral.eigenvalues) {
    if (!(lam > kSpectrumMargin && lam < 1.0 - kSpectrumMargin)) {
      throw ValidationError("eigenvalue " + std::to_string(lam) + " outside (0,1)");
    }
  }
  spectral.amplitudes = spectral.eigenvectors.adjoint() * b;
  return HermitianProblem(std::move(a), std::move(b), std::move(spectral), q);
}

HermitianProblem build_a_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in (0,1)");
  Matrix a(2, 2);
  a << 0.5, lambda - 0.5, lambda - 0.5, 0.5;
  Vector b(2);
  b << 1.0, 0.0;
  HermitianProblem p = HermitianProblem::create(std::move(a), std::move(b));
  p.lambda_ = lambda;
  return p;
}

Matrix unitary_power(const SpectralData& spectral, std::int64_t m) {
  const Eigen::Index d = spectral.eigenvectors.rows();
  Matrix out = Matrix::Zero(d, d);
  for (std::size_t j = 0; j < spectral.size(); ++j) {
    // Reduce m * lambda mod 1 before taking the phase to keep large powers accurate.
    const double turns = std::fmod(static_cast<double>(m) * spectral.eigenvalues[j], 1.0);
    const Complex phase = std::polar(1.0, 2.0 * std::numbers::pi * turns);
    const auto u = spectral.eigenvectors.col(static_cast<Eigen::Index>(j));
    out += phase * (u * u.adjoint());
  }
  return out;
}

std::uint64_t binary_estimate_value(double lambda, int n) {
  if (n < 1 || n > 62) throw DomainError("register size must be in [1, 62]");
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in (0,1)");
  const double scaled = std::ldexp(lambda, n);
  const double nearest = std::round(scaled);
  const double v = std::abs(scaled - nearest) < kDyadicTolerance ? nearest : std::floor(scaled);
  const double top = std::ldexp(1.0, n) - 1.0;
  return static_cast<std::uint64_t>(std::clamp(v, 0.0, top));
}

std::string binary_estimate(double lambda, int n) {
  return to_bitstring(binary_estimate_value(lambda, n), n);
}

std::vector<double> distinct_eigenvalues(const SpectralData& spectral) {
  std::vector<double> sorted = spectral.eigenvalues;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  for (double v : sorted) {
    if (out.empty() || std::abs(v - out.back()) > kDyadicTolerance) out.push_back(v);
  }
  return out;
}

int EigenmeanProfile::fixed_count() const {
  return static_cast<int>(std::count(fixed.begin(), fixed.end(), true));
}

std::vector<int> EigenmeanProfile::fixed_positions() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if (fixed[i]) out.push_back(static_cast<int>(i) + 1);
  }
  return out;
}

std::vector<int> EigenmeanProfile::free_positions() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if (!fixed[i]) out.push_back(static_cast<int>(i) + 1);
  }
  return out;
}

EigenmeanProfile eigenmean_profile_from_bitstrings(const std::vector<std::string>& bitstrings,
                                                   int n) {
  if (n < 1) throw DomainError("register size must be >= 1");
  if (bitstrings.empty()) throw DomainError("eigenmeans need at least one bitstring");
  EigenmeanProfile p;
  p.n = n;
  p.bitstrings = bitstrings;
  p.means.assign(static_cast<std::size_t>(n), 0.0);
  p.fixed.assign(static_cast<std::size_t>(n), false);
  for (const auto& s : bitstrings) {
    if (static_cast<int>(s.size()) != n) throw DomainError("bitstring width mismatch");
  }
  for (int k = 0; k < n; ++k) {
    std::size_t ones = 0;
    for (const auto& s : bitstrings) ones += (s[static_cast<std::size_t>(k)] == '1');
    p.means[static_cast<std::size_t>(k)] =
        static_cast<double>(ones) / static_cast<double>(bitstrings.size());
    p.fixed[static_cast<std::size_t>(k)] = ones == 0 || ones == bitstrings.size();
  }
  return p;
}

EigenmeanProfile eigenmean_profile(const SpectralData& spectral, int n) {
  std::vector<std::string> bits;
  for (double lam : distinct_eigenvalues(spectral)) bits.push_back(binary_estimate(lam, n));
  return eigenmean_profile_from_bitstrings(bits, n);
}

bool is_perfectly_estimated(double lambda, int n) {
  const double scaled = std::ldexp(lambda, n);
  return std::abs(scaled - std::round(scaled)) < kDyadicTolerance;
}

bool is_perfectly_estimated(const SpectralData& spectral, int n) {
  return std::all_of(spectral.eigenvalues.begin(), spectral.eigenvalues.end(),
                     [n](double lam) { return is_perfectly_estimated(lam, n); });
}

ClassicalSolution classical_solution(const HermitianProblem& problem) {
  const auto& s = problem.spectral();
  Vector x = Vector::Zero(static_cast<Eigen::Index>(problem.dimension()));
  for (std::size_t j = 0; j < s.size(); ++j) {
    const auto idx = static_cast<Eigen::Index>(j);
    x += (s.amplitudes[idx] / s.eigenvalues[j]) * s.eigenvectors.col(idx);
  }
  const double norm = x.norm();
  return {StateVector::normalized(std::move(x)), norm};
}

double normalization_constant(const HermitianProblem& problem) {
  return 1.0 / classical_solution(problem).norm;
}

Matrix random_unitary(std::size_t dimension, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto d = static_cast<Eigen::Index>(dimension);
  Matrix z(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) z(i, j) = Complex{gauss(rng), gauss(rng)};
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const Complex diag = r(j, j);
    if (std::abs(diag) > 0) q.col(j) *= diag / std::abs(diag);
  }
  return q;
}

HermitianProblem make_perfectly_estimated_problem(const EstimableProblemSpec& spec,
                                                  std::uint64_t seed) {
  const std::size_t d = spec.dimension;
  const int n = spec.register_size;
  const int k = spec.fixed_count;
  if (d < 2 || (d & (d - 1)) != 0) throw ConstraintError("dimension must be a power of two >= 2");
  if (n < 1 || n > 20) throw ConstraintError("register size must be in [1, 20]");
  if (k < 0 || k > n) throw ConstraintError("fixed_count must lie in [0, n]");
  const int free_bits = n - k;
  if (free_bits == 0 && spec.distinct > 1) {
    throw ConstraintError("all positions fixed forces a single distinct eigenvalue");
  }
  if (free_bits > 0 && spec.distinct == 1) {
    throw ConstraintError("a free position needs at least two distinct eigenvalues");
  }
  if (spec.distinct > d) throw ConstraintError("more distinct eigenvalues than the dimension");
  if (free_bits > 0 && spec.distinct > (std::size_t{1} << free_bits)) {
    throw ConstraintError("not enough free patterns for the requested distinct count");
  }

  std::mt19937_64 rng(seed);
  auto uniform_int = [&rng](std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
  };

  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<int> positions(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) positions[static_cast<std::size_t>(i)] = i;
    std::shuffle(positions.begin(), positions.end(), rng);
    std::vector<bool> is_fixed(static_cast<std::size_t>(n), false);
    for (int i = 0; i < k; ++i) is_fixed[static_cast<std::size_t>(positions[static_cast<std::size_t>(i)])] = true;
    std::string fixed_bits(static_cast<std::size_t>(n), '0');
    for (int i = 0; i < n; ++i) {
      if (is_fixed[static_cast<std::size_t>(i)]) fixed_bits[static_cast<std::size_t>(i)] = uniform_int(0, 1) ? '1' : '0';
    }

    std::size_t distinct = spec.distinct;
    if (distinct == 0) {
      const std::size_t cap = free_bits == 0 ? 1 : std::min(d, std::size_t{1} << free_bits);
      distinct = free_bits == 0 ? 1 : static_cast<std::size_t>(uniform_int(2, cap));
    }

    std::set<std::string> chosen;
    for (int draw = 0; draw < 200 && chosen.size() < distinct; ++draw) {
      std::string s = fixed_bits;
      for (int i = 0; i < n; ++i) {
        if (!is_fixed[static_cast<std::size_t>(i)]) s[static_cast<std::size_t>(i)] = uniform_int(0, 1) ? '1' : '0';
      }
      if (bits_to_value(s) == 0) continue;
      chosen.insert(s);
    }
    if (chosen.size() != distinct) continue;
    std::vector<std::string> strings(chosen.begin(), chosen.end());
    if (eigenmean_profile_from_bitstrings(strings, n).fixed_count() != k) continue;

    std::vector<double> eigenvalues;
    for (const auto& s : strings) eigenvalues.push_back(std::ldexp(static_cast<double>(bits_to_value(s)), -n));
    while (eigenvalues.size() < d) {
      eigenvalues.push_back(eigenvalues[static_cast<std::size_t>(uniform_int(0, strings.size() - 1))]);
    }
    std::shuffle(eigenvalues.begin(), eigenvalues.end(), rng);

    const Matrix u = random_unitary(d, rng());
    Vector diag(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) diag[static_cast<Eigen::Index>(i)] = eigenvalues[i];
    Matrix a = u * diag.asDiagonal() * u.adjoint();
    a = 0.5 * (a + a.adjoint()).eval();

    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector b(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = Complex{gauss(rng), gauss(rng)};
    b.normalize();
    return HermitianProblem::create(std::move(a), std::move(b));
  }
  throw ConstraintError("could not satisfy the requested eigenvalue constraints");
}

}  // namespace hhl
