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
#include <random>

#include <gtest/gtest.h>

#include "hhl/errors.hpp"
#include "hhl/problem.hpp"
#include "test_util.hpp"

using namespace hhl;

namespace {

HermitianProblem random_problem(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> eig(0.05, 0.95);
  const Matrix u = testing_ref::random_unitary_ref(d, rng);
  Eigen::VectorXd lam(static_cast<Eigen::Index>(d));
  for (auto& l : lam) l = eig(rng);
  Matrix a = u * lam.cast<Complex>().asDiagonal() * u.adjoint();
  a = 0.5 * (a + a.adjoint()).eval();
  return HermitianProblem::create(a, testing_ref::random_vector(d, rng));
}

}  // namespace

TEST(problem, a_lambda_examples) {
  const HermitianProblem half = build_a_lambda(0.5);
  EXPECT_LT((half.matrix() - Matrix::Identity(2, 2) / 2.0).norm(), 1e-15);
  EXPECT_NEAR(half.spectral().eigenvalues[0], 0.5, 1e-12);
  EXPECT_NEAR(half.spectral().eigenvalues[1], 0.5, 1e-12);

  // Direct 2x2 eigensolve: eigenvalues 1/2 -+ |lambda - 1/2|.
  const HermitianProblem q = build_a_lambda(0.25);
  EXPECT_NEAR(q.spectral().eigenvalues[0], 0.25, 1e-12);
  EXPECT_NEAR(q.spectral().eigenvalues[1], 0.75, 1e-12);
  const HermitianProblem t = build_a_lambda(0.75);
  EXPECT_NEAR(t.spectral().eigenvalues[0], 0.25, 1e-12);
  EXPECT_NEAR(t.spectral().eigenvalues[1], 0.75, 1e-12);
  EXPECT_EQ(q.lambda(), 0.25);

  EXPECT_THROW(build_a_lambda(0.0), DomainError);
  EXPECT_THROW(build_a_lambda(1.0), DomainError);
  EXPECT_THROW(build_a_lambda(-0.2), DomainError);
}

TEST(problem, a_lambda_eigenvectors_are_plus_minus) {
  const Vector plus = (Vector(2) << 1, 1).finished() / std::numbers::sqrt2;
  const Vector minus = (Vector(2) << 1, -1).finished() / std::numbers::sqrt2;
  for (int i = 1; i < 22; ++i) {
    const double l = i / 22.0;
    if (std::abs(l - 0.5) < 1e-12) continue;
    const SpectralData s = build_a_lambda(l).spectral();
    const Vector& v_l = l < 0.5 ? s.eigenvectors.col(0) : s.eigenvectors.col(1);
    const Vector& v_other = l < 0.5 ? s.eigenvectors.col(1) : s.eigenvectors.col(0);
    EXPECT_NEAR(std::abs(plus.dot(v_l)), 1.0, 1e-10) << l;
    EXPECT_NEAR(std::abs(minus.dot(v_other)), 1.0, 1e-10) << l;
  }
}

TEST(problem, create_validates) {
  Matrix a = Matrix::Identity(2, 2) / 2.0;
  Vector b = (Vector(2) << 1, 0).finished();
  Matrix nonherm = a;
  nonherm(0, 1) = 0.1;
  EXPECT_THROW(HermitianProblem::create(nonherm, b), ValidationError);
  EXPECT_THROW(HermitianProblem::create(a, 2.0 * b), ValidationError);
  EXPECT_THROW(HermitianProblem::create(Matrix::Identity(2, 2), b), ValidationError);
  EXPECT_THROW(HermitianProblem::create(Matrix::Identity(3, 3) / 2.0, Vector::Ones(3) / std::sqrt(3.0)),
               ValidationError);
  EXPECT_THROW(spectral_decompose(nonherm), ValidationError);
}

TEST(problem, spectral_reconstruction) {
  for (std::size_t d : {2u, 4u, 8u}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const HermitianProblem p = random_problem(d, seed);
      const SpectralData& s = p.spectral();
      Matrix rebuilt = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
      for (std::size_t j = 0; j < s.size(); ++j) {
        const Vector u = s.eigenvectors.col(static_cast<Eigen::Index>(j));
        rebuilt += s.eigenvalues[j] * u * u.adjoint();
      }
      EXPECT_LT((rebuilt - p.matrix()).cwiseAbs().maxCoeff(), 1e-9);
      EXPECT_NEAR(s.amplitudes.squaredNorm(), 1.0, 1e-10);
      EXPECT_TRUE(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
      EXPECT_LT((s.eigenvectors.adjoint() * s.eigenvectors - Matrix::Identity(s.eigenvectors.cols(), s.eigenvectors.cols()))
                    .cwiseAbs()
                    .maxCoeff(),
                1e-10);
    }
  }
}

TEST(problem, unitary_power_examples) {
  EXPECT_LT((unitary_power(build_a_lambda(0.3).spectral(), 0) - Matrix::Identity(2, 2)).norm(), 1e-12);
  EXPECT_LT((unitary_power(build_a_lambda(0.5).spectral(), 1) + Matrix::Identity(2, 2)).norm(), 1e-12);
  EXPECT_LT((unitary_power(build_a_lambda(0.25).spectral(), 2) + Matrix::Identity(2, 2)).norm(), 1e-12);
  const SpectralData s = build_a_lambda(0.3).spectral();
  EXPECT_LT((unitary_power(s, -3) * unitary_power(s, 3) - Matrix::Identity(2, 2)).norm(), 1e-12);
  EXPECT_LT((unitary_power(s, 2) - unitary_power(s, 1) * unitary_power(s, 1)).norm(), 1e-12);
  EXPECT_TRUE(is_unitary(unitary_power(s, 1)));
}

TEST(problem, binary_estimate_examples) {
  EXPECT_EQ(binary_estimate(0.25, 2), "01");
  EXPECT_EQ(binary_estimate(0.75, 2), "11");
  EXPECT_EQ(binary_estimate(0.5, 1), "1");
  EXPECT_EQ(binary_estimate(0.475, 3), "011");
  EXPECT_EQ(binary_estimate(0.3, 2), "01");
}

TEST(problem, binary_estimate_matches_floor) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.001, 0.999);
  for (int trial = 0; trial < 200; ++trial) {
    const double l = u(rng);
    const int n = 1 + trial % 6;
    const std::string bits = binary_estimate(l, n);
    std::uint64_t v = 0;
    for (char c : bits) v = 2 * v + static_cast<std::uint64_t>(c - '0');
    EXPECT_EQ(v, static_cast<std::uint64_t>(std::floor(std::ldexp(l, n))));
    EXPECT_EQ(v, binary_estimate_value(l, n));
  }
  for (int n = 1; n <= 5; ++n) {
    for (std::uint64_t x = 1; x < (std::uint64_t{1} << n); ++x) {
      EXPECT_EQ(binary_estimate_value(std::ldexp(static_cast<double>(x), -n), n), x);
    }
  }
  // Just below a dyadic boundary, within the tolerance, snaps up.
  EXPECT_EQ(binary_estimate(0.25 - 1e-12, 2), "01");
}

TEST(problem, eigenmean_examples) {
  const EigenmeanProfile q = eigenmean_profile(build_a_lambda(0.25).spectral(), 2);
  EXPECT_DOUBLE_EQ(q.means[0], 0.5);
  EXPECT_DOUBLE_EQ(q.means[1], 1.0);
  EXPECT_FALSE(q.fixed[0]);
  EXPECT_TRUE(q.fixed[1]);
  EXPECT_EQ(q.fixed_positions(), std::vector<int>{2});
  EXPECT_EQ(q.free_positions(), std::vector<int>{1});

  const EigenmeanProfile h = eigenmean_profile(build_a_lambda(0.5).spectral(), 2);
  EXPECT_DOUBLE_EQ(h.means[0], 1.0);
  EXPECT_DOUBLE_EQ(h.means[1], 0.0);
  EXPECT_EQ(h.fixed_count(), 2);
  EXPECT_EQ(h.bitstrings.size(), 1u);

  const EigenmeanProfile single = eigenmean_profile_from_bitstrings({"1011"}, 4);
  EXPECT_EQ(single.fixed_count(), 4);
  EXPECT_THROW(eigenmean_profile_from_bitstrings({}, 2), DomainError);
  EXPECT_THROW(eigenmean_profile_from_bitstrings({"101"}, 2), DomainError);
}

TEST(problem, fixed_flag_means_agreement) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> bit(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 5;
    std::vector<std::string> strings(1 + static_cast<std::size_t>(trial % 4));
    for (auto& s : strings) {
      for (int k = 0; k < n; ++k) s.push_back(static_cast<char>('0' + bit(rng)));
    }
    const EigenmeanProfile p = eigenmean_profile_from_bitstrings(strings, n);
    for (int k = 0; k < n; ++k) {
      bool agree = true;
      for (const auto& s : strings) agree = agree && s[static_cast<std::size_t>(k)] == strings[0][static_cast<std::size_t>(k)];
      EXPECT_EQ(p.fixed[static_cast<std::size_t>(k)], agree);
    }
  }
}

TEST(problem, perfect_estimation) {
  EXPECT_TRUE(is_perfectly_estimated(build_a_lambda(0.25).spectral(), 2));
  EXPECT_TRUE(is_perfectly_estimated(build_a_lambda(0.5).spectral(), 1));
  for (int n = 1; n <= 3; ++n) EXPECT_FALSE(is_perfectly_estimated(build_a_lambda(0.475).spectral(), n));
  EXPECT_FALSE(is_perfectly_estimated(build_a_lambda(0.25).spectral(), 1));
}

TEST(problem, classical_solution_examples) {
  const ClassicalSolution half = classical_solution(build_a_lambda(0.5));
  EXPECT_NEAR(half.norm, 2.0, 1e-12);
  EXPECT_NEAR(std::abs(half.state[0]), 1.0, 1e-12);

  // [[1/2,-1/4],[-1/4,1/2]]^{-1} |0> = (8/3, 4/3).
  const ClassicalSolution q = classical_solution(build_a_lambda(0.25));
  EXPECT_NEAR(q.norm, 4.0 * std::sqrt(5.0) / 3.0, 1e-12);
  EXPECT_NEAR(std::abs(q.state[0] - 2.0 / std::sqrt(5.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(q.state[1] - 1.0 / std::sqrt(5.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::norm((q.state[0] + q.state[1]) / std::numbers::sqrt2), 0.9, 1e-12);
  EXPECT_NEAR(normalization_constant(build_a_lambda(0.25)), 3.0 / (4.0 * std::sqrt(5.0)), 1e-12);
}

TEST(problem, classical_solution_residual) {
  for (std::size_t d : {2u, 4u, 8u}) {
    for (std::uint64_t seed = 10; seed < 15; ++seed) {
      const HermitianProblem p = random_problem(d, seed);
      const ClassicalSolution s = classical_solution(p);
      EXPECT_LT((p.matrix() * s.state.amplitudes() * s.norm - p.rhs()).norm(), 1e-9);
    }
  }
}

TEST(problem, random_perfectly_estimated_builder) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    EstimableProblemSpec spec;
    spec.dimension = seed % 2 ? 4 : 2;
    spec.register_size = 2 + static_cast<int>(seed % 2);
    spec.fixed_count = 1 + static_cast<int>(seed % static_cast<std::uint64_t>(spec.register_size));
    const HermitianProblem p = make_perfectly_estimated_problem(spec, seed);
    EXPECT_TRUE(is_perfectly_estimated(p.spectral(), spec.register_size));
    EXPECT_EQ(eigenmean_profile(p.spectral(), spec.register_size).fixed_count(), spec.fixed_count);
    EXPECT_EQ(p.dimension(), spec.dimension);
  }
  EstimableProblemSpec impossible;
  impossible.dimension = 4;
  impossible.register_size = 2;
  impossible.fixed_count = 2;
  impossible.distinct = 3;
  EXPECT_THROW(make_perfectly_estimated_problem(impossible, 1), ConstraintError);
}
