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
#include <bit>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "hhl/circuits.hpp"
#include "hhl/errors.hpp"
#include "hhl/noise.hpp"
#include "hhl/problem.hpp"
#include "hhl/qpe.hpp"
#include "hhl/solvers.hpp"
#include "test_util.hpp"

using namespace hhl;

namespace {

DensityMatrix random_density(int nq, std::mt19937_64& rng) {
  const Eigen::Index dim = Eigen::Index{1} << nq;
  Matrix g(dim, dim);
  std::normal_distribution<double> n;
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) g(r, c) = Complex(n(rng), n(rng));
  Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  return DensityMatrix::from_matrix(rho);
}

double excited(const DensityMatrix& rho, int qubit) {
  return marginal_distribution(rho, {qubit}).probability("1");
}

}  // namespace

TEST(noise, damping_examples) {
  const DensityMatrix one = DensityMatrix::from_pure(basis_state(1, 1));
  EXPECT_LT((damping_channel(one, 0, 0.0, 50000.0).matrix() - one.matrix()).norm(), 1e-15);
  EXPECT_NEAR(excited(damping_channel(one, 0, 50000.0, 50000.0), 0), std::exp(-1.0), 1e-12);

  const StateVector plus = StateVector::normalized(Vector::Ones(2));
  const DensityMatrix relaxed = damping_channel(DensityMatrix::from_pure(plus), 0, 1e12, 50000.0);
  EXPECT_NEAR(std::abs(relaxed(0, 0) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(relaxed(0, 1)), 0.0, 1e-12);

  // Coherences shrink by sqrt(1 - gamma).
  const double t = 700.0, t1 = 5000.0;
  const DensityMatrix half = damping_channel(DensityMatrix::from_pure(plus), 0, t, t1);
  EXPECT_NEAR(std::abs(half(0, 1)), 0.5 * std::exp(-t / (2 * t1)), 1e-13);
}

TEST(noise, damping_preserves_trace_and_positivity) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const int nq = 1 + trial % 3;
    const DensityMatrix rho = random_density(nq, rng);
    const DensityMatrix out = damping_channel(rho, trial % nq, 10.0 + 100.0 * trial, 1000.0);
    EXPECT_NEAR(out.trace(), 1.0, 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> es(out.matrix());
    EXPECT_GT(es.eigenvalues().minCoeff(), -1e-12);
    EXPECT_LT((out.matrix() - out.matrix().adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(noise, params_validate) {
  NoiseParams p;
  EXPECT_NO_THROW(p.validate());
  EXPECT_TRUE(p.damps());
  EXPECT_FALSE(NoiseParams::noiseless().damps());
  EXPECT_NO_THROW(NoiseParams::noiseless().validate());
  p.t1_ns = 0.0;
  EXPECT_THROW(p.validate(), ValidationError);
  p = {};
  p.readout_flip = 0.6;
  EXPECT_THROW(p.validate(), ValidationError);
  p = {};
  p.durations.cnot_ns = -1.0;
  EXPECT_THROW(p.validate(), ValidationError);
  EXPECT_EQ(NoiseParams{}.durations.cnot_ns, 200.0);
  EXPECT_EQ(NoiseParams{}.durations.rz_ns, 0.0);
  EXPECT_EQ(NoiseParams{}.durations.single_ns, 60.0);
  EXPECT_EQ(NoiseParams{}.t1_ns, 50000.0);
}

TEST(noise, zero_noise_is_noiseless) {
  const HermitianProblem p = build_a_lambda(0.475);
  const Circuit c = build_hhl_circuit(p, 2, build_aqe(p, 2));
  const CompiledCircuit cc = compile(c);
  Vector in = Vector::Zero(Eigen::Index{1} << c.num_qubits());
  in[0] = 1.0;
  const DensityMatrix start = DensityMatrix::from_pure(StateVector::from_amplitudes(in));
  const DensityMatrix noisy = evolve_noisy(cc, NoiseParams::noiseless(), start);
  const DensityMatrix clean = run(c, start);
  EXPECT_LT((noisy.matrix() - clean.matrix()).cwiseAbs().maxCoeff(), 1e-12);

  const MeasurementHistogram a = register_distribution_noisy(p, 2, NoiseParams::noiseless());
  const MeasurementHistogram b = register_distribution_exact(p, 2);
  for (std::size_t x = 0; x < 4; ++x) EXPECT_NEAR(a.probability(x), b.probability(x), 1e-12);
}

TEST(noise, fifty_cnots) {
  Circuit c(2);
  c.add(gates::x(0));
  for (int i = 0; i < 50; ++i) c.add(gates::cnot(0, 1));
  CompileOptions raw;
  raw.simplify = false;
  const CompiledCircuit cc = compile(c, raw);
  ASSERT_EQ(cc.cnot_count(), 50);
  NoiseParams noise;
  noise.durations.single_ns = 0.0;
  const DensityMatrix out = evolve_noisy(cc, noise, DensityMatrix::from_pure(basis_state(2, 0)));
  EXPECT_NEAR(excited(out, 0), std::exp(-0.2), 1e-12);
  EXPECT_NEAR(excited(out, 0), 0.8187, 1e-4);
}

TEST(noise, survival_bound_values) {
  const NoiseParams d;
  EXPECT_NEAR(survival_bound(50, d), 0.8187, 1e-4);
  EXPECT_EQ(survival_bound(0, d), 1.0);
  EXPECT_NEAR(survival_bound(28, d), 0.894, 5e-4);
  EXPECT_NEAR(survival_bound(14, d), 0.946, 5e-4);
  EXPECT_EQ(survival_bound(28, NoiseParams::noiseless()), 1.0);
  EXPECT_THROW(survival_bound(-1, d), DomainError);
}

TEST(noise, zero_duration_rz_does_not_decay) {
  Circuit c(1);
  c.add(gates::x(0));
  for (int i = 0; i < 100; ++i) c.add(gates::rz(0, 0.01 * (i % 2 ? 1 : -1) + 0.3));
  CompileOptions raw;
  raw.simplify = false;
  NoiseParams noise;
  noise.durations.single_ns = 0.0;
  const DensityMatrix out = evolve_noisy(compile(c, raw), noise, DensityMatrix::from_pure(basis_state(1, 0)));
  EXPECT_NEAR(excited(out, 0), 1.0, 1e-12);
}

TEST(noise, idle_damping_flag) {
  Circuit c(2);
  c.add(gates::x(1));
  c.add(gates::h(0)).add(gates::h(0)).add(gates::h(0)).add(gates::h(0));
  CompileOptions raw;
  raw.simplify = false;
  const CompiledCircuit cc = compile(c, raw);
  const DensityMatrix start = DensityMatrix::from_pure(basis_state(2, 0));
  NoiseParams noise;
  noise.t1_ns = 1000.0;
  const double with_idle = excited(evolve_noisy(cc, noise, start), 1);
  noise.idle_damping = false;
  const double without = excited(evolve_noisy(cc, noise, start), 1);
  EXPECT_NEAR(without, std::exp(-60.0 / 1000.0), 1e-12);
  EXPECT_NEAR(with_idle, std::exp(-5 * 60.0 / 1000.0), 1e-12);
}

TEST(noise, fidelity_non_increasing_along_chain) {
  Circuit block(2);
  block.add(gates::cnot(0, 1)).add(gates::cnot(0, 1));
  CompileOptions raw;
  raw.simplify = false;
  const StateVector target = basis_state(2, 3);
  double previous = 1.0;
  for (int k = 1; k <= 12; ++k) {
    Circuit chain(2);
    for (int i = 0; i < k; ++i) chain.append(block);
    const CompiledCircuit cc = compile(chain, raw);
    EXPECT_EQ(cc.cnot_count(), 2 * k);
    const double f = fidelity_pure(evolve_noisy(cc, NoiseParams{}, DensityMatrix::from_pure(target)), target);
    EXPECT_LE(f, previous + 1e-15) << k;
    EXPECT_LT(f, 1.0);
    previous = f;
  }
}

TEST(noise, readout_flips) {
  const MeasurementHistogram one = MeasurementHistogram::from_probabilities(1, {1.0, 0.0});
  const MeasurementHistogram flipped = apply_readout_flips(one, 0.1);
  EXPECT_NEAR(flipped.probability("0"), 0.9, 1e-15);
  EXPECT_NEAR(flipped.probability("1"), 0.1, 1e-15);

  const MeasurementHistogram two = MeasurementHistogram::from_probabilities(2, {0.0, 0.25, 0.75, 0.0});
  const double p = 0.2;
  const MeasurementHistogram out = apply_readout_flips(two, p);
  // Convolve each outcome independently: P'(y) = sum_x P(x) p^d (1-p)^(2-d).
  for (std::size_t y = 0; y < 4; ++y) {
    double expect = 0.0;
    for (std::size_t x = 0; x < 4; ++x) {
      const int d = std::popcount(x ^ y);
      expect += two.probability(x) * std::pow(p, d) * std::pow(1 - p, 2 - d);
    }
    EXPECT_NEAR(out.probability(y), expect, 1e-15);
  }
  EXPECT_THROW(apply_readout_flips(one, 0.7), ValidationError);
}

TEST(noise, run_noisy_histogram) {
  Circuit c(3);
  c.add(gates::x(2)).add(gates::measure(2, "m", 0)).add(gates::measure(0, "m", 1));
  const CompiledCircuit cc = compile(c);
  NoiseParams noise = NoiseParams::noiseless();
  const NoisyRun exact = run_noisy(cc, noise, 0, 0);
  EXPECT_EQ(exact.histogram.width(), 2);
  EXPECT_NEAR(exact.histogram.probability("10"), 1.0, 1e-15);

  noise.readout_flip = 0.25;
  const NoisyRun sampled = run_noisy(cc, noise, 4096, 5);
  EXPECT_EQ(sampled.histogram.shots(), 4096u);
  EXPECT_EQ(sampled.histogram.counts(), run_noisy(cc, noise, 4096, 5).histogram.counts());
  EXPECT_NEAR(sampled.histogram.probability("10"), 0.5625, 0.03);
  EXPECT_NEAR(sampled.histogram.probability("01"), 0.0625, 0.02);
}

TEST(noise, noisy_qpea_keeps_its_peaks) {
  const MeasurementHistogram h = register_distribution_noisy(build_a_lambda(0.25), 2, NoiseParams{});
  EXPECT_GE(h.probability("01"), 0.3);
  EXPECT_GE(h.probability("11"), 0.3);
  double total = 0.0;
  for (double v : h.probabilities()) total += v;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(noise, reduced_beats_original_at_quarter) {
  const HermitianProblem p = build_a_lambda(0.25);
  HhlOptions opt;
  opt.noise = NoiseParams{};
  const HhlOutcome original = run_original_hhl(p, 2, opt);
  const HhlOutcome hybrid = run_hybrid_hhl(p, 2, 0, 0, {}, opt);
  EXPECT_GT(hybrid.fidelity, original.fidelity);
  EXPECT_LT(original.fidelity, 1.0);
}
