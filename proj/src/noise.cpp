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

#include "hhl/noise.hpp"

#include <cmath>

#include "hhl/errors.hpp"

namespace hhl {

namespace {

void damp_in_place(Matrix& rho, int num_qubits, int qubit, double gamma) {
  Matrix k0(2, 2), k1(2, 2);
  k0 << 1.0, 0.0, 0.0, std::sqrt(1.0 - gamma);
  k1 << 0.0, std::sqrt(gamma), 0.0, 0.0;
  Matrix decayed = rho;
  detail::conjugate(rho, num_qubits, k0, {}, {qubit});
  detail::conjugate(decayed, num_qubits, k1, {}, {qubit});
  rho += decayed;
}

double decay_fraction(double t_ns, double t1_ns) {
  if (!std::isfinite(t1_ns)) return 0.0;
  return -std::expm1(-t_ns / t1_ns);
}

std::vector<int> measured_qubits(const Circuit& c) {
  std::vector<int> out;
  for (const Gate& g : c.gates()) {
    if (g.is_measure()) out.push_back(g.targets[0]);
  }
  return out;
}

}  // namespace

void NoiseParams::validate() const {
  if (!(t1_ns > 0.0)) throw ValidationError("T1 must be positive");
  if (durations.cnot_ns < 0.0 || durations.rz_ns < 0.0 || durations.single_ns < 0.0) {
    throw ValidationError("gate durations must be non-negative");
  }
  if (!(readout_flip >= 0.0 && readout_flip <= 0.5)) {
    throw ValidationError("readout flip probability must lie in [0, 0.5]");
  }
}

DensityMatrix damping_channel(const DensityMatrix& rho, int qubit, double t_ns, double t1_ns) {
  if (!(t_ns >= 0.0)) throw DomainError("elapsed time must be non-negative");
  if (!(t1_ns > 0.0)) throw DomainError("T1 must be positive");
  detail::check_qubits(rho.num_qubits(), {}, {qubit});
  Matrix m = rho.matrix();
  const double gamma = decay_fraction(t_ns, t1_ns);
  if (gamma > 0.0) damp_in_place(m, rho.num_qubits(), qubit, gamma);
  return DensityMatrixBuilder::trusted(rho.num_qubits(), std::move(m));
}

DensityMatrix evolve_noisy(const CompiledCircuit& compiled, const NoiseParams& noise,
                           const DensityMatrix& initial) {
  noise.validate();
  const int nq = compiled.num_qubits();
  if (initial.num_qubits() != nq) throw DomainError("state width does not match circuit");
  Matrix rho = initial.matrix();
  for (const Gate& g : compiled.circuit().gates()) {
    if (g.is_measure()) continue;
    detail::conjugate(rho, nq, base_matrix(g), g.controls, g.targets);
    const double gamma = decay_fraction(noise.durations.of(g), noise.t1_ns);
    if (gamma <= 0.0) continue;
    if (noise.idle_damping) {
      for (int q = 0; q < nq; ++q) damp_in_place(rho, nq, q, gamma);
    } else {
      for (int q : g.qubits()) damp_in_place(rho, nq, q, gamma);
    }
  }
  return DensityMatrixBuilder::trusted(nq, std::move(rho));
}

NoisyRun run_noisy(const CompiledCircuit& compiled, const NoiseParams& noise,
                   const DensityMatrix& initial, std::uint64_t shots, std::uint64_t seed) {
  DensityMatrix final_state = evolve_noisy(compiled, noise, initial);
  const std::vector<int> qubits = measured_qubits(compiled.circuit());
  if (qubits.empty()) return {std::move(final_state), MeasurementHistogram{}};
  MeasurementHistogram exact =
      apply_readout_flips(marginal_distribution(final_state, qubits), noise.readout_flip);
  MeasurementHistogram hist = shots == 0 ? std::move(exact) : sample_distribution(exact, shots, seed);
  return {std::move(final_state), std::move(hist)};
}

NoisyRun run_noisy(const CompiledCircuit& compiled, const NoiseParams& noise, std::uint64_t shots,
                   std::uint64_t seed) {
  const DensityMatrix zero = DensityMatrix::from_pure(basis_state(compiled.num_qubits(), 0));
  return run_noisy(compiled, noise, zero, shots, seed);
}

MeasurementHistogram apply_readout_flips(const MeasurementHistogram& exact, double p) {
  if (!(p >= 0.0 && p <= 0.5)) throw ValidationError("readout flip probability must lie in [0, 0.5]");
  if (p == 0.0) return exact;
  std::vector<double> probs = exact.probabilities();
  for (int bit = 0; bit < exact.width(); ++bit) {
    const std::size_t mask = std::size_t{1} << bit;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (i & mask) continue;
      const double a = probs[i], b = probs[i | mask];
      probs[i] = (1.0 - p) * a + p * b;
      probs[i | mask] = p * a + (1.0 - p) * b;
    }
  }
  return MeasurementHistogram::from_probabilities(exact.width(), std::move(probs));
}

double survival_bound(int cnot_count, const NoiseParams& noise) {
  if (cnot_count < 0) throw DomainError("cnot count must be non-negative");
  if (!noise.damps()) return 1.0;
  return std::exp(-cnot_count * noise.durations.cnot_ns / noise.t1_ns);
}

}  // namespace hhl
