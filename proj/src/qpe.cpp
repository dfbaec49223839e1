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

#include "hhl/qpe.hpp"

#include <cmath>
#include <numbers>

#include "hhl/errors.hpp"

namespace hhl {

namespace {

void check_register(int n) {
  if (n < 1) throw DomainError("register size must be at least 1");
  if (n > 16) throw DomainError("register size too large to simulate");
}

std::vector<int> range(int first, int count) {
  std::vector<int> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = first + i;
  return out;
}

}  // namespace

RegisterBlock qpe_block(const HermitianProblem& problem, const std::vector<int>& register_wires,
                        const std::vector<int>& input_wires, QpeDirection direction,
                        bool absorb_swap) {
  const int n = static_cast<int>(register_wires.size());
  check_register(n);
  if (static_cast<int>(input_wires.size()) != problem.num_qubits()) {
    throw DomainError("input wires do not match the problem size");
  }
  RegisterBlock forward;
  for (int w : register_wires) forward.gates.push_back(gates::h(w));
  for (int k = 0; k < n; ++k) {
    const std::int64_t power = std::int64_t{1} << (n - 1 - k);
    Gate cu = gates::unitary(input_wires, unitary_power(problem.spectral(), power));
    forward.gates.push_back(gates::controlled(std::move(cu), {register_wires[static_cast<std::size_t>(k)]}));
  }
  RegisterBlock iqft = inverse_qft(register_wires, absorb_swap);
  forward.gates.insert(forward.gates.end(), iqft.gates.begin(), iqft.gates.end());
  forward.output_wires = iqft.output_wires;
  if (direction == QpeDirection::Forward) return forward;

  RegisterBlock inverse_block;
  for (auto it = forward.gates.rbegin(); it != forward.gates.rend(); ++it) {
    inverse_block.gates.push_back(inverse(*it));
  }
  inverse_block.output_wires = register_wires;
  return inverse_block;
}

Circuit build_qpe(const HermitianProblem& problem, const QpeConfig& config) {
  check_register(config.register_size);
  const int n = config.register_size;
  Circuit c(n + problem.num_qubits());
  const std::vector<int> r = range(0, n), v = range(n, problem.num_qubits());
  c.add(qpe_block(problem, r, v, config.direction, config.absorb_swap).gates);
  c.set_role("r", r);
  c.set_role("v", v);
  return c;
}

Circuit build_qpea(const HermitianProblem& problem, int n, bool absorb_swap) {
  check_register(n);
  Circuit c(n + problem.num_qubits());
  const std::vector<int> r = range(0, n), v = range(n, problem.num_qubits());
  const RegisterBlock block = qpe_block(problem, r, v, QpeDirection::Forward, absorb_swap);
  c.add(block.gates);
  for (int i = 0; i < n; ++i) c.add(gates::measure(block.output_wires[static_cast<std::size_t>(i)], "r", i));
  c.set_role("r", r);
  c.set_role("v", v);
  return c;
}

StateVector zero_padded_input(const HermitianProblem& problem, int leading_zeros) {
  Vector zeros = Vector::Zero(Eigen::Index{1} << leading_zeros);
  zeros[0] = 1.0;
  Vector amps(zeros.size() * problem.rhs().size());
  for (Eigen::Index i = 0; i < zeros.size(); ++i) {
    amps.segment(i * problem.rhs().size(), problem.rhs().size()) = zeros[i] * problem.rhs();
  }
  return StateVector::from_amplitudes(std::move(amps));
}

MeasurementHistogram register_distribution_exact(const HermitianProblem& problem, int n) {
  check_register(n);
  const SpectralData& s = problem.spectral();
  const std::size_t size = std::size_t{1} << n;
  const double scale = static_cast<double>(size);
  std::vector<double> probs(size, 0.0);
  for (std::size_t x = 0; x < size; ++x) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double weight = std::norm(s.amplitudes[static_cast<Eigen::Index>(j)]);
      if (weight == 0.0) continue;
      const double delta = s.eigenvalues[j] - static_cast<double>(x) / scale;
      Complex beta = 0.0;
      for (std::size_t y = 0; y < size; ++y) {
        beta += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(y) * delta);
      }
      probs[x] += weight * std::norm(beta / scale);
    }
  }
  return MeasurementHistogram::from_probabilities(n, std::move(probs));
}

MeasurementHistogram register_distribution_noisy(const HermitianProblem& problem, int n,
                                                 const NoiseParams& noise,
                                                 const CompileOptions& options) {
  const CompiledCircuit compiled = compile(build_qpea(problem, n), options);
  const DensityMatrix rho = DensityMatrix::from_pure(zero_padded_input(problem, n));
  return run_noisy(compiled, noise, rho, 0, 0).histogram;
}

MeasurementHistogram run_qpea(const HermitianProblem& problem, int n, std::uint64_t shots,
                              std::uint64_t seed, const std::optional<NoiseParams>& noise) {
  if (shots == 0) throw DomainError("run_qpea needs at least one shot");
  const MeasurementHistogram exact =
      noise ? register_distribution_noisy(problem, n, *noise) : register_distribution_exact(problem, n);
  return sample_distribution(exact, shots, seed);
}

}  // namespace hhl
