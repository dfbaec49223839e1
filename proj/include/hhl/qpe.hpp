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

// Phase estimation: unmeasured QPE blocks for HHL and the measured QPEA.

#include <cstdint>
#include <optional>
#include <vector>

#include "hhl/circuits.hpp"
#include "hhl/noise.hpp"
#include "hhl/problem.hpp"

namespace hhl {

enum class QpeDirection { Forward, Inverse };

struct QpeConfig {
  int register_size = 2;
  QpeDirection direction = QpeDirection::Forward;
  /// Drop the inverse-QFT bit reversal and relabel the register instead.
  bool absorb_swap = false;
};

/// QPE gates acting on explicit wires. register_wires[0] is the most
/// significant estimate bit and controls U^{2^{n-1}}. For the forward
/// direction output_wires[i] holds estimate bit i afterwards; the inverse
/// block is the exact adjoint and restores the natural layout.
RegisterBlock qpe_block(const HermitianProblem& problem, const std::vector<int>& register_wires,
                        const std::vector<int>& input_wires, QpeDirection direction,
                        bool absorb_swap);

/// Register on qubits 0..n-1, the input on the following qubits.
Circuit build_qpe(const HermitianProblem& problem, const QpeConfig& config);

/// build_qpe followed by read-out of the n estimate bits into creg "r".
Circuit build_qpea(const HermitianProblem& problem, int n, bool absorb_swap = false);

/// |0...0> on `leading_zeros` qubits followed by |b>.
StateVector zero_padded_input(const HermitianProblem& problem, int leading_zeros);

/// Pr(x) = sum_j |alpha_j|^2 |beta_{x|j}|^2.
MeasurementHistogram register_distribution_exact(const HermitianProblem& problem, int n);

/// Exact read-out distribution of the compiled QPEA under `noise`.
MeasurementHistogram register_distribution_noisy(const HermitianProblem& problem, int n,
                                                 const NoiseParams& noise,
                                                 const CompileOptions& options = {});

/// Sampled register counts; without noise they come from the exact
/// distribution. Throws DomainError for shots == 0.
MeasurementHistogram run_qpea(const HermitianProblem& problem, int n, std::uint64_t shots,
                              std::uint64_t seed, const std::optional<NoiseParams>& noise = {});

}  // namespace hhl
