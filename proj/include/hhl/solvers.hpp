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

// Original and hybrid HHL pipelines.
//
// Qubit layout of every HHL circuit: ancilla A on qubit 0, register r1..rn on
// qubits 1..n, input V on the remaining qubits.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hhl/circuits.hpp"
#include "hhl/noise.hpp"
#include "hhl/problem.hpp"

namespace hhl {

/// Conditional ancilla rotation. The register bits at `free_positions`
/// (1-based, ascending) form the control pattern, first listed bit most
/// significant; pattern p stands for x = offset + sum_i 2^{n-pos_i} p_i.
struct AqeSpec {
  int n = 0;
  std::vector<int> free_positions;
  std::uint64_t offset = 0;  // y'
  double c = 0.0;
  std::vector<double> angles;  // one per pattern

  int width() const { return static_cast<int>(free_positions.size()); }
  std::uint64_t value(std::uint64_t pattern) const;
};

/// 2 asin(c / x); zero for x = 0.
double aqe_angle(double c, std::uint64_t x);

/// Full encoding over every register value.
AqeSpec build_aqe(const HermitianProblem& problem, int n);
/// Encoding that reads only the non-fixed bits of `profile`.
AqeSpec reduced_aqe(const EigenmeanProfile& profile, double c);

/// register_wires[i] carries estimate bit i + 1.
std::vector<Gate> aqe_gates(const AqeSpec& spec, const std::vector<int>& register_wires, int ancilla);

struct DetectionPolicy {
  double tau = 0.05;
  double coverage = 0.9;
};

struct EigenEstimate {
  int n = 0;
  std::vector<std::string> peaks;
  std::vector<double> weights;
  double peak_mass = 0.0;
  EigenmeanProfile profile;
  bool reducible = false;
};

EigenEstimate analyze_qpea(const MeasurementHistogram& histogram, const DetectionPolicy& policy = {});

/// Throws DomainError unless `estimate.reducible`.
AqeSpec synthesize_reduced_aqe(const EigenEstimate& estimate, double c);

struct HhlOptions {
  /// Absent: exact state-vector simulation of the uncompiled circuit.
  std::optional<NoiseParams> noise;
  CompileOptions compile;
  bool absorb_swap = false;
  /// Sampled ancilla read-out; 0 keeps exact probabilities.
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
};

struct HhlOutcome {
  std::string mode;
  int n = 0;
  double success_probability = 0.0;
  DensityMatrix solution = DensityMatrix::from_pure(basis_state(1, 0));
  double fidelity = 0.0;
  /// X-basis weights of a one-qubit solution.
  std::optional<double> c_plus_sq;
  std::optional<double> c_minus_sq;
  /// Known whenever the circuit lowers to the CNOT basis.
  std::optional<int> cnot_count;
  /// Register mass off |0...0> in the post-selected branch.
  double register_leakage = 0.0;
  AqeSpec aqe;
  std::vector<std::pair<std::string, MeasurementHistogram>> histograms;
  std::optional<EigenEstimate> estimate;
};

Circuit build_hhl_circuit(const HermitianProblem& problem, int n, const AqeSpec& aqe,
                          bool absorb_swap = false);

HhlOutcome run_hhl_with_aqe(const HermitianProblem& problem, int n, const AqeSpec& aqe,
                            const HhlOptions& options = {});
HhlOutcome run_original_hhl(const HermitianProblem& problem, int n, const HhlOptions& options = {});

struct HybridPolicy {
  DetectionPolicy detection;
  int max_n = 4;
  int step = 1;
};

class NotReducibleError : public std::runtime_error {
 public:
  NotReducibleError(const std::string& what, EigenEstimate estimate)
      : std::runtime_error(what), estimate_(std::move(estimate)) {}
  const EigenEstimate& estimate() const { return estimate_; }

 private:
  EigenEstimate estimate_;
};

/// QPEA (sampled with `shots`, exact when 0; restart n uses seed + n), then
/// the reduced HHL once the peaks admit a fixed bit.
HhlOutcome run_hybrid_hhl(const HermitianProblem& problem, int n_init, std::uint64_t shots,
                          std::uint64_t seed, const HybridPolicy& policy = {},
                          const HhlOptions& options = {});

struct EquivalenceReport {
  double fidelity = 0.0;
  double success_full = 0.0;
  double success_reduced = 0.0;
  int fixed_count = 0;
  bool equivalent = false;
};

/// Full versus reduced encoding on a perfectly n-estimated problem.
EquivalenceReport theorem1_equivalence_check(const HermitianProblem& problem, int n);
EquivalenceReport theorem1_equivalence_check(const EstimableProblemSpec& spec, std::uint64_t seed);

}  // namespace hhl
