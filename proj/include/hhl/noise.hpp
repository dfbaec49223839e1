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

// Amplitude-damping (T1) execution of compiled circuits on density matrices.

#include <cmath>
#include <cstdint>
#include <limits>

#include "hhl/circuits.hpp"
#include "hhl/qstate.hpp"

namespace hhl {

struct NoiseParams {
  /// Infinity turns damping off.
  double t1_ns = 50000.0;
  GateDurations durations;
  /// Probability that a read-out bit is flipped, in [0, 0.5].
  double readout_flip = 0.0;
  /// Age every qubit for the duration of each gate, not just the ones it touches.
  bool idle_damping = true;

  static NoiseParams noiseless() {
    NoiseParams p;
    p.t1_ns = std::numeric_limits<double>::infinity();
    return p;
  }
  bool damps() const { return std::isfinite(t1_ns); }
  /// Throws ValidationError on out-of-range fields.
  void validate() const;
};

/// Kraus pair {diag(1, sqrt(1-g)), sqrt(g)|0><1|} with g = 1 - exp(-t/T1).
DensityMatrix damping_channel(const DensityMatrix& rho, int qubit, double t_ns, double t1_ns);

/// Final state and read-out histogram over the measured qubits, in order of
/// their measure instructions. `shots == 0` returns the exact distribution.
struct NoisyRun {
  DensityMatrix state;
  MeasurementHistogram histogram;
};

DensityMatrix evolve_noisy(const CompiledCircuit& compiled, const NoiseParams& noise,
                           const DensityMatrix& initial);
NoisyRun run_noisy(const CompiledCircuit& compiled, const NoiseParams& noise,
                   const DensityMatrix& initial, std::uint64_t shots, std::uint64_t seed);
/// Starts from |0...0>.
NoisyRun run_noisy(const CompiledCircuit& compiled, const NoiseParams& noise, std::uint64_t shots,
                   std::uint64_t seed);

/// Independent bit flips with probability p on every read-out bit.
MeasurementHistogram apply_readout_flips(const MeasurementHistogram& exact, double p);

/// exp(-cnot_count * t_CNOT / T1).
double survival_bound(int cnot_count, const NoiseParams& noise);

}  // namespace hhl
