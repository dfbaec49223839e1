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

// Closed-form fidelities and QPEA probabilities for the A_lambda family, and
// a matrix-algebra HHL reference that shares no code with the gate simulator.

#include <complex>
#include <string>

#include "hhl/problem.hpp"
#include "hhl/qstate.hpp"

namespace hhl::oracles {

/// Fidelity of the one-bit-register solution with the exact one.
double f1(double lambda);
double f2(double lambda);
/// Three-bit register. Two coefficients of the last numerator differ from the
/// printed closed form, which is kept as f3_printed.
double f3(double lambda);
std::complex<double> f3_printed(double lambda);
/// Dispatch on k in {1, 2, 3}.
double closed_form_fidelity(int k, double lambda);

/// Two-bit QPEA outcome probability from the printed expressions (absolute
/// value where the printed form is negative).
double qpea_prob_analytic(double lambda, const std::string& outcome);
/// Same probabilities as products of squared sines and cosines.
double qpea_prob_trig(double lambda, const std::string& outcome);

struct BruteForceResult {
  DensityMatrix solution = DensityMatrix::from_pure(basis_state(1, 0));
  double success_probability = 0.0;
};

/// QPE, the integer-denominator encoding and inverse QPE as explicit
/// matrices on A (x) R (x) V, then projection of A onto |1> and a trace over R.
BruteForceResult brute_force_hhl(const HermitianProblem& problem, int n);

}  // namespace hhl::oracles
