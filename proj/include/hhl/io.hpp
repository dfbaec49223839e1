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

// JSON and CSV formats for problems, noise settings, run records and curves.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hhl/circuits.hpp"
#include "hhl/noise.hpp"
#include "hhl/problem.hpp"
#include "hhl/solvers.hpp"

namespace hhl::io {

using Json = nlohmann::ordered_json;

/// {"kind":"lambda","lambda":x} or {"kind":"matrix","dim":d,"a_real":[...],
/// "a_imag":[...],"b_real":[...],"b_imag":[...]} with row-major matrices.
/// Imaginary parts are optional. Throws ValidationError.
HermitianProblem parse_problem(const Json& j);
Json problem_to_json(const HermitianProblem& problem);

/// Missing keys keep their defaults; "t1_ns": null disables damping.
NoiseParams parse_noise(const Json& j);
Json noise_to_json(const NoiseParams& noise);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Json histogram_to_json(const MeasurementHistogram& hist);
/// Columns outcome,count,probability.
std::string histogram_csv(const MeasurementHistogram& hist);

struct RunMeta {
  std::uint64_t seed = 0;
  std::uint64_t shots = 0;
};
Json run_record(const HermitianProblem& problem, const HhlOutcome& outcome, const RunMeta& meta);

struct CurveRow {
  double lambda;
  int k;
  double f_analytic;
  double f_simulated;
};
/// Columns lambda,k,F_analytic,F_simulated,abs_err.
std::string curve_csv(const std::vector<CurveRow>& rows);

Json circuit_to_json(const Circuit& circuit);

/// Shortest text that reads back to the same double.
std::string format_double(double v);

}  // namespace hhl::io
