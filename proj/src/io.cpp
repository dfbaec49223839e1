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

#include "hhl/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hhl/errors.hpp"

namespace hhl::io {

namespace {

std::vector<double> number_array(const Json& j, const char* key, std::size_t size, bool required) {
  if (!j.contains(key)) {
    if (required) throw ValidationError(std::string("problem file lacks \"") + key + "\"");
    return std::vector<double>(size, 0.0);
  }
  const Json& arr = j.at(key);
  if (!arr.is_array() || arr.size() != size) {
    throw ValidationError(std::string("\"") + key + "\" must be an array of " + std::to_string(size) + " numbers");
  }
  std::vector<double> out;
  for (const Json& v : arr) {
    if (!v.is_number()) throw ValidationError(std::string("\"") + key + "\" holds a non-number");
    out.push_back(v.get<double>());
  }
  return out;
}

double number(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ValidationError(std::string("\"") + key + "\" must be a number");
  }
  return j.at(key).get<double>();
}

Json float_or_null(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

HermitianProblem parse_problem(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ValidationError("problem needs a string \"kind\"");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "lambda") {
    const double lambda = number(j, "lambda");
    if (!(lambda > kSpectrumMargin && lambda < 1.0 - kSpectrumMargin)) {
      throw ValidationError("lambda must lie in (0, 1)");
    }
    return build_a_lambda(lambda);
  }
  if (kind != "matrix") throw ValidationError("unknown problem kind \"" + kind + "\"");
  const double dim_raw = number(j, "dim");
  if (dim_raw < 1 || dim_raw > 256 || dim_raw != std::floor(dim_raw)) {
    throw ValidationError("\"dim\" must be a positive integer");
  }
  const auto d = static_cast<std::size_t>(dim_raw);
  const auto ar = number_array(j, "a_real", d * d, true), ai = number_array(j, "a_imag", d * d, false);
  const auto br = number_array(j, "b_real", d, true), bi = number_array(j, "b_imag", d, false);
  Matrix a(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  Vector b(static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < d; ++r) {
    b[static_cast<Eigen::Index>(r)] = Complex(br[r], bi[r]);
    for (std::size_t c = 0; c < d; ++c) {
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = Complex(ar[r * d + c], ai[r * d + c]);
    }
  }
  return HermitianProblem::create(std::move(a), std::move(b));
}

Json problem_to_json(const HermitianProblem& problem) {
  Json j;
  if (problem.lambda()) {
    j["kind"] = "lambda";
    j["lambda"] = *problem.lambda();
    return j;
  }
  const Matrix& a = problem.matrix();
  const Vector& b = problem.rhs();
  Json ar = Json::array(), ai = Json::array(), br = Json::array(), bi = Json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      ar.push_back(a(r, c).real());
      ai.push_back(a(r, c).imag());
    }
    br.push_back(b[r].real());
    bi.push_back(b[r].imag());
  }
  j["kind"] = "matrix";
  j["dim"] = a.rows();
  j["a_real"] = ar;
  j["a_imag"] = ai;
  j["b_real"] = br;
  j["b_imag"] = bi;
  return j;
}

NoiseParams parse_noise(const Json& j) {
  if (!j.is_object()) throw ValidationError("noise parameters must be a JSON object");
  NoiseParams p;
  for (const auto& [key, value] : j.items()) {
    if (key == "t1_ns") {
      if (value.is_null()) {
        p.t1_ns = std::numeric_limits<double>::infinity();
      } else if (value.is_number()) {
        p.t1_ns = value.get<double>();
      } else {
        throw ValidationError("\"t1_ns\" must be a number or null");
      }
    } else if (key == "cnot_ns") {
      p.durations.cnot_ns = number(j, "cnot_ns");
    } else if (key == "rz_ns") {
      p.durations.rz_ns = number(j, "rz_ns");
    } else if (key == "single_ns") {
      p.durations.single_ns = number(j, "single_ns");
    } else if (key == "readout_flip") {
      p.readout_flip = number(j, "readout_flip");
    } else if (key == "idle_damping") {
      if (!value.is_boolean()) throw ValidationError("\"idle_damping\" must be a boolean");
      p.idle_damping = value.get<bool>();
    } else {
      throw ValidationError("unknown noise parameter \"" + key + "\"");
    }
  }
  p.validate();
  return p;
}

Json noise_to_json(const NoiseParams& noise) {
  Json j;
  j["t1_ns"] = noise.damps() ? Json(noise.t1_ns) : Json(nullptr);
  j["cnot_ns"] = noise.durations.cnot_ns;
  j["rz_ns"] = noise.durations.rz_ns;
  j["single_ns"] = noise.durations.single_ns;
  j["readout_flip"] = noise.readout_flip;
  j["idle_damping"] = noise.idle_damping;
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
}

Json histogram_to_json(const MeasurementHistogram& hist) {
  Json j;
  j["width"] = hist.width();
  j["shots"] = hist.shots();
  Json outcomes = Json::object();
  for (std::size_t i = 0; i < hist.size(); ++i) {
    Json entry;
    if (!hist.is_exact()) entry["count"] = hist.count(i);
    entry["probability"] = hist.probability(i);
    outcomes[hist.label(i)] = entry;
  }
  j["outcomes"] = outcomes;
  return j;
}

std::string histogram_csv(const MeasurementHistogram& hist) {
  std::ostringstream out;
  out << "outcome,count,probability\n";
  for (std::size_t i = 0; i < hist.size(); ++i) {
    out << hist.label(i) << "," << (hist.is_exact() ? 0 : hist.count(i)) << ","
        << format_double(hist.probability(i)) << "\n";
  }
  return out.str();
}

Json run_record(const HermitianProblem& problem, const HhlOutcome& outcome, const RunMeta& meta) {
  Json j;
  j["schema"] = 1;
  j["lambda"] = float_or_null(problem.lambda());
  j["problem"] = problem_to_json(problem);
  j["n"] = outcome.n;
  j["mode"] = outcome.mode;
  j["success_prob"] = outcome.success_probability;
  j["fidelity"] = outcome.fidelity;
  j["c_plus_sq"] = float_or_null(outcome.c_plus_sq);
  j["c_minus_sq"] = float_or_null(outcome.c_minus_sq);
  j["cnot_count"] = outcome.cnot_count ? Json(*outcome.cnot_count) : Json(nullptr);
  j["seed"] = meta.seed;
  j["shots"] = meta.shots;
  j["register_leakage"] = outcome.register_leakage;
  if (outcome.estimate) {
    Json est;
    est["peaks"] = outcome.estimate->peaks;
    est["weights"] = outcome.estimate->weights;
    est["fixed_positions"] = outcome.estimate->profile.fixed_positions();
    est["free_positions"] = outcome.estimate->profile.free_positions();
    j["estimate"] = est;
  }
  Json aqe;
  aqe["free_positions"] = outcome.aqe.free_positions;
  aqe["offset"] = outcome.aqe.offset;
  aqe["c"] = outcome.aqe.c;
  aqe["angles"] = outcome.aqe.angles;
  j["aqe"] = aqe;
  Json hists = Json::object();
  for (const auto& [name, hist] : outcome.histograms) hists[name] = histogram_to_json(hist);
  j["histograms"] = hists;
  return j;
}

std::string curve_csv(const std::vector<CurveRow>& rows) {
  std::ostringstream out;
  out << "lambda,k,F_analytic,F_simulated,abs_err\n";
  for (const CurveRow& r : rows) {
    out << format_double(r.lambda) << "," << r.k << "," << format_double(r.f_analytic) << ","
        << format_double(r.f_simulated) << "," << format_double(std::abs(r.f_analytic - r.f_simulated))
        << "\n";
  }
  return out.str();
}

Json circuit_to_json(const Circuit& circuit) {
  Json j;
  j["num_qubits"] = circuit.num_qubits();
  Json roles = Json::object();
  for (const auto& r : circuit.roles()) roles[r.name] = r.qubits;
  j["roles"] = roles;
  Json gates = Json::array();
  for (const Gate& g : circuit.gates()) {
    Json e;
    e["kind"] = std::string(gate_name(g.kind));
    e["targets"] = g.targets;
    if (!g.controls.empty()) e["controls"] = g.controls;
    if (!g.params.empty()) e["params"] = g.params;
    if (g.is_measure()) {
      e["creg"] = g.creg;
      e["cbit"] = g.cbit;
    }
    if (g.kind == GateKind::Unitary) {
      Json re = Json::array(), im = Json::array();
      for (Eigen::Index r = 0; r < g.matrix.rows(); ++r) {
        for (Eigen::Index c = 0; c < g.matrix.cols(); ++c) {
          re.push_back(g.matrix(r, c).real());
          im.push_back(g.matrix(r, c).imag());
        }
      }
      e["matrix_real"] = re;
      e["matrix_imag"] = im;
    }
    e["duration_ns"] = g.duration_ns;
    gates.push_back(e);
  }
  j["gates"] = gates;
  return j;
}

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace hhl::io
