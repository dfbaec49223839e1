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

#include "hhl/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "hhl/errors.hpp"
#include "hhl/io.hpp"
#include "hhl/oracles.hpp"
#include "hhl/qpe.hpp"
#include "hhl/solvers.hpp"

namespace hhl {

namespace {

using io::Json;

struct ProblemArgs {
  std::optional<double> lambda;
  std::string problem_file;
  int n = 2;
};

struct HybridArgs {
  double tau = 0.05;
  double coverage = 0.9;
  int max_n = 4;
};

struct OutputArgs {
  std::string out;
  std::string format;
};

void add_problem_options(CLI::App* cmd, ProblemArgs& p) {
  cmd->add_option("--lambda", p.lambda, "member of the two-by-two family, in (0, 1)");
  cmd->add_option("--problem-file", p.problem_file, "problem definition JSON");
  cmd->add_option("--n", p.n, "register size")->check(CLI::Range(1, 8));
}

void add_hybrid_options(CLI::App* cmd, HybridArgs& h) {
  cmd->add_option("--tau", h.tau, "peak detection threshold")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--coverage", h.coverage, "minimum total peak mass")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--max-n", h.max_n, "largest register size tried by the hybrid solver")->check(CLI::Range(1, 8));
}

void add_output_options(CLI::App* cmd, OutputArgs& o, std::vector<std::string> formats, std::string fallback) {
  o.format = std::move(fallback);
  cmd->add_option("--out", o.out, "output path (standard output when absent)");
  cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember(std::move(formats)));
}

HermitianProblem load_problem(const ProblemArgs& p) {
  if (p.lambda.has_value() == !p.problem_file.empty()) {
    throw ValidationError("give exactly one of --lambda and --problem-file");
  }
  if (p.lambda) {
    if (!(*p.lambda > 0.0 && *p.lambda < 1.0)) throw ValidationError("--lambda must lie in (0, 1)");
    return build_a_lambda(*p.lambda);
  }
  return io::parse_problem(io::read_json_file(p.problem_file));
}

std::optional<NoiseParams> load_noise(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return io::parse_noise(io::read_json_file(path));
}

HybridPolicy policy_from(const HybridArgs& h) {
  HybridPolicy policy;
  policy.detection.tau = h.tau;
  policy.detection.coverage = h.coverage;
  policy.max_n = h.max_n;
  return policy;
}

void check_seed(std::uint64_t shots, const std::optional<std::uint64_t>& seed) {
  if (shots > 0 && !seed) throw ValidationError("--seed is required when --shots > 0");
}

void emit(const OutputArgs& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
  } else {
    io::write_text_file(o.out, text);
  }
}

std::vector<double> parse_number_list(const std::string& text, const char* flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(std::string(flag) + ": \"" + item + "\" is not a number");
    }
  }
  if (values.empty()) throw ValidationError(std::string(flag) + " needs at least one value");
  return values;
}

unsigned worker_count(std::size_t jobs) {
  unsigned n = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HHL_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

/// Runs fn(i) for i in [0, jobs) on worker threads; the first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t jobs, Fn fn) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  const unsigned count = worker_count(jobs);
  for (unsigned t = 1; t < count; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

Json mode_row(const HhlOutcome& o, const NoiseParams& noise) {
  Json j;
  j["fidelity"] = o.fidelity;
  j["success_prob"] = o.success_probability;
  j["c_plus_sq"] = o.c_plus_sq.value_or(std::numeric_limits<double>::quiet_NaN());
  j["c_minus_sq"] = o.c_minus_sq.value_or(std::numeric_limits<double>::quiet_NaN());
  j["cnot_count"] = o.cnot_count ? Json(*o.cnot_count) : Json(nullptr);
  j["survival_bound"] = o.cnot_count ? Json(survival_bound(*o.cnot_count, noise)) : Json(nullptr);
  return j;
}

// --- subcommands -----------------------------------------------------------

struct SolveArgs {
  ProblemArgs problem;
  HybridArgs hybrid;
  OutputArgs output;
  std::string mode = "original";
  std::uint64_t shots = 0;
  std::optional<std::uint64_t> seed;
  std::string noise;
  bool absorb_swap = false;
};

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  check_seed(a.shots, a.seed);
  const HermitianProblem problem = load_problem(a.problem);
  HhlOptions opts;
  opts.noise = load_noise(a.noise);
  opts.absorb_swap = a.absorb_swap;
  opts.shots = a.shots;
  opts.seed = a.seed.value_or(0);
  const io::RunMeta meta{a.seed.value_or(0), a.shots};
  if (a.mode == "original") {
    const HhlOutcome o = run_original_hhl(problem, a.problem.n, opts);
    emit(a.output, io::run_record(problem, o, meta).dump(2) + "\n", out);
    return kExitOk;
  }
  try {
    const HhlOutcome o =
        run_hybrid_hhl(problem, a.problem.n, a.shots, a.seed.value_or(0), policy_from(a.hybrid), opts);
    emit(a.output, io::run_record(problem, o, meta).dump(2) + "\n", out);
    return kExitOk;
  } catch (const NotReducibleError& e) {
    Json j;
    j["schema"] = 1;
    j["status"] = "not-reducible";
    j["n"] = e.estimate().n;
    j["peaks"] = e.estimate().peaks;
    j["weights"] = e.estimate().weights;
    j["peak_mass"] = e.estimate().peak_mass;
    emit(a.output, j.dump(2) + "\n", out);
    err << "not reducible: " << e.what() << "\n";
    return kExitNotReducible;
  }
}

struct SweepArgs {
  OutputArgs output;
  std::string ks = "1,2,3";
  double lambda_min = 0.0;
  double lambda_max = 1.0;
  int points = 199;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  std::vector<int> ks;
  for (double k : parse_number_list(a.ks, "--k")) {
    if (k != 1.0 && k != 2.0 && k != 3.0) throw ValidationError("--k values must be 1, 2 or 3");
    ks.push_back(static_cast<int>(k));
  }
  if (!(a.lambda_min >= 0.0 && a.lambda_max <= 1.0 && a.lambda_min < a.lambda_max)) {
    throw ValidationError("need 0 <= --lambda-min < --lambda-max <= 1");
  }
  if (a.points < 1) throw ValidationError("--points must be positive");
  const auto count = static_cast<std::size_t>(a.points);
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = a.lambda_min + (a.lambda_max - a.lambda_min) * static_cast<double>(i + 1) /
                                 static_cast<double>(count + 1);
  }
  std::vector<std::vector<io::CurveRow>> rows(count);
  parallel_for(count, [&](std::size_t i) {
    const HermitianProblem problem = build_a_lambda(grid[i]);
    for (int k : ks) {
      const double simulated = run_original_hhl(problem, k).fidelity;
      rows[i].push_back({grid[i], k, oracles::closed_form_fidelity(k, grid[i]), simulated});
    }
  });
  std::vector<io::CurveRow> flat;
  for (auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  if (a.output.format == "json") {
    Json j;
    j["schema"] = 1;
    Json arr = Json::array();
    for (const auto& r : flat) {
      arr.push_back({{"lambda", r.lambda}, {"k", r.k}, {"F_analytic", r.f_analytic},
                     {"F_simulated", r.f_simulated}, {"abs_err", std::abs(r.f_analytic - r.f_simulated)}});
    }
    j["rows"] = arr;
    emit(a.output, j.dump(2) + "\n", out);
  } else {
    emit(a.output, io::curve_csv(flat), out);
  }
  return kExitOk;
}

struct QpeaArgs {
  ProblemArgs problem;
  OutputArgs output;
  std::uint64_t shots = 0;
  std::optional<std::uint64_t> seed;
  std::string noise;
};

int cmd_qpea(const QpeaArgs& a, std::ostream& out) {
  check_seed(a.shots, a.seed);
  const HermitianProblem problem = load_problem(a.problem);
  const std::optional<NoiseParams> noise = load_noise(a.noise);
  MeasurementHistogram hist;
  if (a.shots > 0) {
    hist = run_qpea(problem, a.problem.n, a.shots, *a.seed, noise);
  } else {
    hist = noise ? register_distribution_noisy(problem, a.problem.n, *noise)
                 : register_distribution_exact(problem, a.problem.n);
  }
  if (a.output.format == "json") {
    Json j;
    j["schema"] = 1;
    j["problem"] = io::problem_to_json(problem);
    j["n"] = a.problem.n;
    j["seed"] = a.seed.value_or(0);
    j["histogram"] = io::histogram_to_json(hist);
    emit(a.output, j.dump(2) + "\n", out);
  } else {
    emit(a.output, io::histogram_csv(hist), out);
  }
  return kExitOk;
}

struct CompareArgs {
  HybridArgs hybrid;
  OutputArgs output;
  std::string lambdas = "0.25,0.5";
  int n = 2;
  std::string noise;
};

int cmd_compare(const CompareArgs& a, std::ostream& out) {
  const std::vector<double> lambdas = parse_number_list(a.lambdas, "--lambda");
  const NoiseParams noise = load_noise(a.noise).value_or(NoiseParams{});
  const HybridPolicy policy = policy_from(a.hybrid);
  Json points = Json::array();
  for (double lambda : lambdas) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw ValidationError("--lambda values must lie in (0, 1)");
    const HermitianProblem problem = build_a_lambda(lambda);
    const StateVector x = classical_solution(problem).state;
    const double plus = std::norm((x[0] + x[1]) / std::numbers::sqrt2);
    Json point;
    point["lambda"] = lambda;
    point["theoretical"] = {{"c_plus_sq", plus}, {"c_minus_sq", 1.0 - plus}};
    HhlOptions noisy, clean;
    noisy.noise = noise;
    Json modes_noisy, modes_clean;
    modes_noisy["original"] = mode_row(run_original_hhl(problem, a.n, noisy), noise);
    modes_clean["original"] = mode_row(run_original_hhl(problem, a.n, clean), noise);
    try {
      modes_noisy["hybrid"] = mode_row(run_hybrid_hhl(problem, a.n, 0, 0, policy, noisy), noise);
      modes_clean["hybrid"] = mode_row(run_hybrid_hhl(problem, a.n, 0, 0, policy, clean), noise);
    } catch (const NotReducibleError&) {
      modes_noisy["hybrid"] = nullptr;
      modes_clean["hybrid"] = nullptr;
    }
    point["noisy"] = modes_noisy;
    point["noiseless"] = modes_clean;
    points.push_back(point);
  }
  Json j;
  j["schema"] = 1;
  j["n"] = a.n;
  j["noise"] = io::noise_to_json(noise);
  j["points"] = points;
  emit(a.output, j.dump(2) + "\n", out);
  return kExitOk;
}

struct EmitArgs {
  ProblemArgs problem;
  HybridArgs hybrid;
  OutputArgs output;
  std::string mode = "original";
  std::uint64_t shots = 0;
  std::optional<std::uint64_t> seed;
  bool absorb_swap = false;
  bool no_simplify = false;
};

int cmd_emit(const EmitArgs& a, std::ostream& out, std::ostream& err) {
  check_seed(a.shots, a.seed);
  const HermitianProblem problem = load_problem(a.problem);
  const int n = a.problem.n;
  std::optional<Circuit> circuit;
  if (a.mode == "qpea") {
    circuit = build_qpea(problem, n, a.absorb_swap);
  } else {
    AqeSpec aqe;
    if (a.mode == "original") {
      aqe = build_aqe(problem, n);
    } else {
      const MeasurementHistogram hist = a.shots > 0 ? run_qpea(problem, n, a.shots, *a.seed)
                                                    : register_distribution_exact(problem, n);
      const EigenEstimate est = analyze_qpea(hist, policy_from(a.hybrid).detection);
      if (!est.reducible) {
        err << "not reducible at n = " << n << "\n";
        return kExitNotReducible;
      }
      aqe = synthesize_reduced_aqe(est, normalization_constant(problem));
    }
    circuit = build_hhl_circuit(problem, n, aqe, a.absorb_swap);
    circuit->add(gates::measure(0, "a", 0));
    for (int q = 0; q < problem.num_qubits(); ++q) circuit->add(gates::measure(1 + n + q, "v", q));
  }
  CompileOptions options;
  options.simplify = !a.no_simplify;
  const CompiledCircuit compiled = compile(*circuit, options);
  if (a.output.format == "json") {
    emit(a.output, io::circuit_to_json(compiled.circuit()).dump(2) + "\n", out);
  } else {
    emit(a.output, emit_qasm(compiled), out);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"HHL and hybrid HHL linear-system solver simulator", "hhl"};
  app.require_subcommand(1);

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "run one solver and write a RunRecord JSON");
  add_problem_options(solve_cmd, solve.problem);
  add_hybrid_options(solve_cmd, solve.hybrid);
  add_output_options(solve_cmd, solve.output, {"json"}, "json");
  solve_cmd->add_option("--mode", solve.mode)->check(CLI::IsMember({"original", "hybrid"}));
  solve_cmd->add_option("--shots", solve.shots, "read-out shots; 0 keeps exact probabilities");
  solve_cmd->add_option("--seed", solve.seed);
  solve_cmd->add_option("--noise", solve.noise, "noise parameter JSON");
  solve_cmd->add_flag("--absorb-swap", solve.absorb_swap, "relabel instead of emitting QFT swaps");

  SweepArgs sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "fidelity curves versus lambda");
  add_output_options(sweep_cmd, sweep.output, {"csv", "json"}, "csv");
  sweep_cmd->add_option("--k", sweep.ks, "comma-separated register sizes");
  sweep_cmd->add_option("--lambda-min", sweep.lambda_min);
  sweep_cmd->add_option("--lambda-max", sweep.lambda_max);
  sweep_cmd->add_option("--points", sweep.points, "interior grid points");

  QpeaArgs qpea;
  CLI::App* qpea_cmd = app.add_subcommand("qpea", "register distribution of phase estimation");
  add_problem_options(qpea_cmd, qpea.problem);
  add_output_options(qpea_cmd, qpea.output, {"csv", "json"}, "csv");
  qpea_cmd->add_option("--shots", qpea.shots, "read-out shots; 0 gives exact probabilities");
  qpea_cmd->add_option("--seed", qpea.seed);
  qpea_cmd->add_option("--noise", qpea.noise, "noise parameter JSON");

  CompareArgs compare;
  CLI::App* compare_cmd = app.add_subcommand("compare", "original versus hybrid under noise");
  add_hybrid_options(compare_cmd, compare.hybrid);
  add_output_options(compare_cmd, compare.output, {"json"}, "json");
  compare_cmd->add_option("--lambda", compare.lambdas, "comma-separated lambda values");
  compare_cmd->add_option("--n", compare.n)->check(CLI::Range(1, 8));
  compare_cmd->add_option("--noise", compare.noise, "noise parameter JSON (defaults when absent)");

  EmitArgs emit_args;
  CLI::App* emit_cmd = app.add_subcommand("emit-qasm", "OpenQASM 2.0 for a compiled circuit");
  add_problem_options(emit_cmd, emit_args.problem);
  add_hybrid_options(emit_cmd, emit_args.hybrid);
  add_output_options(emit_cmd, emit_args.output, {"qasm", "json"}, "qasm");
  emit_cmd->add_option("--mode", emit_args.mode)->check(CLI::IsMember({"original", "hybrid", "qpea"}));
  emit_cmd->add_option("--shots", emit_args.shots, "QPEA shots used to pick the reduced circuit");
  emit_cmd->add_option("--seed", emit_args.seed);
  emit_cmd->add_flag("--absorb-swap", emit_args.absorb_swap, "relabel instead of emitting QFT swaps");
  emit_cmd->add_flag("--no-simplify", emit_args.no_simplify, "skip the peephole pass");

  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve, out, err);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep, out);
    if (qpea_cmd->parsed()) return cmd_qpea(qpea, out);
    if (compare_cmd->parsed()) return cmd_compare(compare, out);
    if (emit_cmd->parsed()) return cmd_emit(emit_args, out, err);
  } catch (const NotReducibleError& e) {
    err << "not reducible: " << e.what() << "\n";
    return kExitNotReducible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace hhl
