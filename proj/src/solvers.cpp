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

#include "hhl/solvers.hpp"

#include <cmath>

#include "hhl/errors.hpp"
#include "hhl/qpe.hpp"

namespace hhl {

namespace {

std::vector<int> range(int first, int count) {
  std::vector<int> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = first + i;
  return out;
}

void fill_angles(AqeSpec& spec) {
  const std::size_t patterns = std::size_t{1} << spec.width();
  spec.angles.resize(patterns);
  for (std::size_t p = 0; p < patterns; ++p) spec.angles[p] = aqe_angle(spec.c, spec.value(p));
}

}  // namespace

std::uint64_t AqeSpec::value(std::uint64_t pattern) const {
  std::uint64_t x = offset;
  const int w = width();
  for (int k = 0; k < w; ++k) {
    if ((pattern >> (w - 1 - k)) & 1U) x += std::uint64_t{1} << (n - free_positions[static_cast<std::size_t>(k)]);
  }
  return x;
}

double aqe_angle(double c, std::uint64_t x) {
  if (x == 0) return 0.0;
  const double ratio = c / static_cast<double>(x);
  if (!(ratio > 0.0 && ratio <= 1.0 + 1e-12)) throw DomainError("encoding amplitude c/x outside (0, 1]");
  return 2.0 * std::asin(std::min(ratio, 1.0));
}

AqeSpec build_aqe(const HermitianProblem& problem, int n) {
  if (n < 1) throw DomainError("register size must be at least 1");
  AqeSpec spec;
  spec.n = n;
  spec.free_positions = range(1, n);
  spec.c = normalization_constant(problem);
  fill_angles(spec);
  return spec;
}

AqeSpec reduced_aqe(const EigenmeanProfile& profile, double c) {
  if (profile.n < 1) throw DomainError("profile has no register");
  AqeSpec spec;
  spec.n = profile.n;
  spec.c = c;
  spec.free_positions = profile.free_positions();
  for (int pos : profile.fixed_positions()) {
    if (std::lround(profile.means[static_cast<std::size_t>(pos - 1)]) == 1) {
      spec.offset += std::uint64_t{1} << (profile.n - pos);
    }
  }
  fill_angles(spec);
  return spec;
}

std::vector<Gate> aqe_gates(const AqeSpec& spec, const std::vector<int>& register_wires, int ancilla) {
  if (static_cast<int>(register_wires.size()) != spec.n) throw DomainError("register wire count mismatch");
  if (spec.angles.size() != (std::size_t{1} << spec.width())) throw DomainError("angle table size mismatch");
  std::vector<int> controls;
  for (int pos : spec.free_positions) controls.push_back(register_wires.at(static_cast<std::size_t>(pos - 1)));
  return controlled_ry_chain(spec.angles, controls, ancilla);
}

EigenEstimate analyze_qpea(const MeasurementHistogram& histogram, const DetectionPolicy& policy) {
  if (histogram.size() == 0 || histogram.width() < 1) throw DomainError("empty histogram");
  EigenEstimate est;
  est.n = histogram.width();
  for (std::size_t i = 0; i < histogram.size(); ++i) {
    const double p = histogram.probability(i);
    if (p > 0.0 && p >= policy.tau) {
      est.peaks.push_back(histogram.label(i));
      est.weights.push_back(p);
      est.peak_mass += p;
    }
  }
  if (est.peaks.empty()) return est;
  est.profile = eigenmean_profile_from_bitstrings(est.peaks, est.n);
  est.reducible = est.profile.fixed_count() >= 1 && est.peak_mass >= policy.coverage;
  return est;
}

AqeSpec synthesize_reduced_aqe(const EigenEstimate& estimate, double c) {
  if (!estimate.reducible) throw DomainError("estimate is not reducible");
  return reduced_aqe(estimate.profile, c);
}

Circuit build_hhl_circuit(const HermitianProblem& problem, int n, const AqeSpec& aqe, bool absorb_swap) {
  if (aqe.n != n) throw DomainError("encoding register size differs from n");
  const int d = problem.num_qubits();
  Circuit c(1 + n + d);
  const std::vector<int> r = range(1, n), v = range(1 + n, d);
  const RegisterBlock qpe = qpe_block(problem, r, v, QpeDirection::Forward, absorb_swap);
  c.add(qpe.gates);
  c.add(aqe_gates(aqe, qpe.output_wires, 0));
  c.add(qpe_block(problem, r, v, QpeDirection::Inverse, absorb_swap).gates);
  c.set_role("a", {0});
  c.set_role("r", r);
  c.set_role("v", v);
  return c;
}

HhlOutcome run_hhl_with_aqe(const HermitianProblem& problem, int n, const AqeSpec& aqe,
                            const HhlOptions& options) {
  const Circuit circuit = build_hhl_circuit(problem, n, aqe, options.absorb_swap);
  const StateVector input = zero_padded_input(problem, 1 + n);
  const int d = problem.num_qubits();

  std::optional<CompiledCircuit> compiled;
  if (d == 1) compiled = compile(circuit, options.compile);

  DensityMatrix final_state = DensityMatrix::from_pure(basis_state(1, 0));
  if (options.noise) {
    if (!compiled) throw CompileError("noisy execution needs a one-qubit input register");
    final_state = evolve_noisy(*compiled, *options.noise, DensityMatrix::from_pure(input));
  } else {
    final_state = DensityMatrix::from_pure(run(circuit, input));
  }

  HhlOutcome out;
  out.mode = "original";
  out.n = n;
  out.aqe = aqe;
  if (compiled) out.cnot_count = compiled->cnot_count();

  const MeasurementHistogram ancilla = marginal_distribution(final_state, {0});
  out.histograms.emplace_back(
      "ancilla", options.shots == 0 ? ancilla : sample_distribution(ancilla, options.shots, options.seed));

  const PostSelected<DensityMatrix> post = postselect(final_state, 0, 1);
  out.success_probability = post.probability;
  out.solution = partial_trace(post.state, range(1 + n, d));
  const DensityMatrix reg = partial_trace(post.state, range(1, n));
  out.register_leakage = std::max(0.0, 1.0 - reg(0, 0).real());
  out.fidelity = fidelity_pure(out.solution, classical_solution(problem).state);
  if (d == 1) {
    const Matrix& rho = out.solution.matrix();
    const double coherence = rho(0, 1).real();
    const double mid = 0.5 * (rho(0, 0).real() + rho(1, 1).real());
    out.c_plus_sq = mid + coherence;
    out.c_minus_sq = mid - coherence;
  }
  return out;
}

HhlOutcome run_original_hhl(const HermitianProblem& problem, int n, const HhlOptions& options) {
  return run_hhl_with_aqe(problem, n, build_aqe(problem, n), options);
}

HhlOutcome run_hybrid_hhl(const HermitianProblem& problem, int n_init, std::uint64_t shots,
                          std::uint64_t seed, const HybridPolicy& policy, const HhlOptions& options) {
  if (n_init < 1) throw ValidationError("initial register size must be at least 1");
  if (policy.max_n < n_init) throw ValidationError("max_n is smaller than the initial register size");
  if (policy.step < 1) throw ValidationError("restart step must be positive");
  const double c = normalization_constant(problem);
  EigenEstimate last;
  for (int n = n_init; n <= policy.max_n; n += policy.step) {
    MeasurementHistogram hist;
    if (shots > 0) {
      hist = run_qpea(problem, n, shots, seed + static_cast<std::uint64_t>(n), options.noise);
    } else if (options.noise) {
      hist = register_distribution_noisy(problem, n, *options.noise, options.compile);
    } else {
      hist = register_distribution_exact(problem, n);
    }
    last = analyze_qpea(hist, policy.detection);
    if (!last.reducible) continue;
    HhlOutcome out = run_hhl_with_aqe(problem, n, synthesize_reduced_aqe(last, c), options);
    out.mode = "hybrid";
    out.histograms.insert(out.histograms.begin(), {"qpea", std::move(hist)});
    out.estimate = std::move(last);
    return out;
  }
  throw NotReducibleError("no fixed eigenvalue bit found up to n = " + std::to_string(policy.max_n),
                          std::move(last));
}

EquivalenceReport theorem1_equivalence_check(const HermitianProblem& problem, int n) {
  if (!is_perfectly_estimated(problem.spectral(), n)) {
    throw DomainError("problem is not perfectly estimated at this register size");
  }
  const EigenmeanProfile profile = eigenmean_profile(problem.spectral(), n);
  const HhlOutcome full = run_original_hhl(problem, n);
  const HhlOutcome reduced = run_hhl_with_aqe(problem, n, reduced_aqe(profile, full.aqe.c));
  EquivalenceReport report;
  report.fidelity = state_fidelity(full.solution, reduced.solution);
  report.success_full = full.success_probability;
  report.success_reduced = reduced.success_probability;
  report.fixed_count = profile.fixed_count();
  report.equivalent = report.fidelity >= 1.0 - 1e-9 &&
                      std::abs(report.success_full - report.success_reduced) <= 1e-10;
  return report;
}

EquivalenceReport theorem1_equivalence_check(const EstimableProblemSpec& spec, std::uint64_t seed) {
  return theorem1_equivalence_check(make_perfectly_estimated_problem(spec, seed), spec.register_size);
}

}  // namespace hhl
