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

#include "hhl/oracles.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "hhl/errors.hpp"

namespace hhl::oracles {

namespace {

using C = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr C I{0.0, 1.0};

void check_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in (0, 1)");
}

double real_part(C z) {
  if (std::abs(z.imag()) > 1e-10) throw DomainError("closed form has an imaginary residue");
  return z.real();
}

C t_of(double lambda) { return std::polar(1.0, 2.0 * kPi * lambda); }

/// F3 numerator/denominator; `verbatim` keeps the printed last numerator.
C f3_complex(double l, bool verbatim) {
  const C t = t_of(l), tc = std::conj(t);
  const double s = std::numbers::sqrt2;
  auto p = [&t](int k) { return std::pow(t, k); };
  auto cj = [](C z) { return std::conj(z); };

  const C A{140.0, 105.0};
  const C B = C{208.0, 128.0} * s;
  const double Cc = 8.0 * (35.0 + 52.0 * s);
  const double D = 8.0 * (-35.0 + 52.0 * s);
  const double E = 2.0 * (105.0 + 128.0 * s);
  const double F = -210.0 + 256.0 * s;
  const double G = 11025.0 + 76672.0 * s;
  const double H = -11025.0 + 76672.0 * s;

  const C alpha = -std::pow(tc, 14) / (128.0 * (1.0 - 2.0 * l + 2.0 * l * l));
  const C beta = alpha * std::pow(-1.0 + p(8), 2);
  const C gamma = C{350.0, 608.0} - 700.0 * l;
  const C phi = C{315.0, 420.0} + C{384.0, -624.0} * s - 3.0 * E * l;
  const C xi = C{-304.0, 175.0} + 608.0 * l;

  const C n1 = alpha * std::pow(cj(A) + B - 1276.0 * I * p(3) + 8712.0 * I * p(7) - 1276.0 * I * p(11) -
                                    Cc * l + (6.0 * p(5) + 2.0 * p(13)) * cj(xi) -
                                    (2.0 * t + 6.0 * p(9)) * xi +
                                    (5.0 * p(4) + 3.0 * p(12)) * (cj(A) - B + D * l) -
                                    (3.0 * p(2) + 5.0 * p(10)) * (A - cj(B) + D * l) -
                                    7.0 * p(8) * (-cj(A) - B + Cc * l) +
                                    (7.0 * p(6) + p(14)) * (-A - cj(B) + Cc * l),
                                2);
  const C n2 = beta * std::pow(cj(A) * I + B * I + F * l + p(5) * cj(gamma) + t * gamma -
                                   1276.0 * p(3) * (-1.0 + 2.0 * l) + p(4) * phi + p(2) * cj(phi) +
                                   p(6) * (-A * I - cj(B) * I + F * l),
                               2);
  const C n3 = beta * std::pow(cj(A) * I + B * I + F * l + p(5) * cj(gamma) + t * gamma +
                                   p(4) * (cj(A) * I - B * I - E * l) +
                                   p(2) * (-A * I + cj(B) * I - E * l) +
                                   p(6) * (-A * I - cj(B) * I + F * l),
                               2);
  const C n4 = beta * std::pow(-cj(A) - B + Cc * l + 2.0 * p(5) * cj(xi) + 2.0 * t * xi +
                                   p(4) * (cj(A) - B + D * l) + p(2) * (A - cj(B) + D * l) +
                                   p(6) * (-A - cj(B) + Cc * l),
                               2);
  const C n5 = beta * std::pow(cj(A) * I + B * I + F * l + p(4) * (cj(A) * I - B * I - E * l) +
                                   p(2) * (-A * I + cj(B) * I - E * l) +
                                   p(6) * (-A * I - cj(B) * I + F * l),
                               2);
  const C n6 = beta * std::pow(-cj(A) - B + Cc * l + p(4) * (cj(A) - B + D * l) +
                                   p(2) * (A - cj(B) + D * l) + p(6) * (-A - cj(B) + Cc * l),
                               2);
  const C n7 = beta * std::pow(-cj(A) - B + Cc * l + p(4) * (-cj(A) + B - D * l) -
                                   p(2) * (A - cj(B) + D * l) + p(6) * (-A - cj(B) + Cc * l),
                               2);
  const C n8_t2 = verbatim ? cj(A) * I - cj(B) * I + 2.0 * E * l : A * I - cj(B) * I + E * l;
  const C n8_t4 = verbatim ? -cj(A) * I + B * I + 2.0 * E * l : -cj(A) * I + B * I + E * l;
  const C n8 = beta * std::pow(cj(A) * I + B * I + F * l + p(6) * (-A * I - cj(B) * I + F * l) +
                                   p(2) * n8_t2 + p(4) * n8_t4,
                               2);
  const C den = std::pow(tc, 7) *
                (H - 75950.0 * t - 3.0 * G * p(2) - 586524.0 * p(3) - 5.0 * G * p(4) -
                 227850.0 * p(5) + 7.0 * H * p(6) + 2133448.0 * p(7) + 7.0 * H * p(8) -
                 227850.0 * p(9) - 5.0 * G * p(10) - 586524.0 * p(11) - 3.0 * G * p(12) -
                 75950.0 * p(13) + H * p(14));
  return (n1 + n2 + n3 + n4 + n5 + n6 + n7 + n8) / den;
}

int outcome_index(const std::string& outcome) {
  if (outcome.size() != 2) throw DomainError("outcome must be a two-bit string");
  int v = 0;
  for (char ch : outcome) {
    if (ch != '0' && ch != '1') throw DomainError("outcome must contain only 0 and 1");
    v = 2 * v + (ch - '0');
  }
  return v;
}

}  // namespace

double f1(double l) {
  check_lambda(l);
  const C t = t_of(l);
  return real_part(0.5 * (1.0 + (t + std::conj(t)) * ((-1.0 + l) * l) / (1.0 - 2.0 * l + 2.0 * l * l)));
}

double f2(double l) {
  check_lambda(l);
  const C t = t_of(l), tc = std::conj(t);
  auto p = [&t](int k) { return std::pow(t, k); };
  const C x = C{40.0, 32.0} - C{129.0, 64.0} * l + 129.0 * l * l;
  const C y = C{9.0, 32.0} - C{146.0, 64.0} * l + 146.0 * l * l;
  const C num = (25.0 + 80.0 * t + 171.0 * p(2) + 171.0 * p(8) + 80.0 * p(9) + 25.0 * p(10)) * ((-1.0 + l) * l) +
                4.0 * p(4) * x + 4.0 * p(6) * std::conj(x) + 2.0 * p(3) * y + 2.0 * p(7) * std::conj(y) +
                4.0 * p(5) * (89.0 - 170.0 * l + 170.0 * l * l);
  const C den = 4.0 * (9.0 + 80.0 * t + 178.0 * p(2) + 80.0 * p(3) + 9.0 * p(4)) * (1.0 - 2.0 * l + 2.0 * l * l);
  return real_part(std::pow(tc, 3) * num / den);
}

double f3(double l) {
  check_lambda(l);
  return real_part(f3_complex(l, false));
}

std::complex<double> f3_printed(double l) {
  check_lambda(l);
  return f3_complex(l, true);
}

double closed_form_fidelity(int k, double lambda) {
  switch (k) {
    case 1: return f1(lambda);
    case 2: return f2(lambda);
    case 3: return f3(lambda);
    default: throw DomainError("closed forms exist only for k = 1, 2, 3");
  }
}

double qpea_prob_analytic(double lambda, const std::string& outcome) {
  check_lambda(lambda);
  const int v = outcome_index(outcome);
  if (v == 0 || v == 2) {
    const double sign = v == 0 ? 1.0 : -1.0;
    const C pr = (1.0 / 16.0) * std::polar(1.0, -6.0 * kPi * lambda) *
                 std::pow(1.0 + std::polar(1.0, 4.0 * kPi * lambda), 2) *
                 std::pow(sign + std::polar(1.0, 2.0 * kPi * lambda), 2);
    return std::abs(pr);
  }
  const C pr = -(1.0 / 8.0) * std::polar(1.0, -4.0 * kPi * lambda) *
               std::pow(-1.0 + std::polar(1.0, 4.0 * kPi * lambda), 2);
  return std::abs(pr);
}

double qpea_prob_trig(double lambda, const std::string& outcome) {
  check_lambda(lambda);
  const double c2 = std::pow(std::cos(2.0 * kPi * lambda), 2);
  switch (outcome_index(outcome)) {
    case 0: return c2 * std::pow(std::cos(kPi * lambda), 2);
    case 2: return c2 * std::pow(std::sin(kPi * lambda), 2);
    default: return 0.5 * std::pow(std::sin(2.0 * kPi * lambda), 2);
  }
}

BruteForceResult brute_force_hhl(const HermitianProblem& problem, int n) {
  const Matrix& a = problem.matrix();
  const Eigen::Index d = a.rows();
  const Eigen::Index big_n = Eigen::Index{1} << n;
  if (n < 1) throw DomainError("register size must be at least 1");
  if ((big_n * d * 2) > 1024) throw DomainError("brute force is limited to 10 qubits");

  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  const Matrix& u = es.eigenvectors();
  const Eigen::VectorXd& w = es.eigenvalues();

  // ||A^{-1} b|| by a direct solve.
  const Vector x = a.partialPivLu().solve(problem.rhs());
  const double c = 1.0 / x.norm();

  // W = (F^dag (x) I) . sum_y |y><y| (x) U^y . (H^n (x) I), acting on R (x) V.
  const Eigen::Index dim = big_n * d;
  Matrix controlled = Matrix::Zero(dim, dim);
  for (Eigen::Index y = 0; y < big_n; ++y) {
    Vector phases(d);
    for (Eigen::Index j = 0; j < d; ++j) phases[j] = std::polar(1.0, 2.0 * kPi * static_cast<double>(y) * w[j]);
    controlled.block(y * d, y * d, d, d) = u * phases.asDiagonal() * u.adjoint();
  }
  Matrix fourier_inv(big_n, big_n), hadamards(big_n, big_n);
  for (Eigen::Index r = 0; r < big_n; ++r) {
    for (Eigen::Index col = 0; col < big_n; ++col) {
      fourier_inv(r, col) = std::polar(1.0 / std::sqrt(static_cast<double>(big_n)),
                                       -2.0 * kPi * static_cast<double>(r * col) / static_cast<double>(big_n));
      const int parity = std::popcount(static_cast<std::uint64_t>(r & col)) & 1;
      hadamards(r, col) = (parity ? -1.0 : 1.0) / std::sqrt(static_cast<double>(big_n));
    }
  }
  const Matrix id = Matrix::Identity(d, d);
  const Matrix qpe = kron(fourier_inv, id) * controlled * kron(hadamards, id);

  Vector start = Vector::Zero(dim);
  start.head(d) = problem.rhs();
  const Vector after_qpe = qpe * start;

  // Only the |1>_A branch of the encoding survives the projection: amplitude c/x, none at x = 0.
  Vector branch1 = Vector::Zero(dim);
  for (Eigen::Index reg = 0; reg < big_n; ++reg) {
    const double amp = reg == 0 ? 0.0 : c / static_cast<double>(reg);
    branch1.segment(reg * d, d) = amp * after_qpe.segment(reg * d, d);
  }
  const Vector projected = qpe.adjoint() * branch1;
  const double success = projected.squaredNorm();
  if (success <= 0.0) throw ImpossibleOutcomeError("ancilla never reads 1");

  Matrix rho = Matrix::Zero(d, d);
  for (Eigen::Index reg = 0; reg < big_n; ++reg) {
    const Vector block = projected.segment(reg * d, d);
    rho += block * block.adjoint();
  }
  rho /= success;
  BruteForceResult out;
  out.solution = DensityMatrix::from_matrix(std::move(rho));
  out.success_probability = success;
  return out;
}

}  // namespace hhl::oracles
