// Copyright 2026 The qrep Authors
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

#include "qrep/single_qubit.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace qrep {

namespace {

double c0_sq(double mean_n) { return 1.0 / (1.0 + mean_n); }
double c1_sq(double mean_n) { return mean_n / ((1.0 + mean_n) * (1.0 + mean_n)); }

void check_eta(double eta) {
  if (eta <= 0.0 || eta > 1.0)
    throw std::invalid_argument("eta must lie in (0, 1]");
}

}  // namespace

DensityMatrix one_qubit_density(double theta_L, double theta_R, const TmsvParams& p,
                                double eta) {
  check_eta(eta);
  p.validate();
  const Complex c0 = tmsv_amplitude(0, p);
  const Complex c1 = tmsv_amplitude(1, p);
  const double cL = std::cos(theta_L), sL = std::sin(theta_L);
  const double cR = std::cos(theta_R), sR = std::sin(theta_R);

  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = std::norm(c1) * eta * cL * cL * cR * cR;
  m(0, 3) = c1 * std::conj(c0) * std::sqrt(eta) * sR * sL * cR * cL;
  m(3, 0) = std::conj(m(0, 3));
  m(1, 1) = std::norm(c1) * (1.0 - eta) * cL * cL * sR * sR;
  m(3, 3) = std::norm(c0) * sL * sL * sR * sR;
  m *= 0.25;
  return DensityMatrix(std::move(m), {2, 2}, false);
}

double bond_theta_L(double theta_R, double eta, const TmsvParams& p) {
  check_eta(eta);
  p.validate();
  const double t = std::tan(theta_R);
  if (t == 0.0) throw std::invalid_argument("bond_theta_L: theta_R must be nonzero");
  const double tan2_L = eta * c1_sq(p.mean_n) / (t * t * c0_sq(p.mean_n));
  return std::atan(std::sqrt(tan2_L));
}

double success_prob_bonded(double theta_R, double mean_n, double eta) {
  check_eta(eta);
  const double s2 = std::sin(theta_R) * std::sin(theta_R);
  const double t2 = std::tan(theta_R) * std::tan(theta_R);
  const double a = c1_sq(mean_n), b = c0_sq(mean_n);
  return s2 * a * b * (2.0 * eta + (1.0 - eta) * t2) / (t2 * b + eta * a);
}

double optimal_mean_n(double theta_R, double eta) {
  check_eta(eta);
  const double t2 = std::tan(theta_R) * std::tan(theta_R);
  return std::sqrt(1.0 - eta / (eta + t2));
}

double max_success_prob(double eta) {
  check_eta(eta);
  // P(theta_R; eta) at optimal <n> increases monotonically on (0, 0.66);
  // the feasible supremum sits at the 0.66 boundary.
  const double edge = 0.66;
  return success_prob_bonded(edge, optimal_mean_n(edge, eta), eta);
}

double bonded_prefactor(double theta_R, double mean_n, double eta) {
  check_eta(eta);
  const double s2 = std::sin(theta_R) * std::sin(theta_R);
  const double t2 = std::tan(theta_R) * std::tan(theta_R);
  const double a = c1_sq(mean_n), b = c0_sq(mean_n);
  return 0.25 * s2 * a * b * eta / (t2 * b + eta * a);
}

double solve_theta_R(double p_target, double eta) {
  check_eta(eta);
  if (p_target <= 0.0 || p_target >= 1.0)
    throw std::invalid_argument("solve_theta_R: p_target must lie in (0, 1)");
  if (p_target > max_success_prob(eta))
    throw std::runtime_error("solve_theta_R: p_target unattainable for this eta");

  // p + 2p z + eta(p-2) z^2 + p(2 eta - 2) z^3 + (-p + (1+p) eta + eta^2) z^4 = 0
  const double p = p_target;
  const double a4 = -p + (1.0 + p) * eta + eta * eta;
  const double a3 = p * (2.0 * eta - 2.0);
  const double a2 = eta * (p - 2.0);
  const double a1 = 2.0 * p;
  const double a0 = p;
  if (a4 == 0.0) throw std::runtime_error("solve_theta_R: degenerate quartic");

  Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
  companion(0, 3) = -a0 / a4;
  companion(1, 3) = -a1 / a4;
  companion(2, 3) = -a2 / a4;
  companion(3, 3) = -a3 / a4;
  companion(1, 0) = companion(2, 1) = companion(3, 2) = 1.0;
  const Eigen::Vector4cd roots = companion.eigenvalues();

  const auto prob_at = [eta](double theta) {
    return success_prob_bonded(theta, optimal_mean_n(theta, eta), eta);
  };

  std::vector<double> thetas;
  for (int i = 0; i < 4; ++i) {
    const Complex z = roots(i);
    if (std::abs(z.imag()) > 1e-9) continue;
    const double zr = z.real();
    if (zr <= 0.0 || zr >= 1.0) continue;
    const double tan2 = eta * zr * zr / (1.0 - zr * zr);
    const double theta = std::atan(std::sqrt(tan2));
    if (theta >= 0.66) continue;
    // Validate by substitution; squaring in the z change of variables can
    // introduce spurious real roots.
    if (std::abs(prob_at(theta) - p) > 1e-6 * std::max(p, 1e-9)) continue;
    thetas.push_back(theta);
  }
  if (thetas.empty())
    throw std::runtime_error("solve_theta_R: no admissible quartic root in (0, 0.66)");
  // Smallest theta_R = smallest tan^2(theta_R).
  double theta = *std::min_element(thetas.begin(), thetas.end());

  // Bisection polish: P is monotone increasing here, so a sign-changing
  // bracket around the quartic root pins the residual below 1e-12.
  double lo = theta, hi = theta;
  while (lo > 1e-300 && prob_at(lo) > p) lo *= 0.5;
  while (hi < 0.66 && prob_at(hi) < p) hi = std::min(0.66, hi * 1.0625 + 1e-12);
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (prob_at(mid) < p ? lo : hi) = mid;
  }
  theta = 0.5 * (lo + hi);
  if (std::abs(prob_at(theta) - p) > 1e-10)
    throw std::runtime_error("solve_theta_R: residual exceeds 1e-10 after polish");
  return theta;
}

DensityMatrix swapped_state_analytic(int s, double theta_R, double eta,
                                     const TmsvParams& p) {
  check_eta(eta);
  p.validate();
  if (s < 0) throw std::invalid_argument("swapped_state_analytic: s must be >= 0");
  const double t2 = std::tan(theta_R) * std::tan(theta_R);
  const double x = (s + 1) * (1.0 / eta - 1.0) * t2;
  const double a = 1.0 / (2.0 + x);
  const Complex off = std::pow(-std::exp(Complex{0.0, p.phase}), s + 1);

  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = a;
  m(1, 1) = x * a;
  m(3, 3) = a;
  m(0, 3) = a * off;
  m(3, 0) = std::conj(m(0, 3));
  return DensityMatrix(std::move(m), {2, 2}, true);
}

OneQubitDesign design_for_target(double p_target, double eta) {
  OneQubitDesign d;
  d.eta = eta;
  d.p_target = p_target;
  d.theta_R = solve_theta_R(p_target, eta);
  d.mean_n = optimal_mean_n(d.theta_R, eta);
  d.theta_L = bond_theta_L(d.theta_R, eta, TmsvParams{d.mean_n, 0.0});
  return d;
}

}  // namespace qrep
