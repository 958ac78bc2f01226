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

#pragma once

#include "qrep/linalg.hpp"
#include "qrep/register_state.hpp"

namespace qrep {

/// Closed-form N=1 design. theta_L is derived from theta_R through the bond
/// tan^2(theta_L) = eta |c1|^2 / (tan^2(theta_R) |c0|^2), which makes
/// rho_11 = rho_44 so that swaps do not drive the state separable.
struct OneQubitDesign {
  double theta_R = 0.0;
  double theta_L = 0.0;
  double mean_n = 0.0;
  double eta = 1.0;
  double p_target = 0.0;
};

/// The 4x4 one-sided-loss register state (basis |00>,|01>,|10>,|11>),
/// unnormalized with its 1/4 prefactor; trace times 4 is the success
/// probability. Loss eta applies to the right channel only.
DensityMatrix one_qubit_density(double theta_L, double theta_R, const TmsvParams& p,
                                double eta);

/// theta_L solving the bond for the given theta_R.
double bond_theta_L(double theta_R, double eta, const TmsvParams& p);

/// P(theta_R, <n>; eta) = sin^2(tR) |c1|^2 |c0|^2 (2 eta + (1-eta) tan^2 tR)
///                        / (tan^2(tR) |c0|^2 + eta |c1|^2),
/// the success probability of the bonded design (equals 4 Tr rho).
double success_prob_bonded(double theta_R, double mean_n, double eta);

/// Squeezing that maximizes P at fixed theta_R and eta:
/// <n> = sqrt(1 - eta / (eta + tan^2 theta_R)).
double optimal_mean_n(double theta_R, double eta);

/// Largest success probability attainable at the optimal squeezing over
/// theta_R in (0, 0.66); feasibility bound for solve_theta_R.
double max_success_prob(double eta);

/// Smallest theta_R in (0, 0.66) with P(theta_R; eta) = p_target at the
/// optimal squeezing, via the quartic in z = sqrt(1 - eta/(eta + tan^2 tR))
/// solved with companion-matrix eigenvalues and validated by substitution.
/// Throws if p_target is unattainable.
double solve_theta_R(double p_target, double eta);

/// Scalar prefactor K of the bonded unnormalized state: rho = K * diag-form.
/// Tr rho = K (2 + x_0) and P = 4 Tr rho.
double bonded_prefactor(double theta_R, double mean_n, double eta);

/// Normalized state after s swaps, all Bell measurements projecting onto
/// (|00>+|11>)/sqrt(2): diag(a, x_s a, 0, a) with off-diagonal
/// a (-e^{i phi})^{s+1}, x_s = (s+1)(eta^{-1}-1) tan^2(theta_R), a = 1/(2+x_s).
DensityMatrix swapped_state_analytic(int s, double theta_R, double eta,
                                     const TmsvParams& p);

/// Full design pipeline: p_target -> theta_R -> optimal <n> -> bonded theta_L.
OneQubitDesign design_for_target(double p_target, double eta);

}  // namespace qrep
