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

#include <string>

#include "qrep/linalg.hpp"

namespace qrep {

/// Joint outcome probability table P(a,b) for one measurement basis.
struct MeasurementRecord {
  Eigen::MatrixXd joint_probs;
  std::string basis_label;
};

enum class PauliBasis { Z, X };

/// Devetak-Winter bookkeeping. key_bits_per_success is the unweighted mean
/// of the per-basis keys beta*I - chi (may be negative); clamped() applies
/// the no-negative-key policy used for rate normalization.
struct KeyRateResult {
  double mutual_info_bits = 0.0;    // mean of the two bases
  double holevo_bits = 0.0;         // mean of the two bases
  double key_bits_per_success = 0.0;
  double reconciliation_beta = 1.0;
  double mi_z = 0.0, mi_x = 0.0;
  double holevo_z = 0.0, holevo_x = 0.0;
  double key_z = 0.0, key_x = 0.0;

  double clamped() const { return key_bits_per_success > 0.0 ? key_bits_per_success : 0.0; }
};

struct BellTestResult {
  double chsh_S = 0.0;
  double qber_Q = 0.0;
};

/// |sum of negative eigenvalues| of the partial transpose over the subsystem
/// `split` of a normalized bipartite state.
double negativity(const DensityMatrix& rho, int split = 0);

/// S = sqrt(2) (<sx sx> + <sz sz>) for the measurement set
/// M_A = {sx, sz}, M_B = {sx, (sx+sz)/sqrt(2), (sx-sz)/sqrt(2)}.
double chsh_value(const DensityMatrix& rho);

/// Q = (1 - <sx (x) sx>)/2: probability of differing outcomes when both
/// parties measure sigma_x.
double qber(const DensityMatrix& rho);

/// I(a:b) = sum P(a,b) log2( P(a,b) / (P(a) P(b)) ).
double mutual_information(const MeasurementRecord& rec);

/// Holevo bound on Eve's information about Alice's outcome:
/// chi = S(rho_AB) - sum_a P(a) S(rho_B^a) for a projective measurement of
/// sigma_z or sigma_x on A (Bob purifies Eve's conditional states).
double holevo_bound(const DensityMatrix& rho_AB, PauliBasis alice_basis);

/// K = beta I(a:b) - chi per basis (sigma_z and sigma_x), combined as the
/// unweighted mean; Alice reconciliates.
KeyRateResult devetak_winter_key(const DensityMatrix& rho);

BellTestResult bell_test(const DensityMatrix& rho);

/// Device-independent rate r = 1 - h(Q) - h((1+sqrt((S/2)^2-1))/2), clamped
/// to [0,1]; zero when S <= 2.
double di_key_rate(double Q, double S);

/// Repeaterless point-to-point bound -log2(1 - eta_total), bits per use.
double plob_bound(double eta_total);

/// h(x) = -x log2 x - (1-x) log2(1-x), h(0) = h(1) = 0.
double binary_entropy(double x);

}  // namespace qrep
