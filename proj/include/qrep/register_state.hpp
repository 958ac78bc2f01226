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

#include <vector>

#include "qrep/linalg.hpp"

namespace qrep {

/// Two-mode squeezed vacuum source: mean photon number per mode and phase.
struct TmsvParams {
  double mean_n = 0.5;
  double phase = 0.0;

  void validate() const {
    if (mean_n < 0.0) throw std::invalid_argument("TmsvParams: mean_n must be >= 0");
  }
};

/// Everything needed to build the two-register (L,R) state: register size N,
/// superposition angles, source parameters and channel transmissions.
struct RegisterScenario {
  int qubits_per_register = 1;
  double theta_L = 0.0;
  double theta_R = 0.0;
  TmsvParams tmsv;
  double eta_L = 1.0;
  double eta_R = 1.0;

  void validate() const;
};

/// Index k of the symmetric register vector |I_k> (k bright qubits out of N).
struct SymmetricBasisLabel {
  int bright_count = 0;
};

/// c_n = (-e^{i phi})^n sqrt(<n>^n / (1+<n>)^{n+1}); sum_n |c_n|^2 = 1.
Complex tmsv_amplitude(int n, const TmsvParams& p);

/// beta(n,theta) = cos(theta)^n sin(theta)^{N-n}, 0 <= n <= N.
double beta_amp(int n, double theta, int N);

/// Delta(n,theta) = sqrt(N! / (2^N N^n (N-n)!)) * beta(n,theta).
double delta_amp(int n, double theta, int N);

/// Loss amplitude for losing l of n photons through transmission eta:
/// eps(n,l) = sqrt(C(n,n-l)) eta^{(n-l)/2} (1-eta)^{l/2}; sum_l eps^2 = 1.
double loss_amp(int n, int l, double eta);

/// Matrix element Lambda(n,m,l,r) of the traced-out two-register state,
/// including the four step-function gates (zero whenever a register would
/// have had to absorb more than N photons).
Complex lambda_element(int n, int m, int l, int r, const RegisterScenario& sc);

/// Smallest cutoff C with TMSV tail weight sum_{n>C} |c_n|^2 < tail_tol.
int default_photon_cutoff(const TmsvParams& p, int N, double tail_tol = 1e-12);

/// The unnormalized (N+1)^2-dimensional two-register density matrix over the
/// basis |I_{kL}>_L (x) |I_{kR}>_R with flat index kL*(N+1)+kR, bright counts
/// kL = N-n+l, kR = N-n+r. The trace times 4^N is the success probability.
DensityMatrix build_register_density(const RegisterScenario& sc, int n_cutoff);
DensityMatrix build_register_density(const RegisterScenario& sc);

/// P_s = 4^N Tr rho. Throws if the result exceeds 1 (invalid scenario/cutoff).
double success_probability(const DensityMatrix& rho, int N);

/// Schmidt-diagonal amplitudes c_n Delta(n,theta_L) Delta(n,theta_R) of the
/// lossless state, n = 0..N. Requires eta_L = eta_R = 1.
std::vector<Complex> lossless_state(const RegisterScenario& sc);

}  // namespace qrep
