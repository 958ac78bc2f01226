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

#include "qrep/register_state.hpp"

#include <cmath>
#include <numbers>

namespace qrep {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

void RegisterScenario::validate() const {
  if (qubits_per_register < 1)
    throw std::invalid_argument("RegisterScenario: N must be >= 1");
  const double half_pi = std::numbers::pi / 2.0;
  if (theta_L < 0.0 || theta_L > half_pi || theta_R < 0.0 || theta_R > half_pi)
    throw std::invalid_argument("RegisterScenario: theta must lie in [0, pi/2]");
  if (eta_L < 0.0 || eta_L > 1.0 || eta_R < 0.0 || eta_R > 1.0)
    throw std::invalid_argument("RegisterScenario: eta must lie in [0, 1]");
  tmsv.validate();
}

Complex tmsv_amplitude(int n, const TmsvParams& p) {
  if (n < 0) throw std::invalid_argument("tmsv_amplitude: n must be >= 0");
  p.validate();
  if (p.mean_n == 0.0) return n == 0 ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
  const Complex base = -std::exp(Complex{0.0, p.phase});
  const double mag =
      std::sqrt(std::pow(p.mean_n, n) / std::pow(1.0 + p.mean_n, n + 1));
  return std::pow(base, n) * mag;
}

double beta_amp(int n, double theta, int N) {
  if (n < 0 || n > N) throw std::invalid_argument("beta_amp: n must lie in [0, N]");
  return std::pow(std::cos(theta), n) * std::pow(std::sin(theta), N - n);
}

double delta_amp(int n, double theta, int N) {
  if (n < 0 || n > N) throw std::invalid_argument("delta_amp: n must lie in [0, N]");
  // N! / (2^N N^n (N-n)!) = C(N,n) n! / (2^N N^n)
  double factor = 1.0;
  for (int i = 0; i < n; ++i) factor *= static_cast<double>(N - i) / N;  // N!/(N^n (N-n)!)
  factor /= std::pow(2.0, N);
  return std::sqrt(factor) * beta_amp(n, theta, N);
}

double loss_amp(int n, int l, double eta) {
  if (l < 0 || l > n) throw std::invalid_argument("loss_amp: l must lie in [0, n]");
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("loss_amp: eta must lie in [0, 1]");
  return std::sqrt(binomial(n, n - l)) * std::pow(eta, (n - l) / 2.0) *
         std::pow(1.0 - eta, l / 2.0);
}

Complex lambda_element(int n, int m, int l, int r, const RegisterScenario& sc) {
  sc.validate();
  if (n < 0 || m < 0 || l < 0 || r < 0 || l > std::min(n, m) || r > std::min(n, m))
    throw std::invalid_argument("lambda_element: require 0 <= l,r <= min(n,m)");
  const int N = sc.qubits_per_register;
  // Theta gates: a register cannot absorb more than N photons.
  if (n - l > N || n - r > N || m - l > N || m - r > N) return {0.0, 0.0};

  const Complex cn = tmsv_amplitude(n, sc.tmsv);
  const Complex cm = tmsv_amplitude(m, sc.tmsv);
  const double eps = loss_amp(n, r, sc.eta_R) * loss_amp(n, l, sc.eta_L) *
                     loss_amp(m, r, sc.eta_R) * loss_amp(m, l, sc.eta_L);
  const double deltas =
      delta_amp(n - l, sc.theta_L, N) * delta_amp(n - r, sc.theta_R, N) *
      delta_amp(m - l, sc.theta_L, N) * delta_amp(m - r, sc.theta_R, N);
  return cn * std::conj(cm) * eps * deltas;
}

int default_photon_cutoff(const TmsvParams& p, int N, double tail_tol) {
  p.validate();
  if (p.mean_n == 0.0) return N;
  const double q = p.mean_n / (1.0 + p.mean_n);  // |c_n|^2 tail is geometric: q^{C+1}
  int c = N;
  while (std::pow(q, c + 1) >= tail_tol) {
    ++c;
    if (c > 100000) throw std::runtime_error("default_photon_cutoff: tail does not converge");
  }
  return c;
}

DensityMatrix build_register_density(const RegisterScenario& sc, int n_cutoff) {
  sc.validate();
  const int N = sc.qubits_per_register;
  if (n_cutoff < N)
    throw std::invalid_argument("build_register_density: n_cutoff must be >= N");
  const bool lossy = sc.eta_L < 1.0 || sc.eta_R < 1.0;
  if (lossy && sc.tmsv.mean_n > 0.0) {
    const double q = sc.tmsv.mean_n / (1.0 + sc.tmsv.mean_n);
    if (std::pow(q, n_cutoff + 1) >= 1e-12)
      throw std::invalid_argument(
          "build_register_density: cutoff too small for 1e-12 TMSV tail");
  }
  // Lossless sums terminate at N exactly (eps(n,l>0)=0 and Theta gates).
  const int top = lossy ? n_cutoff : std::min(n_cutoff, N);

  const int D = (N + 1) * (N + 1);
  ComplexMatrix out = ComplexMatrix::Zero(D, D);
  std::vector<Complex> cs(static_cast<size_t>(top) + 1);
  for (int n = 0; n <= top; ++n) cs[static_cast<size_t>(n)] = tmsv_amplitude(n, sc.tmsv);

  for (int n = 0; n <= top; ++n) {
    for (int m = 0; m <= top; ++m) {
      const int lr_max = std::min(n, m);
      for (int l = std::max({0, n - N, m - N}); l <= lr_max; ++l) {
        const double epsL = loss_amp(n, l, sc.eta_L) * loss_amp(m, l, sc.eta_L);
        if (epsL == 0.0) continue;
        const double dl = delta_amp(n - l, sc.theta_L, N) * delta_amp(m - l, sc.theta_L, N);
        for (int r = std::max({0, n - N, m - N}); r <= lr_max; ++r) {
          const double epsR = loss_amp(n, r, sc.eta_R) * loss_amp(m, r, sc.eta_R);
          if (epsR == 0.0) continue;
          const double dr = delta_amp(n - r, sc.theta_R, N) * delta_amp(m - r, sc.theta_R, N);
          const Complex lam = cs[static_cast<size_t>(n)] * std::conj(cs[static_cast<size_t>(m)]) *
                              epsL * epsR * dl * dr;
          const int row = (N - n + l) * (N + 1) + (N - n + r);
          const int col = (N - m + l) * (N + 1) + (N - m + r);
          out(row, col) += lam;
        }
      }
    }
  }
  return DensityMatrix(std::move(out), {N + 1, N + 1}, false);
}

DensityMatrix build_register_density(const RegisterScenario& sc) {
  return build_register_density(sc, default_photon_cutoff(sc.tmsv, sc.qubits_per_register));
}

double success_probability(const DensityMatrix& rho, int N) {
  const double p = std::pow(4.0, N) * rho.trace();
  if (p > 1.0 + 1e-12)
    throw std::runtime_error("success_probability: 4^N Tr rho > 1 (invalid scenario or cutoff)");
  return std::clamp(p, 0.0, 1.0);
}

std::vector<Complex> lossless_state(const RegisterScenario& sc) {
  sc.validate();
  if (sc.eta_L != 1.0 || sc.eta_R != 1.0)
    throw std::invalid_argument("lossless_state: requires eta_L = eta_R = 1");
  const int N = sc.qubits_per_register;
  std::vector<Complex> amps(static_cast<size_t>(N) + 1);
  for (int n = 0; n <= N; ++n)
    amps[static_cast<size_t>(n)] = tmsv_amplitude(n, sc.tmsv) *
                                   delta_amp(n, sc.theta_L, N) * delta_amp(n, sc.theta_R, N);
  return amps;
}

}  // namespace qrep
