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

#include <doctest.h>

#include <numbers>

#include "qrep/fock.hpp"
#include "qrep/metrics.hpp"
#include "qrep/single_qubit.hpp"
#include "test_helpers.hpp"

using namespace qrep;
using namespace qrep::testing;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752;

FockSystem fock_state(std::vector<int> dims, const std::vector<int>& levels) {
  long idx = 0;
  for (size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + levels[k];
  long dim = 1;
  for (int d : dims) dim *= d;
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  rho(idx, idx) = 1.0;
  std::vector<std::string> labels(dims.size());
  for (size_t k = 0; k < labels.size(); ++k) labels[k] = "m" + std::to_string(k);
  return FockSystem(std::move(dims), std::move(labels), std::move(rho));
}

}  // namespace

TEST_CASE("prepare_tmsv: vacuum limit, amplitudes, truncation norm") {
  const FockSystem vac = prepare_tmsv(TmsvParams{0.0, 0.0}, 4);
  CHECK(vac.trace() == doctest::Approx(1.0));
  CHECK(vac.rho()(0, 0).real() == doctest::Approx(1.0));

  const TmsvParams p{0.5, 0.0};
  const FockSystem sys = prepare_tmsv(p, 12);
  const int d = 13;
  for (int n = 0; n <= 3; ++n)
    for (int m = 0; m <= 3; ++m) {
      const Complex expect = tmsv_amplitude(n, p) * std::conj(tmsv_amplitude(m, p));
      CHECK(std::abs(sys.rho()(n * d + n, m * d + m) - expect) < 1e-14);
    }
  // norm = 1 - (1/3)^13 after truncating at 12 photons
  CHECK(sys.trace() ==
        doctest::Approx(1.0 - std::pow(1.0 / 3.0, 13)).epsilon(1e-12));
}

TEST_CASE("prepare_qubit_emitter: limits and norm") {
  const FockSystem dark = prepare_qubit_emitter(0.0);
  CHECK(dark.rho()(0, 0).real() == doctest::Approx(1.0));
  const FockSystem bright = prepare_qubit_emitter(std::numbers::pi / 2);
  CHECK(bright.rho()(3, 3).real() == doctest::Approx(1.0));
  const FockSystem even = prepare_qubit_emitter(std::numbers::pi / 4);
  CHECK(even.trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(even.rho()(0, 3).real() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("apply_beamsplitter: single photon split, HOM, identity transmission") {
  FockSystem one = fock_state({2, 2}, {1, 0});
  apply_beamsplitter(one, 0, 1, kInvSqrt2);
  // |1,0> -> (|1,0> + |0,1|>)/sqrt(2) up to the sign convention: mode a
  // splits as (A - B)/sqrt(2).
  const int db = one.dims()[1];
  const long i10 = 1 * db + 0, i01 = 0 * db + 1;
  CHECK(one.rho()(i10, i10).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(one.rho()(i01, i01).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(one.rho()(i10, i01).real() == doctest::Approx(-0.5).epsilon(1e-12));

  FockSystem single_b = fock_state({2, 2}, {0, 1});
  apply_beamsplitter(single_b, 0, 1, kInvSqrt2);
  const int db2 = single_b.dims()[1];
  CHECK(single_b.rho()(0 * db2 + 1, 1 * db2 + 0).real() ==
        doctest::Approx(0.5).epsilon(1e-12));  // + sign on the b arm

  // Hong-Ou-Mandel: |1,1> -> (|2,0> - |0,2>)/sqrt(2).
  FockSystem hom = fock_state({2, 2}, {1, 1});
  apply_beamsplitter(hom, 0, 1, kInvSqrt2);
  const int db3 = hom.dims()[1];
  const long i20 = 2 * db3 + 0, i02 = 0 * db3 + 2, i11 = 1 * db3 + 1;
  CHECK(hom.rho()(i20, i20).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(hom.rho()(i02, i02).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(hom.rho()(i11, i11)) < 1e-14);
  CHECK(hom.rho()(i20, i02).real() == doctest::Approx(-0.5).epsilon(1e-12));

  FockSystem id = fock_state({3, 3}, {2, 1});
  const ComplexMatrix before = id.rho();
  apply_beamsplitter(id, 0, 1, 1.0);
  // transmission 1 keeps the state on the (grown) original levels
  const int gd = id.dims()[1];
  CHECK(id.rho()(2 * gd + 1, 2 * gd + 1).real() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(apply_beamsplitter(id, 0, 0, kInvSqrt2), std::invalid_argument);
}

TEST_CASE("apply_beamsplitter preserves the norm of mixed multiphoton states") {
  std::mt19937_64 rng(51);
  FockSystem sys = fock_state({4, 3, 2}, {0, 0, 0});
  sys.rho() = random_density(24, rng);
  const double before = sys.trace();
  apply_beamsplitter(sys, 0, 2, 0.6);
  CHECK(sys.trace() == doctest::Approx(before).epsilon(1e-10));
}

TEST_CASE("apply_beamsplitter raises instead of exceeding the mode capacity") {
  FockSystem big = fock_state({40, 40}, {0, 0});
  CHECK_THROWS_AS(apply_beamsplitter(big, 0, 1, kInvSqrt2), std::runtime_error);
}

TEST_CASE("apply_loss: one-photon pin, identity at eta=1, binomial oracle") {
  FockSystem one = fock_state({2}, {1});
  apply_loss(one, 0, 0.3);
  CHECK(one.rho()(0, 0).real() == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(one.rho()(1, 1).real() == doctest::Approx(0.3).epsilon(1e-12));

  FockSystem two = fock_state({3}, {2});
  const ComplexMatrix before = two.rho();
  apply_loss(two, 0, 1.0);
  CHECK(max_abs_diff(two.rho(), before) == 0.0);

  apply_loss(two, 0, 0.5);
  CHECK(two.rho()(0, 0).real() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(two.rho()(1, 1).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(two.rho()(2, 2).real() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(two.trace() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("apply_loss equals beamsplitter-to-ancilla plus partial trace") {
  // |2> through eta = 0.36 loss vs a transmission-0.6 beamsplitter to vacuum.
  FockSystem direct = fock_state({3}, {2});
  apply_loss(direct, 0, 0.36);

  FockSystem pair = fock_state({3, 1}, {2, 0});
  apply_beamsplitter(pair, 0, 1, 0.6);
  trace_out_mode(pair, 1);
  // compare the first three levels
  for (int n = 0; n < 3; ++n)
    CHECK(pair.rho()(n, n).real() ==
          doctest::Approx(direct.rho()(n, n).real()).epsilon(1e-12));
}

TEST_CASE("measure_pnr: ideal conditioning, dark counts, thinning, completeness") {
  const ErrorModelParams ideal;
  FockSystem split = fock_state({2, 2}, {1, 0});
  apply_beamsplitter(split, 0, 1, kInvSqrt2);
  const FockSystem click = measure_pnr(split, 0, 1, ideal);
  CHECK(click.trace() == doctest::Approx(0.5).epsilon(1e-12));

  ErrorModelParams dark;
  dark.p_dark = 0.013;
  const FockSystem vac = fock_state({3}, {0});
  CHECK(measure_pnr(vac, 0, 1, dark).trace() == doctest::Approx(0.013).epsilon(1e-12));

  ErrorModelParams lossy;
  lossy.eta_detector = 0.9;
  const FockSystem one = fock_state({2}, {1});
  CHECK(measure_pnr(one, 0, 1, lossy).trace() == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(measure_pnr(one, 0, 0, lossy).trace() == doctest::Approx(0.1).epsilon(1e-12));

  // POVM completeness: conditioned traces over all outcomes resum to Tr rho.
  std::mt19937_64 rng(52);
  FockSystem sys = fock_state({4, 2}, {0, 0});
  sys.rho() = random_density(8, rng);
  ErrorModelParams err;
  err.eta_detector = 0.8;
  err.p_dark = 0.05;
  double total = 0.0;
  for (int outcome = 0; outcome <= 4; ++outcome)
    total += measure_pnr(sys, 0, outcome, err).trace();
  CHECK(total == doctest::Approx(sys.trace()).epsilon(1e-10));

  CHECK_THROWS_AS(measure_pnr(sys, 0, 9, err), std::invalid_argument);
}

TEST_CASE("simulate_segment: ideal optics reproduce the analytic matrix (cutoff 8)") {
  RegisterScenario sc;
  sc.qubits_per_register = 1;
  sc.theta_L = std::numbers::pi / 4;
  sc.theta_R = std::numbers::pi / 4;
  sc.tmsv = TmsvParams{0.5, 0.0};
  sc.eta_R = 0.5;
  const DensityMatrix sim = simulate_segment(sc, ErrorModelParams{}, 8);
  const DensityMatrix analytic = one_qubit_density(sc.theta_L, sc.theta_R, sc.tmsv, 0.5);
  // Four accepted patterns make the simulated trace the full success
  // probability: 4x the single-pattern matrix. With one-sided loss the
  // accepted amplitudes involve only c_0 and c_1, so truncation does not
  // bite and the match is machine-precision.
  CHECK(max_abs_diff(sim.matrix(), 4.0 * analytic.matrix()) < 1e-10);
  CHECK(sim.trace() == doctest::Approx(4.0 * analytic.trace()).epsilon(1e-12));
}

TEST_CASE("simulate_segment: no coupling means no entanglement") {
  RegisterScenario sc;
  sc.qubits_per_register = 1;
  sc.theta_L = 0.6;
  sc.theta_R = 0.6;
  sc.tmsv = TmsvParams{0.4, 0.0};
  sc.eta_R = 0.8;
  ErrorModelParams err;
  err.eta_coupling = 0.0;
  err.p_dark = 0.01;  // some accepted events still occur via dark counts
  const DensityMatrix out = simulate_segment(sc, err, 6);
  CHECK(out.trace() > 0.0);
  CHECK(negativity(out.normalized_copy()) < 1e-9);
}

TEST_CASE("simulate_segment: dark-count-dominated acceptance kills the entanglement") {
  RegisterScenario sc;
  sc.qubits_per_register = 1;
  sc.theta_L = 0.5;
  sc.theta_R = 0.5;
  sc.tmsv = TmsvParams{0.3, 0.0};
  sc.eta_R = 0.7;

  // At p_dark = 1 the at-most-one-extra-count model registers >= 1 count on
  // every detector, so the one-click acceptance patterns carry zero weight.
  ErrorModelParams certain;
  certain.p_dark = 1.0;
  CHECK(simulate_segment(sc, certain, 6).trace() == doctest::Approx(0.0));

  ErrorModelParams heavy;
  heavy.p_dark = 0.999;
  const DensityMatrix out = simulate_segment(sc, heavy, 6);
  CHECK(out.trace() > 0.0);
  CHECK(negativity(out.normalized_copy()) < 1e-3);
}

TEST_CASE("lossy_tmsv_negativity: lossless limit matches the Schmidt formula") {
  const TmsvParams p{0.5, 0.0};
  double abs_sum = 0.0, norm = 0.0;
  for (int n = 0; n <= 20; ++n) {
    abs_sum += std::abs(tmsv_amplitude(n, p));
    norm += std::norm(tmsv_amplitude(n, p));
  }
  abs_sum /= std::sqrt(norm);
  const double schmidt = (abs_sum * abs_sum - 1.0) / 2.0;
  CHECK(lossy_tmsv_negativity(p, 1.0, 20) == doctest::Approx(schmidt).epsilon(1e-9));
  // Loss strictly reduces it.
  CHECK(lossy_tmsv_negativity(p, 0.5, 20) < schmidt);
  CHECK(lossy_tmsv_negativity(p, 0.1, 20) < lossy_tmsv_negativity(p, 0.5, 20));
}
