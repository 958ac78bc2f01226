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

#include "qrep/pipeline.hpp"

#include <cmath>

namespace qrep {

uint64_t derive_seed(uint64_t master, uint64_t index) {
  uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

DensityMatrix settle_phase_frame(const DensityMatrix& rho, int swaps, double phi) {
  if (rho.dims() != std::vector<int>{2, 2})
    throw std::invalid_argument("settle_phase_frame: state must have dims (2,2)");
  // Known carried phase: (-e^{i phi})^{s+1}. Rotate the right qubit's |1>
  // component by its conjugate.
  const Complex carried = std::pow(-std::exp(Complex{0.0, phi}), swaps + 1);
  const Complex u1 = std::conj(carried / std::abs(carried));
  const auto& in = rho.matrix();
  ComplexMatrix out = in;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      Complex v = in(r, c);
      if (r & 1) v *= u1;
      if (c & 1) v *= std::conj(u1);
      out(r, c) = v;
    }
  return DensityMatrix(std::move(out), {2, 2}, rho.normalized());
}

SegmentDesign design_segment(const RepeaterPlan& plan) {
  SegmentDesign out;
  out.eta_segment = plan.segment_transmission();
  out.p = solve_p_for_attempts(plan.allowed_attempts_A, plan.segments_M);
  if (out.p > max_success_prob(out.eta_segment)) return out;  // infeasible
  out.design = design_for_target(out.p, out.eta_segment);
  out.feasible = true;
  return out;
}

ChainMetrics evaluate_chain(const DensityMatrix& segment, int M, double phi,
                            std::mt19937_64& rng) {
  const ChainState chain = run_chain(segment, M, rng);
  const DensityMatrix settled = settle_phase_frame(chain.rho, chain.swaps_done, phi);
  const KeyRateResult key = devetak_winter_key(settled);
  const BellTestResult bell = bell_test(settled);
  ChainMetrics out;
  out.dw_key = key.clamped();
  out.chsh_S = bell.chsh_S;
  out.qber_Q = bell.qber_Q;
  out.di_key = di_key_rate(bell.qber_Q, bell.chsh_S);
  return out;
}

namespace {

SampleStats stats_of(const std::vector<double>& xs) {
  SampleStats s;
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double var = 0.0;
    for (double x : xs) var += (x - s.mean) * (x - s.mean);
    var /= static_cast<double>(xs.size() - 1);
    s.std_error = std::sqrt(var / static_cast<double>(xs.size()));
  }
  return s;
}

RepeaterPointResult run_point(const RepeaterPlan& plan, const DensityMatrix& segment,
                              double p_norm, double phi, int repetitions,
                              uint64_t master_seed, uint64_t point_index) {
  RepeaterPointResult out;
  out.distance_km = plan.total_km();
  out.attempts_A = plan.allowed_attempts_A;
  out.segments_M = plan.segments_M;
  out.feasible = true;
  out.p = p_norm;
  out.plob = plob_bound(std::pow(10.0, -plan.loss_db_per_km * plan.total_km() / 10.0));

  const double rate_factor = attempt_rate_factor(p_norm, plan.segments_M);
  std::vector<double> keys, dis, ss, qs;
  keys.reserve(static_cast<size_t>(repetitions));
  for (int rep = 0; rep < repetitions; ++rep) {
    std::mt19937_64 rng(derive_seed(master_seed, point_index * 1000003ULL +
                                                     static_cast<uint64_t>(rep)));
    const ChainMetrics m = evaluate_chain(segment, plan.segments_M, phi, rng);
    keys.push_back(m.dw_key * rate_factor);
    dis.push_back(m.di_key * rate_factor);
    ss.push_back(m.chsh_S);
    qs.push_back(m.qber_Q);
  }
  out.key_rate = stats_of(keys);
  out.di_rate = stats_of(dis);
  out.chsh_S = stats_of(ss);
  out.qber_Q = stats_of(qs);
  return out;
}

}  // namespace

RepeaterPointResult evaluate_repeater_point(const RepeaterPlan& plan, int repetitions,
                                            uint64_t master_seed, uint64_t point_index) {
  RepeaterPointResult out;
  out.distance_km = plan.total_km();
  out.attempts_A = plan.allowed_attempts_A;
  out.segments_M = plan.segments_M;
  out.plob = plob_bound(std::pow(10.0, -plan.loss_db_per_km * plan.total_km() / 10.0));

  const SegmentDesign sd = design_segment(plan);
  out.design = sd;
  out.p = sd.p;
  if (!sd.feasible) return out;  // rates stay zero

  const TmsvParams tmsv{sd.design.mean_n, 0.0};
  const DensityMatrix segment = one_qubit_density(sd.design.theta_L, sd.design.theta_R,
                                                  tmsv, sd.eta_segment);
  RepeaterPointResult res =
      run_point(plan, segment, sd.p, tmsv.phase, repetitions, master_seed, point_index);
  res.design = sd;
  return res;
}

RepeaterPointResult evaluate_repeater_point_with_segment(
    const RepeaterPlan& plan, const DensityMatrix& segment_unnormalized,
    double p_actual, double phi, int repetitions, uint64_t master_seed,
    uint64_t point_index) {
  if (p_actual <= 0.0) {
    RepeaterPointResult out;
    out.distance_km = plan.total_km();
    out.attempts_A = plan.allowed_attempts_A;
    out.segments_M = plan.segments_M;
    out.plob = plob_bound(std::pow(10.0, -plan.loss_db_per_km * plan.total_km() / 10.0));
    return out;
  }
  return run_point(plan, segment_unnormalized, p_actual, phi, repetitions, master_seed,
                   point_index);
}

}  // namespace qrep
