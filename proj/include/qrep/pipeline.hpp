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

#include <cstdint>
#include <optional>

#include "qrep/metrics.hpp"
#include "qrep/repeater_stats.hpp"
#include "qrep/single_qubit.hpp"
#include "qrep/swap_chain.hpp"

namespace qrep {

/// splitmix64: cheap, well-mixed seed derivation for (master, index) pairs so
/// sweep points get independent streams regardless of execution order.
uint64_t derive_seed(uint64_t master, uint64_t index);

/// Undo the known deterministic off-diagonal phase (-e^{i phi})^{s+1} that the
/// chain state carries after s swaps, by the corresponding local phase
/// rotation on the right qubit. The parties know s and every outcome, so this
/// is part of the tracked correction frame.
DensityMatrix settle_phase_frame(const DensityMatrix& rho, int swaps, double phi);

/// Per-segment design solved from the attempts budget:
/// p = solve_p(A, M), theta_R from the quartic, <n> optimal, theta_L bonded.
struct SegmentDesign {
  bool feasible = false;
  double eta_segment = 1.0;
  double p = 0.0;  // per-segment success probability target
  OneQubitDesign design;
};

SegmentDesign design_segment(const RepeaterPlan& plan);

/// Metrics of one sampled chain realization, evaluated in the settled frame.
struct ChainMetrics {
  double dw_key = 0.0;  // clamped Devetak-Winter bits per success
  double chsh_S = 0.0;
  double qber_Q = 0.0;
  double di_key = 0.0;  // clamped DI bits per success
};

ChainMetrics evaluate_chain(const DensityMatrix& segment, int M, double phi,
                            std::mt19937_64& rng);

struct SampleStats {
  double mean = 0.0;
  double std_error = 0.0;
};

/// One distance point of the repeater: averaged chain metrics, normalized by
/// the attempt statistics at probability p.
struct RepeaterPointResult {
  double distance_km = 0.0;
  double attempts_A = 0.0;
  int segments_M = 0;
  bool feasible = false;
  double p = 0.0;
  SegmentDesign design;
  SampleStats key_rate;   // bits per attempt
  SampleStats di_rate;    // bits per attempt
  SampleStats chsh_S;
  SampleStats qber_Q;
  double plob = 0.0;
};

/// Analytic-segment evaluation (one-sided loss closed form).
RepeaterPointResult evaluate_repeater_point(const RepeaterPlan& plan, int repetitions,
                                            uint64_t master_seed, uint64_t point_index);

/// Same, but with an externally simulated segment state (error-model path).
/// p_actual is the measured per-segment success probability used for the
/// attempt normalization.
RepeaterPointResult evaluate_repeater_point_with_segment(
    const RepeaterPlan& plan, const DensityMatrix& segment_unnormalized,
    double p_actual, double phi, int repetitions, uint64_t master_seed,
    uint64_t point_index);

}  // namespace qrep
