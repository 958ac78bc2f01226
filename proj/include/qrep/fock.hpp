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
#include <vector>

#include "qrep/linalg.hpp"
#include "qrep/register_state.hpp"

namespace qrep {

/// Detector and channel imperfections for the explicit-optics simulator.
/// eta_chR composes with the scenario's eta_R (and eta_chL with eta_L), so
/// an all-ideal ErrorModelParams reproduces the bare scenario.
struct ErrorModelParams {
  double eta_chL = 1.0;
  double eta_chR = 1.0;
  double eta_coupling = 1.0;
  double eta_detector = 1.0;
  double p_dark = 0.0;

  void validate() const;
};

/// Truncated multimode bosonic state held as a density matrix. Each mode has
/// its own level count; operations that can push photons higher (the
/// beamsplitter) grow the affected modes rather than truncate a populated
/// level, up to kMaxModeDim.
class FockSystem {
 public:
  static constexpr int kMaxModeDim = 64;
  static constexpr long kMaxTotalDim = 8192;

  FockSystem(std::vector<int> dims, std::vector<std::string> labels, ComplexMatrix rho);

  int mode_count() const { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<std::string>& labels() const { return labels_; }
  long dim() const { return static_cast<long>(rho_.rows()); }
  const ComplexMatrix& rho() const { return rho_; }
  ComplexMatrix& rho() { return rho_; }
  double trace() const { return rho_.trace().real(); }

  /// Hand the state over as a DensityMatrix (unnormalized).
  DensityMatrix to_density_matrix() const;

 private:
  std::vector<int> dims_;
  std::vector<std::string> labels_;
  ComplexMatrix rho_;
};

/// |TMSV> = sum_{n<=cutoff} c_n |n,n> on modes (tmsv_L, tmsv_R).
FockSystem prepare_tmsv(const TmsvParams& p, int cutoff);

/// cos(theta)|0>_q|0>_f + sin(theta)|1>_q|1>_f on modes (qubit, fiber),
/// after the bright state has emitted its photon.
FockSystem prepare_qubit_emitter(double theta);

FockSystem tensor(const FockSystem& a, const FockSystem& b);

/// Two-mode beamsplitter with transmission amplitude t:
/// a+ -> t A+ - r B+,  b+ -> r A+ + t B+,  r = sqrt(1 - t^2).
/// Exactly unitary on the grown mode pair; throws if growth would exceed
/// kMaxModeDim (photon overflow is never silently truncated).
void apply_beamsplitter(FockSystem& sys, int mode_a, int mode_b, double transmission_amp);

/// Pure-loss channel on one mode: per-Fock-level binomial damping, equal to
/// a beamsplitter to an ancilla followed by tracing the ancilla. Trace
/// preserving.
void apply_loss(FockSystem& sys, int mode, double eta);

/// Condition on a photon-number-resolving detector registering `outcome`
/// photons on `mode`. POVM: binomial thinning by eta_detector, then with
/// probability p_dark one extra registered count. Returns the unnormalized
/// conditioned state; the measured mode is left populated for a later
/// trace_out_mode.
FockSystem measure_pnr(const FockSystem& sys, int mode, int outcome,
                       const ErrorModelParams& err);

void trace_out_mode(FockSystem& sys, int mode);

/// Bright-state phase flip (sigma_z) on a 2-level mode; the experimental
/// correction for a bottom-detector click.
void apply_qubit_phase_flip(FockSystem& sys, int mode);

/// Full one-segment optical circuit for N = 1: TMSV distribution, channel
/// losses, emitter coupling, balanced beamsplitters and PNR detection at
/// both registers. Sums the four accepted detector patterns (1,0)/(0,1) per
/// register with the phase correction applied, so the returned 2-qubit
/// state is unnormalized with trace equal to the success probability.
DensityMatrix simulate_segment(const RegisterScenario& sc, const ErrorModelParams& err,
                               int cutoff);

/// Negativity of the TMSV state after one-sided loss eta, evaluated in the
/// truncated Fock space (the reference curve for the register comparisons).
double lossy_tmsv_negativity(const TmsvParams& p, double eta, int cutoff);

}  // namespace qrep
