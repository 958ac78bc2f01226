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

#include <optional>
#include <random>
#include <vector>

#include "qrep/linalg.hpp"

namespace qrep {

/// The four Bell-basis measurement outcomes. The associated correction is a
/// Pauli on the surviving right qubit mapping the branch into the Phi+ frame:
/// Phi+ -> I, Phi- -> Z, Psi+ -> X, Psi- -> ZX.
enum class BellOutcome { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

const char* to_string(BellOutcome o);

/// Accumulated Pauli frame on the right qubit (corrections are applied
/// eagerly; this records their product for logging).
struct PauliFrame {
  bool x = false;
  bool z = false;
};

struct ChainState {
  DensityMatrix rho;                     // final 2-qubit state, normalized
  int swaps_done = 0;                    // equals outcome_log.size()
  std::vector<BellOutcome> outcome_log;  // one entry per swap, left to right
  PauliFrame correction_frame;
};

/// Project qubits (R1, L2) of Omega (dims 2,2,2,2 ordered L1,R1,L2,R2) onto a
/// Bell state: rho' = <B| Omega |B> on (L1, R2), unnormalized. The trace is
/// that outcome's probability weight; the four weights sum to Tr Omega.
DensityMatrix bell_project(const DensityMatrix& omega, BellOutcome outcome);

/// Draw an outcome with probability proportional to its projection weight.
BellOutcome sample_outcome(const DensityMatrix& omega, std::mt19937_64& rng);

/// Conjugate the right qubit by the outcome's correction Pauli. Trace is
/// preserved; applying the same correction twice is the identity.
DensityMatrix apply_correction(const DensityMatrix& rho, BellOutcome outcome);

/// Reduce M identical segments left-to-right with M-1 sampled (or forced)
/// Bell measurements, applying corrections eagerly. Throws if an
/// intermediate state has zero trace.
ChainState run_chain(const DensityMatrix& segment, int M, std::mt19937_64& rng,
                     std::optional<BellOutcome> force = std::nullopt);

}  // namespace qrep
