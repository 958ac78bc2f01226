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

#include "qrep/swap_chain.hpp"

#include <array>
#include <cmath>

namespace qrep {

namespace {

// Bell vector on the measured pair, as a 2x2 coefficient table B[a][b].
std::array<std::array<double, 2>, 2> bell_coeffs(BellOutcome o) {
  const double s = 1.0 / std::sqrt(2.0);
  switch (o) {
    case BellOutcome::PhiPlus:  return {{{s, 0.0}, {0.0, s}}};
    case BellOutcome::PhiMinus: return {{{s, 0.0}, {0.0, -s}}};
    case BellOutcome::PsiPlus:  return {{{0.0, s}, {s, 0.0}}};
    case BellOutcome::PsiMinus: return {{{0.0, s}, {-s, 0.0}}};
  }
  throw std::logic_error("unreachable");
}

void require_four_qubits(const DensityMatrix& omega) {
  if (omega.dims() != std::vector<int>{2, 2, 2, 2})
    throw std::invalid_argument("bell_project: omega must have dims (2,2,2,2)");
}

constexpr std::array<BellOutcome, 4> kOutcomes = {
    BellOutcome::PhiPlus, BellOutcome::PhiMinus, BellOutcome::PsiPlus,
    BellOutcome::PsiMinus};

}  // namespace

const char* to_string(BellOutcome o) {
  switch (o) {
    case BellOutcome::PhiPlus:  return "Phi+";
    case BellOutcome::PhiMinus: return "Phi-";
    case BellOutcome::PsiPlus:  return "Psi+";
    case BellOutcome::PsiMinus: return "Psi-";
  }
  return "?";
}

DensityMatrix bell_project(const DensityMatrix& omega, BellOutcome outcome) {
  require_four_qubits(omega);
  const auto B = bell_coeffs(outcome);
  const auto& O = omega.matrix();

  // out[(i1,i4),(j1,j4)] = sum_{ab,cd} B*[a][b] B[c][d] O[(i1,a,b,i4),(j1,c,d,j4)]
  ComplexMatrix out = ComplexMatrix::Zero(4, 4);
  for (int i1 = 0; i1 < 2; ++i1)
    for (int i4 = 0; i4 < 2; ++i4)
      for (int j1 = 0; j1 < 2; ++j1)
        for (int j4 = 0; j4 < 2; ++j4) {
          Complex acc{0.0, 0.0};
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
              if (B[a][b] == 0.0) continue;
              for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) {
                  if (B[c][d] == 0.0) continue;
                  const int row = ((i1 * 2 + a) * 2 + b) * 2 + i4;
                  const int col = ((j1 * 2 + c) * 2 + d) * 2 + j4;
                  acc += B[a][b] * B[c][d] * O(row, col);
                }
            }
          out(i1 * 2 + i4, j1 * 2 + j4) = acc;
        }
  return DensityMatrix(std::move(out), {2, 2}, false);
}

BellOutcome sample_outcome(const DensityMatrix& omega, std::mt19937_64& rng) {
  std::array<double, 4> w{};
  double total = 0.0;
  for (size_t i = 0; i < 4; ++i) {
    w[i] = std::max(bell_project(omega, kOutcomes[i]).trace(), 0.0);
    total += w[i];
  }
  if (total <= 0.0)
    throw std::runtime_error("sample_outcome: all four outcome weights are zero");
  std::uniform_real_distribution<double> uni(0.0, total);
  double u = uni(rng);
  for (size_t i = 0; i < 3; ++i) {
    if (u < w[i]) return kOutcomes[i];
    u -= w[i];
  }
  return kOutcomes[3];
}

DensityMatrix apply_correction(const DensityMatrix& rho, BellOutcome outcome) {
  if (rho.dims() != std::vector<int>{2, 2})
    throw std::invalid_argument("apply_correction: state must have dims (2,2)");
  const bool flip_x = outcome == BellOutcome::PsiPlus || outcome == BellOutcome::PsiMinus;
  const bool flip_z = outcome == BellOutcome::PhiMinus || outcome == BellOutcome::PsiMinus;
  if (!flip_x && !flip_z) return rho;

  const auto& in = rho.matrix();
  ComplexMatrix out(4, 4);
  for (int r = 0; r < 4; ++r) {
    const int ra = r >> 1, rb = r & 1;
    const int rb2 = flip_x ? rb ^ 1 : rb;
    for (int c = 0; c < 4; ++c) {
      const int ca = c >> 1, cb = c & 1;
      const int cb2 = flip_x ? cb ^ 1 : cb;
      Complex v = in(r, c);
      // Z acts after X: sign from the post-flip right-qubit values.
      if (flip_z && (rb2 ^ cb2)) v = -v;
      out(ra * 2 + rb2, ca * 2 + cb2) = v;
    }
  }
  return DensityMatrix(std::move(out), {2, 2}, rho.normalized());
}

ChainState run_chain(const DensityMatrix& segment, int M, std::mt19937_64& rng,
                     std::optional<BellOutcome> force) {
  if (M < 1) throw std::invalid_argument("run_chain: M must be >= 1");
  if (segment.dims() != std::vector<int>{2, 2})
    throw std::invalid_argument("run_chain: segment must have dims (2,2)");
  if (segment.trace() <= 0.0)
    throw std::runtime_error("run_chain: segment has zero trace");

  const DensityMatrix seg_unit = segment.normalized_copy();
  DensityMatrix state = seg_unit;
  ChainState chain{state, 0, {}, {}};
  for (int swap = 1; swap < M; ++swap) {
    const DensityMatrix omega = tensor(state, seg_unit);
    const BellOutcome o = force ? *force : sample_outcome(omega, rng);
    DensityMatrix projected = bell_project(omega, o);
    if (projected.trace() <= 0.0)
      throw std::runtime_error("run_chain: zero-trace intermediate state");
    projected = apply_correction(projected, o);
    state = projected.normalized_copy();
    chain.outcome_log.push_back(o);
    if (o == BellOutcome::PsiPlus || o == BellOutcome::PsiMinus)
      chain.correction_frame.x = !chain.correction_frame.x;
    if (o == BellOutcome::PhiMinus || o == BellOutcome::PsiMinus)
      chain.correction_frame.z = !chain.correction_frame.z;
  }
  chain.rho = state;
  chain.swaps_done = static_cast<int>(chain.outcome_log.size());
  return chain;
}

}  // namespace qrep
