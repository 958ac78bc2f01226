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

#include <stdexcept>

namespace qrep {

/// Chain-level configuration: M parallel segments of segment_km each, fiber
/// loss in dB/km, and the attempts budget A.
struct RepeaterPlan {
  int segments_M = 1;
  double segment_km = 10.0;
  double loss_db_per_km = 0.2;
  double allowed_attempts_A = 100.0;

  double total_km() const { return segments_M * segment_km; }
  double segment_transmission() const;
};

/// PMF(n) = p (1-p)^{n-1}, n >= 1.
double geometric_pmf(int n, double p);

/// PDF_M(n) = [1-(1-p)^n]^M - [1-(1-p)^{n-1}]^M: probability that the last
/// of M parallel segments first succeeds at attempt n.
double all_segments_pdf(int n, double p, int M);

/// A(p, M) = sum_n n PDF_M(n); reduces to 1/p at M = 1.
double expected_attempts(double p, int M);

/// Inverse of expected_attempts in p (bisection; A is strictly decreasing
/// in p). Relative tolerance 1e-9 on A.
double solve_p_for_attempts(double A, int M);

/// sum_n PDF_M(n)/n, the attempts-normalization factor in (0, 1].
double attempt_rate_factor(double p, int M);

/// K_M * sum_n PDF_M(n)/n, bits per attempt.
double normalized_key_rate(double key_bits, double p, int M);

}  // namespace qrep
