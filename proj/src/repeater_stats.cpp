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

#include "qrep/repeater_stats.hpp"

#include <cmath>

namespace qrep {

namespace {

void check_p(double p) {
  if (!(p > 0.0) || p > 1.0)
    throw std::invalid_argument("success probability must lie in (0, 1]");
  if (p < 1e-6)
    throw std::runtime_error(
        "attempt statistics: p < 1e-6 would need an integral approximation; "
        "refusing to sum the series at this scale");
}

void check_m(int M) {
  if (M < 1) throw std::invalid_argument("segment count M must be >= 1");
}

// Sum f(n) for n = 1, 2, ... until ten consecutive terms each contribute
// less than 1e-12 relative to the running sum.
template <typename F>
double tail_sum(F&& f) {
  double sum = 0.0;
  int quiet = 0;
  for (long n = 1; quiet < 10; ++n) {
    const double term = f(static_cast<int>(n));
    sum += term;
    if (std::abs(term) < 1e-12 * std::max(sum, 1e-300))
      ++quiet;
    else
      quiet = 0;
    if (n > 200000000L)
      throw std::runtime_error("attempt statistics: series did not settle");
  }
  return sum;
}

}  // namespace

double RepeaterPlan::segment_transmission() const {
  return std::pow(10.0, -loss_db_per_km * segment_km / 10.0);
}

double geometric_pmf(int n, double p) {
  if (n < 1) throw std::invalid_argument("geometric_pmf: n must be >= 1");
  if (!(p > 0.0) || p > 1.0)
    throw std::invalid_argument("geometric_pmf: p must lie in (0, 1]");
  return p * std::pow(1.0 - p, n - 1);
}

double all_segments_pdf(int n, double p, int M) {
  if (n < 1) throw std::invalid_argument("all_segments_pdf: n must be >= 1");
  if (!(p > 0.0) || p > 1.0)
    throw std::invalid_argument("all_segments_pdf: p must lie in (0, 1]");
  check_m(M);
  const double cur = std::pow(1.0 - std::pow(1.0 - p, n), M);
  const double prev = std::pow(1.0 - std::pow(1.0 - p, n - 1), M);
  return cur - prev;
}

double expected_attempts(double p, int M) {
  check_p(p);
  check_m(M);
  if (p == 1.0) return 1.0;
  if (M == 1) return 1.0 / p;
  return tail_sum([&](int n) { return n * all_segments_pdf(n, p, M); });
}

double solve_p_for_attempts(double A, int M) {
  if (A < 1.0) throw std::invalid_argument("solve_p_for_attempts: A must be >= 1");
  check_m(M);
  if (A == 1.0) return 1.0;
  double lo = 1e-6, hi = 1.0;
  if (expected_attempts(lo, M) < A)
    throw std::runtime_error("solve_p_for_attempts: A requires p below 1e-6");
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    (expected_attempts(mid, M) > A ? lo : hi) = mid;
    if (hi / lo - 1.0 < 1e-12) break;
  }
  const double p = std::sqrt(lo * hi);
  if (std::abs(expected_attempts(p, M) - A) > 1e-9 * A)
    throw std::runtime_error("solve_p_for_attempts: bisection failed to converge");
  return p;
}

double attempt_rate_factor(double p, int M) {
  check_p(p);
  check_m(M);
  return tail_sum([&](int n) { return all_segments_pdf(n, p, M) / n; });
}

double normalized_key_rate(double key_bits, double p, int M) {
  if (key_bits < 0.0)
    throw std::invalid_argument("normalized_key_rate: key must be clamped to >= 0 first");
  if (key_bits == 0.0) return 0.0;
  return key_bits * attempt_rate_factor(p, M);
}

}  // namespace qrep
