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

#include <fstream>
#include <sstream>

#include "qrep/experiments.hpp"
#include "qrep/pipeline.hpp"

using namespace qrep;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing: values, lists, comments, errors") {
  const Config cfg = Config::parse_string(
      "# a comment\n"
      "mean_n = 0.5\n"
      "qubit_counts = 1, 2,3\n"
      "seed = 99\n"
      "label = hello # trailing comment\n");
  CHECK(cfg.get_double("mean_n", 0.0) == 0.5);
  CHECK(cfg.get_int_list("qubit_counts", {}) == std::vector<int>{1, 2, 3});
  CHECK(cfg.get_u64("seed", 0) == 99);
  CHECK(cfg.get_string("label", "") == "hello");
  CHECK(cfg.get_double("missing", 7.25) == 7.25);

  CHECK_THROWS_AS(Config::parse_string("novalue\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse_string("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse_string("x = 1.5.2\n").get_double("x", 0), ConfigError);

  const Config unknown = Config::parse_string("mean_n = 0.5\ntypo_key = 3\n");
  CHECK_THROWS_AS(unknown.require_known_keys({"mean_n"}), ConfigError);
  CHECK_NOTHROW(unknown.require_known_keys({"mean_n", "typo_key"}));
}

TEST_CASE("config hash is stable and order-independent") {
  const Config a = Config::parse_string("x = 1\ny = 2\n");
  const Config b = Config::parse_string("y = 2\nx = 1\n");
  CHECK(a.hash() == b.hash());
  const Config c = Config::parse_string("x = 1\ny = 3\n");
  CHECK(a.hash() != c.hash());
}

TEST_CASE("table CSV: 17 significant digits and round-trippable text") {
  Table t({"a", "b"});
  t.add_comment("hello");
  t.add_row({1.0 / 3.0, std::string("x")});
  const std::string csv = t.to_csv();
  CHECK(csv.find("# hello") != std::string::npos);
  CHECK(csv.find("0.33333333333333331") != std::string::npos);
  CHECK(csv.find("a,b") != std::string::npos);
}

TEST_CASE("table SVG emitter produces polylines per group") {
  Table t({"x", "y", "g"});
  for (int g = 0; g < 2; ++g)
    for (int i = 0; i < 5; ++i)
      t.add_row({static_cast<double>(i), static_cast<double>(i * (g + 1)),
                 static_cast<double>(g)});
  const std::string svg = t.to_svg("x", "y", "g", false);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.rfind("</svg>") != std::string::npos);
  size_t polylines = 0;
  for (size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos)
    ++polylines;
  CHECK(polylines == 2);
}

TEST_CASE("derive_seed decorrelates indices deterministically") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("golden_section_max finds the peak of a smooth unimodal curve") {
  const double peak = golden_section_max(
      [](double x) { return -(x - 0.8) * (x - 0.8); }, 0.0, 1.5, 1e-7);
  CHECK(peak == doctest::Approx(0.8).epsilon(1e-5));
}

TEST_CASE("neg-theta experiment: deterministic output, unique maxima") {
  const Config cfg = Config::parse_string("qubit_counts = 1,2\ntheta_steps = 15\n");
  const ExperimentOutput a = exp_negativity_vs_theta(cfg, 1);
  const ExperimentOutput b = exp_negativity_vs_theta(cfg, 4);
  CHECK(a.table.to_csv() == b.table.to_csv());  // byte-identical across thread counts
  CHECK(a.table.row_count() == 30);  // steps x |N set|
  for (const auto& c : a.checks) CHECK(c.pass);
}

TEST_CASE("neg-theta golden file regression") {
  const Config cfg = Config::parse_file(std::string(QREP_TEST_DIR) +
                                        "/golden/neg_theta_small.cfg");
  const ExperimentOutput out = exp_negativity_vs_theta(cfg, 1);
  const std::string expected = slurp(std::string(QREP_TEST_DIR) +
                                     "/golden/neg_theta_small.csv");
  CHECK(out.table.to_csv() == expected);
}

TEST_CASE("experiments reject unknown config keys") {
  const Config cfg = Config::parse_string("qubit_counts = 1\nbogus = 2\n");
  CHECK_THROWS_AS(exp_negativity_vs_theta(cfg, 1), ConfigError);
}

TEST_CASE("keyrate experiment on a short deterministic sweep") {
  const Config cfg = Config::parse_string(
      "attempts = 100\n"
      "max_distance_km = 40\n"
      "repetitions = 3\n"
      "crossing_band_km = 0, 1e9\n");  // band check off the critical path here
  const ExperimentOutput out = exp_keyrate_vs_distance(cfg, 1);
  CHECK(out.table.row_count() == 4);
  // Rates positive and below one bit per attempt at these distances.
  for (size_t r = 0; r < out.table.row_count(); ++r) {
    const double rate = out.table.number_at(r, "mean_keyrate");
    CHECK(rate > 0.0);
    CHECK(rate < 1.0);
  }
  const ExperimentOutput again = exp_keyrate_vs_distance(cfg, 2);
  CHECK(out.table.to_csv() == again.table.to_csv());
}

TEST_CASE("settle_phase_frame flips the M-odd off-diagonal sign") {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = 0.5;
  m(3, 3) = 0.5;
  m(0, 3) = -0.5;
  m(3, 0) = -0.5;
  const DensityMatrix phi_minus(m, {2, 2}, true);
  const DensityMatrix settled = settle_phase_frame(phi_minus, 0, 0.0);
  CHECK(settled.matrix()(0, 3).real() == doctest::Approx(0.5).epsilon(1e-12));
  // Even swap counts leave the already-positive frame alone.
  const DensityMatrix untouched = settle_phase_frame(settled, 1, 0.0);
  CHECK(untouched.matrix()(0, 3).real() == doctest::Approx(0.5).epsilon(1e-12));
}
