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

#include <functional>
#include <map>

#include "qrep/config.hpp"
#include "qrep/table.hpp"

namespace qrep {

/// One qualitative assertion evaluated alongside an experiment. In --check
/// mode a failed check sets the exit code; otherwise checks are reported
/// only. Failures are never silently dropped from the report.
struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SvgSpec {
  std::string x, y, group;
  bool log_y = false;
};

struct ExperimentOutput {
  Table table;
  std::vector<CheckResult> checks;
  std::vector<std::string> report;  // human-readable findings (crossings, thresholds)
  SvgSpec svg;
};

using ExperimentFn = std::function<ExperimentOutput(const Config&, int threads)>;

/// name -> runner for every CLI subcommand experiment.
const std::map<std::string, ExperimentFn>& experiment_registry();

ExperimentOutput exp_negativity_vs_theta(const Config& cfg, int threads);
ExperimentOutput exp_theta_opt_vs_eta(const Config& cfg, int threads);
ExperimentOutput exp_negativity_vs_eta(const Config& cfg, int threads);
ExperimentOutput exp_keyrate_vs_distance(const Config& cfg, int threads);
ExperimentOutput exp_chsh_and_di(const Config& cfg, int threads);
ExperimentOutput exp_error_sweep(const Config& cfg, int threads);
ExperimentOutput exp_optimal_params(const Config& cfg, int threads);

/// Golden-section maximization on a unimodal bracket found by a coarse grid;
/// tolerance 1e-6 rad. Exposed for tests.
double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double tol = 1e-6);

/// Negativity of the normalized register state, 0 for (near) zero trace.
double register_negativity(int N, double theta_L, double theta_R, double mean_n,
                           double eta_L, double eta_R);

}  // namespace qrep
