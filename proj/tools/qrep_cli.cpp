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

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "qrep/config.hpp"
#include "qrep/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;
constexpr int kExitCheckFailed = 4;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qrep: quantum repeater simulation experiments"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  uint64_t seed = 0;
  bool seed_set = false, svg = false, check_mode = false;
  int threads = 0;

  for (const auto& [name, fn] : qrep::experiment_registry()) {
    CLI::App* sub = app.add_subcommand(name, "run the '" + name + "' experiment");
    sub->add_option("--config", config_path, "key = value config file");
    sub->add_option("--seed", seed, "master RNG seed")->each([&](const std::string&) {
      seed_set = true;
    });
    sub->add_option("--out", out_path, "output CSV path");
    sub->add_flag("--svg", svg, "also write an SVG line plot next to the CSV");
    sub->add_option("--threads", threads, "worker threads (0 = auto)");
    sub->add_flag("--check", check_mode, "fail (exit 4) if any qualitative check fails");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string experiment = app.get_subcommands().front()->get_name();

  qrep::Config cfg;
  try {
    if (!config_path.empty()) cfg = qrep::Config::parse_file(config_path);
    if (seed_set) cfg.set("seed", std::to_string(seed));
    if (!out_path.empty()) cfg.set("out", out_path);
    cfg.set("experiment", experiment);
  } catch (const qrep::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  qrep::ExperimentOutput result{qrep::Table({}), {}, {}, {}};
  try {
    result = qrep::experiment_registry().at(experiment)(cfg, threads);
  } catch (const qrep::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumericalError;
  }

  const std::string out = cfg.get_string("out", experiment + ".csv");
  try {
    result.table.write_csv(out);
    if (svg && !result.svg.x.empty()) {
      const std::string svg_path = out + ".svg";
      result.table.write_svg(svg_path, result.svg.x, result.svg.y, result.svg.group,
                             result.svg.log_y);
      std::cout << "wrote " << svg_path << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericalError;
  }
  std::cout << "wrote " << out << " (" << result.table.row_count() << " rows)\n";

  for (const auto& line : result.report) std::cout << line << "\n";
  bool all_pass = true;
  for (const auto& c : result.checks) {
    std::cout << (c.pass ? "check PASS: " : "check FAIL: ") << c.name;
    if (!c.detail.empty()) std::cout << " [" << c.detail << "]";
    std::cout << "\n";
    all_pass = all_pass && c.pass;
  }
  if (check_mode && !all_pass) return kExitCheckFailed;
  return kExitOk;
}
