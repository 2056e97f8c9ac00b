// Copyright 2026 The qcorr Authors
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

#include <iostream>

#include "CLI11.hpp"
#include "qcorr/commands.hpp"

namespace {

void add_common(CLI::App* sub, qcorr::RunConfig& cfg) {
  sub->add_option("--entropy", cfg.entropies,
                  "entropy specs: vn, lin, cub or q=<value> (comma separated)")
      ->delimiter(',');
  sub->add_option("--grid", cfg.grid, "grid resolution");
  sub->add_option("--xtol", cfg.xtol, "angular tolerance of the refinement");
  sub->add_option("--max-iter", cfg.max_iter, "refinement iterations per start");
  sub->add_option("--out", cfg.out, "output path, - for stdout");
  sub->add_option("--format", cfg.format, "json or csv");
  sub->add_flag("--strict", cfg.strict, "fail on non-convergence or oracle gaps");
  sub->add_flag("--no-closed", cfg.no_closed, "use the optimizer for q = 2, 3 too");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropic measures of two-qubit quantum correlations"};
  app.require_subcommand(1);
  qcorr::RunConfig cfg;

  auto* measure = app.add_subcommand("measure", "minimum information loss of one state");
  add_common(measure, cfg);
  measure->add_option("--state", cfg.state_path, "state JSON file")->required();

  auto* sweep = app.add_subcommand("sweep-aligned", "aligned-mixture sweep over theta");
  add_common(sweep, cfg);
  sweep->add_option("--theta-min", cfg.theta_min, "in units of pi/2");
  sweep->add_option("--theta-max", cfg.theta_max, "in units of pi/2");
  sweep->add_option("--steps", cfg.steps, "number of theta points");

  auto* envelope = app.add_subcommand("envelope", "Bell-diagonal range at fixed p1");
  add_common(envelope, cfg);
  envelope->add_option("--p1-min", cfg.p1_min);
  envelope->add_option("--p1-max", cfg.p1_max);
  envelope->add_option("--p1-steps", cfg.p1_steps);

  auto* oracle = app.add_subcommand("oracle", "dense-grid check of one state");
  add_common(oracle, cfg);
  oracle->add_option("--state", cfg.state_path, "state JSON file")->required();
  oracle->add_option("--tol", cfg.tol, "allowed gap under --strict");

  auto* random = app.add_subcommand("random", "randomized property checks");
  add_common(random, cfg);
  random->add_option("--count", cfg.count, "number of sampled states");
  random->add_option("--seed", cfg.seed);
  random->add_option("--checks", cfg.checks, "subset of checks (comma separated)")
      ->delimiter(',');
  random->add_option("--tol", cfg.tol, "closed_vs_oracle tolerance");
  random->add_option("--inject-invalid", cfg.inject_invalid,
                     "extra invalid states the validator must reject");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qcorr::kExitUsage;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  return qcorr::run(cfg, std::cout, std::cerr);
}
