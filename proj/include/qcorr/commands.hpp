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

// Library side of the qcorr command-line tool. Every subcommand is a plain
// function of a RunConfig so that tests drive it without a process.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qcorr/closedform.hpp"
#include "qcorr/entropies.hpp"
#include "qcorr/lmeasure.hpp"
#include "qcorr/oracle.hpp"

namespace qcorr {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,        // parse or validation failure
  kExitOptimizer = 3,    // OptimizerFailure under --strict
  kExitOracleGap = 4,    // oracle gap above --tol under --strict
  kExitCheckFailed = 5,  // a random property check failed
};

struct RunConfig {
  std::string subcommand;
  std::string state_path;
  std::vector<std::string> entropies{"vn"};
  double theta_min = 0.0;  // units of pi/2
  double theta_max = 1.0;
  int steps = 512;
  double p1_min = 0.25;
  double p1_max = 1.0;
  int p1_steps = 76;
  std::optional<int> grid;  // subcommand default when unset
  double xtol = 1e-10;
  int max_iter = 500;
  std::string out = "-";
  std::string format;  // json or csv; empty picks the subcommand default
  std::uint64_t seed = 1;
  bool strict = false;
  bool no_closed = false;
  double tol = 1e-6;
  int count = 100;
  std::vector<std::string> checks;  // empty selects all
  int inject_invalid = 0;
};

OptimizerOptions optimizer_options(const RunConfig& cfg);

/// Parses every --entropy string; ParseError on the first bad one.
std::vector<EntropySpec> parse_entropies(const std::vector<std::string>& specs);

// ------------------------------------------------------------------ sweeps

struct SweepCell {
  double value = 0.0;
  double gamma = 0.0;  // radians
  Method method = Method::grid_refine;
  bool degenerate = false;
};

struct SweepRow {
  double theta = 0.0;  // radians
  std::vector<SweepCell> cells;  // one per spec
  std::optional<SweepCell> discord;  // when vn is among the specs
};

/// theta_i = theta_min + i (theta_max - theta_min) / (steps - 1), in
/// radians. DomainError if steps < 2.
std::vector<SweepRow> sweep_aligned(double theta_min, double theta_max,
                                    int steps,
                                    const std::vector<EntropySpec>& specs,
                                    const OptimizerOptions& opts);

struct EnvelopeRow {
  double p1 = 0.0;
  double min = 0.0;
  double max = 0.0;
  double c2 = 0.0;
  double eof = 0.0;
};

std::vector<EnvelopeRow> envelope_table(double p1_min, double p1_max, int steps,
                                        const EntropySpec& spec, int grid_m);

/// Fixed-width, locale-independent number formatting (12 significant
/// digits) used by every CSV writer.
std::string format_number(double v);

/// Names accepted by --checks.
const std::vector<std::string>& random_check_names();

// ------------------------------------------------------------- entry point

/// Failure that maps to a specific exit code; context_json is a JSON
/// object describing the failing input.
class CommandError : public Error {
 public:
  CommandError(std::string code, const std::string& message, int exit_code,
               std::string context_json)
      : Error(std::move(code), message),
        exit_code_(exit_code),
        context_(std::move(context_json)) {}
  int exit_code() const noexcept { return exit_code_; }
  const std::string& context_json() const noexcept { return context_; }

 private:
  int exit_code_;
  std::string context_;
};

/// Runs one subcommand and returns the process exit code. Results go to
/// cfg.out ("-" means `out`); error objects
/// {"error": {"code", "message", "context"}} go to `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// The cmd_* functions write their result to `out` and throw on failure.
void cmd_measure(const RunConfig& cfg, std::ostream& out);
void cmd_sweep_aligned(const RunConfig& cfg, std::ostream& out);
void cmd_envelope(const RunConfig& cfg, std::ostream& out);
void cmd_oracle(const RunConfig& cfg, std::ostream& out);
void cmd_random(const RunConfig& cfg, std::ostream& out);

}  // namespace qcorr
