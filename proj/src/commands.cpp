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

#include "qcorr/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <random>

#include "json.hpp"
#include "qcorr/entanglement.hpp"
#include "qcorr/state_io.hpp"

namespace qcorr {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

ordered direction_json(const Direction& d) {
  ordered o;
  o["k"] = {d.k().x(), d.k().y(), d.k().z()};
  o["gamma"] = d.gamma();
  o["phi"] = d.phi();
  return o;
}

ordered report_json(const MeasurementReport& r) {
  ordered o;
  o["value"] = r.value;
  o["direction"] = direction_json(r.direction);
  o["cond_spectrum"] = r.cond_spectrum;
  o["residual"] = r.residual;
  o["method"] = to_string(r.method);
  o["degenerate"] = r.degenerate;
  o["singular"] = r.singular;
  o["converged"] = r.converged;
  o["iterations"] = r.iterations;
  return o;
}

std::string pick_format(const RunConfig& cfg, const char* fallback) {
  const std::string f = cfg.format.empty() ? fallback : cfg.format;
  if (f != "json" && f != "csv") throw ParseError("--format must be json or csv");
  return f;
}

EntropySpec first_spec(const RunConfig& cfg) {
  const std::vector<EntropySpec> specs = parse_entropies(cfg.entropies);
  if (specs.empty()) throw ParseError("--entropy needs at least one spec");
  return specs.front();
}

BlochState require_state(const RunConfig& cfg) {
  if (cfg.state_path.empty()) throw ParseError("--state is required");
  return load_state(cfg.state_path);
}

// Runs body(i) for i < n in parallel and rethrows the lowest-index
// exception afterwards.
template <class F>
void parallel_rows(int n, F&& body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[40];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

OptimizerOptions optimizer_options(const RunConfig& cfg) {
  OptimizerOptions o;
  if (cfg.grid) o.grid_n = *cfg.grid;
  if (o.grid_n < 4) throw ParseError("--grid must be at least 4");
  o.xtol = cfg.xtol;
  o.max_iter = cfg.max_iter;
  o.allow_closed = !cfg.no_closed;
  o.strict = cfg.strict;
  return o;
}

std::vector<EntropySpec> parse_entropies(const std::vector<std::string>& specs) {
  std::vector<EntropySpec> out;
  for (const std::string& s : specs) out.push_back(EntropySpec::parse(s));
  return out;
}

// ------------------------------------------------------------------ sweeps

std::vector<SweepRow> sweep_aligned(double theta_min, double theta_max,
                                    int steps,
                                    const std::vector<EntropySpec>& specs,
                                    const OptimizerOptions& opts) {
  if (steps < 2) throw DomainError("--steps must be at least 2");
  if (!(theta_min >= 0.0 && theta_max <= kPi / 2 + 1e-12 && theta_min <= theta_max))
    throw DomainError("theta range must lie in [0, pi/2]");
  const bool with_discord =
      std::any_of(specs.begin(), specs.end(), [](const EntropySpec& s) {
        return s.kind() == EntropyKind::von_neumann;
      });
  OptimizerOptions row_opts = opts;
  row_opts.parallel = false;  // rows are the parallel axis here

  std::vector<SweepRow> rows(static_cast<std::size_t>(steps));
  parallel_rows(steps, [&](int i) {
    SweepRow& row = rows[static_cast<std::size_t>(i)];
    row.theta = theta_min + (theta_max - theta_min) * i / (steps - 1);
    const BlochState s = aligned_state(row.theta);
    for (const EntropySpec& spec : specs) {
      const MeasurementReport r = minimize_info_loss(s, spec, row_opts);
      row.cells.push_back({r.value, r.direction.gamma(), r.method, r.degenerate});
    }
    if (with_discord) {
      const MeasurementReport d = discord(s, row_opts);
      row.discord = SweepCell{d.value, d.direction.gamma(), d.method, d.degenerate};
    }
  });
  return rows;
}

std::vector<EnvelopeRow> envelope_table(double p1_min, double p1_max, int steps,
                                        const EntropySpec& spec, int grid_m) {
  if (steps < 1) throw DomainError("--p1-steps must be positive");
  if (!(p1_min >= 0.25 && p1_max <= 1.0 && p1_min <= p1_max))
    throw InfeasibleP1("p1 range must lie in [1/4, 1]");
  std::vector<EnvelopeRow> rows(static_cast<std::size_t>(steps));
  parallel_rows(steps, [&](int i) {
    EnvelopeRow& row = rows[static_cast<std::size_t>(i)];
    row.p1 = steps == 1 ? p1_min : p1_min + (p1_max - p1_min) * i / (steps - 1);
    const Envelope e = fig1_envelope(row.p1, spec, grid_m);
    row.min = e.min;
    row.max = e.max;
    const double c = std::max(2.0 * row.p1 - 1.0, 0.0);
    row.c2 = c * c;
    row.eof = eof(std::min(c, 1.0));
  });
  return rows;
}

// ------------------------------------------------------------- subcommands

void cmd_measure(const RunConfig& cfg, std::ostream& out) {
  const BlochState s = require_state(cfg);
  const std::vector<EntropySpec> specs = parse_entropies(cfg.entropies);
  const OptimizerOptions opts = optimizer_options(cfg);
  const std::string format = pick_format(cfg, "json");
  const StateClass cls = classify(s);
  const ConcurrenceReport c = concurrence(s);

  ordered doc;
  doc["classification"] = to_string(cls.tag);
  doc["concurrence"] = {{"value", c.value}, {"method", to_string(c.method)}};
  ordered results = ordered::array();
  std::vector<std::pair<EntropySpec, MeasurementReport>> reports;
  for (const EntropySpec& spec : specs) {
    const MeasurementReport r = minimize_info_loss(s, spec, opts);
    reports.emplace_back(spec, r);
    ordered e;
    e["entropy"] = spec.label();
    e.update(report_json(r));
    if (spec.kind() == EntropyKind::von_neumann) {
      e["information_deficit"] = r.value;
      e["discord"] = report_json(discord(s, opts));
    }
    results.push_back(e);
  }
  doc["results"] = results;

  if (format == "json") {
    out << doc.dump(2) << '\n';
    return;
  }
  out << "entropy,value,gamma,phi,k_x,k_y,k_z,residual,method,degenerate,singular\n";
  for (const auto& [spec, r] : reports) {
    const Vec3& k = r.direction.k();
    out << spec.label() << ',' << format_number(r.value) << ','
        << format_number(r.direction.gamma()) << ','
        << format_number(r.direction.phi()) << ',' << format_number(k.x()) << ','
        << format_number(k.y()) << ',' << format_number(k.z()) << ','
        << format_number(r.residual) << ',' << to_string(r.method) << ','
        << (r.degenerate ? 1 : 0) << ',' << (r.singular ? 1 : 0) << '\n';
  }
}

void cmd_sweep_aligned(const RunConfig& cfg, std::ostream& out) {
  const std::vector<EntropySpec> specs = parse_entropies(cfg.entropies);
  const std::string format = pick_format(cfg, "csv");
  const std::vector<SweepRow> rows =
      sweep_aligned(cfg.theta_min * kPi / 2, cfg.theta_max * kPi / 2, cfg.steps,
                    specs, optimizer_options(cfg));
  const double unit = kPi / 2;
  const bool with_discord = !rows.empty() && rows.front().discord.has_value();

  if (format == "json") {
    ordered doc = ordered::array();
    for (const SweepRow& row : rows) {
      ordered r;
      r["theta"] = row.theta / unit;
      for (std::size_t i = 0; i < specs.size(); ++i) {
        const std::string l = specs[i].label();
        r[l + "_value"] = row.cells[i].value;
        r[l + "_gamma"] = row.cells[i].gamma / unit;
        r[l + "_method"] = to_string(row.cells[i].method);
      }
      if (row.discord) {
        r["discord_value"] = row.discord->value;
        r["discord_gamma"] = row.discord->gamma / unit;
      }
      doc.push_back(r);
    }
    out << doc.dump(2) << '\n';
    return;
  }
  out << "theta";
  for (const EntropySpec& spec : specs) {
    const std::string l = spec.label();
    out << ',' << l << "_value," << l << "_gamma," << l << "_method";
  }
  if (with_discord) out << ",discord_value,discord_gamma";
  out << '\n';
  for (const SweepRow& row : rows) {
    out << format_number(row.theta / unit);
    for (const SweepCell& c : row.cells)
      out << ',' << format_number(c.value) << ',' << format_number(c.gamma / unit)
          << ',' << to_string(c.method);
    if (row.discord)
      out << ',' << format_number(row.discord->value) << ','
          << format_number(row.discord->gamma / unit);
    out << '\n';
  }
}

void cmd_envelope(const RunConfig& cfg, std::ostream& out) {
  const EntropySpec spec = first_spec(cfg);
  const std::string format = pick_format(cfg, "csv");
  const std::vector<EnvelopeRow> rows = envelope_table(
      cfg.p1_min, cfg.p1_max, cfg.p1_steps, spec, cfg.grid.value_or(60));
  if (format == "json") {
    ordered doc = ordered::array();
    for (const EnvelopeRow& r : rows)
      doc.push_back({{"p1", r.p1}, {"min", r.min}, {"max", r.max}, {"c2", r.c2},
                     {"eof", r.eof}});
    out << doc.dump(2) << '\n';
    return;
  }
  out << "p1,min,max,c2,eof\n";
  for (const EnvelopeRow& r : rows)
    out << format_number(r.p1) << ',' << format_number(r.min) << ','
        << format_number(r.max) << ',' << format_number(r.c2) << ','
        << format_number(r.eof) << '\n';
}

void cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  const BlochState s = require_state(cfg);
  const EntropySpec spec = first_spec(cfg);
  OracleOptions oo;
  oo.n = cfg.grid.value_or(256);
  const OracleResult o = oracle_minimize(s, spec, oo);
  RunConfig primary_cfg = cfg;
  primary_cfg.grid.reset();
  const MeasurementReport p = minimize_info_loss(s, spec, optimizer_options(primary_cfg));
  const double gap = p.value - o.value;

  ordered doc;
  doc["entropy"] = spec.label();
  doc["n"] = oo.n;
  doc["oracle"] = {{"value", o.value},
                   {"grid_value", o.grid_value},
                   {"direction", direction_json(o.direction)},
                   {"evaluations", o.evaluations}};
  doc["primary"] = report_json(p);
  doc["gap"] = gap;
  if (classify(s).tag == StateKind::bell_diagonal) {
    const Mat3 d = principal_axes(s).canonical.j;
    const MeasurementReport b = bell_diag_if(d(0, 0), d(1, 1), d(2, 2), spec);
    doc["bell_diag_if"] = {{"value", b.value}, {"gap", b.value - o.value}};
  }
  out << doc.dump(2) << '\n';
  if (cfg.strict && std::abs(gap) > cfg.tol) {
    ordered ctx;
    ctx["gap"] = gap;
    ctx["tol"] = cfg.tol;
    ctx["entropy"] = spec.label();
    throw CommandError("OracleGap", "primary answer differs from the oracle",
                       kExitOracleGap, ctx.dump());
  }
}

// ------------------------------------------------------------- random

const std::vector<std::string>& random_check_names() {
  static const std::vector<std::string> names = {
      "purity_bounds",       "non_negativity",   "closed_vs_oracle",
      "rotation_invariance", "i3_le_i2_bell",    "concurrence_bounds"};
  return names;
}

namespace {

struct Stats {
  int passed = 0;
  int failed = 0;
  double worst = -std::numeric_limits<double>::infinity();
};

Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return q.toRotationMatrix();
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec3 v(g(rng), g(rng), g(rng));
  return v.normalized();
}

std::uint64_t sample_seed(std::uint64_t seed, int i) {
  return seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(i) + 1;
}

// Largest violation for one check on one sample (<= 0 means pass).
double run_check(const std::string& name, const BlochState& s, std::uint64_t seed,
                 const RunConfig& cfg) {
  std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
  if (name == "purity_bounds") {
    const BoundsReport b = purity_bounds(s);
    return std::max(b.lhs1 - 3.0, b.lhs2 - b.rhs2) - 1e-9;
  }
  if (name == "non_negativity") {
    double worst = -1.0;
    const std::vector<EntropySpec> specs = {
        EntropySpec::von_neumann(), EntropySpec::linear(), EntropySpec::cubic(),
        EntropySpec::tsallis(0.5), EntropySpec::tsallis(5.0)};
    for (int t = 0; t < 8; ++t) {
      const Direction k = Direction::from_vector(random_unit(rng));
      for (const EntropySpec& spec : specs)
        worst = std::max(worst, -info_loss(s, k, spec) - 1e-10);
    }
    return worst;
  }
  if (name == "closed_vs_oracle") {
    OracleOptions oo;
    oo.n = cfg.grid.value_or(128);
    const double g2 =
        std::abs(i2_closed(s).value - oracle_minimize(s, EntropySpec::linear(), oo).value);
    const double g3 =
        std::abs(i3_closed(s).value - oracle_minimize(s, EntropySpec::cubic(), oo).value);
    return std::max(g2, g3) - cfg.tol;
  }
  if (name == "rotation_invariance") {
    const Mat3 ra = random_rotation(rng), rb = random_rotation(rng);
    const BlochState t = from_density(rotate_local(to_density(s), ra, rb));
    OptimizerOptions opts;
    opts.parallel = false;
    double d = std::abs(i2_closed(s).value - i2_closed(t).value);
    d = std::max(d, std::abs(i3_closed(s).value - i3_closed(t).value));
    d = std::max(d, std::abs(minimize_info_loss(s, EntropySpec::von_neumann(), opts).value -
                             minimize_info_loss(t, EntropySpec::von_neumann(), opts).value));
    d = std::max(d, std::abs(concurrence(s).value - concurrence(t).value));
    return d - 1e-9;
  }
  const Mat3 dj = principal_axes(s).canonical.j;
  if (name == "i3_le_i2_bell") {
    const double i2 = bell_diag_if(dj(0, 0), dj(1, 1), dj(2, 2), EntropySpec::linear()).value;
    const double i3 = bell_diag_if(dj(0, 0), dj(1, 1), dj(2, 2), EntropySpec::cubic()).value;
    return i3 - i2 - 1e-12;
  }
  if (name == "concurrence_bounds") {
    const BoundReport b = bound_check_bell_diag(dj(0, 0), dj(1, 1), dj(2, 2));
    double worst = std::max(b.c2 - b.i2, b.c2 - b.i3) - 1e-12;
    const double cb = concurrence_bell_diag(dj(0, 0), dj(1, 1), dj(2, 2));
    const double cw =
        concurrence_wootters(to_density(bell_diagonal_state(dj(0, 0), dj(1, 1), dj(2, 2))));
    worst = std::max(worst, std::abs(cb - cw) - 1e-10);
    const double c = concurrence(s).value;
    worst = std::max({worst, -c, c - 1.0 - 1e-12});
    return worst;
  }
  throw ParseError("unknown check '" + name + "'");
}

DensityMatrix make_invalid(std::uint64_t seed) {
  DensityMatrix rho = random_density(seed, SamplingMethod::ginibre_like);
  Eigen::SelfAdjointEigenSolver<Mat4c> es(rho.m);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.01, 0.1);
  const auto v = es.eigenvectors().col(0);
  rho.m -= (es.eigenvalues()(0) + u(rng)) * (v * v.adjoint());
  rho.m /= rho.m.trace();
  return rho;
}

}  // namespace

void cmd_random(const RunConfig& cfg, std::ostream& out) {
  if (cfg.count < 1) throw ParseError("--count must be positive");
  std::vector<std::string> checks = cfg.checks;
  if (checks.empty()) checks = random_check_names();
  for (const std::string& c : checks)
    if (std::find(random_check_names().begin(), random_check_names().end(), c) ==
        random_check_names().end())
      throw ParseError("unknown check '" + c + "'");

  const int n = cfg.count;
  const std::size_t nc = checks.size();
  // violation[i * nc + c]
  std::vector<double> violation(static_cast<std::size_t>(n) * nc, 0.0);
  std::vector<BlochState> states(static_cast<std::size_t>(n));
  parallel_rows(n, [&](int i) {
    const std::uint64_t seed = sample_seed(cfg.seed, i);
    const SamplingMethod m =
        i % 2 == 0 ? SamplingMethod::ginibre_like : SamplingMethod::mixture_of_pure;
    states[static_cast<std::size_t>(i)] = from_density(random_density(seed, m));
    for (std::size_t c = 0; c < nc; ++c)
      violation[static_cast<std::size_t>(i) * nc + c] =
          run_check(checks[c], states[static_cast<std::size_t>(i)], seed, cfg);
  });

  std::map<std::string, Stats> stats;
  int first_fail = -1;
  std::string first_check;
  for (int i = 0; i < n; ++i)
    for (std::size_t c = 0; c < nc; ++c) {
      const double v = violation[static_cast<std::size_t>(i) * nc + c];
      Stats& st = stats[checks[c]];
      if (v > 0.0) {
        ++st.failed;
        if (first_fail < 0) {
          first_fail = i;
          first_check = checks[c];
        }
      } else {
        ++st.passed;
      }
      st.worst = std::max(st.worst, v);
    }

  int rejected = 0;
  for (int i = 0; i < cfg.inject_invalid; ++i)
    if (!validate(make_invalid(sample_seed(cfg.seed, n + i))).valid) ++rejected;

  ordered doc;
  doc["count"] = n;
  doc["seed"] = cfg.seed;
  ordered cs;
  for (const std::string& c : checks) {
    const Stats& st = stats[c];
    // worst is reported as the largest excess over the check's own
    // threshold; negative values mean every sample had slack
    cs[c] = {{"passed", st.passed}, {"failed", st.failed}, {"worst_excess", st.worst}};
  }
  doc["checks"] = cs;
  doc["injected_invalid"] = {{"count", cfg.inject_invalid}, {"rejected", rejected}};
  const bool ok = first_fail < 0 && rejected == cfg.inject_invalid;
  doc["all_passed"] = ok;
  out << doc.dump(2) << '\n';

  if (first_fail >= 0) {
    ordered ctx;
    ctx["check"] = first_check;
    ctx["index"] = first_fail;
    ctx["sample_seed"] = sample_seed(cfg.seed, first_fail);
    ctx["state"] = ordered::parse(state_to_json(states[static_cast<std::size_t>(first_fail)]));
    throw CommandError("CheckFailed", "property check '" + first_check + "' failed",
                       kExitCheckFailed, ctx.dump());
  }
  if (!ok)
    throw CommandError("CheckFailed", "an injected invalid state passed validation",
                       kExitCheckFailed, "{}");
}

// ------------------------------------------------------------- entry point

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto error_object = [&](const std::string& code, const std::string& message,
                          ordered context) {
    ordered e;
    e["error"] = {{"code", code}, {"message", message}, {"context", std::move(context)}};
    err << e.dump() << '\n';
  };
  ordered base_ctx;
  base_ctx["subcommand"] = cfg.subcommand;
  if (!cfg.state_path.empty()) base_ctx["state"] = cfg.state_path;
  try {
    std::ofstream file;
    std::ostream* dest = &out;
    if (cfg.out != "-") {
      file.open(cfg.out);
      if (!file) throw ParseError("cannot write '" + cfg.out + "'");
      dest = &file;
    }
    if (cfg.subcommand == "measure")
      cmd_measure(cfg, *dest);
    else if (cfg.subcommand == "sweep-aligned")
      cmd_sweep_aligned(cfg, *dest);
    else if (cfg.subcommand == "envelope")
      cmd_envelope(cfg, *dest);
    else if (cfg.subcommand == "oracle")
      cmd_oracle(cfg, *dest);
    else if (cfg.subcommand == "random")
      cmd_random(cfg, *dest);
    else
      throw ParseError("unknown subcommand '" + cfg.subcommand + "'");
    return kExitOk;
  } catch (const OptimizerFailure& e) {
    ordered ctx = base_ctx;
    ctx["best"] = report_json(e.report());
    error_object(e.code(), e.what(), ctx);
    return kExitOptimizer;
  } catch (const CommandError& e) {
    ordered ctx = base_ctx;
    ctx.update(ordered::parse(e.context_json()));
    error_object(e.code(), e.what(), ctx);
    return e.exit_code();
  } catch (const Error& e) {
    error_object(e.code(), e.what(), base_ctx);
    return kExitUsage;
  }
}

}  // namespace qcorr
