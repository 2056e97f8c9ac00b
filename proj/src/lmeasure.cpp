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

#include "qcorr/lmeasure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "qcorr/closedform.hpp"
#include "qcorr/kernels.hpp"

namespace qcorr {

namespace {

// Below this the mu-pair of a conditional spectrum is merged.
constexpr double kDenomGuard = 1e-12;
// Simplex value spread regarded as evaluation noise.
constexpr double kNoiseFloor = 1e-15;
constexpr double kNoiseDiameter = 1e-4;

double prob(double p) { return std::clamp(p, 0.0, 1.0); }

void tangent_frame(const Vec3& k, Vec3& t1, Vec3& t2) {
  const Vec3 seed = std::abs(k.x()) < 0.6 ? Vec3::UnitX() : Vec3::UnitY();
  t1 = (seed - seed.dot(k) * k).normalized();
  t2 = k.cross(t1);
}

double binary_entropy(double p) {
  const EntropySpec vn = EntropySpec::von_neumann();
  return f_value(vn, prob(p)) + f_value(vn, prob(1.0 - p));
}

MeasurementReport report_for(const BlochState& state, const EntropySpec& spec,
                             const SphereMinimum& m) {
  MeasurementReport r;
  r.direction = m.direction.canonical();
  r.value = info_loss(state, r.direction, spec);
  r.cond_spectrum = cond_spectrum(state, r.direction);
  const Residual res = stationary_residual(state, r.direction, spec);
  r.residual = res.value;
  r.singular = res.singular;
  r.method = Method::grid_refine;
  r.degenerate = m.degenerate;
  r.converged = m.converged;
  r.iterations = m.iterations;
  return r;
}

}  // namespace

// ---------------------------------------------------------------- Direction

Direction Direction::from_vector(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n))
    throw DomainError("measurement direction must be a nonzero finite vector");
  return Direction(v / n);
}

Direction Direction::from_angles(double gamma, double phi) {
  return Direction(Vec3(std::sin(gamma) * std::cos(phi),
                        std::sin(gamma) * std::sin(phi), std::cos(gamma)));
}

double Direction::gamma() const {
  return std::atan2(std::hypot(k_.x(), k_.y()), k_.z());
}

double Direction::phi() const {
  double p = std::atan2(k_.y(), k_.x());
  if (p < 0.0) p += 2.0 * kPi;
  if (p >= 2.0 * kPi) p = 0.0;
  return p;
}

Direction Direction::canonical() const {
  bool flip = k_.z() < 0.0;
  if (k_.z() == 0.0) flip = k_.x() < 0.0 || (k_.x() == 0.0 && k_.y() < 0.0);
  return flip ? Direction(-k_) : *this;
}

double projective_distance(const Direction& a, const Direction& b) {
  const double c = std::abs(a.k().dot(b.k()));
  const double s = a.k().cross(b.k()).norm();
  return std::atan2(s, c);
}

std::string to_string(Method m) {
  return m == Method::closed_form ? "closed_form" : "grid_refine";
}

// ------------------------------------------------------- single direction

BlochState post_measurement_state(const BlochState& s, const Direction& dir) {
  const Vec3& k = dir.k();
  BlochState out;
  out.r_a = s.r_a;
  out.r_b = s.r_b.dot(k) * k;
  out.j = s.j * k * k.transpose();
  return out;
}

Spectrum4 cond_spectrum(const BlochState& s, const Direction& dir) {
  const Vec3& k = dir.k();
  const double rbk = s.r_b.dot(k);
  const Vec3 jk = s.j * k;
  const double np = (s.r_a + jk).norm();
  const double nm = (s.r_a - jk).norm();
  return {0.25 * (1.0 + rbk + np), 0.25 * (1.0 + rbk - np),
          0.25 * (1.0 - rbk + nm), 0.25 * (1.0 - rbk - nm)};
}

double info_loss(const BlochState& s, const Direction& k,
                 const EntropySpec& spec) {
  switch (spec.kind()) {
    case EntropyKind::linear:
      return s2_closed(post_measurement_state(s, k)) - s2_closed(s);
    case EntropyKind::cubic:
      return s3_closed(post_measurement_state(s, k)) - s3_closed(s);
    default: {
      Spectrum4 p = cond_spectrum(s, k);
      for (double& v : p) v = prob(v);
      return entropy_of_spectrum(p, spec) - entropy(s, spec);
    }
  }
}

StationaryTerms stationary_terms(const BlochState& s, const Direction& dir,
                                 const EntropySpec& spec) {
  const Vec3& k = dir.k();
  const double rbk = s.r_b.dot(k);
  const Vec3 jk = s.j * k;
  StationaryTerms t;
  for (int nu : {+1, -1}) {
    const double n = (s.r_a + nu * jk).norm();
    const bool merged = n < kDenomGuard;
    if (merged) t.singular = true;
    for (int mu : {+1, -1}) {
      const double p = prob(0.25 * (1.0 + nu * rbk + mu * n));
      const Derivative fd = f_derivative(spec, p);
      t.singular = t.singular || fd.clamped;
      t.alpha1 += 0.25 * fd.value * nu;
      if (!merged) {
        t.alpha2 += 0.25 * fd.value * nu * mu / n;
        t.alpha3 += 0.25 * fd.value * mu / n;
      }
    }
  }
  t.d = t.alpha1 * s.r_b + t.alpha2 * (s.j.transpose() * s.r_a) +
        t.alpha3 * (s.j.transpose() * jk);
  return t;
}

Residual stationary_residual(const BlochState& s, const Direction& k,
                             const EntropySpec& spec) {
  const StationaryTerms t = stationary_terms(s, k, spec);
  return {k.k().cross(t.d).norm(), t.singular};
}

Vec3 local_state_after(const BlochState& s, const Direction& dir) {
  return s.r_b.dot(dir.k()) * dir.k();
}

double discord_objective(const BlochState& s, const Direction& k) {
  const EntropySpec vn = EntropySpec::von_neumann();
  const double rbk = s.r_b.dot(k.k());
  const double local_before = binary_entropy(0.5 * (1.0 + s.r_b.norm()));
  const double local_after = binary_entropy(0.5 * (1.0 + rbk));
  return info_loss(s, k, vn) - (local_after - local_before);
}

namespace {

// Euclidean gradient of discord_objective: the deficit gradient minus the
// change of the local entropy of B, eta r_b.
Vec3 discord_gradient(const BlochState& s, const Direction& k, bool& singular) {
  const EntropySpec vn = EntropySpec::von_neumann();
  const StationaryTerms t = stationary_terms(s, k, vn);
  singular = t.singular;
  const double rbk = s.r_b.dot(k.k());
  double eta = 0.0;
  for (int nu : {+1, -1}) {
    const Derivative fd = f_derivative(vn, prob(0.5 * (1.0 + nu * rbk)));
    singular = singular || fd.clamped;
    eta += 0.5 * nu * fd.value;
  }
  return t.d - eta * s.r_b;
}

}  // namespace

Residual discord_residual(const BlochState& s, const Direction& k) {
  bool singular = false;
  const Vec3 d = discord_gradient(s, k, singular);
  return {k.k().cross(d).norm(), singular};
}

// ---------------------------------------------------------------- objective

InfoLossObjective::InfoLossObjective(const BlochState& state,
                                     const EntropySpec& spec)
    : state_(state), spec_(spec), base_(entropy(state, spec)) {}

double InfoLossObjective::operator()(const Vec3& k) const {
  const double rbk = state_.r_b.dot(k);
  const Vec3 jk = state_.j * k;
  const double np = (state_.r_a + jk).norm();
  const double nm = (state_.r_a - jk).norm();
  return f_value(spec_, prob(0.25 * (1.0 + rbk + np))) +
         f_value(spec_, prob(0.25 * (1.0 + rbk - np))) +
         f_value(spec_, prob(0.25 * (1.0 - rbk + nm))) +
         f_value(spec_, prob(0.25 * (1.0 - rbk - nm))) - base_;
}

// ----------------------------------------------------------- sphere search

SphereMinimum refine_from(const std::function<double(const Vec3&)>& f,
                          const Vec3& start, double step,
                          const OptimizerOptions& opts) {
  Vec3 t1, t2;
  tangent_frame(start, t1, t2);
  auto chart = [&](const Eigen::Vector2d& x) -> Vec3 {
    return (start + x(0) * t1 + x(1) * t2).normalized();
  };
  auto g = [&](const Eigen::Vector2d& x) { return f(chart(x)); };

  std::array<Eigen::Vector2d, 3> v = {Eigen::Vector2d(0.0, 0.0),
                                      Eigen::Vector2d(step, 0.0),
                                      Eigen::Vector2d(0.0, step)};
  std::array<double, 3> fv = {g(v[0]), g(v[1]), g(v[2])};

  SphereMinimum out;
  out.converged = false;
  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    std::array<int, 3> ord = {0, 1, 2};
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    v = {v[ord[0]], v[ord[1]], v[ord[2]]};
    fv = {fv[ord[0]], fv[ord[1]], fv[ord[2]]};

    const double diam = std::max((v[1] - v[0]).norm(), (v[2] - v[0]).norm());
    const double spread = fv[2] - fv[0];
    if (diam <= opts.xtol || (spread <= kNoiseFloor && diam <= kNoiseDiameter)) {
      out.converged = true;
      break;
    }

    const Eigen::Vector2d c = 0.5 * (v[0] + v[1]);
    const Eigen::Vector2d xr = c + (c - v[2]);
    const double fr = g(xr);
    if (fr < fv[0]) {
      const Eigen::Vector2d xe = c + 2.0 * (c - v[2]);
      const double fe = g(xe);
      if (fe < fr) {
        v[2] = xe;
        fv[2] = fe;
      } else {
        v[2] = xr;
        fv[2] = fr;
      }
      continue;
    }
    if (fr < fv[1]) {
      v[2] = xr;
      fv[2] = fr;
      continue;
    }
    const bool outside = fr < fv[2];
    const Eigen::Vector2d xc =
        outside ? Eigen::Vector2d(c + 0.5 * (xr - c)) : Eigen::Vector2d(c + 0.5 * (v[2] - c));
    const double fc = g(xc);
    if ((outside && fc <= fr) || (!outside && fc < fv[2])) {
      v[2] = xc;
      fv[2] = fc;
      continue;
    }
    for (int i = 1; i < 3; ++i) {
      v[i] = v[0] + 0.5 * (v[i] - v[0]);
      fv[i] = g(v[i]);
    }
  }
  int best = 0;
  for (int i = 1; i < 3; ++i)
    if (fv[i] < fv[best]) best = i;
  out.direction = Direction::from_vector(chart(v[best])).canonical();
  out.value = fv[best];
  out.iterations = iter;
  return out;
}

SphereMinimum gradient_polish(const std::function<double(const Vec3&)>& f,
                              const SphereGradient& grad, SphereMinimum m) {
  constexpr double kH = 1e-3;        // chart step of the Hessian differences
  constexpr double kMaxStep = 0.05;  // stay inside the refined basin
  for (int it = 0; it < 12; ++it) {
    const Vec3 k0 = m.direction.k();
    Vec3 t1, t2;
    tangent_frame(k0, t1, t2);
    // gradient in chart coordinates x -> normalize(k0 + x1 t1 + x2 t2)
    auto chart_grad = [&](const Eigen::Vector2d& x, Eigen::Vector2d& out) {
      const Vec3 u = k0 + x(0) * t1 + x(1) * t2;
      const double r = u.norm();
      const Vec3 k = u / r;
      Vec3 d;
      if (!grad(k, d)) return false;
      out(0) = d.dot(t1 - t1.dot(k) * k) / r;
      out(1) = d.dot(t2 - t2.dot(k) * k) / r;
      return true;
    };
    Eigen::Vector2d g0;
    if (!chart_grad(Eigen::Vector2d::Zero(), g0) || g0.norm() == 0.0) break;
    Eigen::Matrix2d h;
    bool ok = true;
    for (int i = 0; i < 2 && ok; ++i) {
      Eigen::Vector2d e = Eigen::Vector2d::Zero(), gp, gm;
      e(i) = kH;
      ok = chart_grad(e, gp) && chart_grad(-e, gm);
      h.col(i) = (gp - gm) / (2 * kH);
    }
    if (!ok) break;
    h = 0.5 * (h + h.transpose()).eval();
    if (h(0, 0) <= 0 || h.determinant() <= 0) break;  // not a basin bottom
    Eigen::Vector2d step = -h.ldlt().solve(g0);
    if (step.norm() > kMaxStep) step *= kMaxStep / step.norm();
    const Vec3 k1 = (k0 + step(0) * t1 + step(1) * t2).normalized();
    const double v1 = f(k1);
    Vec3 d1;
    if (!grad(k1, d1)) break;
    const double g1 = (d1 - d1.dot(k1) * k1).norm();
    // values may only move by rounding; the gradient has to shrink
    const double slack = 8 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, std::abs(m.value));
    if (!(v1 <= m.value + slack) || !(g1 < g0.norm())) break;
    m.direction = Direction::from_vector(k1).canonical();
    m.value = std::min(m.value, v1);
    if (step.norm() < 1e-15) break;
  }
  return m;
}

SphereMinimum sphere_minimize(const std::function<double(const Vec3&)>& f,
                              const OptimizerOptions& opts,
                              const SphereGradient& grad) {
  const kernels::SphereGrid grid = kernels::hemisphere_grid(opts.grid_n);
  const std::vector<double> values = opts.parallel
                                         ? kernels::evaluate_parallel(grid, f)
                                         : kernels::evaluate_serial(grid, f);
  const std::vector<std::size_t> minima = kernels::local_minima(grid, values);

  std::vector<Direction> starts;
  for (std::size_t idx : minima) {
    if (static_cast<int>(starts.size()) >= opts.n_starts) break;
    const int i = static_cast<int>(idx / grid.n_phi);
    const int j = static_cast<int>(idx % grid.n_phi);
    const Direction d = Direction::from_vector(grid.direction(i, j));
    const bool dup = std::any_of(starts.begin(), starts.end(), [&](const Direction& s) {
      return projective_distance(s, d) < 1.5 * grid.dgamma;
    });
    if (!dup) starts.push_back(d);
  }
  if (starts.empty()) {
    const std::size_t idx = kernels::argmin_serial(values);
    starts.push_back(Direction::from_vector(
        grid.direction(static_cast<int>(idx / grid.n_phi),
                       static_cast<int>(idx % grid.n_phi))));
  }

  std::vector<SphereMinimum> found;
  found.reserve(starts.size());
  for (const Direction& s : starts) {
    found.push_back(refine_from(f, s.k(), grid.dgamma, opts));
    if (grad) found.back() = gradient_polish(f, grad, found.back());
  }

  // Refinements that ended on the same minimum collapse to the lower one;
  // otherwise a start that stopped short could win the tie rule below.
  constexpr double kSameMinimum = 1e-3;
  std::stable_sort(found.begin(), found.end(),
                   [](const SphereMinimum& a, const SphereMinimum& b) { return a.value < b.value; });
  std::vector<SphereMinimum> distinct;
  for (const SphereMinimum& m : found)
    if (std::none_of(distinct.begin(), distinct.end(), [&](const SphereMinimum& d) {
          return projective_distance(d.direction, m.direction) <= kSameMinimum;
        }))
      distinct.push_back(m);

  // Lowest value wins; within value_tie the smaller polar angle wins.
  const double lowest = distinct.front().value;
  std::size_t win = 0;
  for (std::size_t i = 1; i < distinct.size(); ++i)
    if (distinct[i].value <= lowest + opts.value_tie &&
        distinct[i].direction.gamma() < distinct[win].direction.gamma() - 1e-12)
      win = i;
  SphereMinimum best = distinct[win];
  for (std::size_t i = 0; i < distinct.size(); ++i)
    if (i != win && std::abs(distinct[i].value - best.value) <= opts.value_tie)
      best.degenerate = true;
  return best;
}

// ------------------------------------------------------------- minimizers

MeasurementReport minimize_info_loss(const BlochState& state,
                                     const EntropySpec& spec,
                                     const OptimizerOptions& opts) {
  if (opts.allow_closed && spec.kind() == EntropyKind::linear)
    return i2_closed(state);
  if (opts.allow_closed && spec.kind() == EntropyKind::cubic)
    return i3_closed(state);

  const InfoLossObjective objective(state, spec);
  const SphereMinimum m = sphere_minimize(
      [&](const Vec3& k) { return objective(k); }, opts,
      [&](const Vec3& k, Vec3& g) {
        const StationaryTerms t = stationary_terms(state, Direction::from_vector(k), spec);
        g = t.d;
        return !t.singular;
      });
  MeasurementReport r = report_for(state, spec, m);
  if (opts.strict && !r.converged) throw OptimizerFailure(r);
  return r;
}

MeasurementReport discord(const BlochState& state, const OptimizerOptions& opts) {
  const InfoLossObjective deficit(state, EntropySpec::von_neumann());
  const double local_before = binary_entropy(0.5 * (1.0 + state.r_b.norm()));
  auto objective = [&](const Vec3& k) {
    const double local_after = binary_entropy(0.5 * (1.0 + state.r_b.dot(k)));
    return deficit(k) - (local_after - local_before);
  };
  auto gradient = [&](const Vec3& k, Vec3& g) {
    bool singular = false;
    g = discord_gradient(state, Direction::from_vector(k), singular);
    return !singular;
  };
  const SphereMinimum m = sphere_minimize(objective, opts, gradient);

  MeasurementReport r;
  r.direction = m.direction.canonical();
  r.value = discord_objective(state, r.direction);
  r.cond_spectrum = cond_spectrum(state, r.direction);
  const Residual res = discord_residual(state, r.direction);
  r.residual = res.value;
  r.singular = res.singular;
  r.method = Method::grid_refine;
  r.degenerate = m.degenerate;
  r.converged = m.converged;
  r.iterations = m.iterations;
  if (opts.strict && !r.converged) throw OptimizerFailure(r);
  return r;
}

}  // namespace qcorr
