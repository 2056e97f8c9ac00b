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

#include "qcorr/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <Eigen/Eigenvalues>

namespace qcorr {

namespace {

constexpr double kDegenerateTol = 1e-12;

double prob(double p) { return std::clamp(p, 0.0, 1.0); }

// Unit vector of the leading eigenspace with the largest z component (then
// x, then y), so that degenerate cases give reproducible directions.
Vec3 leading_direction(const SymEigen& e, bool& degenerate) {
  const double scale = std::max(1.0, std::abs(e.values(0)));
  Mat3 proj = Mat3::Zero();
  int dim = 0;
  for (int i = 0; i < 3; ++i)
    if (e.values(0) - e.values(i) <= kDegenerateTol * scale) {
      proj += e.vectors.col(i) * e.vectors.col(i).transpose();
      ++dim;
    }
  degenerate = dim > 1;
  if (dim == 1) return e.vectors.col(0);
  for (int axis : {2, 0, 1}) {
    const Vec3 w = proj.col(axis);
    if (w.norm() > 1e-6) return w.normalized();
  }
  return e.vectors.col(0);
}

MeasurementReport closed_report(const BlochState& s, const EntropySpec& spec,
                                double value, const Vec3& k, bool degenerate) {
  MeasurementReport r;
  r.value = value;
  r.direction = Direction::from_vector(k).canonical();
  r.cond_spectrum = cond_spectrum(s, r.direction);
  const Residual res = stationary_residual(s, r.direction, spec);
  r.residual = res.value;
  r.singular = res.singular;
  r.method = Method::closed_form;
  r.degenerate = degenerate;
  r.converged = true;
  return r;
}

Mat3 rz_quarter() {
  Mat3 r;
  r << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  return r;
}

double entropy_clamped(const Spectrum4& p, const EntropySpec& spec) {
  double s = 0.0;
  for (double v : p) s += f_value(spec, prob(v));
  return s;
}

}  // namespace

// ---------------------------------------------------------------- general

Mat3 m2_matrix(const BlochState& s) {
  return s.r_b * s.r_b.transpose() + s.j.transpose() * s.j;
}

Mat3 m3_matrix(const BlochState& s) {
  const Vec3 jta = s.j.transpose() * s.r_a;
  return m2_matrix(s) + s.r_b * jta.transpose() + jta * s.r_b.transpose();
}

SymEigen sym_eigen(const Mat3& m) {
  const Mat3 sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Mat3> es(sym);
  SymEigen out;
  for (int i = 0; i < 3; ++i) {
    out.values(i) = es.eigenvalues()(2 - i);
    out.vectors.col(i) = es.eigenvectors().col(2 - i);
  }
  return out;
}

MeasurementReport i2_closed(const BlochState& s) {
  const SymEigen e = sym_eigen(m2_matrix(s));
  bool degenerate = false;
  const Vec3 k = leading_direction(e, degenerate);
  return closed_report(s, EntropySpec::linear(), 0.5 * (e.values(1) + e.values(2)),
                       k, degenerate);
}

MeasurementReport i3_closed(const BlochState& s) {
  const SymEigen e = sym_eigen(m3_matrix(s));
  bool degenerate = false;
  const Vec3 k = leading_direction(e, degenerate);
  const double value =
      0.25 * (e.values(1) + e.values(2)) - 0.5 * s.j.determinant();
  return closed_report(s, EntropySpec::cubic(), value, k, degenerate);
}

// ----------------------------------------------------------- Bell-diagonal

BellCanonical bell_canonicalize(double jx, double jy, double jz) {
  const std::array<double, 3> j = {jx, jy, jz};
  // canonical z, x, y take the caller's axes by decreasing |J|; stable order
  // z, x, y on ties
  std::array<int, 3> order = {2, 0, 1};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(j[a]) > std::abs(j[b]); });
  BellCanonical c;
  c.axis = {order[1], order[2], order[0]};
  c.jz = j[order[0]];
  c.jx = j[order[1]];
  c.jy = j[order[2]];
  // one-sided pi rotations flip two signs at a time
  if (c.jz < 0.0) {
    c.jz = -c.jz;
    c.jy = -c.jy;
  }
  if (c.jx < 0.0) {
    c.jx = -c.jx;
    c.jy = -c.jy;
  }
  return c;
}

Spectrum4 bell_diag_spectrum(double jx, double jy, double jz) {
  const BellCanonical c = bell_canonicalize(jx, jy, jz);
  Spectrum4 p = {0.25 * (1.0 + c.jz + (c.jx - c.jy)),
                 0.25 * (1.0 + c.jz - (c.jx - c.jy)),
                 0.25 * (1.0 - c.jz + (c.jx + c.jy)),
                 0.25 * (1.0 - c.jz - (c.jx + c.jy))};
  std::sort(p.begin(), p.end(), std::greater<>());
  if (p[3] < -1e-10)
    throw InvalidState("Bell-diagonal correlations give eigenvalue " +
                       std::to_string(p[3]));
  return p;
}

double bell_diag_if_of_spectrum(const Spectrum4& p, const EntropySpec& spec) {
  const double a = 0.5 * (p[0] + p[1]);
  const double b = 0.5 * (p[2] + p[3]);
  return 2.0 * f_value(spec, prob(a)) + 2.0 * f_value(spec, prob(b)) -
         entropy_clamped(p, spec);
}

MeasurementReport bell_diag_if(double jx, double jy, double jz,
                               const EntropySpec& spec) {
  const Spectrum4 p = bell_diag_spectrum(jx, jy, jz);
  const BellCanonical c = bell_canonicalize(jx, jy, jz);
  const std::array<double, 3> j = {jx, jy, jz};
  Vec3 k = Vec3::Zero();
  k(c.axis[2]) = 1.0;
  int ties = 0;
  for (double v : j)
    if (std::abs(std::abs(v) - c.jz) <= kDegenerateTol) ++ties;
  const BlochState s = bell_diagonal_state(jx, jy, jz);
  return closed_report(s, spec, bell_diag_if_of_spectrum(p, spec), k, ties > 1);
}

double small_j_universal_check(double jx, double jy, double jz,
                               const EntropySpec& spec) {
  return bell_diag_if(jx, jy, jz, spec).value /
         bell_diag_if(jx, jy, jz, EntropySpec::linear()).value;
}

// ---------------------------------------------------------------- X states

Spectrum4 x_state_spectrum(const XForm& x) {
  Spectrum4 out{};
  int i = 0;
  for (int nu : {+1, -1})
    for (int mu : {+1, -1}) {
      const double a = x.r_a + nu * x.r_b;
      const double b = x.jx - nu * x.jy;
      out[i++] = 0.25 * (1.0 + nu * x.jz + mu * std::sqrt(a * a + b * b));
    }
  return out;
}

XStateResult x_state_if(const BlochState& s, const EntropySpec& spec,
                        double tol) {
  std::optional<XForm> found = x_form(s, tol);
  if (!found) throw NotXState("no local frame brings the state to X form");
  XForm x = *found;
  if (std::abs(x.jy) > std::abs(x.jx)) {
    std::swap(x.jx, x.jy);
    x.rot_a = x.rot_a * rz_quarter();
    x.rot_b = x.rot_b * rz_quarter();
  }
  const BlochState c = x.to_state();
  const double base = entropy_clamped(x_state_spectrum(x), spec);
  auto value_at = [&](double gamma, double phi) {
    return entropy_clamped(cond_spectrum(c, Direction::from_angles(gamma, phi)),
                           spec) -
           base;
  };

  XStateResult out;
  out.candidates.push_back({0.0, 0.0, value_at(0.0, 0.0), false});
  out.candidates.push_back({kPi / 2, 0.0, value_at(kPi / 2, 0.0), false});
  out.candidates.push_back({kPi / 2, kPi / 2, value_at(kPi / 2, kPi / 2), false});

  // Intermediate-angle equation at phi = 0:
  //   h(g) = alpha3 (Jx^2 - Jz^2) cos g - (alpha1 r_B + alpha2 Jz r_A) = 0.
  const double gap = x.jx * x.jx - x.jz * x.jz;
  auto rhs = [&](double g) -> std::optional<double> {
    const StationaryTerms t =
        stationary_terms(c, Direction::from_angles(g, 0.0), spec);
    const double den = t.alpha3 * gap;
    if (std::abs(den) < 1e-300) return std::nullopt;
    return (t.alpha1 * x.r_b + t.alpha2 * x.jz * x.r_a) / den;
  };
  auto h = [&](double g) {
    const StationaryTerms t =
        stationary_terms(c, Direction::from_angles(g, 0.0), spec);
    return t.alpha3 * gap * std::cos(g) - (t.alpha1 * x.r_b + t.alpha2 * x.jz * x.r_a);
  };
  std::vector<double> roots;
  auto accept = [&](double g) {
    if (g > kPi / 2) g = kPi - g;  // -g and pi - g are the same measurement
    if (!(g > 1e-6 && g < kPi / 2 - 1e-6)) return;
    if (stationary_residual(c, Direction::from_angles(g, 0.0), spec).value > 1e-8)
      return;
    for (double r : roots)
      if (std::abs(r - g) < 1e-7) return;
    roots.push_back(g);
  };

  for (double g : {kPi / 6, kPi / 3}) {
    bool ok = false;
    for (int it = 0; it < 200; ++it) {
      const std::optional<double> v = rhs(g);
      if (!v) break;
      const double next = 0.5 * g + 0.5 * std::acos(std::clamp(*v, -1.0, 1.0));
      if (std::abs(next - g) < 1e-14) {
        g = next;
        ok = true;
        break;
      }
      g = next;
    }
    if (ok)
      accept(g);
    else
      out.root_search_failed = true;
  }
  // Repelling roots are invisible to the fixed-point map; bracket h on a
  // coarse scan as well.
  constexpr int kScan = 64;
  double g0 = 0.0, h0 = h(g0);
  for (int i = 1; i <= kScan; ++i) {
    const double g1 = kPi * i / kScan;
    const double h1 = h(g1);
    if ((h0 < 0.0) != (h1 < 0.0)) {
      double lo = g0, hi = g1, hlo = h0;
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double hm = h(mid);
        if ((hm < 0.0) == (hlo < 0.0)) {
          lo = mid;
          hlo = hm;
        } else {
          hi = mid;
        }
      }
      accept(0.5 * (lo + hi));
    }
    g0 = g1;
    h0 = h1;
  }
  for (double g : roots) out.candidates.push_back({g, 0.0, value_at(g, 0.0), true});

  // lowest value, ties to the smaller polar angle
  const OptimizerOptions defaults;
  std::size_t best = 0;
  for (std::size_t i = 1; i < out.candidates.size(); ++i) {
    const XCandidate& a = out.candidates[i];
    const XCandidate& b = out.candidates[best];
    if (a.value < b.value - defaults.value_tie ||
        (std::abs(a.value - b.value) <= defaults.value_tie && a.gamma < b.gamma))
      best = i;
  }
  const XCandidate& w = out.candidates[best];
  bool degenerate = w.interior;
  for (std::size_t i = 0; i < out.candidates.size(); ++i)
    if (i != best && std::abs(out.candidates[i].value - w.value) <= defaults.value_tie &&
        (out.candidates[i].gamma != w.gamma || out.candidates[i].phi != w.phi))
      degenerate = true;

  const Vec3 k = x.rot_b * Direction::from_angles(w.gamma, w.phi).k();
  out.report = closed_report(s, spec, w.value, k, degenerate);
  return out;
}

// ---------------------------------------------------------- aligned family

BlochState aligned_state(double theta) {
  const double c = std::cos(theta), sn = std::sin(theta);
  BlochState s;
  s.r_a = Vec3(0.0, 0.0, c);
  s.r_b = Vec3(0.0, 0.0, c);
  s.j = Vec3(sn * sn, 0.0, c * c).asDiagonal();
  return s;
}

double aligned_theta_c2() { return std::acos(1.0 / std::sqrt(3.0)); }

double aligned_theta_c3() {
  return std::acos(std::sqrt((std::sqrt(17.0) - 3.0) / 4.0));
}

AlignedLoss aligned_i2_i3(double theta) {
  const double c2 = std::cos(theta) * std::cos(theta);
  const double s4 = std::pow(std::sin(theta), 4);
  AlignedLoss a;
  if (theta < aligned_theta_c2()) {
    a.i2 = 0.5 * s4;
  } else {
    a.i2 = 0.5 * (c2 + c2 * c2);
    a.branch2 = Branch::x;
  }
  if (theta < aligned_theta_c3()) {
    a.i3 = 0.25 * s4;
  } else {
    a.i3 = 0.25 * (c2 + 3.0 * c2 * c2);
    a.branch3 = Branch::x;
  }
  return a;
}

// -------------------------------------------------------------- envelopes

const char* to_string(EnvelopeConfig c) {
  switch (c) {
    case EnvelopeConfig::p34_zero:
      return "p34_zero";
    case EnvelopeConfig::p2_eq_p1:
      return "p2_eq_p1";
    case EnvelopeConfig::p234_equal:
      return "p234_equal";
    case EnvelopeConfig::p23_equal_p4_0:
      return "p23_equal_p4_0";
    case EnvelopeConfig::p123_equal:
      return "p123_equal";
    case EnvelopeConfig::grid:
      return "grid";
  }
  return "?";
}

namespace {

constexpr double kFeasTol = 1e-14;

std::optional<Spectrum4> config_spectrum(EnvelopeConfig c, double p1) {
  const double rest = 1.0 - p1;
  Spectrum4 p{};
  switch (c) {
    case EnvelopeConfig::p34_zero:
      p = {p1, rest, 0.0, 0.0};
      break;
    case EnvelopeConfig::p2_eq_p1:
      p = {p1, p1, 0.5 * (1.0 - 2.0 * p1), 0.5 * (1.0 - 2.0 * p1)};
      break;
    case EnvelopeConfig::p234_equal:
      p = {p1, rest / 3.0, rest / 3.0, rest / 3.0};
      break;
    case EnvelopeConfig::p23_equal_p4_0:
      p = {p1, 0.5 * rest, 0.5 * rest, 0.0};
      break;
    case EnvelopeConfig::p123_equal:
      p = {p1, p1, p1, 1.0 - 3.0 * p1};
      break;
    case EnvelopeConfig::grid:
      return std::nullopt;
  }
  for (int i = 0; i < 4; ++i) {
    if (p[i] < -kFeasTol) return std::nullopt;
    if (i > 0 && p[i] > p[i - 1] + kFeasTol) return std::nullopt;
    p[i] = std::max(p[i], 0.0);
  }
  return p;
}

void check_p1(double p1) {
  if (!(p1 >= 0.25 - 1e-15 && p1 <= 1.0 + 1e-15))
    throw InfeasibleP1("largest eigenvalue must lie in [1/4, 1], got " +
                       std::to_string(p1));
}

}  // namespace

std::vector<std::pair<EnvelopeConfig, Spectrum4>> envelope_candidates(double p1) {
  check_p1(p1);
  std::vector<std::pair<EnvelopeConfig, Spectrum4>> out;
  for (EnvelopeConfig c :
       {EnvelopeConfig::p34_zero, EnvelopeConfig::p2_eq_p1,
        EnvelopeConfig::p234_equal, EnvelopeConfig::p23_equal_p4_0,
        EnvelopeConfig::p123_equal})
    if (auto p = config_spectrum(c, p1)) out.emplace_back(c, *p);
  return out;
}

Envelope fig1_envelope(double p1, const EntropySpec& spec, int grid_m) {
  check_p1(p1);
  if (grid_m < 1) throw DomainError("grid_m must be positive");
  Envelope e;
  bool first = true;
  for (const auto& [c, p] : envelope_candidates(p1)) {
    const double v = bell_diag_if_of_spectrum(p, spec);
    if (first || v < e.min) {
      e.min = v;
      e.argmin = p;
      e.min_config = c;
    }
    if (first || v > e.max) {
      e.max = v;
      e.argmax = p;
      e.max_config = c;
    }
    first = false;
  }

  // simplex grid over (p2, p3, p4) = h (a, b, c), a + b + c = grid_m
  const double rest = 1.0 - p1;
  const double h = rest / grid_m;
  bool grid_first = true;
  for (int a = 0; a <= grid_m; ++a)
    for (int b = 0; b <= a && a + b <= grid_m; ++b) {
      const int cc = grid_m - a - b;
      if (cc > b) continue;
      const Spectrum4 p = {p1, a * h, b * h, cc * h};
      if (p[1] > p1 + kFeasTol) continue;
      const double v = bell_diag_if_of_spectrum(p, spec);
      if (grid_first || v < e.grid_min) e.grid_min = v;
      if (grid_first || v > e.grid_max) e.grid_max = v;
      grid_first = false;
      if (first || v < e.min - 1e-15) {
        e.min = v;
        e.argmin = p;
        e.min_config = EnvelopeConfig::grid;
      }
      if (first || v > e.max + 1e-15) {
        e.max = v;
        e.argmax = p;
        e.max_config = EnvelopeConfig::grid;
      }
      first = false;
    }
  return e;
}

double envelope_switch_point(const EntropySpec& spec, EnvelopeConfig a,
                             EnvelopeConfig b, double lo, double hi) {
  auto diff = [&](double p1) {
    const auto pa = config_spectrum(a, p1);
    const auto pb = config_spectrum(b, p1);
    if (!pa || !pb)
      throw DomainError(std::string("configuration infeasible at p1 = ") +
                        std::to_string(p1));
    return bell_diag_if_of_spectrum(*pa, spec) - bell_diag_if_of_spectrum(*pb, spec);
  };
  double dlo = diff(lo);
  const double dhi = diff(hi);
  if ((dlo < 0.0) == (dhi < 0.0))
    throw DomainError("no sign change of the candidate difference on the interval");
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    const double dm = diff(mid);
    if ((dm < 0.0) == (dlo < 0.0)) {
      lo = mid;
      dlo = dm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace qcorr
