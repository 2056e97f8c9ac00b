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

#include "qcorr/entanglement.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "qcorr/closedform.hpp"
#include "qcorr/entropies.hpp"

namespace qcorr {

std::string to_string(ConcurrenceMethod m) {
  switch (m) {
    case ConcurrenceMethod::wootters_general:
      return "wootters_general";
    case ConcurrenceMethod::x_closed:
      return "x_closed";
    case ConcurrenceMethod::bell_diag:
      return "bell_diag";
  }
  return "?";
}

double concurrence_bell_diag(double jx, double jy, double jz) {
  const Spectrum4 p = bell_diag_spectrum(jx, jy, jz);
  return std::max(2.0 * p[0] - 1.0, 0.0);
}

double concurrence_x(const XForm& x) {
  const double ap = 1.0 + x.jz + (x.r_a + x.r_b);
  const double am = 1.0 + x.jz - (x.r_a + x.r_b);
  const double cp = 1.0 - x.jz + (x.r_a - x.r_b);
  const double cm = 1.0 - x.jz - (x.r_a - x.r_b);
  const double alp = x.jx - x.jy;
  const double alm = x.jx + x.jy;
  const double t1 = std::abs(alp) - std::sqrt(std::max(cp * cm, 0.0));
  const double t2 = std::abs(alm) - std::sqrt(std::max(ap * am, 0.0));
  return 0.5 * std::max({t1, t2, 0.0});
}

double concurrence_wootters(const DensityMatrix& rho) {
  const Mat4c h = 0.5 * (rho.m + rho.m.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat4c> es(h);
  Eigen::Vector4d ev = es.eigenvalues();
  for (int i = 0; i < 4; ++i) ev(i) = ev(i) <= 1e-14 ? 0.0 : std::sqrt(ev(i));
  const Mat4c sqrt_rho =
      es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  Mat4c yy = Mat4c::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Mat4c r = sqrt_rho * yy * sqrt_rho.conjugate();
  Eigen::JacobiSVD<Mat4c> svd(r);
  const Eigen::Vector4d l = svd.singularValues();  // decreasing
  return std::max(0.0, l(0) - l(1) - l(2) - l(3));
}

ConcurrenceReport concurrence(const BlochState& s) {
  ConcurrenceReport r;
  const StateClass cls = classify(s);
  if (cls.tag == StateKind::bell_diagonal) {
    const PrincipalAxes pa = principal_axes(s);
    const Mat3& d = pa.canonical.j;
    r.value = concurrence_bell_diag(d(0, 0), d(1, 1), d(2, 2));
    r.method = ConcurrenceMethod::bell_diag;
  } else if (cls.tag == StateKind::x_state) {
    r.value = concurrence_x(*x_form(s));
    r.method = ConcurrenceMethod::x_closed;
  } else {
    r.value = concurrence_wootters(to_density(s));
    r.method = ConcurrenceMethod::wootters_general;
  }
  return r;
}

double eof(double c) {
  if (!(c >= -1e-12 && c <= 1.0 + 1e-12))
    throw DomainError("concurrence must lie in [0, 1], got " + std::to_string(c));
  c = std::clamp(c, 0.0, 1.0);
  const double x = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c)));
  const EntropySpec vn = EntropySpec::von_neumann();
  return f_value(vn, x) + f_value(vn, std::clamp(1.0 - x, 0.0, 1.0));
}

BoundReport bound_check_bell_diag(double jx, double jy, double jz, double tol) {
  const Spectrum4 p = bell_diag_spectrum(jx, jy, jz);
  BoundReport b;
  const double c = std::max(2.0 * p[0] - 1.0, 0.0);
  b.c2 = c * c;
  b.i2 = bell_diag_if(jx, jy, jz, EntropySpec::linear()).value;
  b.i3 = bell_diag_if(jx, jy, jz, EntropySpec::cubic()).value;
  b.i2_ok = b.i2 >= b.c2 - tol;
  b.i3_ok = b.i3 >= b.c2 - tol;
  b.equality = c > tol && p[2] <= tol && p[3] <= tol;
  return b;
}

}  // namespace qcorr
