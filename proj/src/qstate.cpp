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

#include "qcorr/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace qcorr {

namespace {

const std::array<Mat2c, 4>& paulis() {
  static const std::array<Mat2c, 4> p = [] {
    const Complex i(0.0, 1.0);
    std::array<Mat2c, 4> s;
    s[0] << 1, 0, 0, 1;
    s[1] << 0, 1, 1, 0;
    s[2] << 0, -i, i, 0;
    s[3] << 1, 0, 0, -1;
    return s;
  }();
  return p;
}

Mat4c kron(const Mat2c& a, const Mat2c& b) {
  Mat4c out;
  for (int r1 = 0; r1 < 2; ++r1)
    for (int c1 = 0; c1 < 2; ++c1)
      for (int r2 = 0; r2 < 2; ++r2)
        for (int c2 = 0; c2 < 2; ++c2)
          out(2 * r1 + r2, 2 * c1 + c2) = a(r1, c1) * b(r2, c2);
  return out;
}

// Pauli string sigma_mu (x) sigma_nu, index 0 is the identity.
const Mat4c& pauli_pair(int mu, int nu) {
  static const std::array<Mat4c, 16> table = [] {
    std::array<Mat4c, 16> t;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) t[4 * a + b] = kron(paulis()[a], paulis()[b]);
    return t;
  }();
  return table[4 * mu + nu];
}

double expect(const DensityMatrix& rho, int mu, int nu) {
  // Tr(rho P) for Hermitian P; the imaginary part vanishes for valid rho.
  return (rho.m * pauli_pair(mu, nu)).trace().real();
}

double max_offdiag(const Mat3& m) {
  double out = 0.0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (r != c) out = std::max(out, std::abs(m(r, c)));
  return out;
}

// Right-handed orthonormal pair (e1, e2) with e1 x e2 == k.
void complete_frame(const Vec3& k, Vec3& e1, Vec3& e2) {
  Vec3 seed = std::abs(k.x()) < 0.6 ? Vec3::UnitX() : Vec3::UnitY();
  e1 = (seed - seed.dot(k) * k).normalized();
  e2 = k.cross(e1);
}

// Cyclic relabelling that moves axis m onto z (proper rotation).
Mat3 cyclic_to_z(int m) {
  Mat3 p = Mat3::Identity();
  if (m == 0) {
    p.col(0) = Vec3::UnitY();
    p.col(1) = Vec3::UnitZ();
    p.col(2) = Vec3::UnitX();
  } else if (m == 1) {
    p.col(0) = Vec3::UnitZ();
    p.col(1) = Vec3::UnitX();
    p.col(2) = Vec3::UnitY();
  }
  return p;
}

std::optional<XForm> x_form_degenerate(const BlochState& s, double tol) {
  const double na = s.r_a.norm();
  const double nb = s.r_b.norm();
  if (na <= tol && nb <= tol) return std::nullopt;
  Vec3 kb;
  if (nb > tol) {
    kb = s.r_b / nb;
  } else {
    Vec3 v = s.j.transpose() * (s.r_a / na);
    if (v.norm() <= tol) return std::nullopt;
    kb = v.normalized();
  }
  Vec3 ka;
  if (na > tol) {
    ka = s.r_a / na;
  } else {
    Vec3 v = s.j * kb;
    if (v.norm() <= tol) return std::nullopt;
    ka = v.normalized();
  }
  const double jz = ka.dot(s.j * kb);
  if ((s.j * kb - jz * ka).norm() > tol) return std::nullopt;
  if ((s.j.transpose() * ka - jz * kb).norm() > tol) return std::nullopt;

  Vec3 a1, a2, b1, b2;
  complete_frame(ka, a1, a2);
  complete_frame(kb, b1, b2);
  Eigen::Matrix<double, 3, 2> ea, eb;
  ea << a1, a2;
  eb << b1, b2;
  Eigen::Matrix2d block = ea.transpose() * s.j * eb;
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(block,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix2d u = svd.matrixU();
  Eigen::Matrix2d v = svd.matrixV();
  Eigen::Vector2d d = svd.singularValues();
  if (u.determinant() < 0) {
    u.col(1) *= -1.0;
    d(1) *= -1.0;
  }
  if (v.determinant() < 0) {
    v.col(1) *= -1.0;
    d(1) *= -1.0;
  }
  XForm x;
  x.rot_a << ea * u, ka;
  x.rot_b << eb * v, kb;
  x.jx = d(0);
  x.jy = d(1);
  x.jz = jz;
  x.r_a = ka.dot(s.r_a);
  x.r_b = kb.dot(s.r_b);
  BlochState c = rotate_local(s, x.rot_a, x.rot_b);
  if (max_offdiag(c.j) > tol || c.r_a.head<2>().norm() > tol ||
      c.r_b.head<2>().norm() > tol)
    return std::nullopt;
  return x;
}

}  // namespace

std::string to_string(StateKind k) {
  switch (k) {
    case StateKind::pure:
      return "pure";
    case StateKind::bell_diagonal:
      return "bell_diagonal";
    case StateKind::x_state:
      return "x_state";
    case StateKind::general:
      return "general";
  }
  return "general";
}

DensityMatrix to_density(const BlochState& s) {
  DensityMatrix rho;
  rho.m = pauli_pair(0, 0);
  for (int mu = 0; mu < 3; ++mu) {
    rho.m += s.r_a(mu) * pauli_pair(mu + 1, 0);
    rho.m += s.r_b(mu) * pauli_pair(0, mu + 1);
    for (int nu = 0; nu < 3; ++nu)
      rho.m += s.j(mu, nu) * pauli_pair(mu + 1, nu + 1);
  }
  rho.m *= 0.25;
  return rho;
}

BlochState from_density(const DensityMatrix& rho) {
  const ValidationReport rep = validate(rho);
  if (!rep.valid)
    throw InvalidState("density matrix failed validation (min eigenvalue " +
                       std::to_string(rep.min_eig) + ", trace deviation " +
                       std::to_string(rep.trace_dev) + ")");
  BlochState s;
  for (int mu = 0; mu < 3; ++mu) {
    s.r_a(mu) = expect(rho, mu + 1, 0);
    s.r_b(mu) = expect(rho, 0, mu + 1);
    for (int nu = 0; nu < 3; ++nu) s.j(mu, nu) = expect(rho, mu + 1, nu + 1);
  }
  return s;
}

ValidationReport validate(const DensityMatrix& rho) {
  ValidationReport rep;
  rep.herm_dev = (rho.m - rho.m.adjoint()).cwiseAbs().maxCoeff();
  rep.trace_dev = std::abs(rho.m.trace() - Complex(1.0, 0.0));
  const Mat4c h = 0.5 * (rho.m + rho.m.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat4c> es(h, Eigen::EigenvaluesOnly);
  rep.min_eig = es.eigenvalues()(0);
  rep.valid = rep.herm_dev <= kTolHerm && rep.trace_dev <= kTolTrace &&
              rep.min_eig >= -kTolPsd && std::isfinite(rep.min_eig);
  return rep;
}

Spectrum4 density_spectrum(const DensityMatrix& rho) {
  const Mat4c h = 0.5 * (rho.m + rho.m.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat4c> es(h, Eigen::EigenvaluesOnly);
  constexpr double snap = 16.0 * std::numeric_limits<double>::epsilon();
  Spectrum4 out;
  for (int i = 0; i < 4; ++i) {
    double v = es.eigenvalues()(3 - i);
    out[i] = std::abs(v) < snap ? 0.0 : v;
  }
  return out;
}

PrincipalAxes principal_axes(const BlochState& s) {
  PrincipalAxes pa;
  const double scale = 1.0 + s.j.cwiseAbs().maxCoeff();
  if (max_offdiag(s.j) <= 1e-14 * scale) {
    pa.canonical = s;
    pa.canonical.j = s.j.diagonal().asDiagonal();
    return pa;
  }
  Eigen::JacobiSVD<Mat3> svd(s.j, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU();
  Mat3 v = svd.matrixV();
  Vec3 d = svd.singularValues();  // decreasing, so index 2 is the smallest
  if (u.determinant() < 0) {
    u.col(2) *= -1.0;
    d(2) *= -1.0;
  }
  if (v.determinant() < 0) {
    v.col(2) *= -1.0;
    d(2) *= -1.0;
  }
  pa.rot_a = u;
  pa.rot_b = v;
  pa.canonical.j = d.asDiagonal();
  pa.canonical.r_a = u.transpose() * s.r_a;
  pa.canonical.r_b = v.transpose() * s.r_b;
  return pa;
}

BoundsReport purity_bounds(const BlochState& s, double tol) {
  BoundsReport b;
  b.lhs1 = s.r_a.squaredNorm() + s.r_b.squaredNorm() + s.j.squaredNorm();
  b.lhs2 = s.r_a.dot(s.j * s.r_b) - s.j.determinant();
  const double s2 = 1.5 - 0.5 * b.lhs1;
  b.rhs2 = 1.0 - s2 / 3.0;
  b.bound1_ok = b.lhs1 <= 3.0 + tol;
  b.bound2_ok = b.lhs2 <= b.rhs2 + tol;
  b.saturated = std::abs(b.lhs1 - 3.0) <= tol && std::abs(b.lhs2 - 1.0) <= tol;
  return b;
}

DensityMatrix random_density(std::uint64_t seed, SamplingMethod method) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> count(1, 4);
  auto cgauss = [&] { return Complex(gauss(rng), gauss(rng)); };

  DensityMatrix rho;
  if (method == SamplingMethod::ginibre_like) {
    const int rank = count(rng);
    Eigen::MatrixXcd g(4, rank);
    for (int c = 0; c < rank; ++c)
      for (int r = 0; r < 4; ++r) g(r, c) = cgauss();
    rho.m = g * g.adjoint();
  } else {
    const int terms = count(rng);
    std::exponential_distribution<double> expo(1.0);
    std::bernoulli_distribution product(0.5);
    double wsum = 0.0;
    for (int t = 0; t < terms; ++t) {
      Eigen::Vector4cd psi;
      if (product(rng)) {
        Eigen::Vector2cd a(cgauss(), cgauss());
        Eigen::Vector2cd b(cgauss(), cgauss());
        for (int i = 0; i < 2; ++i)
          for (int k = 0; k < 2; ++k) psi(2 * i + k) = a(i) * b(k);
      } else {
        for (int i = 0; i < 4; ++i) psi(i) = cgauss();
      }
      psi.normalize();
      const double w = expo(rng);
      wsum += w;
      rho.m += w * psi * psi.adjoint();
    }
    rho.m /= wsum;
  }
  rho.m = 0.5 * (rho.m + rho.m.adjoint());
  rho.m /= rho.m.trace().real();
  return rho;
}

BlochState rotate_local(const BlochState& s, const Mat3& rot_a,
                        const Mat3& rot_b) {
  BlochState out;
  out.r_a = rot_a.transpose() * s.r_a;
  out.r_b = rot_b.transpose() * s.r_b;
  out.j = rot_a.transpose() * s.j * rot_b;
  return out;
}

Mat2c spin_unitary(const Mat3& rot) {
  const Eigen::AngleAxisd aa(rot);
  const Complex i(0.0, 1.0);
  const double half = 0.5 * aa.angle();
  Mat2c n_sigma = aa.axis().x() * paulis()[1] + aa.axis().y() * paulis()[2] +
                  aa.axis().z() * paulis()[3];
  return std::cos(half) * Mat2c::Identity() - i * std::sin(half) * n_sigma;
}

DensityMatrix rotate_local(const DensityMatrix& rho, const Mat3& rot_a,
                           const Mat3& rot_b) {
  const Mat4c u = kron(spin_unitary(rot_a), spin_unitary(rot_b));
  DensityMatrix out;
  out.m = u.adjoint() * rho.m * u;
  return out;
}

BlochState swap_parties(const BlochState& s) {
  BlochState out;
  out.r_a = s.r_b;
  out.r_b = s.r_a;
  out.j = s.j.transpose();
  return out;
}

BlochState XForm::to_state() const {
  BlochState s;
  s.r_a = Vec3(0.0, 0.0, r_a);
  s.r_b = Vec3(0.0, 0.0, r_b);
  s.j = Vec3(jx, jy, jz).asDiagonal();
  return s;
}

std::optional<XForm> x_form(const BlochState& s, double tol) {
  const PrincipalAxes pa = principal_axes(s);
  const BlochState& c = pa.canonical;
  for (int m : {2, 0, 1}) {
    double off = 0.0;
    for (int i = 0; i < 3; ++i)
      if (i != m)
        off = std::max({off, std::abs(c.r_a(i)), std::abs(c.r_b(i))});
    if (off > tol) continue;
    const Mat3 p = cyclic_to_z(m);
    XForm x;
    x.rot_a = pa.rot_a * p;
    x.rot_b = pa.rot_b * p;
    const BlochState z = rotate_local(s, x.rot_a, x.rot_b);
    x.r_a = z.r_a.z();
    x.r_b = z.r_b.z();
    x.jx = z.j(0, 0);
    x.jy = z.j(1, 1);
    x.jz = z.j(2, 2);
    return x;
  }
  return x_form_degenerate(s, tol);
}

StateClass classify(const BlochState& s, double tol) {
  StateClass c;
  c.tol = tol;
  const double s2 =
      1.5 - 0.5 * (s.r_a.squaredNorm() + s.r_b.squaredNorm() + s.j.squaredNorm());
  if (s2 < tol)
    c.tag = StateKind::pure;
  else if (s.r_a.norm() < tol && s.r_b.norm() < tol)
    c.tag = StateKind::bell_diagonal;
  else if (x_form(s, tol))
    c.tag = StateKind::x_state;
  else
    c.tag = StateKind::general;
  return c;
}

BlochState schmidt_state(double p) {
  const double c = 2.0 * std::sqrt(p * (1.0 - p));
  BlochState s;
  s.r_a = Vec3(0.0, 0.0, 2.0 * p - 1.0);
  s.r_b = s.r_a;
  s.j = Vec3(c, -c, 1.0).asDiagonal();
  return s;
}

BlochState bell_diagonal_state(double jx, double jy, double jz) {
  BlochState s;
  s.j = Vec3(jx, jy, jz).asDiagonal();
  return s;
}

}  // namespace qcorr
