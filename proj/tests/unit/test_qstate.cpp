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

#include <cmath>
#include <random>

#include "doctest.h"
#include "qcorr/entropies.hpp"
#include "qcorr/qstate.hpp"
#include "support/oracles.hpp"

using namespace qcorr;

namespace {

double max_abs(const Mat4c& m) { return m.cwiseAbs().maxCoeff(); }

Eigen::Vector2cd spin_theta(double t) {
  return Eigen::Vector2cd(std::cos(t / 2), std::sin(t / 2));
}

Eigen::Vector4cd kron_ket(const Eigen::Vector2cd& a, const Eigen::Vector2cd& b) {
  Eigen::Vector4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(2 * i + j) = a(i) * b(j);
  return out;
}

BlochState random_state(std::uint64_t seed) {
  return from_density(random_density(
      seed, seed % 2 ? SamplingMethod::mixture_of_pure : SamplingMethod::ginibre_like));
}

}  // namespace

TEST_CASE("maximally mixed state") {
  const DensityMatrix rho = to_density(BlochState{});
  CHECK(max_abs(rho.m - 0.25 * Mat4c::Identity()) < 1e-15);
  const BlochState back = from_density(rho);
  CHECK(back.r_a.norm() == doctest::Approx(0.0));
  CHECK(back.j.norm() == doctest::Approx(0.0));
}

TEST_CASE("phi plus from correlations") {
  BlochState s;
  s.j = Vec3(1, -1, 1).asDiagonal();
  Eigen::Vector4cd phi(1, 0, 0, 1);
  phi /= std::sqrt(2.0);
  const Mat4c expected = phi * phi.adjoint();
  CHECK(max_abs(to_density(s).m - expected) < 1e-15);

  const BlochState back = from_density(DensityMatrix{expected});
  CHECK((back.j - s.j).norm() < 1e-14);
  CHECK(back.r_a.norm() < 1e-14);
  CHECK(back.r_b.norm() < 1e-14);
}

TEST_CASE("x state block structure") {
  const double ra = 0.2, rb = -0.1, jx = 0.3, jy = -0.15, jz = 0.25;
  BlochState s;
  s.r_a = Vec3(0, 0, ra);
  s.r_b = Vec3(0, 0, rb);
  s.j = Vec3(jx, jy, jz).asDiagonal();
  const Mat4c m = 4.0 * to_density(s).m;
  CHECK(m(0, 0).real() == doctest::Approx(1 + jz + (ra + rb)));
  CHECK(m(3, 3).real() == doctest::Approx(1 + jz - (ra + rb)));
  CHECK(m(1, 1).real() == doctest::Approx(1 - jz + (ra - rb)));
  CHECK(m(2, 2).real() == doctest::Approx(1 - jz - (ra - rb)));
  CHECK(m(0, 3).real() == doctest::Approx(jx - jy));
  CHECK(m(1, 2).real() == doctest::Approx(jx + jy));
  CHECK(std::abs(m(0, 1)) + std::abs(m(0, 2)) + std::abs(m(1, 3)) < 1e-15);
}

TEST_CASE("aligned mixture from kets") {
  const double t = kPi / 3;
  const Eigen::Vector4cd a = kron_ket(spin_theta(t), spin_theta(t));
  const Eigen::Vector4cd b = kron_ket(spin_theta(-t), spin_theta(-t));
  const DensityMatrix rho{0.5 * (a * a.adjoint() + b * b.adjoint())};
  const BlochState s = from_density(rho);
  CHECK((s.r_a - Vec3(0, 0, 0.5)).norm() < 1e-14);
  CHECK((s.r_b - Vec3(0, 0, 0.5)).norm() < 1e-14);
  CHECK((s.j - Mat3(Vec3(0.75, 0, 0.25).asDiagonal())).norm() < 1e-14);
}

TEST_CASE("validate") {
  const ValidationReport ok = validate(to_density(BlochState{}));
  CHECK(ok.valid);
  CHECK(ok.min_eig == doctest::Approx(0.25));

  const ValidationReport bad = validate(to_density(bell_diagonal_state(0.5, 0.3, 0.7)));
  CHECK_FALSE(bad.valid);
  CHECK(bad.min_eig == doctest::Approx(-0.125).epsilon(1e-12));

  DensityMatrix t = to_density(BlochState{});
  t.m(0, 0) += 0.01;
  const ValidationReport tr = validate(t);
  CHECK_FALSE(tr.valid);
  CHECK(tr.trace_dev == doctest::Approx(0.01));

  DensityMatrix h = to_density(BlochState{});
  h.m(0, 1) = Complex(0.0, 1e-9);
  CHECK_FALSE(validate(h).valid);

  CHECK_THROWS_AS(from_density(t), InvalidState);
}

TEST_CASE("round trip on random states") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const DensityMatrix rho = random_density(seed, SamplingMethod::ginibre_like);
    const BlochState s = from_density(rho);
    CHECK(max_abs(to_density(s).m - rho.m) < 1e-12);
    const BlochState s2 = from_density(to_density(s));
    CHECK((s2.j - s.j).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((s2.r_a - s.r_a).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((s2.r_b - s.r_b).cwiseAbs().maxCoeff() < 1e-12);
    // agrees with the Kronecker-product construction
    CHECK(max_abs(to_density(s).m - oracle::density(s)) < 1e-14);
  }
}

TEST_CASE("principal axes") {
  SUBCASE("diagonal input keeps identity rotations") {
    const BlochState s = bell_diagonal_state(0.3, -0.2, 0.4);
    const PrincipalAxes pa = principal_axes(s);
    CHECK((pa.rot_a - Mat3::Identity()).norm() < 1e-15);
    CHECK((pa.rot_b - Mat3::Identity()).norm() < 1e-15);
    CHECK((pa.canonical.j - s.j).norm() < 1e-15);
  }
  SUBCASE("recovers a known rotation") {
    BlochState s = bell_diagonal_state(0.3, -0.2, 0.4);
    Mat3 rz;
    rz << 0, -1, 0, 1, 0, 0, 0, 0, 1;
    s.j = s.j * rz.transpose();  // rows and columns permuted with a sign
    const PrincipalAxes pa = principal_axes(s);
    const Mat3& d = pa.canonical.j;
    CHECK((d - Mat3(d.diagonal().asDiagonal())).norm() < 1e-14);
    CHECK(pa.rot_a.determinant() == doctest::Approx(1.0));
    CHECK(pa.rot_b.determinant() == doctest::Approx(1.0));
    CHECK((pa.rot_a * d * pa.rot_b.transpose() - s.j).norm() < 1e-14);
    CHECK(d.determinant() == doctest::Approx(s.j.determinant()));
  }
  SUBCASE("random states: spectrum and invariants preserved") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      const BlochState s = random_state(seed);
      const PrincipalAxes pa = principal_axes(s);
      const Mat3& d = pa.canonical.j;
      CHECK((d - Mat3(d.diagonal().asDiagonal())).norm() < 1e-12);
      CHECK(pa.rot_a.determinant() == doctest::Approx(1.0));
      CHECK(pa.rot_b.determinant() == doctest::Approx(1.0));
      CHECK((pa.rot_a * d * pa.rot_b.transpose() - s.j).norm() < 1e-12);
      CHECK((pa.canonical.r_a - pa.rot_a.transpose() * s.r_a).norm() < 1e-14);
      const Spectrum4 a = density_spectrum(to_density(s));
      const Spectrum4 b = density_spectrum(to_density(pa.canonical));
      for (int i = 0; i < 4; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
      // the sign fix lands on the smallest-magnitude entry
      const Vec3 ad = d.diagonal().cwiseAbs();
      CHECK(d(0, 0) >= -1e-15);
      CHECK(d(1, 1) >= -1e-15);
      CHECK(ad(2) <= ad(1) + 1e-15);
    }
  }
}

TEST_CASE("purity bounds") {
  const BoundsReport pure = purity_bounds(schmidt_state(0.3));
  CHECK(pure.lhs1 == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(pure.saturated);

  const BoundsReport mixed = purity_bounds(BlochState{});
  CHECK(mixed.lhs1 == doctest::Approx(0.0));
  CHECK(mixed.lhs2 == doctest::Approx(0.0));
  CHECK(mixed.rhs2 == doctest::Approx(0.5));
  CHECK(mixed.bound1_ok);
  CHECK(mixed.bound2_ok);
  CHECK_FALSE(mixed.saturated);

  int failures = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const BoundsReport b = purity_bounds(random_state(seed));
    if (!b.bound1_ok || !b.bound2_ok) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("random density determinism and validity") {
  for (SamplingMethod m : {SamplingMethod::ginibre_like, SamplingMethod::mixture_of_pure}) {
    CHECK(max_abs(random_density(42, m).m - random_density(42, m).m) == 0.0);
    CHECK(max_abs(random_density(42, m).m - random_density(43, m).m) > 0.0);
    int invalid = 0;
    for (std::uint64_t seed = 0; seed < 10000; ++seed)
      if (!validate(random_density(seed, m)).valid) ++invalid;
    CHECK(invalid == 0);
  }
}

TEST_CASE("local rotation covariance") {
  std::mt19937_64 rng(11);
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const BlochState s = random_state(seed);
    const Mat3 ra = oracle::random_rotation(rng), rb = oracle::random_rotation(rng);
    const BlochState via_rho = from_density(rotate_local(to_density(s), ra, rb));
    const BlochState via_bloch = rotate_local(s, ra, rb);
    CHECK((via_rho.r_a - ra.transpose() * s.r_a).norm() < 1e-10);
    CHECK((via_rho.r_b - rb.transpose() * s.r_b).norm() < 1e-10);
    CHECK((via_rho.j - ra.transpose() * s.j * rb).norm() < 1e-10);
    CHECK((via_bloch.j - via_rho.j).norm() < 1e-10);
    CHECK(via_rho.j.determinant() == doctest::Approx(s.j.determinant()).epsilon(1e-10));
    CHECK(via_rho.r_a.dot(via_rho.j * via_rho.r_b) ==
          doctest::Approx(s.r_a.dot(s.j * s.r_b)).epsilon(1e-10));
    const Vec3 e1 = (s.j.transpose() * s.j).selfadjointView<Eigen::Lower>().eigenvalues();
    const Vec3 e2 =
        (via_rho.j.transpose() * via_rho.j).selfadjointView<Eigen::Lower>().eigenvalues();
    CHECK((e1 - e2).norm() < 1e-10);
  }
}

TEST_CASE("spin rotation convention") {
  // exp(-i t sigma_y / 2)|0> points along (sin t, 0, cos t)
  const double t = 0.7;
  const Mat3 ry = Eigen::AngleAxisd(t, Vec3::UnitY()).toRotationMatrix();
  const Mat2c u = spin_unitary(ry);
  Mat2c expected;
  expected << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
  // U is fixed up to a global phase
  const Complex phase = expected(0, 0) / u(0, 0);
  CHECK(std::abs(std::abs(phase) - 1.0) < 1e-12);
  CHECK((u * phase - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("classification") {
  CHECK(classify(schmidt_state(0.3)).tag == StateKind::pure);
  CHECK(classify(bell_diagonal_state(0.3, 0.2, 0.4)).tag == StateKind::bell_diagonal);
  BlochState x;
  x.r_a = Vec3(0, 0, 0.2);
  x.r_b = Vec3(0, 0, 0.1);
  x.j = Vec3(0.3, -0.1, 0.2).asDiagonal();
  CHECK(classify(x).tag == StateKind::x_state);

  std::mt19937_64 rng(5);
  const Mat3 ra = oracle::random_rotation(rng), rb = oracle::random_rotation(rng);
  const BlochState rotated = rotate_local(x, ra, rb);
  CHECK(classify(rotated).tag == StateKind::x_state);
  const auto xf = x_form(rotated);
  REQUIRE(xf);
  const BlochState back = xf->to_state();
  CHECK((to_density(back).m - to_density(rotate_local(rotated, xf->rot_a, xf->rot_b)).m)
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK(std::abs(std::abs(xf->jx) + std::abs(xf->jy) + std::abs(xf->jz) - 0.6) < 1e-12);

  CHECK(classify(random_state(3)).tag == StateKind::general);
}

TEST_CASE("swap parties") {
  const BlochState s = random_state(9);
  const BlochState t = swap_parties(s);
  CHECK(t.r_a == s.r_b);
  CHECK(t.r_b == s.r_a);
  CHECK(t.j == s.j.transpose());
  const Spectrum4 a = density_spectrum(to_density(s));
  const Spectrum4 b = density_spectrum(to_density(t));
  for (int i = 0; i < 4; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
}

TEST_CASE("schmidt state") {
  const BlochState s = schmidt_state(0.3);
  CHECK(s.r_a.squaredNorm() == doctest::Approx(0.16));
  CHECK(s.r_b.squaredNorm() == doctest::Approx(0.16));
  CHECK(s.j.squaredNorm() == doctest::Approx(2.68));
  CHECK(s2_closed(s) == doctest::Approx(0.0).epsilon(1e-14));
}
