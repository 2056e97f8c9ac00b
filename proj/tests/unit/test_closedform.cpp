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

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "doctest.h"
#include "qcorr/closedform.hpp"
#include "qcorr/entanglement.hpp"
#include "support/oracles.hpp"

using namespace qcorr;

namespace {

BlochState random_state(std::uint64_t seed) {
  return from_density(random_density(
      seed, seed % 2 ? SamplingMethod::mixture_of_pure : SamplingMethod::ginibre_like));
}

double q_of(const EntropySpec& s) {
  return s.kind() == EntropyKind::von_neumann ? 1.0 : s.q();
}

// Random valid X state: positive diagonal blocks with bounded coherences.
BlochState random_x_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::array<double, 4> d{};
  double t = 0;
  for (double& v : d) t += (v = -std::log(u(rng) + 1e-300));
  for (double& v : d) v /= t;
  const double a = u(rng) * std::sqrt(d[0] * d[3]) * (u(rng) < 0.5 ? 1 : -1);
  const double b = u(rng) * std::sqrt(d[1] * d[2]) * (u(rng) < 0.5 ? 1 : -1);
  DensityMatrix rho;
  rho.m.diagonal() << d[0], d[1], d[2], d[3];
  rho.m(0, 3) = rho.m(3, 0) = a;
  rho.m(1, 2) = rho.m(2, 1) = b;
  return from_density(rho);
}

}  // namespace

TEST_CASE("quadratic closed form") {
  for (double p : {0.1, 0.3, 0.5, 0.9}) {
    const MeasurementReport r = i2_closed(schmidt_state(p));
    CHECK(r.value == doctest::Approx(4 * p * (1 - p)).epsilon(1e-12));
    CHECK(r.method == Method::closed_form);
  }
  const MeasurementReport bd = i2_closed(bell_diagonal_state(0.3, 0.2, 0.4));
  CHECK(bd.value == doctest::Approx(0.065).epsilon(1e-14));
  // (p1 - p2)^2 + (p3 - p4)^2 in the Bell basis
  const Spectrum4 p = bell_diag_spectrum(0.3, 0.2, 0.4);
  CHECK(bd.value == doctest::Approx(std::pow(p[0] - p[1], 2) + std::pow(p[2] - p[3], 2)));
  CHECK(bd.direction.k().z() == doctest::Approx(1.0));
  CHECK(bd.residual < 1e-14);
}

TEST_CASE("cubic closed form") {
  for (double p : {0.1, 0.3, 0.5, 0.9})
    CHECK(i3_closed(schmidt_state(p)).value == doctest::Approx(4 * p * (1 - p)).epsilon(1e-12));
  CHECK(i3_closed(bell_diagonal_state(0.3, 0.2, 0.4)).value ==
        doctest::Approx(0.0205).epsilon(1e-13));
  CHECK(i3_closed(bell_diagonal_state(1, -1, 1)).value == doctest::Approx(1.0));
}

TEST_CASE("closed forms are global minima") {
  std::mt19937_64 rng(1);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const BlochState s = random_state(seed);
    const double i2 = i2_closed(s).value;
    const double i3 = i3_closed(s).value;
    for (int t = 0; t < 1000; ++t) {
      const Direction k = Direction::from_vector(oracle::random_unit(rng));
      CHECK(i2 <= info_loss(s, k, EntropySpec::linear()) + 1e-14);
      CHECK(i3 <= info_loss(s, k, EntropySpec::cubic()) + 1e-14);
    }
    // value at the reported direction
    CHECK(info_loss(s, i2_closed(s).direction, EntropySpec::linear()) ==
          doctest::Approx(i2).epsilon(1e-12));
    CHECK(info_loss(s, i3_closed(s).direction, EntropySpec::cubic()) ==
          doctest::Approx(i3).epsilon(1e-12));
  }
}

TEST_CASE("cubic closed form via the trace identity") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const BlochState s = random_state(seed);
    const Mat3 m3 = m3_matrix(s);
    const SymEigen e = sym_eigen(m3);
    // lambda2 + lambda3 = Tr M3 - lambda1
    const double via_trace = 0.25 * (m3.trace() - e.values(0)) - 0.5 * s.j.determinant();
    CHECK(std::abs(i3_closed(s).value - via_trace) < 1e-12);
    CHECK((m2_matrix(s) - m2_matrix(s).transpose()).norm() < 1e-15);
    CHECK(sym_eigen(m2_matrix(s)).values(2) > -1e-14);
    CHECK(e.values(2) > -1e-12);
  }
}

TEST_CASE("degenerate leading eigenvector prefers z") {
  const MeasurementReport w = i2_closed(bell_diagonal_state(-0.5, -0.5, -0.5));
  CHECK(w.degenerate);
  CHECK(w.direction.k().z() == doctest::Approx(1.0));
  const MeasurementReport xy = i2_closed(bell_diagonal_state(0.4, 0.4, 0.1));
  CHECK(xy.degenerate);
  CHECK(xy.direction.k().x() == doctest::Approx(1.0));
}

TEST_CASE("Bell-diagonal spectrum") {
  for (double v : bell_diag_spectrum(0, 0, 0)) CHECK(v == doctest::Approx(0.25));
  const Spectrum4 p = bell_diag_spectrum(0.3, 0.2, 0.4);
  CHECK(p[0] == doctest::Approx(0.375));
  CHECK(p[1] == doctest::Approx(0.325));
  CHECK(p[2] == doctest::Approx(0.275));
  CHECK(p[3] == doctest::Approx(0.025));
  const double x = 0.6;
  const Spectrum4 w = bell_diag_spectrum(-x, -x, -x);
  CHECK(w[0] == doctest::Approx((1 + 3 * x) / 4));
  for (int i = 1; i < 4; ++i) CHECK(w[i] == doctest::Approx((1 - x) / 4));
  CHECK_THROWS_AS(bell_diag_spectrum(0.5, 0.3, 0.7), InvalidState);

  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    Vec3 j = oracle::random_bell_triple(rng);
    // random relabeling and paired sign flips leave the spectrum alone
    const Spectrum4 a = bell_diag_spectrum(j.x(), j.y(), j.z());
    const auto ref = oracle::eigenvalues(oracle::density(bell_diagonal_state(j.x(), j.y(), j.z())));
    for (int k = 0; k < 4; ++k) CHECK(std::abs(a[k] - ref[k]) < 1e-12);
    const BellCanonical c = bell_canonicalize(j.x(), j.y(), j.z());
    CHECK(std::abs(c.jz) >= std::abs(c.jx));
    CHECK(std::abs(c.jx) >= std::abs(c.jy));
    CHECK(c.jz >= 0);
    CHECK(c.jx >= 0);
    CHECK(c.jx * c.jy * c.jz == doctest::Approx(j.x() * j.y() * j.z()));
  }
}

TEST_CASE("Bell-diagonal information loss") {
  const EntropySpec vn = EntropySpec::von_neumann();
  CHECK(bell_diag_if(1, -1, 1, vn).value == doctest::Approx(1.0));
  CHECK(bell_diag_if(0.3, 0.2, 0.4, EntropySpec::linear()).value == doctest::Approx(0.065));
  const MeasurementReport r = bell_diag_if(0.1, -0.5, 0.2, vn);
  CHECK(std::abs(r.direction.k().y()) == doctest::Approx(1.0));
  CHECK_FALSE(r.degenerate);
  CHECK(bell_diag_if(0.3, -0.3, 0.1, vn).degenerate);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 40; ++i) {
    const Vec3 j = oracle::random_bell_triple(rng);
    const BlochState s = bell_diagonal_state(j.x(), j.y(), j.z());
    for (const EntropySpec& spec : {vn, EntropySpec::tsallis(0.7), EntropySpec::tsallis(5.0)}) {
      const MeasurementReport b = bell_diag_if(j.x(), j.y(), j.z(), spec);
      const double brute = oracle::dense_min(
          [&](const Vec3& k) { return oracle::info_loss(s, k, q_of(spec)); }, 64);
      CHECK(b.value <= brute + 1e-12);
      CHECK(oracle::info_loss(s, b.direction.k(), q_of(spec)) ==
            doctest::Approx(b.value).epsilon(1e-10));
    }
  }
}

TEST_CASE("small correlations give the universal ratio") {
  CHECK(small_j_universal_check(0.02, 0.01, 0.03, EntropySpec::linear()) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(small_j_universal_check(0.02, 0.01, 0.03, EntropySpec::cubic()) - 0.5) < 0.05);
  CHECK(std::abs(small_j_universal_check(0.02, 0.01, 0.03, EntropySpec::von_neumann()) -
                 1.0 / std::log(2.0)) < 0.05);
  // the deviation shrinks with |J|
  const EntropySpec q = EntropySpec::tsallis(0.7);
  const double c = universal_coefficient(q);
  const double far = std::abs(small_j_universal_check(0.04, 0.02, 0.03, q) - c);
  const double near = std::abs(small_j_universal_check(0.004, 0.002, 0.003, q) - c);
  CHECK(near < far);
  CHECK(near < 0.01);
}

TEST_CASE("X states") {
  std::mt19937_64 rng(4);
  int interior = 0;
  for (int i = 0; i < 200; ++i) {
    const BlochState x0 = random_x_state(rng);
    const Mat3 ra = oracle::random_rotation(rng), rb = oracle::random_rotation(rng);
    const BlochState s = i % 2 ? rotate_local(x0, ra, rb) : x0;
    const XStateResult l = x_state_if(s, EntropySpec::linear());
    const XStateResult c = x_state_if(s, EntropySpec::cubic());
    CHECK(std::abs(l.report.value - i2_closed(s).value) < 1e-10);
    CHECK(std::abs(c.report.value - i3_closed(s).value) < 1e-10);

    const auto xf = x_form(s);
    REQUIRE(xf);
    const Spectrum4 lam = x_state_spectrum(*xf);
    std::array<double, 4> sorted{};
    std::copy(lam.begin(), lam.end(), sorted.begin());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const auto ref = oracle::eigenvalues(oracle::density(s));
    for (int k = 0; k < 4; ++k) CHECK(std::abs(sorted[k] - ref[k]) < 1e-12);

    // closed X forms of the quadratic and cubic minima, |Jy| <= |Jx| frame
    double jx = xf->jx, jy = xf->jy;
    if (std::abs(jy) > std::abs(jx)) std::swap(jx, jy);
    const double rA = xf->r_a, rB = xf->r_b, jz = xf->jz;
    const double i2x = 0.5 * (jy * jy + std::min(jx * jx, rB * rB + jz * jz));
    const double i3x = 0.25 * (jy * jy - 2 * jx * jy * jz +
                               std::min(jx * jx, rB * rB + jz * jz + 2 * rA * rB * jz));
    CHECK(std::abs(l.report.value - i2x) < 1e-10);
    CHECK(std::abs(c.report.value - i3x) < 1e-10);

    const XStateResult v = x_state_if(s, EntropySpec::von_neumann());
    const double brute = oracle::dense_min(
        [&](const Vec3& k) { return oracle::info_loss(s, k, 1.0); }, 48);
    CHECK(v.report.value <= brute + 1e-12);
    for (const XCandidate& cand : v.candidates)
      if (cand.interior) ++interior;
  }
  CHECK_THROWS_AS(x_state_if(random_state(3), EntropySpec::linear()), NotXState);
  MESSAGE("interior candidates found: " << interior);
}

TEST_CASE("X state: intermediate angle on the aligned family") {
  const BlochState s = aligned_state(0.55 * kPi / 2);
  const XStateResult r = x_state_if(s, EntropySpec::von_neumann());
  const double g = r.report.direction.gamma();
  CHECK(g > 0.05);
  CHECK(g < kPi / 2 - 0.05);
  CHECK(r.report.degenerate);
  Vec3 arg;
  const double brute = oracle::dense_min(
      [&](const Vec3& k) { return oracle::info_loss(s, k, 1.0); }, 720, &arg);
  const double brute_g = std::atan2(std::hypot(arg.x(), arg.y()), std::abs(arg.z()));
  CHECK(r.report.value <= brute + 1e-12);
  CHECK(std::abs(g - brute_g) < 2 * kPi / 720);
  for (const XCandidate& c : x_state_if(s, EntropySpec::linear()).candidates)
    CHECK_FALSE(c.interior);
}

TEST_CASE("aligned family") {
  const DensityMatrix z = to_density(aligned_state(0.0));
  CHECK(std::abs(z.m(0, 0) - 1.0) < 1e-15);
  const BlochState cls = aligned_state(kPi / 2);
  CHECK((cls.j - Mat3(Vec3(1, 0, 0).asDiagonal())).norm() < 1e-15);
  CHECK(cls.r_a.norm() < 1e-15);
  const BlochState s3 = aligned_state(kPi / 3);
  CHECK(s3.r_a.z() == doctest::Approx(0.5));
  CHECK(s3.j(0, 0) == doctest::Approx(0.75));
  CHECK(s3.j(2, 2) == doctest::Approx(0.25));

  for (double t : {0.2, 0.7, 1.3}) {
    const Mat4c m = 4.0 * to_density(aligned_state(t)).m;
    const double c = std::cos(t), sn2 = std::pow(std::sin(t), 2);
    CHECK(m(0, 0).real() == doctest::Approx((1 + c) * (1 + c)));
    CHECK(m(3, 3).real() == doctest::Approx((1 - c) * (1 - c)));
    for (auto [a, b] : {std::pair{0, 3}, {1, 1}, {2, 2}, {1, 2}})
      CHECK(m(a, b).real() == doctest::Approx(sn2));
  }

  const AlignedLoss q4 = aligned_i2_i3(kPi / 4);
  CHECK(q4.i2 == doctest::Approx(0.125));
  CHECK(q4.i3 == doctest::Approx(0.0625));
  CHECK(q4.branch2 == Branch::z);
  CHECK(q4.branch3 == Branch::z);
  const AlignedLoss q3 = aligned_i2_i3(kPi / 3);
  CHECK(q3.i2 == doctest::Approx(0.15625));
  CHECK(q3.i3 == doctest::Approx(0.109375));
  CHECK(q3.branch2 == Branch::x);
  CHECK(q3.branch3 == Branch::x);
  CHECK(aligned_i2_i3(aligned_theta_c2()).i2 == doctest::Approx(2.0 / 9.0));
  CHECK(std::cos(aligned_theta_c2()) * std::cos(aligned_theta_c2()) ==
        doctest::Approx(1.0 / 3.0));

  // agreement with the general closed forms and continuity / cusp
  double prev2 = 0, prev3 = 0, max2 = -1, max3 = -1, arg2 = 0, arg3 = 0;
  const int n = 20000;
  for (int i = 0; i <= n; ++i) {
    const double t = (kPi / 2) * i / n;
    const AlignedLoss a = aligned_i2_i3(t);
    if (i % 500 == 0) {
      CHECK(std::abs(a.i2 - i2_closed(aligned_state(t)).value) < 1e-12);
      CHECK(std::abs(a.i3 - i3_closed(aligned_state(t)).value) < 1e-12);
    }
    if (i > 0) {
      CHECK(std::abs(a.i2 - prev2) < 1e-3);
      CHECK(std::abs(a.i3 - prev3) < 1e-3);
    }
    if (a.i2 > max2) max2 = a.i2, arg2 = t;
    if (a.i3 > max3) max3 = a.i3, arg3 = t;
    prev2 = a.i2;
    prev3 = a.i3;
  }
  CHECK(std::abs(arg2 - aligned_theta_c2()) < 2 * (kPi / 2) / n);
  CHECK(std::abs(arg3 - aligned_theta_c3()) < 2 * (kPi / 2) / n);
}

TEST_CASE("envelope") {
  const Envelope lin = fig1_envelope(0.5, EntropySpec::linear());
  CHECK(lin.max == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(lin.argmax[1] == doctest::Approx(0.25));
  CHECK(lin.argmax[3] == doctest::Approx(0.0));
  CHECK(std::abs(lin.min) < 1e-15);
  // above p1 = 1/2 the quadratic minimum is C^2 = (2 p1 - 1)^2
  CHECK(fig1_envelope(0.8, EntropySpec::linear()).min == doctest::Approx(0.36).epsilon(1e-12));
  const Envelope cub = fig1_envelope(0.5, EntropySpec::cubic());
  CHECK(cub.max == doctest::Approx(2.0 / 27.0).epsilon(1e-12));
  CHECK(cub.argmax[3] == doctest::Approx(1.0 / 6.0));
  for (const EntropySpec& s :
       {EntropySpec::linear(), EntropySpec::cubic(), EntropySpec::von_neumann()}) {
    const Envelope e = fig1_envelope(0.8, s);
    // the minimizer is (p1, 1 - p1, 0, 0)
    CHECK(e.min == doctest::Approx(1 - f_value(s, 0.8) - f_value(s, 0.2)).epsilon(1e-12));
    CHECK(e.argmin[1] == doctest::Approx(0.2));
    // the grid never beats the candidate configurations by more than its
    // resolution
    for (double p1 = 0.26; p1 < 1.0; p1 += 0.037) {
      const Envelope g = fig1_envelope(p1, s, 80);
      CHECK(g.max >= g.grid_max - 1e-15);
      CHECK(g.min <= g.grid_min + 1e-15);
      CHECK(g.max_config != EnvelopeConfig::grid);
    }
  }
  CHECK_THROWS_AS(fig1_envelope(0.2, EntropySpec::linear()), InfeasibleP1);
  CHECK_THROWS_AS(fig1_envelope(1.1, EntropySpec::linear()), InfeasibleP1);
}

TEST_CASE("envelope switch points") {
  const double lin = envelope_switch_point(EntropySpec::linear(), EnvelopeConfig::p23_equal_p4_0,
                                           EnvelopeConfig::p234_equal, 0.4, 0.7);
  CHECK(lin == doctest::Approx(7.0 / 13.0).epsilon(1e-8));
  const double cub = envelope_switch_point(EntropySpec::cubic(), EnvelopeConfig::p23_equal_p4_0,
                                           EnvelopeConfig::p234_equal, 0.34, 0.6);
  CHECK(cub == doctest::Approx(0.44).epsilon(0.01));
  MESSAGE("cubic switch point " << cub);
}

TEST_CASE("Bell-diagonal bounds") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const Vec3 j = oracle::random_bell_triple(rng);
    const double i2 = bell_diag_if(j.x(), j.y(), j.z(), EntropySpec::linear()).value;
    const double i3 = bell_diag_if(j.x(), j.y(), j.z(), EntropySpec::cubic()).value;
    CHECK(i3 <= i2 + 1e-14);
    const double c = concurrence_bell_diag(j.x(), j.y(), j.z());
    CHECK(i2 >= c * c - 1e-14);
    CHECK(i3 >= c * c - 1e-14);
  }
}
