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

#pragma once

#include <utility>
#include <vector>

#include "qcorr/entropies.hpp"
#include "qcorr/lmeasure.hpp"
#include "qcorr/qstate.hpp"

namespace qcorr {

// ---------------------------------------------------------------- general

/// M2 = r_b r_b^t + J^t J.
Mat3 m2_matrix(const BlochState& s);
/// M3 = M2 + r_b r_a^t J + J^t r_a r_b^t.
Mat3 m3_matrix(const BlochState& s);

/// Eigenvalues sorted decreasing and the matching eigenvectors (columns).
struct SymEigen {
  Vec3 values = Vec3::Zero();
  Mat3 vectors = Mat3::Identity();
};
SymEigen sym_eigen(const Mat3& m);

/// Minimum quadratic information loss: (lambda2 + lambda3) / 2 of M2, with
/// the measurement along the leading eigenvector.
MeasurementReport i2_closed(const BlochState& s);
/// Minimum cubic information loss: (lambda2 + lambda3) / 4 - det J / 2 of M3.
MeasurementReport i3_closed(const BlochState& s);

// ----------------------------------------------------------- Bell-diagonal

/// Signed correlations relabeled so that |jz| >= |jx| >= |jy| and
/// jz, jx >= 0. axis[c] is the caller's axis that ended up as canonical
/// axis c (0 = x, 1 = y, 2 = z).
struct BellCanonical {
  double jx = 0.0, jy = 0.0, jz = 0.0;
  std::array<int, 3> axis{0, 1, 2};
};
BellCanonical bell_canonicalize(double jx, double jy, double jz);

/// Bell-basis eigenvalues sorted decreasing; InvalidState if any is below
/// -1e-10.
Spectrum4 bell_diag_spectrum(double jx, double jy, double jz);

/// 2 f((p1+p2)/2) + 2 f((p3+p4)/2) - sum f(p_i) for a spectrum sorted in
/// decreasing order.
double bell_diag_if_of_spectrum(const Spectrum4& sorted, const EntropySpec& spec);

/// I_f^B of a Bell-diagonal state; the measurement is along the axis of
/// largest |J_mu| for every f.
MeasurementReport bell_diag_if(double jx, double jy, double jz,
                               const EntropySpec& spec);

/// I_f^B / I_2^B, which tends to universal_coefficient(spec) as J -> 0.
double small_j_universal_check(double jx, double jy, double jz,
                               const EntropySpec& spec);

// ---------------------------------------------------------------- X states

/// Eigenvalues lambda(mu, nu) of an X state in (nu, mu) order
/// (+,+), (+,-), (-,+), (-,-).
Spectrum4 x_state_spectrum(const XForm& x);

struct XCandidate {
  double gamma = 0.0;  // polar angle in the X frame
  double phi = 0.0;    // 0 except for the y axis
  double value = 0.0;
  bool interior = false;
};

struct XStateResult {
  MeasurementReport report;
  std::vector<XCandidate> candidates;  // principal axes first
  bool root_search_failed = false;      // an interior start did not converge
};

/// Principal-axis candidates plus interior roots of the intermediate-angle
/// equation; NotXState if no local frame puts the state in X form.
XStateResult x_state_if(const BlochState& s, const EntropySpec& spec,
                        double tol = 1e-9);

// ---------------------------------------------------------- aligned family

/// 1/2 (|t t><t t| + |-t -t><-t -t|) with |t> = exp(-i t sigma_y / 2)|0>.
BlochState aligned_state(double theta);

enum class Branch { z, x };

struct AlignedLoss {
  double i2 = 0.0;
  double i3 = 0.0;
  Branch branch2 = Branch::z;
  Branch branch3 = Branch::z;
};

double aligned_theta_c2();  // arccos(1/sqrt(3))
double aligned_theta_c3();  // arccos(sqrt((sqrt(17) - 3) / 4))
AlignedLoss aligned_i2_i3(double theta);

// -------------------------------------------------------------- envelopes

enum class EnvelopeConfig {
  p34_zero,        // (p1, 1 - p1, 0, 0)
  p2_eq_p1,        // (p1, p1, r, r)
  p234_equal,      // (p1, r, r, r)
  p23_equal_p4_0,  // (p1, r, r, 0)
  p123_equal,      // (p1, p1, p1, 1 - 3 p1)
  grid,
};
const char* to_string(EnvelopeConfig c);

struct Envelope {
  double min = 0.0;
  double max = 0.0;
  Spectrum4 argmin{};
  Spectrum4 argmax{};
  EnvelopeConfig min_config = EnvelopeConfig::grid;
  EnvelopeConfig max_config = EnvelopeConfig::grid;
  double grid_min = 0.0;  // safety-net values from the simplex grid alone
  double grid_max = 0.0;
};

/// Range of the Bell-diagonal I_f over spectra with largest eigenvalue p1.
/// InfeasibleP1 unless 1/4 <= p1 <= 1.
Envelope fig1_envelope(double p1, const EntropySpec& spec, int grid_m = 60);

/// Feasible closed-form candidate spectra for a given p1.
std::vector<std::pair<EnvelopeConfig, Spectrum4>> envelope_candidates(double p1);

/// Location in [lo, hi] where the maximizing candidate of fig1_envelope
/// changes from config a to config b, by bisection (tolerance 1e-9).
double envelope_switch_point(const EntropySpec& spec, EnvelopeConfig a,
                             EnvelopeConfig b, double lo, double hi);

}  // namespace qcorr
