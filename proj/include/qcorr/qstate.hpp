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

#include <cstdint>
#include <optional>
#include <string>

#include "qcorr/types.hpp"

namespace qcorr {

/// Two-qubit state in local Bloch form:
///
///   rho = 1/4 (I + r_a . sigma_A + r_b . sigma_B + sigma_A^t J sigma_B)
///
/// with J(mu, nu) = <sigma_A,mu sigma_B,nu>. Subsystem B is the measured one.
struct BlochState {
  Vec3 r_a = Vec3::Zero();
  Vec3 r_b = Vec3::Zero();
  Mat3 j = Mat3::Zero();
};

/// 4x4 density matrix in the basis |00>, |01>, |10>, |11> of sigma_z
/// eigenstates (sigma_z|0> = +|0>), first factor is A.
struct DensityMatrix {
  Mat4c m = Mat4c::Zero();
};

inline constexpr double kTolHerm = 1e-12;
inline constexpr double kTolTrace = 1e-12;
inline constexpr double kTolPsd = 1e-10;

struct ValidationReport {
  double herm_dev = 0.0;   // max |rho - rho^dagger| elementwise
  double trace_dev = 0.0;  // |Tr rho - 1|
  double min_eig = 0.0;    // of the Hermitian part
  bool valid = false;
};

struct BoundsReport {
  double lhs1 = 0.0;  // |r_a|^2 + |r_b|^2 + ||J||^2, at most 3
  double lhs2 = 0.0;  // r_a^t J r_b - det J, at most rhs2
  double rhs2 = 0.0;  // 1 - S_2 / 3
  bool bound1_ok = false;
  bool bound2_ok = false;
  bool saturated = false;  // both bounds tight: pure state
};

enum class StateKind { pure, bell_diagonal, x_state, general };

struct StateClass {
  StateKind tag = StateKind::general;
  double tol = 1e-9;
};

std::string to_string(StateKind k);

/// Result of principal_axes: j == rot_a * canonical.j * rot_b^t with
/// canonical.j diagonal and det(rot_a) == det(rot_b) == +1.
struct PrincipalAxes {
  BlochState canonical;
  Mat3 rot_a = Mat3::Identity();
  Mat3 rot_b = Mat3::Identity();
};

enum class SamplingMethod { ginibre_like, mixture_of_pure };

DensityMatrix to_density(const BlochState& state);
BlochState from_density(const DensityMatrix& rho);
ValidationReport validate(const DensityMatrix& rho);

/// Eigenvalues of the Hermitian part, sorted decreasing. Values within a
/// few ulps of zero are snapped to zero.
Spectrum4 density_spectrum(const DensityMatrix& rho);

PrincipalAxes principal_axes(const BlochState& state);
BoundsReport purity_bounds(const BlochState& state, double tol = 1e-9);
DensityMatrix random_density(std::uint64_t seed, SamplingMethod method);

/// Local rotations acting on the Bloch data: r_a -> R_a^t r_a,
/// r_b -> R_b^t r_b, J -> R_a^t J R_b.
BlochState rotate_local(const BlochState& s, const Mat3& rot_a,
                        const Mat3& rot_b);

/// SU(2) element U with U^dagger (n . sigma) U = (R^t n) . sigma, so that
/// conjugating rho by U_a (x) U_b reproduces rotate_local.
Mat2c spin_unitary(const Mat3& rot);
DensityMatrix rotate_local(const DensityMatrix& rho, const Mat3& rot_a,
                           const Mat3& rot_b);

/// Exchanges the roles of A and B: r_a <-> r_b, J -> J^t.
BlochState swap_parties(const BlochState& s);

/// X-state frame: both Bloch vectors along z, J diagonal.
struct XForm {
  double r_a = 0.0;
  double r_b = 0.0;
  double jx = 0.0;
  double jy = 0.0;
  double jz = 0.0;
  Mat3 rot_a = Mat3::Identity();
  Mat3 rot_b = Mat3::Identity();

  BlochState to_state() const;
};

/// Finds local proper rotations bringing the state to X form, if any.
std::optional<XForm> x_form(const BlochState& s, double tol = 1e-9);

StateClass classify(const BlochState& s, double tol = 1e-9);

/// Pure state sqrt(p)|00> + sqrt(1-p)|11>.
BlochState schmidt_state(double p);

/// Bell-diagonal state 1/4 (I + sum_mu J_mu sigma_A,mu sigma_B,mu).
BlochState bell_diagonal_state(double jx, double jy, double jz);

}  // namespace qcorr
