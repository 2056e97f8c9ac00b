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

#include <string>

#include "qcorr/qstate.hpp"

namespace qcorr {

enum class ConcurrenceMethod { wootters_general, x_closed, bell_diag };
std::string to_string(ConcurrenceMethod m);

struct ConcurrenceReport {
  double value = 0.0;
  ConcurrenceMethod method = ConcurrenceMethod::wootters_general;
};

/// Dispatches on classify(): Bell-diagonal and X states use their closed
/// forms, everything else the spin-flip construction.
ConcurrenceReport concurrence(const BlochState& s);

/// max(2 p1 - 1, 0) from the Bell-basis spectrum.
double concurrence_bell_diag(double jx, double jy, double jz);
/// 1/2 max(|alpha+| - sqrt(c+ c-), |alpha-| - sqrt(a+ a-), 0).
double concurrence_x(const XForm& x);
/// max(0, l1 - l2 - l3 - l4), l_i the singular values of
/// sqrt(rho) (sigma_y x sigma_y) conj(sqrt(rho)).
double concurrence_wootters(const DensityMatrix& rho);

/// Entanglement of formation h((1 + sqrt(1 - c^2)) / 2); DomainError
/// outside [0, 1].
double eof(double c);

struct BoundReport {
  double c2 = 0.0;  // squared concurrence
  double i2 = 0.0;
  double i3 = 0.0;
  bool i2_ok = false;  // i2 >= c2
  bool i3_ok = false;  // i3 >= c2
  bool equality = false;  // C > 0 and p3 = p4 = 0
};

/// I2 and I3 against C^2 on a Bell-diagonal state.
BoundReport bound_check_bell_diag(double jx, double jy, double jz,
                                  double tol = 1e-12);

}  // namespace qcorr
