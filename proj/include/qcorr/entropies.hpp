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

#include <span>
#include <string>
#include <string_view>

#include "qcorr/qstate.hpp"

namespace qcorr {

enum class EntropyKind { von_neumann, tsallis, linear, cubic };

/// Concave entropic function f with f(0) = f(1) = 0 and 2 f(1/2) = 1.
///
/// tsallis(q):  f(p) = (p - p^q) / (1 - 2^(1-q)),  q in (0, 50]
/// von Neumann: f(p) = -p log2 p  (the q -> 1 limit)
/// linear and cubic are tsallis(2) and tsallis(3) with polynomial fast paths;
/// make() folds q = 1, 2, 3 onto them.
class EntropySpec {
 public:
  static EntropySpec von_neumann();
  static EntropySpec linear();
  static EntropySpec cubic();
  /// Throws DomainError unless 0 < q <= 50.
  static EntropySpec tsallis(double q);

  /// Grammar: "vn" | "lin" | "cub" | "q=<positive real>".
  static EntropySpec parse(std::string_view text);

  EntropyKind kind() const noexcept { return kind_; }
  double q() const noexcept { return q_; }
  /// Canonical label: "vn", "q=2", "q=3" or "q=<value>".
  std::string label() const;

  friend bool operator==(const EntropySpec&, const EntropySpec&) = default;

 private:
  EntropySpec(EntropyKind k, double q) : kind_(k), q_(q) {}
  EntropyKind kind_;
  double q_;
};

inline constexpr double kMaxTsallisQ = 50.0;
inline constexpr double kDerivClamp = 1e-12;

/// f(p); throws DomainError if p lies outside [0, 1] by more than 1e-12.
double f_value(const EntropySpec& spec, double p);

struct Derivative {
  double value = 0.0;
  bool clamped = false;  // p was raised to kDerivClamp at a singular point
};

/// f'(p). For von Neumann and tsallis with q < 1 the derivative diverges at
/// p = 0; there p is clamped to kDerivClamp and the result is flagged.
Derivative f_derivative(const EntropySpec& spec, double p);
double f_second_derivative(const EntropySpec& spec, double p);

/// Sum of f over a probability vector. Entries may dip to -1e-10 (clamped to
/// zero); the sum must be 1 within 1e-9, else InvalidSpectrum.
double entropy_of_spectrum(std::span<const double> probs,
                           const EntropySpec& spec);

/// S_f of a density matrix via its eigenvalues.
double entropy(const DensityMatrix& rho, const EntropySpec& spec);
double entropy(const BlochState& state, const EntropySpec& spec);

/// Linear entropy 2 (1 - Tr rho^2) from Bloch data.
double s2_closed(const BlochState& state);
/// Cubic entropy (4/3)(1 - Tr rho^3) from Bloch data.
double s3_closed(const BlochState& state);

/// Small-correlation proportionality constant c_f = -f''(1/4) / 4.
double universal_coefficient(const EntropySpec& spec);

}  // namespace qcorr
