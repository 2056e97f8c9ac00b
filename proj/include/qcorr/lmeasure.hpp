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

#include <functional>
#include <string>
#include <vector>

#include "qcorr/entropies.hpp"
#include "qcorr/qstate.hpp"

namespace qcorr {

/// Spin measurement axis on B. k and -k describe the same measurement.
class Direction {
 public:
  Direction() = default;
  /// Normalizes v; throws DomainError for a zero vector.
  static Direction from_vector(const Vec3& v);
  /// k = (sin g cos p, sin g sin p, cos g).
  static Direction from_angles(double gamma, double phi);

  const Vec3& k() const noexcept { return k_; }
  double gamma() const;  // polar angle in [0, pi]
  double phi() const;    // azimuth in [0, 2 pi)

  /// Representative of {k, -k} on the upper hemisphere (k_z >= 0; on the
  /// equator the first nonzero of k_x, k_y is positive).
  Direction canonical() const;

 private:
  explicit Direction(const Vec3& k) : k_(k) {}
  Vec3 k_ = Vec3::UnitZ();
};

/// Angle between the lines spanned by two directions, in [0, pi/2].
double projective_distance(const Direction& a, const Direction& b);

enum class Method { closed_form, grid_refine };
std::string to_string(Method m);

struct MeasurementReport {
  double value = 0.0;
  Direction direction;
  Spectrum4 cond_spectrum{};
  double residual = 0.0;
  Method method = Method::grid_refine;
  bool degenerate = false;
  bool singular = false;   // derivative clamp or merged eigenvalue pair
  bool converged = true;   // refinement met its tolerance
  int iterations = 0;      // simplex iterations of the winning start
};

struct OptimizerOptions {
  int grid_n = 64;            // gamma resolution pi / grid_n
  double xtol = 1e-10;        // angular tolerance of the refinement
  int max_iter = 500;         // per refinement start
  double value_tie = 1e-9;    // minima closer than this are ties
  bool allow_closed = true;   // use closed forms for q = 2, 3
  bool strict = false;        // throw OptimizerFailure on non-convergence
  int n_starts = 6;           // grid local minima that get refined
  bool parallel = true;       // OpenMP grid kernel
};

class OptimizerFailure : public Error {
 public:
  explicit OptimizerFailure(MeasurementReport best)
      : Error("OptimizerFailure",
              "direction refinement did not converge within max_iter"),
        report_(std::move(best)) {}
  const MeasurementReport& report() const noexcept { return report_; }

 private:
  MeasurementReport report_;
};

/// State after an unread measurement of B along k:
/// r_b -> (r_b . k) k, J -> J k k^t.
BlochState post_measurement_state(const BlochState& state, const Direction& k);

/// Eigenvalues p(mu, nu) = (1 + nu r_b.k + mu |r_a + nu J k|) / 4 of the
/// post-measurement state, ordered (nu, mu) = (+,+), (+,-), (-,+), (-,-).
Spectrum4 cond_spectrum(const BlochState& state, const Direction& k);

/// I_f^k = S_f(rho') - S_f(rho).
double info_loss(const BlochState& state, const Direction& k,
                 const EntropySpec& spec);

struct StationaryTerms {
  Vec3 d = Vec3::Zero();  // alpha1 r_b + alpha2 J^t r_a + alpha3 J^t J k
  double alpha1 = 0.0, alpha2 = 0.0, alpha3 = 0.0;
  bool singular = false;
};

/// d is the Euclidean gradient of I_f^k with respect to k; its tangential
/// part vanishes exactly at stationary directions.
StationaryTerms stationary_terms(const BlochState& state, const Direction& k,
                                 const EntropySpec& spec);

struct Residual {
  double value = 0.0;  // |k x d|
  bool singular = false;
};

Residual stationary_residual(const BlochState& state, const Direction& k,
                             const EntropySpec& spec);

/// Global minimum of I_f^k over measurement directions.
MeasurementReport minimize_info_loss(const BlochState& state,
                                     const EntropySpec& spec,
                                     const OptimizerOptions& opts = {});

/// Bloch vector of B after the measurement: (r_b . k) k.
Vec3 local_state_after(const BlochState& state, const Direction& k);

/// Measurement-induced loss of mutual information for direction k
/// (von Neumann entropies, base 2).
double discord_objective(const BlochState& state, const Direction& k);
Residual discord_residual(const BlochState& state, const Direction& k);

/// Quantum discord D^B over projective measurements on B.
MeasurementReport discord(const BlochState& state,
                          const OptimizerOptions& opts = {});

// ---------------------------------------------------------------------------
// Generic projective-sphere search shared by the measures above.

struct SphereMinimum {
  Direction direction;
  double value = 0.0;
  bool converged = true;
  bool degenerate = false;
  int iterations = 0;
};

/// Euclidean gradient of the objective at k; returns false where it is not
/// trustworthy (clamped derivative or merged eigenvalues).
using SphereGradient = std::function<bool(const Vec3& k, Vec3& grad)>;

/// Grid scan of the hemisphere followed by Nelder-Mead refinement, in a
/// tangent-plane chart, of the lowest grid basins. With a gradient each
/// refined point gets a few safeguarded Newton steps on the tangential
/// gradient, which still resolves the minimizer where the objective is too
/// flat to separate nearby values.
SphereMinimum sphere_minimize(const std::function<double(const Vec3&)>& f,
                              const OptimizerOptions& opts,
                              const SphereGradient& grad = {});

/// The Newton stage on its own; returns m unchanged if no step is accepted.
SphereMinimum gradient_polish(const std::function<double(const Vec3&)>& f,
                              const SphereGradient& grad, SphereMinimum m);

/// Tangent-chart Nelder-Mead from a single start; exposed for tests.
SphereMinimum refine_from(const std::function<double(const Vec3&)>& f,
                          const Vec3& start, double step,
                          const OptimizerOptions& opts);

/// Evaluates sum_i f(p_i) - S_f(rho) for many directions; S_f(rho) is
/// computed once.
class InfoLossObjective {
 public:
  InfoLossObjective(const BlochState& state, const EntropySpec& spec);
  double operator()(const Vec3& k) const;
  double base_entropy() const noexcept { return base_; }

 private:
  BlochState state_;
  EntropySpec spec_;
  double base_;
};

}  // namespace qcorr
