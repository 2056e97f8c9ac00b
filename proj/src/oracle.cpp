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

#include "qcorr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qcorr/kernels.hpp"

namespace qcorr {

namespace {

constexpr double kGolden = 0.6180339887498949;

class Objective {
 public:
  Objective(const BlochState& s, const EntropySpec& spec)
      : s_(s), spec_(spec), base_(entropy(to_density(s), spec)) {}

  double operator()(const Vec3& k) const {
    double total = 0.0;
    for (double nu : {1.0, -1.0}) {
      const double shift = 1.0 + nu * s_.r_b.dot(k);
      const double n = (s_.r_a + nu * (s_.j * k)).norm();
      total += f_value(spec_, std::clamp(0.25 * (shift + n), 0.0, 1.0));
      total += f_value(spec_, std::clamp(0.25 * (shift - n), 0.0, 1.0));
    }
    return total - base_;
  }

  double counted(const Vec3& k) const {
    ++count_;
    return (*this)(k);
  }
  int count() const { return count_; }

 private:
  BlochState s_;
  EntropySpec spec_;
  double base_;
  mutable int count_ = 0;
};

Vec3 on_circle(const Vec3& k, const Vec3& t, double s) {
  return (std::cos(s) * k + std::sin(s) * t).normalized();
}

// Golden-section search of g(s) = f(cos s k + sin s t) on [-w, w]; the
// bracket is widened while the minimum sits at an edge.
double line_search(const Objective& f, Vec3& k, double& fk, const Vec3& t,
                   double w) {
  for (int widen = 0; widen < 6; ++widen) {
    double a = -w, b = w;
    double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
    double f1 = f.counted(on_circle(k, t, x1));
    double f2 = f.counted(on_circle(k, t, x2));
    while (b - a > 1e-11) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kGolden * (b - a);
        f1 = f.counted(on_circle(k, t, x1));
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kGolden * (b - a);
        f2 = f.counted(on_circle(k, t, x2));
      }
    }
    const double s = f1 <= f2 ? x1 : x2;
    const double fs = std::min(f1, f2);
    const bool at_edge = std::abs(std::abs(s) - w) < 1e-3 * w;
    if (fs < fk) {
      k = on_circle(k, t, s);
      fk = fs;
      if (!at_edge) return std::abs(s);
      w *= 4.0;
      continue;
    }
    return 0.0;
  }
  return 0.0;
}

void tangents(const Vec3& k, Vec3& t1, Vec3& t2) {
  const Vec3 seed = std::abs(k.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
  t1 = (seed - seed.dot(k) * k).normalized();
  t2 = k.cross(t1).normalized();
}

void polish(const Objective& f, Vec3& k, double& fk, double step, int rounds) {
  double w = 2.0 * step;
  for (int r = 0; r < rounds; ++r) {
    const Vec3 start = k;
    const double f_start = fk;
    Vec3 t1, t2;
    tangents(k, t1, t2);
    double moved = line_search(f, k, fk, t1, w);
    tangents(k, t1, t2);
    moved = std::max(moved, line_search(f, k, fk, t2, w));
    Vec3 disp = k - start;
    disp -= disp.dot(k) * k;
    if (disp.norm() > 1e-15)
      moved = std::max(moved, line_search(f, k, fk, disp.normalized(), w));
    if (f_start - fk <= 1e-16 && moved < 1e-9) break;
    w = std::max(4.0 * moved, 1e-6);
  }
}

}  // namespace

OracleResult oracle_minimize(const BlochState& s, const EntropySpec& spec,
                             const OracleOptions& opts) {
  if (opts.n < 8) throw DomainError("oracle grid needs n >= 8");
  const Objective f(s, spec);
  const kernels::SphereGrid grid = kernels::full_sphere_grid(opts.n);
  auto eval = [&](const Vec3& k) { return f(k); };
  const std::vector<double> values = opts.parallel
                                         ? kernels::evaluate_parallel(grid, eval)
                                         : kernels::evaluate_serial(grid, eval);
  const std::vector<std::size_t> minima = kernels::local_minima(grid, values);

  OracleResult out;
  out.grid_value = values[kernels::argmin_serial(values)];
  out.value = out.grid_value;
  std::vector<Vec3> starts;
  for (std::size_t idx : minima) {
    if (static_cast<int>(starts.size()) >= opts.n_polish) break;
    const Vec3 k = grid.direction(static_cast<int>(idx / grid.n_phi),
                                  static_cast<int>(idx % grid.n_phi));
    bool dup = false;
    for (const Vec3& o : starts)
      if (std::abs(o.dot(k)) > std::cos(2.0 * grid.dgamma)) dup = true;
    if (!dup) starts.push_back(k);
  }
  const std::size_t best_idx = kernels::argmin_serial(values);
  out.direction = Direction::from_vector(grid.direction(
      static_cast<int>(best_idx / grid.n_phi),
      static_cast<int>(best_idx % grid.n_phi)));

  for (Vec3 k : starts) {
    double fk = f(k);
    polish(f, k, fk, grid.dgamma, opts.max_rounds);
    if (fk < out.value) {
      out.value = fk;
      out.direction = Direction::from_vector(k);
    }
  }
  out.direction = out.direction.canonical();
  out.evaluations = static_cast<int>(grid.size()) + f.count();
  return out;
}

}  // namespace qcorr
