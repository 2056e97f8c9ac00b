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

// Data-parallel kernels over (gamma, phi) grids on the unit sphere.
//
// Every kernel has a serial reference (`*_serial`) and an OpenMP version
// (`*_parallel`). Both write each grid value into its own slot and reduce
// by index, so their outputs are bit-identical for any thread count. The
// serial versions are what the tests compare against.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "qcorr/types.hpp"

namespace qcorr::kernels {

/// Regular grid gamma_i = gamma0 + i * dgamma (i < n_gamma),
/// phi_j = phi0 + j * dphi (j < n_phi). Row-major, gamma outer.
struct SphereGrid {
  int n_gamma = 0;
  int n_phi = 0;
  double gamma0 = 0.0;
  double dgamma = 0.0;
  double phi0 = 0.0;
  double dphi = 0.0;

  std::size_t size() const {
    return static_cast<std::size_t>(n_gamma) * static_cast<std::size_t>(n_phi);
  }
  double gamma(int i) const { return gamma0 + i * dgamma; }
  double phi(int j) const { return phi0 + j * dphi; }
  Vec3 direction(int i, int j) const {
    const double g = gamma(i), p = phi(j);
    return Vec3(std::sin(g) * std::cos(p), std::sin(g) * std::sin(p),
                std::cos(g));
  }
};

/// Projective hemisphere: gamma in [0, pi/2] with step pi/n, phi in [0, 2pi)
/// with step pi/n. Antipodal directions give identical measurements, so this
/// covers every measurement once (the equator twice).
inline SphereGrid hemisphere_grid(int n) {
  SphereGrid g;
  g.n_gamma = n / 2 + 1;
  g.n_phi = 2 * n;
  g.dgamma = kPi / n;
  g.dphi = kPi / n;
  return g;
}

/// Full sphere, n x 2n cell centres in gamma, 2n azimuths.
inline SphereGrid full_sphere_grid(int n) {
  SphereGrid g;
  g.n_gamma = n;
  g.n_phi = 2 * n;
  g.dgamma = kPi / n;
  g.gamma0 = 0.5 * g.dgamma;
  g.dphi = kPi / n;
  return g;
}

template <class F>
std::vector<double> evaluate_serial(const SphereGrid& grid, F&& f) {
  std::vector<double> out(grid.size());
  for (int i = 0; i < grid.n_gamma; ++i)
    for (int j = 0; j < grid.n_phi; ++j)
      out[static_cast<std::size_t>(i) * grid.n_phi + j] = f(grid.direction(i, j));
  return out;
}

template <class F>
std::vector<double> evaluate_parallel(const SphereGrid& grid, F&& f) {
  std::vector<double> out(grid.size());
  const long long total = static_cast<long long>(grid.size());
#pragma omp parallel for schedule(static)
  for (long long idx = 0; idx < total; ++idx) {
    const int i = static_cast<int>(idx / grid.n_phi);
    const int j = static_cast<int>(idx % grid.n_phi);
    out[idx] = f(grid.direction(i, j));
  }
  return out;
}

/// Index of the smallest value; NaNs are skipped, ties go to the lowest index.
inline std::size_t argmin_serial(const std::vector<double>& v) {
  std::size_t best = 0;
  double bv = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] < bv) {
      bv = v[i];
      best = i;
    }
  return best;
}

inline std::size_t argmin_parallel(const std::vector<double>& v) {
  std::size_t best = 0;
  double bv = std::numeric_limits<double>::infinity();
#pragma omp parallel
  {
    std::size_t lb = 0;
    double lv = std::numeric_limits<double>::infinity();
#pragma omp for schedule(static) nowait
    for (long long i = 0; i < static_cast<long long>(v.size()); ++i)
      if (v[i] < lv) {
        lv = v[i];
        lb = static_cast<std::size_t>(i);
      }
#pragma omp critical(qcorr_argmin)
    {
      if (lv < bv || (lv == bv && lb < best)) {
        bv = lv;
        best = lb;
      }
    }
  }
  return best;
}

/// Grid points that are no larger than their 8 neighbours (phi wraps
/// around), sorted by value then index. Plateaus yield every member.
inline std::vector<std::size_t> local_minima(const SphereGrid& grid,
                                             const std::vector<double>& v) {
  std::vector<std::size_t> out;
  for (int i = 0; i < grid.n_gamma; ++i)
    for (int j = 0; j < grid.n_phi; ++j) {
      // a pole row is a single direction
      if (j > 0 && std::sin(grid.gamma(i)) == 0.0) break;
      const std::size_t idx = static_cast<std::size_t>(i) * grid.n_phi + j;
      const double c = v[idx];
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di) {
        const int ii = i + di;
        if (ii < 0 || ii >= grid.n_gamma) continue;
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const int jj = ((j + dj) % grid.n_phi + grid.n_phi) % grid.n_phi;
          if (v[static_cast<std::size_t>(ii) * grid.n_phi + jj] < c) {
            is_min = false;
            break;
          }
        }
      }
      if (is_min) out.push_back(idx);
    }
  std::stable_sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
    return v[a] < v[b];
  });
  return out;
}

}  // namespace qcorr::kernels
