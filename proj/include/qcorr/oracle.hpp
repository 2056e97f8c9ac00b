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

// Brute-force reference minimizer for I_f^k.
//
// Deliberately shares no code path with minimize_info_loss: the objective
// is evaluated from its own conditional-eigenvalue formula and the full
// density spectrum, the sphere is scanned at full resolution, and the best
// cells are polished by golden-section searches along great circles.

#pragma once

#include "qcorr/entropies.hpp"
#include "qcorr/lmeasure.hpp"
#include "qcorr/qstate.hpp"

namespace qcorr {

struct OracleOptions {
  int n = 256;          // n x 2n cell-centre grid over the full sphere
  int n_polish = 4;     // distinct grid minima that get polished
  int max_rounds = 80;  // line-search sweeps per polished start
  bool parallel = true;
};

struct OracleResult {
  Direction direction;
  double value = 0.0;       // after polishing
  double grid_value = 0.0;  // best raw grid value
  int evaluations = 0;
};

/// DomainError unless opts.n >= 8.
OracleResult oracle_minimize(const BlochState& s, const EntropySpec& spec,
                             const OracleOptions& opts = {});

}  // namespace qcorr
