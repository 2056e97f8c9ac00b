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

// JSON state files. Two accepted shapes:
//
//   {"bloch": {"r_a": [x, y, z], "r_b": [x, y, z], "j": [[...], [...], [...]]}}
//   {"rho": [[[re, im], ...4], ...4]}   (row-major)
//
// The writer emits both keys; the reader prefers "rho" when both exist.

#pragma once

#include <string>
#include <string_view>

#include "qcorr/qstate.hpp"

namespace qcorr {

/// Parses and validates a state document. ParseError on malformed JSON or
/// shape, InvalidState if the matrix fails validate().
BlochState parse_state(std::string_view text);
BlochState load_state(const std::string& path);

std::string state_to_json(const BlochState& s, int indent = 2);
void save_state(const BlochState& s, const std::string& path);

}  // namespace qcorr
