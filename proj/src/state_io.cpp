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

#include "qcorr/state_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qcorr {

namespace {

using nlohmann::json;

double number(const json& v, const char* what) {
  if (!v.is_number()) throw ParseError(std::string(what) + " must be a number");
  return v.get<double>();
}

Vec3 vec3(const json& v, const char* what) {
  if (!v.is_array() || v.size() != 3)
    throw ParseError(std::string(what) + " must be an array of 3 numbers");
  return Vec3(number(v[0], what), number(v[1], what), number(v[2], what));
}

DensityMatrix rho_from(const json& v) {
  if (!v.is_array() || v.size() != 4)
    throw ParseError("rho must be a 4x4 array of [re, im] pairs");
  DensityMatrix rho;
  for (int i = 0; i < 4; ++i) {
    if (!v[i].is_array() || v[i].size() != 4)
      throw ParseError("rho must be a 4x4 array of [re, im] pairs");
    for (int k = 0; k < 4; ++k) {
      const json& e = v[i][k];
      if (e.is_number()) {
        rho.m(i, k) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2) {
        rho.m(i, k) = Complex(number(e[0], "rho entry"), number(e[1], "rho entry"));
      } else {
        throw ParseError("rho entries must be [re, im] pairs");
      }
    }
  }
  return rho;
}

std::string describe(const ValidationReport& r) {
  std::ostringstream os;
  os << "state fails validation: hermiticity deviation " << r.herm_dev
     << ", trace deviation " << r.trace_dev << ", minimum eigenvalue "
     << r.min_eig;
  return os.str();
}

}  // namespace

BlochState parse_state(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("state document must be an object");
  if (doc.contains("rho")) {
    const DensityMatrix rho = rho_from(doc["rho"]);
    const ValidationReport r = validate(rho);
    if (!r.valid) throw InvalidState(describe(r));
    return from_density(rho);
  }
  if (doc.contains("bloch")) {
    const json& b = doc["bloch"];
    if (!b.is_object() || !b.contains("r_a") || !b.contains("r_b") ||
        !b.contains("j"))
      throw ParseError("bloch needs r_a, r_b and j");
    BlochState s;
    s.r_a = vec3(b["r_a"], "r_a");
    s.r_b = vec3(b["r_b"], "r_b");
    const json& j = b["j"];
    if (!j.is_array() || j.size() != 3)
      throw ParseError("j must be a 3x3 array");
    for (int i = 0; i < 3; ++i) s.j.row(i) = vec3(j[i], "j row").transpose();
    const ValidationReport r = validate(to_density(s));
    if (!r.valid) throw InvalidState(describe(r));
    return s;
  }
  throw ParseError("state document needs a \"bloch\" or \"rho\" key");
}

BlochState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open state file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_state(buf.str());
}

std::string state_to_json(const BlochState& s, int indent) {
  json doc;
  doc["bloch"]["r_a"] = {s.r_a.x(), s.r_a.y(), s.r_a.z()};
  doc["bloch"]["r_b"] = {s.r_b.x(), s.r_b.y(), s.r_b.z()};
  json j = json::array();
  for (int i = 0; i < 3; ++i) j.push_back({s.j(i, 0), s.j(i, 1), s.j(i, 2)});
  doc["bloch"]["j"] = j;
  const DensityMatrix rho = to_density(s);
  json m = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int k = 0; k < 4; ++k) row.push_back({rho.m(i, k).real(), rho.m(i, k).imag()});
    m.push_back(row);
  }
  doc["rho"] = m;
  return doc.dump(indent);
}

void save_state(const BlochState& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write state file '" + path + "'");
  out << state_to_json(s) << '\n';
}

}  // namespace qcorr
