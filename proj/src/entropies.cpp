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

#include "qcorr/entropies.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

namespace qcorr {

namespace {

constexpr double kLn2 = std::numbers::ln2;

double clamp_probability(double p) {
  if (!(p >= -1e-12 && p <= 1.0 + 1e-12))
    throw DomainError("probability " + std::to_string(p) +
                      " outside [0, 1]");
  return std::clamp(p, 0.0, 1.0);
}

bool derivative_singular_at_zero(const EntropySpec& s) {
  return s.kind() == EntropyKind::von_neumann ||
         (s.kind() == EntropyKind::tsallis && s.q() < 1.0);
}

std::string format_q(double q) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, q);
  return std::string(buf, res.ptr);
}

}  // namespace

EntropySpec EntropySpec::von_neumann() {
  return EntropySpec(EntropyKind::von_neumann, 1.0);
}
EntropySpec EntropySpec::linear() { return EntropySpec(EntropyKind::linear, 2.0); }
EntropySpec EntropySpec::cubic() { return EntropySpec(EntropyKind::cubic, 3.0); }

EntropySpec EntropySpec::tsallis(double q) {
  if (!(q > 0.0 && q <= kMaxTsallisQ))
    throw DomainError("tsallis q must lie in (0, 50], got " + format_q(q));
  if (q == 1.0) return von_neumann();
  if (q == 2.0) return linear();
  if (q == 3.0) return cubic();
  return EntropySpec(EntropyKind::tsallis, q);
}

EntropySpec EntropySpec::parse(std::string_view text) {
  if (text == "vn") return von_neumann();
  if (text == "lin") return linear();
  if (text == "cub") return cubic();
  if (text.starts_with("q=")) {
    const std::string_view num = text.substr(2);
    double q = 0.0;
    auto res = std::from_chars(num.data(), num.data() + num.size(), q);
    if (res.ec != std::errc() || res.ptr != num.data() + num.size() ||
        num.empty())
      throw ParseError("bad entropy spec '" + std::string(text) + "'");
    try {
      return tsallis(q);
    } catch (const DomainError& e) {
      throw ParseError(e.what());
    }
  }
  throw ParseError("bad entropy spec '" + std::string(text) +
                   "' (expected vn, lin, cub or q=<value>)");
}

std::string EntropySpec::label() const {
  switch (kind_) {
    case EntropyKind::von_neumann:
      return "vn";
    case EntropyKind::linear:
      return "q=2";
    case EntropyKind::cubic:
      return "q=3";
    case EntropyKind::tsallis:
      return "q=" + format_q(q_);
  }
  return "?";
}

double f_value(const EntropySpec& spec, double p) {
  p = clamp_probability(p);
  switch (spec.kind()) {
    case EntropyKind::von_neumann:
      return p > 0.0 ? -p * std::log2(p) : 0.0;
    case EntropyKind::linear:
      return 2.0 * p * (1.0 - p);
    case EntropyKind::cubic:
      return (4.0 / 3.0) * (p - p * p * p);
    case EntropyKind::tsallis: {
      if (p == 0.0) return 0.0;
      const double q = spec.q();
      // (p - p^q) / (1 - 2^(1-q)) written with expm1 to stay accurate near q=1
      return p * std::expm1((q - 1.0) * std::log(p)) /
             std::expm1((1.0 - q) * kLn2);
    }
  }
  return 0.0;
}

Derivative f_derivative(const EntropySpec& spec, double p) {
  p = clamp_probability(p);
  Derivative d;
  if (p <= kDerivClamp && derivative_singular_at_zero(spec)) {
    p = kDerivClamp;
    d.clamped = true;
  }
  switch (spec.kind()) {
    case EntropyKind::von_neumann:
      d.value = -(std::log2(p) + 1.0 / kLn2);
      break;
    case EntropyKind::linear:
      d.value = 2.0 - 4.0 * p;
      break;
    case EntropyKind::cubic:
      d.value = (4.0 / 3.0) * (1.0 - 3.0 * p * p);
      break;
    case EntropyKind::tsallis: {
      const double q = spec.q();
      d.value = (1.0 - q * std::pow(p, q - 1.0)) / (1.0 - std::exp2(1.0 - q));
      break;
    }
  }
  return d;
}

double f_second_derivative(const EntropySpec& spec, double p) {
  p = clamp_probability(p);
  switch (spec.kind()) {
    case EntropyKind::von_neumann:
      return -1.0 / (p * kLn2);
    case EntropyKind::linear:
      return -4.0;
    case EntropyKind::cubic:
      return -8.0 * p;
    case EntropyKind::tsallis: {
      const double q = spec.q();
      return -q * (q - 1.0) * std::pow(p, q - 2.0) / (1.0 - std::exp2(1.0 - q));
    }
  }
  return 0.0;
}

double entropy_of_spectrum(std::span<const double> probs,
                           const EntropySpec& spec) {
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= -1e-10 && p <= 1.0 + 1e-10))
      throw InvalidSpectrum("eigenvalue " + std::to_string(p) +
                            " outside [0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw InvalidSpectrum("spectrum sums to " + std::to_string(sum));
  double s = 0.0;
  for (double p : probs) s += f_value(spec, std::clamp(p, 0.0, 1.0));
  return s;
}

double entropy(const DensityMatrix& rho, const EntropySpec& spec) {
  const Spectrum4 p = density_spectrum(rho);
  return entropy_of_spectrum(p, spec);
}

double entropy(const BlochState& state, const EntropySpec& spec) {
  switch (spec.kind()) {
    case EntropyKind::linear:
      return s2_closed(state);
    case EntropyKind::cubic:
      return s3_closed(state);
    default:
      return entropy(to_density(state), spec);
  }
}

double s2_closed(const BlochState& s) {
  return 1.5 - 0.5 * (s.r_a.squaredNorm() + s.r_b.squaredNorm() +
                      s.j.squaredNorm());
}

double s3_closed(const BlochState& s) {
  return 0.5 * (s2_closed(s) + 1.0 -
                (s.r_a.dot(s.j * s.r_b) - s.j.determinant()));
}

double universal_coefficient(const EntropySpec& spec) {
  return -0.25 * f_second_derivative(spec, 0.25);
}

}  // namespace qcorr
