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

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qcorr {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat2c = Eigen::Matrix2cd;
using Mat4c = Eigen::Matrix4cd;
using Spectrum4 = std::array<double, 4>;

/// Base class of every error raised by the library. `code()` is the
/// machine-readable tag the CLI puts in its error objects.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class InvalidState : public Error {
 public:
  explicit InvalidState(const std::string& m) : Error("InvalidState", m) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& m) : Error("DomainError", m) {}
};

class InvalidSpectrum : public Error {
 public:
  explicit InvalidSpectrum(const std::string& m)
      : Error("InvalidSpectrum", m) {}
};

class NotXState : public Error {
 public:
  explicit NotXState(const std::string& m) : Error("NotXState", m) {}
};

class InfeasibleP1 : public Error {
 public:
  explicit InfeasibleP1(const std::string& m) : Error("InfeasibleP1", m) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& m) : Error("ParseError", m) {}
};

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace qcorr
