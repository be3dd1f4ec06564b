// Copyright 2026 cpdyn developers
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

#ifndef CPDYN_ERRORS_HPP
#define CPDYN_ERRORS_HPP

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cpdyn {

/// One failed invariant together with the measured residual.
struct Violation {
  std::string invariant;  // e.g. "NotHermitian", "NotPositive", "TraceDeviation"
  double residual = 0.0;
};

/// A value failed construction-time validation. Carries every violated
/// invariant, not just the first one found.
class ValidationError : public std::runtime_error {
public:
  ValidationError(const std::string& subject, std::vector<Violation> violations)
      : std::runtime_error(compose(subject, violations)),
        violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const { return violations_; }

  bool has(const std::string& invariant) const {
    for (const auto& v : violations_)
      if (v.invariant == invariant) return true;
    return false;
  }

private:
  static std::string compose(const std::string& subject,
                             const std::vector<Violation>& vs) {
    std::ostringstream os;
    os << subject << ": ";
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (i) os << "; ";
      os << vs[i].invariant << " (" << vs[i].residual << ")";
    }
    return os.str();
  }

  std::vector<Violation> violations_;
};

class DimensionMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A map expected to be completely positive has a genuinely negative Choi
/// eigenvalue.
class NotCPError : public std::runtime_error {
public:
  explicit NotCPError(double min_eigenvalue)
      : std::runtime_error("map is not completely positive (min Choi eigenvalue " +
                           std::to_string(min_eigenvalue) + ")"),
        min_eigenvalue_(min_eigenvalue) {}

  double min_eigenvalue() const { return min_eigenvalue_; }

private:
  double min_eigenvalue_;
};

/// The Choi matrix is not Hermitian: the input is not a Hermiticity-preserving
/// map and the CP question is not meaningful for it.
class NotHermiticityPreservingError : public std::runtime_error {
public:
  explicit NotHermiticityPreservingError(double residual)
      : std::runtime_error("map is not Hermiticity-preserving (Choi residual " +
                           std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const { return residual_; }

private:
  double residual_;
};

class ResourceCapError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A structure-function value came out negative.
class NegativeStructureError : public std::runtime_error {
public:
  explicit NegativeStructureError(double value)
      : std::runtime_error("structure function value is negative (" +
                           std::to_string(value) + ")"),
        value_(value) {}

  double value() const { return value_; }

private:
  double value_;
};

}  // namespace cpdyn

#endif  // CPDYN_ERRORS_HPP
