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

// Validated statistical operators (density matrices) and expectation values.

#ifndef CPDYN_DENSITY_HPP
#define CPDYN_DENSITY_HPP

#include <utility>

#include "cpdyn/matrix.hpp"

namespace cpdyn {

struct DensityTolerances {
  double herm = 1e-10;   // ‖M − M†‖_max
  double psd = 1e-10;    // allowed negative part of the spectrum
  double trace = 1e-10;  // |Tr M − 1|
};

/// Measured residuals of the three density-matrix invariants. The PSD test is
/// run on the spectrum of the Hermitized matrix (M + M†)/2, which keeps it
/// numerically symmetric and reproducible.
struct DensityReport {
  double herm_residual = 0.0;
  double min_eigenvalue = 0.0;
  double trace = 0.0;  // measured Tr M (real part; imaginary folded into herm)
  bool hermitian_ok = false;
  bool positive_ok = false;
  bool trace_ok = false;

  bool ok() const { return hermitian_ok && positive_ok && trace_ok; }
};

inline DensityReport check_density(const Matrix& entries,
                                   const DensityTolerances& tol = {}) {
  require_square(entries, "check_density");
  DensityReport r;
  r.herm_residual = hermiticity_residual(entries);
  r.min_eigenvalue = min_hermitian_eigenvalue(entries);
  r.trace = entries.trace().real();
  r.hermitian_ok = r.herm_residual <= tol.herm;
  r.positive_ok = r.min_eigenvalue >= -tol.psd;
  r.trace_ok = std::abs(entries.trace() - Complex(1.0)) <= tol.trace;
  return r;
}

/// Hermitian, positive semidefinite, unit-trace operator. Immutable once
/// constructed; construction validates against the stored tolerances.
class DensityMatrix {
public:
  static DensityMatrix make(Matrix entries, DensityTolerances tol = {}) {
    if (!all_finite(entries))
      throw ValidationError("DensityMatrix", {{"NonFinite", 0.0}});
    DensityReport r = check_density(entries, tol);
    if (!r.ok()) {
      std::vector<Violation> vs;
      if (!r.hermitian_ok) vs.push_back({"NotHermitian", r.herm_residual});
      if (!r.positive_ok) vs.push_back({"NotPositive", r.min_eigenvalue});
      if (!r.trace_ok) vs.push_back({"TraceDeviation", r.trace});
      throw ValidationError("DensityMatrix", std::move(vs));
    }
    return DensityMatrix(std::move(entries), tol);
  }

  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  const DensityTolerances& tolerances() const { return tol_; }

private:
  DensityMatrix(Matrix entries, DensityTolerances tol)
      : entries_(std::move(entries)), tol_(tol) {}

  Matrix entries_;
  DensityTolerances tol_;
};

inline DensityMatrix make_density_matrix(const Matrix& entries,
                                         DensityTolerances tol = {}) {
  return DensityMatrix::make(entries, tol);
}

/// Σ_{f,g} A_{fg} w_{gf} = Tr(A w). Real to ~1e-12 for Hermitian A.
inline Complex expectation(const Matrix& a, const DensityMatrix& w) {
  require_square(a, "expectation");
  if (a.rows() != w.dim())
    throw DimensionMismatch("expectation: operator and state dimensions differ");
  // contract without forming the product matrix
  return a.cwiseProduct(w.matrix().transpose()).sum();
}

}  // namespace cpdyn

#endif  // CPDYN_DENSITY_HPP
