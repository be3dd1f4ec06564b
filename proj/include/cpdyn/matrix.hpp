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

// Dense complex operator algebra shared by every module: norms, Hermitian
// spectra, Kronecker products, and the column-stacking vectorization that all
// superoperator representations use.

#ifndef CPDYN_MATRIX_HPP
#define CPDYN_MATRIX_HPP

#include <Eigen/Dense>
#include <complex>

#include "cpdyn/errors.hpp"

namespace cpdyn {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Entrywise max-abs norm.
inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

/// (M + M†)/2
inline Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

/// ‖M − M†‖_max
inline double hermiticity_residual(const Matrix& m) {
  return max_abs(m - Matrix(m.adjoint()));
}

/// Spectrum of the Hermitized matrix, ascending.
inline RealVector hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double min_hermitian_eigenvalue(const Matrix& m) {
  return hermitian_eigenvalues(m).minCoeff();
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Column-stacking vectorization: vec(X)[i + j*d] = X(i, j). This is the one
// convention used throughout; it coincides with Eigen's column-major storage,
// so vec/unvec are plain memory views.

inline Vector vec(const Matrix& x) {
  return Eigen::Map<const Vector>(x.data(), x.size());
}

inline Matrix unvec(const Vector& v, Eigen::Index dim) {
  if (v.size() != dim * dim)
    throw DimensionMismatch("unvec: vector length does not match dim^2");
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

inline void require_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols())
    throw DimensionMismatch(std::string(who) + ": matrix is not square");
}

inline void require_same_dim(const Matrix& a, const Matrix& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch(std::string(who) + ": dimension mismatch");
}

}  // namespace cpdyn

#endif  // CPDYN_MATRIX_HPP
