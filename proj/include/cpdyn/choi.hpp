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

// Choi matrix of a map on d x d matrices:
//   C = Σ_ij E_ij (x) Phi(E_ij),
// i.e. block (i, j) of C (each block d x d) equals Phi(E_ij). The map is
// completely positive iff C >= 0 (Choi), and hermiticity-preserving iff C is
// Hermitian.

#ifndef CPDYN_CHOI_HPP
#define CPDYN_CHOI_HPP

#include <utility>
#include <vector>

#include "cpdyn/matrix.hpp"
#include "cpdyn/superop.hpp"

namespace cpdyn {

struct ChoiMatrix {
  Eigen::Index dim = 0;  // dimension d of the underlying space; matrix is d^2 x d^2
  Matrix matrix;

  double hermiticity_residual() const { return cpdyn::hermiticity_residual(matrix); }
};

inline ChoiMatrix choi_of(const SuperoperatorMap& map) {
  const Eigen::Index d = map.dim();
  ChoiMatrix choi{d, Matrix(d * d, d * d)};
  Matrix basis = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      basis(i, j) = 1.0;
      choi.matrix.block(i * d, j * d, d, d) = map.apply(basis);
      basis(i, j) = 0.0;
    }
  return choi;
}

inline SuperoperatorMap superop_of(const ChoiMatrix& choi) {
  const Eigen::Index d = choi.dim;
  if (choi.matrix.rows() != d * d || choi.matrix.cols() != d * d)
    throw DimensionMismatch("superop_of: Choi matrix is not d^2 x d^2");
  Matrix raw(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      raw.col(i + j * d) = vec(choi.matrix.block(i * d, j * d, d, d).eval());
  return SuperoperatorMap(std::move(raw));
}

/// Kraus operators from the spectral decomposition of the (hermitized) Choi
/// matrix: eigenvalues > tol contribute a scaled, reshaped eigenvector each.
/// Throws NotCPError if an eigenvalue < -tol exists.
inline KrausSet kraus_of(const ChoiMatrix& choi, double tol = 1e-10) {
  const Eigen::Index d = choi.dim;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(choi.matrix));
  const RealVector& vals = solver.eigenvalues();
  const Matrix& vecs = solver.eigenvectors();
  if (vals.minCoeff() < -tol) throw NotCPError(vals.minCoeff());

  KrausSet out{d, {}};
  for (Eigen::Index k = 0; k < vals.size(); ++k) {
    const double lambda = vals(k);
    if (lambda <= tol) continue;
    // eigenvector components are indexed (i*d + l) with i the input index and
    // l the output index, so K(l, i) = sqrt(lambda) * u[i*d + l]
    Matrix kraus(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index l = 0; l < d; ++l) kraus(l, i) = vecs(i * d + l, k);
    out.operators.push_back(std::sqrt(lambda) * kraus);
  }
  return out;
}

inline KrausSet kraus_of(const SuperoperatorMap& map, double tol = 1e-10) {
  return kraus_of(choi_of(map), tol);
}

}  // namespace cpdyn

#endif  // CPDYN_CHOI_HPP
