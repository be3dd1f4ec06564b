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

// Seeded random ensembles: Ginibre matrices and the standard derived objects
// (Hermitian, unitary via QR, density via G G†, trace-preserving Kraus sets
// via isometry columns). All functions take the engine by reference so a
// fixed seed fixes the whole stream.

#ifndef CPDYN_RANDOM_HPP
#define CPDYN_RANDOM_HPP

#include <random>
#include <vector>

#include "cpdyn/matrix.hpp"

namespace cpdyn {

inline Matrix random_matrix(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) m(i, j) = Complex(gauss(rng), gauss(rng));
  return m;
}

inline Matrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
  return hermitize(random_matrix(dim, rng));
}

inline Vector random_pure_state(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return v / v.norm();
}

/// Haar-distributed via QR of a Ginibre matrix with the phase convention that
/// makes R's diagonal positive.
inline Matrix random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
  const Matrix g = random_matrix(dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    if (mag > 0.0) q.col(j) *= rjj / mag;
  }
  return q;
}

/// Full-rank density matrix G G† / Tr(G G†).
inline Matrix random_density(Eigen::Index dim, std::mt19937_64& rng) {
  const Matrix g = random_matrix(dim, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return hermitize(rho);
}

/// `count` Kraus operators satisfying Σ M_k† M_k = I exactly (to roundoff):
/// the columns of a Haar isometry from C^d to C^(count*d), cut into blocks.
inline std::vector<Matrix> random_cptp_kraus(Eigen::Index dim, int count,
                                             std::mt19937_64& rng) {
  Matrix g(dim * count, dim);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix q = Matrix(qr.householderQ()).leftCols(dim);
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k)
    out.push_back(q.block(static_cast<Eigen::Index>(k) * dim, 0, dim, dim));
  return out;
}

/// CP but not trace-preserving: plain Ginibre blocks, scaled down so norms
/// stay O(1).
inline std::vector<Matrix> random_cp_kraus(Eigen::Index dim, int count, std::mt19937_64& rng) {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k)
    out.push_back(random_matrix(dim, rng) / std::sqrt(static_cast<double>(dim * count)));
  return out;
}

}  // namespace cpdyn

#endif  // CPDYN_RANDOM_HPP
