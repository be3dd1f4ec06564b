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

// Linear maps on d x d matrices, stored as d^2 x d^2 matrices acting on
// column-stacked vectors: column (i + j*d) of the superoperator is
// vec(Phi(E_ij)) where E_ij = |i><j|. Equivalently
//   vec(A X B) = (B^T (x) A) vec(X).

#ifndef CPDYN_SUPEROP_HPP
#define CPDYN_SUPEROP_HPP

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "cpdyn/matrix.hpp"

namespace cpdyn {

/// A Kraus decomposition Phi(X) = Σ_k M_k X M_k†. Not necessarily
/// trace-preserving; completeness_residual reports ||Σ M_k† M_k - I||_max.
struct KrausSet {
  Eigen::Index dim = 0;
  std::vector<Matrix> operators;

  double completeness_residual() const {
    Matrix acc = Matrix::Zero(dim, dim);
    for (const Matrix& m : operators) acc += m.adjoint() * m;
    acc -= Matrix::Identity(dim, dim);
    return max_abs(acc);
  }
};

class SuperoperatorMap {
public:
  SuperoperatorMap() = default;

  /// Takes the raw d^2 x d^2 matrix in the column-stacking convention.
  explicit SuperoperatorMap(Matrix raw) : raw_(std::move(raw)) {
    require_square(raw_, "SuperoperatorMap");
    const Eigen::Index n = raw_.rows();
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
    if (d * d != n)
      throw DimensionMismatch("SuperoperatorMap: side length is not a perfect square");
    dim_ = d;
  }

  static SuperoperatorMap from_function(Eigen::Index dim,
                                        const std::function<Matrix(const Matrix&)>& phi) {
    Matrix raw(dim * dim, dim * dim);
    Matrix basis = Matrix::Zero(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
      for (Eigen::Index i = 0; i < dim; ++i) {
        basis(i, j) = 1.0;
        raw.col(i + j * dim) = vec(phi(basis));
        basis(i, j) = 0.0;
      }
    return SuperoperatorMap(std::move(raw));
  }

  static SuperoperatorMap from_kraus(const KrausSet& kraus) {
    if (kraus.dim <= 0) throw DimensionMismatch("from_kraus: dim must be positive");
    Matrix raw = Matrix::Zero(kraus.dim * kraus.dim, kraus.dim * kraus.dim);
    for (const Matrix& m : kraus.operators) {
      if (m.rows() != kraus.dim || m.cols() != kraus.dim)
        throw DimensionMismatch("from_kraus: operator dimension mismatch");
      raw += kron(m.conjugate(), m);  // vec(M X M†) = (conj(M) (x) M) vec(X)
    }
    return SuperoperatorMap(std::move(raw));
  }

  static SuperoperatorMap identity(Eigen::Index dim) {
    return SuperoperatorMap(Matrix::Identity(dim * dim, dim * dim));
  }

  static SuperoperatorMap transpose_map(Eigen::Index dim) {
    return from_function(dim, [](const Matrix& x) { return x.transpose().eval(); });
  }

  /// Phi(X) = (1-p) X + p Tr(X) I/d. CP for p in [0, d^2/(d^2-1)].
  static SuperoperatorMap depolarizing(Eigen::Index dim, double p) {
    return from_function(dim, [dim, p](const Matrix& x) {
      return ((1.0 - p) * x + p * x.trace() / static_cast<double>(dim) *
                                  Matrix::Identity(dim, dim))
          .eval();
    });
  }

  static SuperoperatorMap unitary_conjugation(const Matrix& u) {
    require_square(u, "unitary_conjugation");
    KrausSet k{u.rows(), {u}};
    return from_kraus(k);
  }

  Eigen::Index dim() const { return dim_; }
  const Matrix& raw() const { return raw_; }

  Matrix apply(const Matrix& x) const {
    if (x.rows() != dim_ || x.cols() != dim_)
      throw DimensionMismatch("SuperoperatorMap::apply: argument dimension mismatch");
    return unvec(raw_ * vec(x), dim_);
  }

  /// The dual map Phi' with Tr(Phi'(X) rho) = Tr(X Phi(rho)) for all X, rho.
  /// In vectorized form Phi'(X) = unvec(S† vec(X†))†.
  Matrix apply_dual(const Matrix& x) const {
    if (x.rows() != dim_ || x.cols() != dim_)
      throw DimensionMismatch("SuperoperatorMap::apply_dual: argument dimension mismatch");
    return unvec(raw_.adjoint() * vec(x.adjoint().eval()), dim_).adjoint();
  }

  SuperoperatorMap compose(const SuperoperatorMap& inner) const {
    if (dim_ != inner.dim_) throw DimensionMismatch("compose: dimension mismatch");
    return SuperoperatorMap(raw_ * inner.raw_);
  }

  /// max-norm deviation of Tr(Phi(E_ij)) from Tr(E_ij) over the matrix units.
  double trace_preservation_residual() const {
    double worst = 0.0;
    Matrix basis = Matrix::Zero(dim_, dim_);
    for (Eigen::Index j = 0; j < dim_; ++j)
      for (Eigen::Index i = 0; i < dim_; ++i) {
        basis(i, j) = 1.0;
        const Complex t = apply(basis).trace() - basis.trace();
        worst = std::max(worst, std::abs(t));
        basis(i, j) = 0.0;
      }
    return worst;
  }

private:
  Matrix raw_;
  Eigen::Index dim_ = 0;
};

}  // namespace cpdyn

#endif  // CPDYN_SUPEROP_HPP
