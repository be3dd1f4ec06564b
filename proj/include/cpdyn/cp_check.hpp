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

// Complete-positivity decision and witnesses. A map Phi is CP iff its Choi
// matrix is positive semidefinite; when it is not, a finite collection
// (n, {psi_i}, {B_i}) violating the Heisenberg-form inequality
//   Σ_ij <psi_i| Phi'(B_i† B_j) |psi_j>  >=  0
// is produced from the negative Choi eigenvector. A second, independent probe
// checks positivity of the tensor extension Phi (x) 1_n on explicit states.

#ifndef CPDYN_CP_CHECK_HPP
#define CPDYN_CP_CHECK_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cpdyn/choi.hpp"
#include "cpdyn/matrix.hpp"
#include "cpdyn/superop.hpp"

namespace cpdyn {

struct CPVerdict {
  bool completely_positive = false;
  double min_choi_eigenvalue = 0.0;
  double tol = 0.0;
};

/// Finite data violating the CP inequality: a valid witness recomputes to a
/// negative value through witness_value below.
struct CPWitness {
  int n = 0;
  std::vector<Vector> psi;  // n vectors of dim d
  std::vector<Matrix> b;    // n operators d x d
  double value = 0.0;       // the inequality sum at construction time
};

/// Throws NotHermiticityPreservingError when the Choi matrix is not Hermitian
/// within herm_tol; such maps are not physical-map candidates and the PSD
/// question is ill-posed for them.
inline CPVerdict is_completely_positive(const SuperoperatorMap& map, double tol = 1e-10,
                                        double herm_tol = 1e-8) {
  const ChoiMatrix choi = choi_of(map);
  const double herm = choi.hermiticity_residual();
  if (herm > herm_tol) throw NotHermiticityPreservingError(herm);
  const double min_eig = min_hermitian_eigenvalue(choi.matrix);
  return CPVerdict{min_eig >= -tol, min_eig, tol};
}

/// Evaluates the inequality sum Σ_ij <psi_i| Phi'(B_i† B_j) |psi_j> literally,
/// using the Heisenberg dual of the stored (Schrödinger) map. Real part is
/// returned; the imaginary part vanishes identically because the sum is a
/// quadratic form in a Hermitian block operator.
inline double witness_value(const SuperoperatorMap& map, const CPWitness& witness) {
  Complex acc = 0.0;
  for (int i = 0; i < witness.n; ++i)
    for (int j = 0; j < witness.n; ++j) {
      const Matrix arg = witness.b[static_cast<std::size_t>(i)].adjoint() *
                         witness.b[static_cast<std::size_t>(j)];
      const Vector mapped = map.apply_dual(arg) * witness.psi[static_cast<std::size_t>(j)];
      acc += witness.psi[static_cast<std::size_t>(i)].dot(mapped);
    }
  return acc.real();
}

/// Deterministic witness from the most negative Choi eigenvector v, no search:
/// split v into d blocks v_i of length d and take
///   n = d,  psi_i = e_i,  B_i = e_0 v_i†.
/// Then B_i† B_j = |v_i><v_j| and
///   Σ_ij <e_i| Phi'(B_i† B_j) |e_j> = Σ_ij Tr(|v_i><v_j| Phi(E_ji))
//                                    = Σ_ij v_i† Phi(E_ij) v_j = <v|C|v>,
/// which is the (negative) minimum eigenvalue for unit-norm v.
inline std::optional<CPWitness> cp_witness(const SuperoperatorMap& map, double tol = 1e-10) {
  const ChoiMatrix choi = choi_of(map);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(choi.matrix));
  const double min_eig = solver.eigenvalues()(0);
  if (min_eig >= -tol) return std::nullopt;

  const Eigen::Index d = map.dim();
  const Vector v = solver.eigenvectors().col(0);
  CPWitness witness;
  witness.n = static_cast<int>(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    witness.psi.push_back(Vector::Unit(d, i));
    Matrix b = Matrix::Zero(d, d);
    b.row(0) = v.segment(i * d, d).adjoint();
    witness.b.push_back(std::move(b));
  }
  witness.value = witness_value(map, witness);
  return witness;
}

struct TensorExtensionReport {
  Eigen::Index n = 0;        // ancilla dimension
  int samples = 0;           // random product-space states probed
  double min_eigenvalue = 0.0;
  double tol = 0.0;
  bool positive = false;
};

namespace detail {

inline Vector random_unit_vector(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return v / v.norm();
}

}  // namespace detail

/// Applies Phi (x) 1_n blockwise: for rho on C^d (x) C^n written as
/// rho = Σ_ab S_ab (x) E_ab with (S_ab)_ij = rho(i*n+a, j*n+b), the extension
/// maps each slice S_ab through Phi independently.
inline Matrix apply_tensor_extension(const SuperoperatorMap& map, Eigen::Index n,
                                     const Matrix& rho) {
  const Eigen::Index d = map.dim();
  if (rho.rows() != d * n || rho.cols() != d * n)
    throw DimensionMismatch("apply_tensor_extension: state dimension mismatch");
  Matrix out(d * n, d * n);
  Matrix slice(d, d);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) slice(i, j) = rho(i * n + a, j * n + b);
      const Matrix mapped = map.apply(slice);
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) out(i * n + a, j * n + b) = mapped(i, j);
    }
  return out;
}

/// Probes positivity of Phi (x) 1_n on the maximally entangled projector
/// (always, deterministically) plus `samples` random pure-state projectors on
/// the product space. Reports the most negative eigenvalue seen across all
/// outputs. The entangled probe is what detects positive-but-not-CP maps;
/// the dimension cap keeps the dense eigensolves bounded.
inline TensorExtensionReport tensor_extension_positive(const SuperoperatorMap& map,
                                                       Eigen::Index n, int samples = 10,
                                                       double tol = 1e-10,
                                                       std::uint64_t seed = 0x5eed5eedULL) {
  const Eigen::Index d = map.dim();
  if (n < 1) throw DimensionMismatch("tensor_extension_positive: n must be >= 1");
  if (n * d > 64)
    throw ResourceCapError("tensor_extension_positive: n*d = " + std::to_string(n * d) +
                           " exceeds cap 64");

  std::vector<Vector> probes;
  const Eigen::Index m = std::min(d, n);
  Vector omega = Vector::Zero(d * n);
  for (Eigen::Index k = 0; k < m; ++k) omega(k * n + k) = 1.0 / std::sqrt(static_cast<double>(m));
  probes.push_back(std::move(omega));

  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) probes.push_back(detail::random_unit_vector(d * n, rng));

  double min_eig = std::numeric_limits<double>::infinity();
  for (const Vector& psi : probes) {
    const Matrix rho = psi * psi.adjoint();
    const Matrix out = apply_tensor_extension(map, n, rho);
    min_eig = std::min(min_eig, min_hermitian_eigenvalue(out));
  }
  return TensorExtensionReport{n, samples, min_eig, tol, min_eig >= -tol};
}

}  // namespace cpdyn

#endif  // CPDYN_CP_CHECK_HPP
