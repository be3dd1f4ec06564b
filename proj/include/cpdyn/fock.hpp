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

// Small second-quantized representation: ladder operators on an
// occupation-number basis truncated at a total particle number. Serves as the
// explicit construction behind the reduction identity
//   Tr_Fock( A rho ) = Tr_1( A w ),  A = Σ a†_f A_fg a_g,
//   rho = Σ a†_g |0><0| a_f w_gf,
// evaluated by assembling the operators literally and tracing.

#ifndef CPDYN_FOCK_HPP
#define CPDYN_FOCK_HPP

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "cpdyn/density.hpp"
#include "cpdyn/matrix.hpp"

namespace cpdyn {

enum class Statistics { fermi, bose };

/// One-particle-sector data: either an observable coefficient matrix A_fg or
/// a state matrix w_gf, together with the statistics of the underlying field.
/// Expectation values in the single-particle sector do not depend on the
/// statistics flag; the flag is carried so that tests can assert this rather
/// than assume it.
struct FockSectorRep {
  int modes = 0;
  Statistics statistics = Statistics::fermi;
  Matrix coefficients;  // modes x modes
};

/// Fock space over `modes` modes truncated at total occupation <= max_total.
/// Fermi statistics additionally caps each mode at occupation 1 and inserts
/// the usual (-1)^(number of occupied modes below f) signs; Bose uses
/// sqrt(n) ladder factors. Basis index 0 is the vacuum.
class TruncatedFockSpace {
public:
  TruncatedFockSpace(int modes, Statistics statistics, int max_total = 1)
      : modes_(modes), statistics_(statistics) {
    if (modes < 1) throw DimensionMismatch("TruncatedFockSpace: modes must be >= 1");
    if (max_total < 1) throw DimensionMismatch("TruncatedFockSpace: max_total must be >= 1");
    std::vector<int> occ(static_cast<std::size_t>(modes), 0);
    enumerate(occ, 0, 0, max_total);
    build_annihilators();
  }

  int modes() const { return modes_; }
  Eigen::Index dimension() const { return static_cast<Eigen::Index>(states_.size()); }
  int vacuum_index() const { return 0; }

  /// Index of the one-particle basis state a†_f |0>.
  int one_particle_index(int mode) const {
    std::vector<int> occ(static_cast<std::size_t>(modes_), 0);
    occ[static_cast<std::size_t>(mode)] = 1;
    return index_.at(occ);
  }

  const Matrix& annihilator(int mode) const {
    return annihilators_[static_cast<std::size_t>(mode)];
  }

  Matrix creator(int mode) const { return annihilator(mode).adjoint(); }

  Matrix vacuum_projector() const {
    Matrix p = Matrix::Zero(dimension(), dimension());
    p(0, 0) = 1.0;
    return p;
  }

private:
  void enumerate(std::vector<int>& occ, int mode, int total, int max_total) {
    if (mode == modes_) {
      index_[occ] = static_cast<int>(states_.size());
      states_.push_back(occ);
      return;
    }
    const int cap = statistics_ == Statistics::fermi ? 1 : max_total;
    for (int n = 0; n <= cap && total + n <= max_total; ++n) {
      occ[static_cast<std::size_t>(mode)] = n;
      enumerate(occ, mode + 1, total + n, max_total);
    }
    occ[static_cast<std::size_t>(mode)] = 0;
  }

  void build_annihilators() {
    const Eigen::Index d = dimension();
    annihilators_.assign(static_cast<std::size_t>(modes_), Matrix::Zero(d, d));
    for (int s = 0; s < d; ++s) {
      const auto& occ = states_[static_cast<std::size_t>(s)];
      for (int f = 0; f < modes_; ++f) {
        const int nf = occ[static_cast<std::size_t>(f)];
        if (nf == 0) continue;
        std::vector<int> lowered = occ;
        lowered[static_cast<std::size_t>(f)] = nf - 1;
        auto it = index_.find(lowered);
        if (it == index_.end()) continue;  // outside the truncation
        double amp;
        if (statistics_ == Statistics::fermi) {
          int below = 0;
          for (int j = 0; j < f; ++j) below += occ[static_cast<std::size_t>(j)];
          amp = (below % 2 == 0) ? 1.0 : -1.0;
        } else {
          amp = std::sqrt(static_cast<double>(nf));
        }
        annihilators_[static_cast<std::size_t>(f)](it->second, s) = amp;
      }
    }
  }

  int modes_;
  Statistics statistics_;
  std::vector<std::vector<int>> states_;
  std::map<std::vector<int>, int> index_;
  std::vector<Matrix> annihilators_;
};

/// Tr(A rho) with both operators assembled explicitly in the truncated Fock
/// space. `max_total` is exposed so tests can show the value is unchanged by
/// enlarging the truncation (the bilinears conserve particle number and rho
/// lives in the one-particle sector).
inline Complex fock_expectation(const FockSectorRep& rep_a, const FockSectorRep& rep_w,
                                int max_total = 1) {
  if (rep_a.modes != rep_w.modes)
    throw DimensionMismatch("fock_expectation: mode counts differ");
  if (rep_a.coefficients.rows() != rep_a.modes || rep_a.coefficients.cols() != rep_a.modes ||
      rep_w.coefficients.rows() != rep_w.modes || rep_w.coefficients.cols() != rep_w.modes)
    throw DimensionMismatch("fock_expectation: coefficient matrix is not modes x modes");
  if (rep_a.statistics != rep_w.statistics)
    throw DimensionMismatch("fock_expectation: statistics flags differ");

  // rep_w must be a valid statistical operator
  (void)make_density_matrix(rep_w.coefficients);

  const int n = rep_a.modes;
  TruncatedFockSpace space(n, rep_a.statistics, max_total);
  const Eigen::Index d = space.dimension();

  std::vector<Matrix> creators;
  creators.reserve(static_cast<std::size_t>(n));
  for (int f = 0; f < n; ++f) creators.push_back(space.creator(f));

  Matrix a_op = Matrix::Zero(d, d);
  for (int f = 0; f < n; ++f)
    for (int g = 0; g < n; ++g)
      a_op += rep_a.coefficients(f, g) * (creators[static_cast<std::size_t>(f)] *
                                          space.annihilator(g));

  // matter degrees of freedom are already traced out; the vacuum projector is
  // what remains of the matter statistical operator in the microsystem space
  const Matrix p_vac = space.vacuum_projector();
  Matrix rho_op = Matrix::Zero(d, d);
  for (int g = 0; g < n; ++g)
    for (int f = 0; f < n; ++f)
      rho_op += rep_w.coefficients(g, f) *
                (creators[static_cast<std::size_t>(g)] * p_vac * space.annihilator(f));

  return (a_op * rho_op).trace();
}

}  // namespace cpdyn

#endif  // CPDYN_FOCK_HPP
