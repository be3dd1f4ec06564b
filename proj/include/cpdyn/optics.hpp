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

// Closed-form neutron-optical quantities for a homogeneous slab:
//   refractive index   n = 1 - (λ²/2π) b n_o
//   phase shift        χ = (n-1) k0 D = -n_o b λ D
//   diffusion σ_d      b² ∫dΩ S(q),  q = 2 k0 sin(θ/2)   (elastic, static S)
//   attenuation        Σ = n_o σ_d D       (traversal time cancels velocity)
//   optical potential  bracket = n_o (b - i (b²/4π) k0 ∫dΩ S)
// All lengths in Å; b enters in fm and is converted (1 fm = 1e-5 Å). The
// reported predictions (χ, Σ, contrast) are dimensionless, so ħ and the mass
// never appear.

#ifndef CPDYN_OPTICS_HPP
#define CPDYN_OPTICS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cpdyn/errors.hpp"
#include "cpdyn/quadrature.hpp"

namespace cpdyn {

inline double fm_to_angstrom(double fm) { return fm * 1e-5; }

/// Static structure function of |q|: either a constant or a tabulated curve
/// evaluated by linear interpolation, clamped at the table ends.
class StructureFunction {
public:
  static StructureFunction constant(double value) {
    if (value < 0.0) throw NegativeStructureError(value);
    StructureFunction s;
    s.constant_value_ = value;
    return s;
  }

  static StructureFunction tabulated(std::vector<double> q_grid, std::vector<double> values) {
    if (q_grid.size() != values.size() || q_grid.size() < 2)
      throw std::invalid_argument("StructureFunction: table needs >= 2 matching rows");
    for (std::size_t i = 1; i < q_grid.size(); ++i)
      if (!(q_grid[i] > q_grid[i - 1]))
        throw std::invalid_argument("StructureFunction: q grid must be strictly increasing");
    for (double v : values)
      if (v < 0.0) throw NegativeStructureError(v);
    StructureFunction s;
    s.q_grid_ = std::move(q_grid);
    s.values_ = std::move(values);
    return s;
  }

  bool is_tabulated() const { return !q_grid_.empty(); }

  double operator()(double q) const {
    if (q_grid_.empty()) return constant_value_;
    if (q <= q_grid_.front()) return values_.front();
    if (q >= q_grid_.back()) return values_.back();
    const auto it = std::upper_bound(q_grid_.begin(), q_grid_.end(), q);
    const std::size_t hi = static_cast<std::size_t>(it - q_grid_.begin());
    const std::size_t lo = hi - 1;
    const double t = (q - q_grid_[lo]) / (q_grid_[hi] - q_grid_[lo]);
    const double s = values_[lo] + t * (values_[hi] - values_[lo]);
    if (s < 0.0) throw NegativeStructureError(s);
    return s;
  }

private:
  double constant_value_ = 1.0;
  std::vector<double> q_grid_;
  std::vector<double> values_;
};

struct Medium {
  double n_o = 0.0;  // number density [Å^-3]
  double b = 0.0;    // coherent scattering length [Å] (converted from fm)
  double d = 0.0;    // slab thickness [Å]
  StructureFunction s = StructureFunction::constant(1.0);
};

/// b is taken in fm here; everything downstream works in Å.
inline Medium make_medium(double n_o, double b_fm, double thickness,
                          StructureFunction s = StructureFunction::constant(1.0)) {
  if (n_o < 0.0) throw std::invalid_argument("make_medium: n_o must be >= 0");
  if (thickness < 0.0) throw std::invalid_argument("make_medium: thickness must be >= 0");
  return Medium{n_o, fm_to_angstrom(b_fm), thickness, std::move(s)};
}

struct Beam {
  double wavelength = 0.0;  // [Å]
  double k0 = 0.0;          // 2π/λ [Å^-1]
};

inline Beam make_beam(double wavelength) {
  if (!(wavelength > 0.0)) throw std::invalid_argument("make_beam: wavelength must be > 0");
  return Beam{wavelength, 2.0 * M_PI / wavelength};
}

struct QuadratureConfig {
  int order = 64;
};

/// ∫dΩ S(q(θ)) = 2π ∫_{-1}^{1} S(k0 √(2(1-x))) dx, with x = cosθ so that
/// q = 2 k0 sin(θ/2) = k0 √(2(1-x)). Exact for constant S at any order.
inline double solid_angle_structure_integral(const StructureFunction& s, double k0,
                                             QuadratureConfig quad = {}) {
  if (quad.order < 2)
    throw std::invalid_argument("solid_angle_structure_integral: order must be >= 2");
  const QuadratureRule rule = gauss_legendre(quad.order);
  double acc = 0.0;
  for (int i = 0; i < quad.order; ++i) {
    const double x = rule.nodes[static_cast<std::size_t>(i)];
    const double q = k0 * std::sqrt(std::max(0.0, 2.0 * (1.0 - x)));
    acc += rule.weights[static_cast<std::size_t>(i)] * s(q);
  }
  return 2.0 * M_PI * acc;
}

inline double refractive_index(const Medium& medium, const Beam& beam) {
  return 1.0 -
         beam.wavelength * beam.wavelength / (2.0 * M_PI) * medium.b * medium.n_o;
}

inline double phase_shift(const Medium& medium, const Beam& beam) {
  return -medium.n_o * medium.b * beam.wavelength * medium.d;
}

inline double diffusion_cross_section(const Medium& medium, const Beam& beam,
                                      QuadratureConfig quad = {}) {
  return medium.b * medium.b * solid_angle_structure_integral(medium.s, beam.k0, quad);
}

/// Dimensionless attenuation of the forward intensity over the slab:
/// intensity e^{-Σ}, coherent amplitude e^{-Σ/2}.
inline double attenuation_exponent(const Medium& medium, const Beam& beam,
                                   QuadratureConfig quad = {}) {
  return medium.n_o * diffusion_cross_section(medium, beam, quad) * medium.d;
}

/// The dimensionless bracket of the optical potential,
///   n_o (b - i (b²/4π) k0 ∫dΩ S);
/// the full potential is this times 2πħ²/m. Its imaginary part equals
/// -n_o k0 σ_d / 4π with σ_d from the same quadrature.
inline std::complex<double> complex_optical_potential(const Medium& medium, const Beam& beam,
                                                      QuadratureConfig quad = {}) {
  const double integral = solid_angle_structure_integral(medium.s, beam.k0, quad);
  const double re = medium.n_o * medium.b;
  const double im =
      -medium.n_o * medium.b * medium.b / (4.0 * M_PI) * beam.k0 * integral;
  return {re, im};
}

/// Relative difference between the attenuation implied by Im(optical
/// potential) through the complex refractive index and the one from the
/// diffuse cross section directly. Algebraically zero; with different
/// quadratures it measures only their disagreement on ∫dΩ S. Defined as 0
/// when both rates vanish.
inline double optical_theorem_residual(const Medium& medium, const Beam& beam,
                                       QuadratureConfig quad_coherent,
                                       QuadratureConfig quad_incoherent) {
  const std::complex<double> bracket = complex_optical_potential(medium, beam, quad_coherent);
  // n = 1 - (λ²/2π)·bracket, amplitude ~ e^{i n k0 z}: intensity decay
  // exponent over D is 2 · Im(n) · k0 · D with Im(n) = -(λ²/2π) Im(bracket)
  const double lambda2 = beam.wavelength * beam.wavelength;
  const double coherent =
      2.0 * (-(lambda2 / (2.0 * M_PI)) * bracket.imag()) * beam.k0 * medium.d;
  const double incoherent = attenuation_exponent(medium, beam, quad_incoherent);
  const double scale = std::max(std::abs(coherent), std::abs(incoherent));
  if (scale == 0.0) return 0.0;
  return std::abs(coherent - incoherent) / scale;
}

inline double optical_theorem_residual(const Medium& medium, const Beam& beam,
                                       QuadratureConfig quad = {}) {
  return optical_theorem_residual(medium, beam, quad, quad);
}

}  // namespace cpdyn

#endif  // CPDYN_OPTICS_HPP
