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

// Concrete master-equation models of the slab:
//
// Scattering scenario: momentum grid {forward, n_dirs diffuse directions}.
// Time is measured in traversal units s = t/t_D, which turns the physical
// rate n_o (p0/m) b² ΔΩ_i S(q_i) into the dimensionless n_o b² D ΔΩ_i S(q_i)
// (velocity × t_D = D). Each diffuse direction gets one jump operator
// L_i = √rate_i |i><0|; Γ is derived, so the total trace is conserved and the
// forward population decays as e^{-Σ s} with Σ = Σ_i rate_i = n_o σ_d D.
//
// Interferometer scenario: two path states, path 0 through the medium and
// path 1 free. The in-medium potential advances the relative phase by χ per
// traversal and the anticommutator damps the in-medium amplitude by Σ/2, so
// the coherence evolves as w_01(s) = ½ e^{iχs} e^{-Σs/2}. Γ is explicit here
// (the diffusely scattered neutron leaves the acceptance, trace is lost).

#ifndef CPDYN_SCENARIO_HPP
#define CPDYN_SCENARIO_HPP

#include <cmath>
#include <vector>

#include "cpdyn/generator.hpp"
#include "cpdyn/integrate.hpp"
#include "cpdyn/optics.hpp"

namespace cpdyn {

struct ScatteringScenario {
  int n_dirs = 0;
  int forward_index = 0;
  std::vector<double> cos_theta_nodes;    // Gauss–Legendre nodes in cosθ
  std::vector<double> solid_angles;       // ΔΩ_i = 2π w_i, Σ ΔΩ_i = 4π
  std::vector<double> q_values;           // momentum transfers [Å^-1]
  std::vector<double> rates;              // dimensionless per-direction rates
  double sigma = 0.0;                     // Σ rates = attenuation exponent
  LindbladGenerator generator;            // dimension n_dirs + 1
};

/// The diffuse directions are the Gauss–Legendre nodes of the same rule the
/// closed-form integrals use, so Σ_i rate_i reproduces attenuation_exponent
/// at equal order exactly (same sum, reassociated).
inline ScatteringScenario build_scattering_generator(const Medium& medium, const Beam& beam,
                                                     int n_dirs) {
  if (n_dirs < 1)
    throw std::invalid_argument("build_scattering_generator: n_dirs must be >= 1");

  ScatteringScenario sc;
  sc.n_dirs = n_dirs;
  const QuadratureRule rule = gauss_legendre(n_dirs);

  const Eigen::Index dim = n_dirs + 1;
  std::vector<Matrix> ls;
  ls.reserve(static_cast<std::size_t>(n_dirs));
  for (int i = 0; i < n_dirs; ++i) {
    const double x = rule.nodes[static_cast<std::size_t>(i)];
    const double w = rule.weights[static_cast<std::size_t>(i)];
    const double q = beam.k0 * std::sqrt(std::max(0.0, 2.0 * (1.0 - x)));
    const double domega = 2.0 * M_PI * w;
    const double rate =
        medium.n_o * medium.b * medium.b * medium.d * domega * medium.s(q);
    sc.cos_theta_nodes.push_back(x);
    sc.solid_angles.push_back(domega);
    sc.q_values.push_back(q);
    sc.rates.push_back(rate);
    sc.sigma += rate;
    Matrix l = Matrix::Zero(dim, dim);
    l(i + 1, 0) = std::sqrt(rate);
    ls.push_back(std::move(l));
  }

  const Matrix zero = Matrix::Zero(dim, dim);
  sc.generator = build_generator(zero, zero, ls, GammaMode::derived);
  return sc;
}

struct InterferometerResult {
  double chi = 0.0;       // arg of the final coherence
  double contrast = 0.0;  // 2 |w_01| at s = 1
  double chi_predicted = 0.0;       // -n_o b λ D
  double contrast_predicted = 0.0;  // e^{-Σ/2}
};

inline LindbladGenerator build_interferometer_generator(const Medium& medium, const Beam& beam,
                                                        QuadratureConfig quad = {}) {
  const double chi = phase_shift(medium, beam);
  const double sigma = attenuation_exponent(medium, beam, quad);
  // scaled time: e^{-i V s} with V = diag(-χ, 0) gives path 0 the phase +χs
  Matrix v = Matrix::Zero(2, 2);
  v(0, 0) = -chi;
  Matrix gamma = Matrix::Zero(2, 2);
  gamma(0, 0) = sigma / 2.0;
  return build_generator(Matrix::Zero(2, 2), v, {}, GammaMode::explicit_gamma, gamma);
}

/// Evolves the equal superposition of the two paths for one traversal and
/// reads phase and contrast off the final coherence matrix element.
inline InterferometerResult interferometer_contrast(const Medium& medium, const Beam& beam,
                                                    QuadratureConfig quad = {},
                                                    Integrator integrator = Integrator::rk4,
                                                    double dt = 1e-4) {
  const LindbladGenerator gen = build_interferometer_generator(medium, beam, quad);
  Matrix w0(2, 2);
  w0 << 0.5, 0.5, 0.5, 0.5;

  EvolutionConfig config;
  config.dt = dt;
  config.t_final = 1.0;
  config.integrator = integrator;
  config.monitor_every = 1000;

  const Trajectory traj = evolve(gen, make_density_matrix(w0), config);
  const Complex w01 = traj.final_state()(0, 1);

  InterferometerResult out;
  out.chi = std::arg(w01);
  out.contrast = 2.0 * std::abs(w01);
  out.chi_predicted = phase_shift(medium, beam);
  out.contrast_predicted = std::exp(-attenuation_exponent(medium, beam, quad) / 2.0);
  return out;
}

}  // namespace cpdyn

#endif  // CPDYN_SCENARIO_HPP
