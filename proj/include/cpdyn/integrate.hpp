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

// Time stepping for the master equation. Two integrators:
//   kraus_step: first order, completely positive for every dt by
//     construction: w' = M0 w M0† + dt Σ L w L† with
//     M0 = 1 - i dt (H0+V) - dt Gamma; trace error O(dt²).
//   rk4: classical fourth order on the right-hand side, symmetrized after
//     each step; positivity only asymptotic, hence the breach monitor.

#ifndef CPDYN_INTEGRATE_HPP
#define CPDYN_INTEGRATE_HPP

#include <cmath>
#include <string>
#include <vector>

#include "cpdyn/density.hpp"
#include "cpdyn/generator.hpp"
#include "cpdyn/matrix.hpp"

namespace cpdyn {

enum class Integrator { rk4, kraus_step };

struct EvolutionConfig {
  double dt = 1e-3;
  double t_final = 1.0;
  Integrator integrator = Integrator::rk4;
  bool renormalize = false;
  int monitor_every = 1;
};

struct MonitorRecord {
  double trace_dev = 0.0;      // |Tr w - 1|
  double min_eig = 0.0;        // smallest eigenvalue of the hermitized state
  double herm_residual = 0.0;  // ||w - w†||_max
};

/// Warning record, not an exception: integration continues.
struct PositivityBreach {
  double time = 0.0;
  double min_eig = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Matrix> states;  // raw evolved matrices; monitors carry the residuals
  std::vector<MonitorRecord> monitors;
  std::vector<PositivityBreach> warnings;

  const Matrix& final_state() const { return states.back(); }
};

inline Matrix step_kraus(const LindbladGenerator& gen, const Matrix& w, double dt,
                         bool renormalize = false) {
  if (!(dt > 0.0)) throw DimensionMismatch("step_kraus: dt must be positive");
  const Matrix m0 = Matrix::Identity(gen.dim, gen.dim) -
                    Complex(0.0, dt) * (gen.h0 + gen.v) - dt * gen.gamma;
  Matrix out = m0 * w * m0.adjoint();
  for (const Matrix& l : gen.ls) out += dt * (l * w * l.adjoint());
  if (renormalize) out /= out.trace().real();
  return out;
}

inline Matrix step_rk4(const LindbladGenerator& gen, const Matrix& w, double dt) {
  if (!(dt > 0.0)) throw DimensionMismatch("step_rk4: dt must be positive");
  const Matrix k1 = rhs(gen, w);
  const Matrix k2 = rhs(gen, Matrix(w + 0.5 * dt * k1));
  const Matrix k3 = rhs(gen, Matrix(w + 0.5 * dt * k2));
  const Matrix k4 = rhs(gen, Matrix(w + dt * k3));
  return hermitize(w + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

inline double purity(const Matrix& w) { return (w * w).trace().real(); }

inline MonitorRecord monitor_of(const Matrix& w) {
  MonitorRecord rec;
  rec.trace_dev = std::abs(w.trace() - Complex(1.0));
  rec.min_eig = min_hermitian_eigenvalue(w);
  rec.herm_residual = hermiticity_residual(w);
  return rec;
}

/// Steps from t = 0 to t_final, sampling state and monitors every
/// monitor_every steps and always at the endpoint. A trailing partial step
/// covers any remainder of t_final not divisible by dt. Positivity breaches
/// (min eigenvalue < -1e-8) are recorded as warnings under rk4; the Kraus
/// step cannot produce them.
inline Trajectory evolve(const LindbladGenerator& gen, const DensityMatrix& w0,
                         const EvolutionConfig& config) {
  if (!(config.dt > 0.0)) throw DimensionMismatch("evolve: dt must be positive");
  if (config.t_final < 0.0) throw DimensionMismatch("evolve: t_final must be >= 0");
  if (config.t_final > 0.0 && config.dt > config.t_final + 1e-15)
    throw DimensionMismatch("evolve: dt must not exceed t_final");
  if (config.monitor_every < 1)
    throw DimensionMismatch("evolve: monitor_every must be >= 1");
  if (w0.dim() != gen.dim) throw DimensionMismatch("evolve: state dimension mismatch");

  constexpr double breach_tol = -1e-8;

  Trajectory traj;
  Matrix w = w0.matrix();
  double t = 0.0;

  auto sample = [&](double time, const Matrix& state) {
    traj.times.push_back(time);
    traj.states.push_back(state);
    traj.monitors.push_back(monitor_of(state));
    if (config.integrator == Integrator::rk4 && traj.monitors.back().min_eig < breach_tol)
      traj.warnings.push_back({time, traj.monitors.back().min_eig});
  };

  sample(0.0, w);
  if (config.t_final == 0.0) return traj;

  const auto n_full = static_cast<long long>(std::floor(config.t_final / config.dt + 1e-9));
  const double remainder = config.t_final - static_cast<double>(n_full) * config.dt;
  const bool has_tail = remainder > 1e-12 * std::max(1.0, config.t_final);

  auto advance = [&](double dt) {
    if (config.integrator == Integrator::kraus_step)
      w = step_kraus(gen, w, dt, config.renormalize);
    else {
      w = step_rk4(gen, w, dt);
      if (config.renormalize) w /= w.trace().real();
    }
  };

  for (long long step = 1; step <= n_full; ++step) {
    advance(config.dt);
    t = static_cast<double>(step) * config.dt;
    const bool is_last = step == n_full && !has_tail;
    if (step % config.monitor_every == 0 || is_last) sample(t, w);
  }
  if (has_tail) {
    advance(remainder);
    sample(config.t_final, w);
  }
  return traj;
}

}  // namespace cpdyn

#endif  // CPDYN_INTEGRATE_HPP
