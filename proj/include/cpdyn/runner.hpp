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

// Scenario dispatch and result rendering. Outputs are deterministic: the
// resolved config (defaults included) is embedded in every file, numbers are
// printed with 17 significant digits, sweep rows are ordered by sweep index
// regardless of worker completion order, and all randomness is seeded from
// the config. Exit codes: 0 success, 2 validation failure (thrown before any
// output), 3 numeric breach (results still written).

#ifndef CPDYN_RUNNER_HPP
#define CPDYN_RUNNER_HPP

#include <atomic>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cpdyn/choi.hpp"
#include "cpdyn/config.hpp"
#include "cpdyn/cp_check.hpp"
#include "cpdyn/density.hpp"
#include "cpdyn/generator.hpp"
#include "cpdyn/integrate.hpp"
#include "cpdyn/io.hpp"
#include "cpdyn/optics.hpp"
#include "cpdyn/scenario.hpp"
#include "cpdyn/superop.hpp"

namespace cpdyn {

using ordered_json = nlohmann::ordered_json;

struct RunResult {
  int exit_code = 0;
  std::string output_path;
  std::vector<std::string> diagnostics;
};

namespace detail {

struct PointResult {
  std::vector<ordered_json> rows;
  std::vector<std::string> diagnostics;
  bool breach = false;
};

inline Medium medium_of(const RunConfig& cfg) {
  StructureFunction s = cfg.s_table.empty() ? StructureFunction::constant(cfg.s_constant)
                                            : load_structure_table(cfg.s_table);
  return make_medium(cfg.n_o, cfg.b_fm, cfg.thickness, std::move(s));
}

inline PointResult run_optics(const RunConfig& cfg) {
  const Medium medium = medium_of(cfg);
  const Beam beam = make_beam(cfg.lambda);
  const QuadratureConfig quad{cfg.quad_order};

  ordered_json row;
  row["chi"] = phase_shift(medium, beam);
  row["n"] = refractive_index(medium, beam);
  row["sigma_d"] = diffusion_cross_section(medium, beam, quad);
  row["Sigma"] = attenuation_exponent(medium, beam, quad);
  const auto bracket = complex_optical_potential(medium, beam, quad);
  row["u_re"] = bracket.real();
  row["u_im"] = bracket.imag();
  row["residual"] = optical_theorem_residual(medium, beam, quad);
  return {{row}, {}, false};
}

inline PointResult run_interferometer(const RunConfig& cfg) {
  const Medium medium = medium_of(cfg);
  const Beam beam = make_beam(cfg.lambda);
  const QuadratureConfig quad{cfg.quad_order};
  const double dt = cfg.dt.value_or(1e-4);
  const InterferometerResult r =
      interferometer_contrast(medium, beam, quad, cfg.integrator, dt);

  ordered_json row;
  row["chi"] = r.chi;
  row["contrast"] = r.contrast;
  row["chi_predicted"] = r.chi_predicted;
  row["contrast_predicted"] = r.contrast_predicted;
  row["Sigma"] = attenuation_exponent(medium, beam, quad);
  return {{row}, {}, false};
}

inline PointResult run_cp_check(const RunConfig& cfg, std::uint64_t seed) {
  SuperoperatorMap map;
  double completeness = -1.0;
  if (!cfg.kraus_file.empty()) {
    const std::vector<Matrix> ops = load_matrix_list(cfg.kraus_file);
    const Eigen::Index d = ops.front().rows();
    for (const Matrix& m : ops)
      if (m.rows() != d || m.cols() != d)
        throw DimensionMismatch(cfg.kraus_file + ": Kraus operators must share one square dim");
    KrausSet kraus{d, ops};
    completeness = kraus.completeness_residual();
    map = SuperoperatorMap::from_kraus(kraus);
  } else {
    map = SuperoperatorMap(load_matrix(cfg.superop_file));
  }

  const CPVerdict verdict = is_completely_positive(map, cfg.tol);
  ordered_json row;
  row["verdict"] = verdict.completely_positive ? "CP" : "NotCP";
  row["min_choi_eig"] = verdict.min_choi_eigenvalue;
  row["dim"] = static_cast<long long>(map.dim());
  if (completeness >= 0.0) row["completeness_residual"] = completeness;
  row["trace_preservation_residual"] = map.trace_preservation_residual();
  if (!verdict.completely_positive) {
    const auto witness = cp_witness(map, cfg.tol);
    row["witness_value"] = witness ? witness->value : 0.0;
  } else {
    row["kraus_rank"] = static_cast<long long>(kraus_of(map, cfg.tol).operators.size());
  }
  if (cfg.extension_n >= 1) {
    const TensorExtensionReport report = tensor_extension_positive(
        map, cfg.extension_n, cfg.extension_samples, cfg.tol, seed);
    row["extension_n"] = static_cast<long long>(report.n);
    row["extension_min_eig"] = report.min_eigenvalue;
    row["extension_positive"] = report.positive;
  }
  return {{row}, {}, false};
}

inline PointResult run_evolve(const RunConfig& cfg) {
  LindbladGenerator gen;
  Matrix w0;
  if (cfg.model == EvolveModel::scattering) {
    const Medium medium = medium_of(cfg);
    const Beam beam = make_beam(cfg.lambda);
    const ScatteringScenario sc = build_scattering_generator(medium, beam, cfg.n_dirs);
    gen = sc.generator;
    w0 = Matrix::Zero(gen.dim, gen.dim);
    w0(0, 0) = 1.0;
  } else {
    w0 = load_matrix(cfg.w0_file);
    const Eigen::Index d = w0.rows();
    const Matrix h0 = cfg.h0_file.empty() ? Matrix::Zero(d, d) : load_matrix(cfg.h0_file);
    const Matrix v = cfg.v_file.empty() ? Matrix::Zero(d, d) : load_matrix(cfg.v_file);
    std::vector<Matrix> ls;
    if (!cfg.ls_file.empty()) ls = load_matrix_list(cfg.ls_file);
    if (cfg.gamma_mode == GammaMode::explicit_gamma) {
      const Matrix gamma = load_matrix(cfg.gamma_file);
      gen = build_generator(h0, v, ls, GammaMode::explicit_gamma, gamma);
    } else {
      gen = build_generator(h0, v, ls, GammaMode::derived);
    }
  }

  EvolutionConfig evo;
  evo.dt = cfg.dt.value_or(suggested_dt(gen));
  evo.t_final = cfg.t_final;
  evo.integrator = cfg.integrator;
  evo.renormalize = cfg.renormalize;
  evo.monitor_every = cfg.monitor_every;

  const Trajectory traj = evolve(gen, make_density_matrix(w0), evo);

  PointResult out;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    ordered_json row;
    row["t"] = traj.times[k];
    row["trace_dev"] = traj.monitors[k].trace_dev;
    row["min_eig"] = traj.monitors[k].min_eig;
    row["herm_residual"] = traj.monitors[k].herm_residual;
    if (cfg.write_states) {
      const Matrix& w = traj.states[k];
      for (Eigen::Index i = 0; i < w.rows(); ++i)
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
          const std::string suffix = std::to_string(i) + "_" + std::to_string(j);
          row["re_" + suffix] = w(i, j).real();
          row["im_" + suffix] = w(i, j).imag();
        }
    }
    out.rows.push_back(std::move(row));
  }
  for (const PositivityBreach& b : traj.warnings) {
    out.breach = true;
    if (out.diagnostics.size() < 8)
      out.diagnostics.push_back("positivity breach: t = " + format_double(b.time) +
                                ", min eigenvalue = " + format_double(b.min_eig));
  }
  return out;
}

inline PointResult run_point(const RunConfig& cfg, std::uint64_t seed) {
  switch (cfg.scenario) {
    case Scenario::optics: return run_optics(cfg);
    case Scenario::interferometer: return run_interferometer(cfg);
    case Scenario::cp_check: return run_cp_check(cfg, seed);
    case Scenario::evolve: return run_evolve(cfg);
  }
  throw std::logic_error("run_point: unreachable");
}

inline void apply_sweep_value(RunConfig& cfg, const std::string& param, double value) {
  if (param == "lambda") {
    if (!(value > 0.0)) throw DomainError("lambda", "> 0");
    cfg.lambda = value;
  } else if (param == "b") {
    cfg.b_fm = value;
  } else if (param == "n_o") {
    if (value < 0.0) throw DomainError("n_o", ">= 0");
    cfg.n_o = value;
  } else if (param == "D") {
    if (value < 0.0) throw DomainError("D", ">= 0");
    cfg.thickness = value;
  } else if (param == "s_constant") {
    if (value < 0.0) throw DomainError("s_constant", ">= 0");
    cfg.s_constant = value;
  } else if (param == "dt") {
    if (!(value > 0.0)) throw DomainError("dt", "> 0");
    cfg.dt = value;
  } else if (param == "t_final") {
    if (value < 0.0) throw DomainError("t_final", ">= 0");
    cfg.t_final = value;
  } else if (param == "tol") {
    if (value < 0.0) throw DomainError("tol", ">= 0");
    cfg.tol = value;
  } else {
    throw DomainError("sweep_param", "a sweepable numeric key");
  }
}

inline std::string csv_cell(const ordered_json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.get<std::string>();
}

inline std::string render_csv(const RunConfig& cfg, const std::vector<ordered_json>& rows) {
  std::string out;
  for (const auto& [key, value] : cfg.resolved) out += "# " + key + " = " + value + "\n";
  if (rows.empty()) return out;
  bool first = true;
  for (const auto& item : rows.front().items()) {
    if (!first) out += ",";
    out += item.key();
    first = false;
  }
  out += "\n";
  for (const ordered_json& row : rows) {
    first = true;
    for (const auto& item : row.items()) {
      if (!first) out += ",";
      out += csv_cell(item.value());
      first = false;
    }
    out += "\n";
  }
  return out;
}

inline std::string render_json(const RunConfig& cfg, const std::vector<ordered_json>& rows) {
  ordered_json doc;
  ordered_json config_obj;
  for (const auto& [key, value] : cfg.resolved) config_obj[key] = value;
  doc["config"] = std::move(config_obj);
  doc["results"] = rows;
  return doc.dump(2) + "\n";
}

}  // namespace detail

/// Executes the configured scenario (sweeping if requested), writes the
/// output file atomically, and reports diagnostics plus the exit code.
inline RunResult run(const RunConfig& cfg) {
  std::vector<RunConfig> points;
  if (cfg.sweep) {
    for (double value : cfg.sweep->values) {
      RunConfig point = cfg;
      detail::apply_sweep_value(point, cfg.sweep->param, value);
      points.push_back(std::move(point));
    }
  } else {
    points.push_back(cfg);
  }

  std::vector<detail::PointResult> results(points.size());
  auto work = [&](std::size_t index) {
    results[index] = detail::run_point(points[index], cfg.seed + index);
  };

  const int workers = std::min<int>(cfg.jobs, static_cast<int>(points.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < points.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&, t]() {
        try {
          for (std::size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1))
            work(i);
        } catch (...) {
          errors[static_cast<std::size_t>(t)] = std::current_exception();
        }
      });
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::vector<ordered_json> rows;
  RunResult out;
  for (std::size_t i = 0; i < results.size(); ++i) {
    for (ordered_json& row : results[i].rows) {
      if (cfg.sweep) {
        ordered_json tagged;
        tagged["sweep_index"] = static_cast<long long>(i);
        tagged[cfg.sweep->param] = cfg.sweep->values[i];
        for (auto& item : row.items()) tagged[item.key()] = std::move(item.value());
        rows.push_back(std::move(tagged));
      } else {
        rows.push_back(std::move(row));
      }
    }
    for (std::string& d : results[i].diagnostics) {
      if (cfg.sweep) d = "sweep " + std::to_string(i) + ": " + d;
      out.diagnostics.push_back(std::move(d));
    }
    if (results[i].breach) out.exit_code = 3;
  }

  out.output_path = cfg.output.empty()
                        ? (cfg.format == OutputFormat::csv ? "out.csv" : "out.json")
                        : cfg.output;
  const std::string content = cfg.format == OutputFormat::csv
                                  ? detail::render_csv(cfg, rows)
                                  : detail::render_json(cfg, rows);
  atomic_write(out.output_path, content);
  return out;
}

}  // namespace cpdyn

#endif  // CPDYN_RUNNER_HPP
