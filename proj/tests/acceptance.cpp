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

// Release gate: one check per shipped guarantee, each printed as a PASS/FAIL
// line with the measured worst case. Usage:
//   cpdyn_acceptance <path-to-cpdyn-cli> <path-to-configs-dir>
// Exit code is the number of failed checks.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cpdyn/cpdyn.hpp"

namespace fs = std::filesystem;
using namespace cpdyn;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return std::string(buf);
}

// 1. Transpose map flagged NotCP at eigenvalue -1 with a witness that
//    recomputes negative; 100 random Kraus-built maps all CP.
Outcome check_cp_detection() {
  const SuperoperatorMap t = SuperoperatorMap::transpose_map(2);
  const CPVerdict verdict = is_completely_positive(t);
  bool ok = !verdict.completely_positive &&
            std::abs(verdict.min_choi_eigenvalue - (-1.0)) <= 1e-12;

  const auto witness = cp_witness(t);
  double recomputed = 0.0;
  if (witness) {
    recomputed = witness_value(t, *witness);
    ok = ok && recomputed < 0.0;
  } else {
    ok = false;
  }

  std::mt19937_64 rng(9001);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Eigen::Index d = 2 + (i % 3);
    const int count = 1 + (i % 4);
    const std::vector<Matrix> ops = (i % 2 == 0) ? random_cptp_kraus(d, count, rng)
                                                 : random_cp_kraus(d, count, rng);
    const SuperoperatorMap map = SuperoperatorMap::from_kraus(KrausSet{d, ops});
    const CPVerdict v = is_completely_positive(map, 1e-10);
    worst = std::min(worst, v.min_choi_eigenvalue);
    ok = ok && v.completely_positive && v.min_choi_eigenvalue >= -1e-10;
  }
  return {ok, "transpose eig " + fmt(verdict.min_choi_eigenvalue) + ", witness " +
                  fmt(recomputed) + ", worst random eig " + fmt(worst)};
}

// 2. fock_expectation agrees with the direct single-particle trace across 100
//    random instances under both statistics.
Outcome check_reduction_identity() {
  std::mt19937_64 rng(9002);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int modes = 1 + (i % 5);
    const Statistics st = (i % 2 == 0) ? Statistics::fermi : Statistics::bose;
    const Matrix a = random_matrix(modes, rng);
    const Matrix w = random_density(modes, rng);
    const Complex via_fock = fock_expectation({modes, st, a}, {modes, st, w});
    const Complex direct = expectation(a, make_density_matrix(w));
    worst = std::max(worst, std::abs(via_fock - direct));
  }
  return {worst <= 1e-12, "max |difference| " + fmt(worst)};
}

// 3. |Tr w(t) - 1| stays under 1e-9 over t in [0, 10] for 20 random derived
//    generators at the suggested step.
Outcome check_trace_conservation() {
  std::mt19937_64 rng(9003);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Eigen::Index d = 2 + (i % 7);
    Matrix h0 = random_hermitian(d, rng);
    h0 *= 0.5 / max_abs(h0);
    std::vector<Matrix> ls;
    for (int k = 0; k < 1 + (i % 2); ++k) {
      Matrix l = random_matrix(d, rng);
      l *= 0.5 / (max_abs(l) * std::sqrt(static_cast<double>(d)));
      ls.push_back(std::move(l));
    }
    const LindbladGenerator gen = build_generator(h0, Matrix::Zero(d, d), ls);

    EvolutionConfig cfg;
    cfg.dt = suggested_dt(gen);
    cfg.t_final = 10.0;
    cfg.monitor_every = 250;
    const Trajectory traj = evolve(gen, make_density_matrix(random_density(d, rng)), cfg);
    for (const MonitorRecord& m : traj.monitors) worst = std::max(worst, m.trace_dev);
  }
  return {worst <= 1e-9, "max trace deviation " + fmt(worst)};
}

// 4. The decomposition step yields PSD output at every tested dt, and its
//    difference from rk4 shrinks at second order under dt halving.
Outcome check_step_cp_and_order() {
  std::mt19937_64 rng(9004);
  auto random_generator = [&rng](Eigen::Index d) {
    Matrix h0 = random_hermitian(d, rng);
    h0 *= 0.5 / max_abs(h0);
    std::vector<Matrix> ls;
    for (int k = 0; k < 2; ++k) {
      Matrix l = random_matrix(d, rng);
      l *= 0.5 / max_abs(l);
      ls.push_back(std::move(l));
    }
    return build_generator(h0, Matrix::Zero(d, d), ls);
  };

  double worst_eig = 0.0;
  for (double dt : {1e-1, 1e-2, 1e-3})
    for (int i = 0; i < 10; ++i) {
      const Eigen::Index d = 2 + (i % 3);
      const LindbladGenerator gen = random_generator(d);
      const Matrix out = step_kraus(gen, random_density(d, rng), dt);
      worst_eig = std::min(worst_eig, min_hermitian_eigenvalue(out));
    }
  bool ok = worst_eig >= -1e-12;

  double worst_order = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 5; ++i) {
    const Eigen::Index d = 2 + (i % 3);
    const LindbladGenerator gen = random_generator(d);
    const Matrix w = random_density(d, rng);
    auto diff = [&](double dt) {
      return max_abs(Matrix(step_kraus(gen, w, dt) - step_rk4(gen, w, dt)));
    };
    const double coarse = diff(1e-2);
    const double fine = diff(5e-3);
    worst_order = std::min(worst_order, std::log2(coarse / fine));
  }
  ok = ok && worst_order >= 1.9;
  return {ok, "min eigenvalue " + fmt(worst_eig) + ", min observed order " +
                  fmt(worst_order)};
}

// 5. Amplitude-damping population follows e^{-gamma t} within 1e-7 absolute
//    over t in [0, 5] at dt = 1e-3/gamma.
Outcome check_analytic_decay() {
  double worst = 0.0;
  for (double gamma : {1.0, 2.5}) {
    Matrix l = Matrix::Zero(2, 2);
    l(0, 1) = std::sqrt(gamma);
    const LindbladGenerator gen =
        build_generator(Matrix::Zero(2, 2), Matrix::Zero(2, 2), {l});

    Matrix w0 = Matrix::Zero(2, 2);
    w0(1, 1) = 1.0;

    EvolutionConfig cfg;
    cfg.dt = 1e-3 / gamma;
    cfg.t_final = 5.0;
    cfg.monitor_every = 100;
    const Trajectory traj = evolve(gen, make_density_matrix(w0), cfg);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      const double expected = std::exp(-gamma * traj.times[k]);
      worst = std::max(worst, std::abs(traj.states[k](1, 1).real() - expected));
      worst = std::max(worst, std::abs(traj.states[k](0, 0).real() - (1.0 - expected)));
    }
  }
  return {worst <= 1e-7, "max |population error| " + fmt(worst)};
}

// 6. evolve(0.3) then evolve(0.5) lands on evolve(0.8) within 1e-9 at
//    dt = 1e-4 on random generators.
Outcome check_semigroup_composition() {
  std::mt19937_64 rng(9006);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const Eigen::Index d = 2 + (i % 3);
    Matrix h0 = random_hermitian(d, rng);
    h0 *= 0.5 / max_abs(h0);
    Matrix l = random_matrix(d, rng);
    l *= 0.5 / max_abs(l);
    const LindbladGenerator gen = build_generator(h0, Matrix::Zero(d, d), {l});
    const Matrix w0 = random_density(d, rng);

    auto run_to = [&](const Matrix& start, double t_final) {
      EvolutionConfig cfg;
      cfg.dt = 1e-4;
      cfg.t_final = t_final;
      cfg.monitor_every = 100000;
      return evolve(gen, make_density_matrix(start), cfg).final_state();
    };
    const Matrix direct = run_to(w0, 0.8);
    const Matrix two_leg = run_to(run_to(w0, 0.3), 0.5);
    worst = std::max(worst, max_abs(Matrix(direct - two_leg)));
  }
  return {worst <= 1e-9, "max |composition gap| " + fmt(worst)};
}

// 7. S == 1 collapses the diffusion cross section to 4 pi b^2 at every
//    quadrature order >= 2.
Outcome check_cross_section_anchor() {
  struct Case {
    double n_o, b_fm, thickness, lambda;
  };
  double worst = 0.0;
  for (const Case& c : {Case{1e-3, 5.0, 1e6, 2.0}, Case{2e-3, 3.7, 1e5, 1.5}}) {
    const Medium medium = make_medium(c.n_o, c.b_fm, c.thickness);
    const Beam beam = make_beam(c.lambda);
    const double b = fm_to_angstrom(c.b_fm);
    const double expected = 4.0 * M_PI * b * b;
    for (int order : {2, 3, 5, 8, 17, 64}) {
      const double got = diffusion_cross_section(medium, beam, QuadratureConfig{order});
      worst = std::max(worst, std::abs(got / expected - 1.0));
    }
  }
  return {worst <= 1e-12, "max relative error " + fmt(worst)};
}

// 8. The optical-theorem residual vanishes under a shared quadrature rule and
//    decays below 1e-8 under mismatched rules once the orders reach 64.
Outcome check_optical_theorem() {
  const Beam beam = make_beam(2.0);
  const Medium constant_s = make_medium(1e-3, 5.0, 1e6);

  std::vector<double> q_grid, values;
  for (int i = 0; i <= 4000; ++i) {
    const double q = 8.0 * i / 4000.0;
    q_grid.push_back(q);
    values.push_back(1.0 + 0.5 * std::exp(-q * q / 4.0));
  }
  const Medium tabulated_s =
      make_medium(1e-3, 5.0, 1e6, StructureFunction::tabulated(q_grid, values));

  double worst_shared = 0.0;
  for (int order : {8, 64}) {
    worst_shared = std::max(
        worst_shared, optical_theorem_residual(constant_s, beam, QuadratureConfig{order}));
    worst_shared = std::max(
        worst_shared, optical_theorem_residual(tabulated_s, beam, QuadratureConfig{order}));
  }
  bool ok = worst_shared <= 1e-12;

  double worst_mismatched = 0.0;
  worst_mismatched = std::max(
      worst_mismatched, optical_theorem_residual(tabulated_s, beam, QuadratureConfig{32},
                                                 QuadratureConfig{64}));
  worst_mismatched = std::max(
      worst_mismatched, optical_theorem_residual(tabulated_s, beam, QuadratureConfig{64},
                                                 QuadratureConfig{128}));
  ok = ok && worst_mismatched <= 1e-8;
  return {ok, "shared " + fmt(worst_shared) + ", mismatched at order >= 64 " +
                  fmt(worst_mismatched)};
}

// 9. Scattering cascade: forward population tracks e^{-Sigma s} and the trace
//    is conserved; interferometer phase and contrast match the closed forms.
Outcome check_scenarios() {
  const Beam beam = make_beam(2.0);

  const Medium dense = make_medium(1e-2, 100.0, 1e6);
  const double b_dense = fm_to_angstrom(100.0);
  const double sigma_dense = 4.0 * M_PI * 1e-2 * b_dense * b_dense * 1e6;
  const ScatteringScenario sc = build_scattering_generator(dense, beam, 6);

  Matrix w0 = Matrix::Zero(sc.generator.dim, sc.generator.dim);
  w0(0, 0) = 1.0;
  EvolutionConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_final = 3.0;
  cfg.monitor_every = 100;
  const Trajectory traj = evolve(sc.generator, make_density_matrix(w0), cfg);

  double worst_forward = 0.0, worst_trace = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double expected = std::exp(-sigma_dense * traj.times[k]);
    const double got = traj.states[k](sc.forward_index, sc.forward_index).real();
    worst_forward = std::max(worst_forward, std::abs(got / expected - 1.0));
    worst_trace = std::max(worst_trace, traj.monitors[k].trace_dev);
  }
  bool ok = worst_forward <= 1e-4 && worst_trace <= 1e-9;

  const Medium thin = make_medium(1e-3, 5.0, 1e6);
  const double b_thin = fm_to_angstrom(5.0);
  const double chi_hand = -1e-3 * b_thin * 2.0 * 1e6;
  const double sigma_thin = 4.0 * M_PI * 1e-3 * b_thin * b_thin * 1e6;
  const InterferometerResult r = interferometer_contrast(thin, beam);
  const double chi_err = std::abs(std::remainder(r.chi - chi_hand, 2.0 * M_PI));
  const double contrast_err = std::abs(r.contrast - std::exp(-sigma_thin / 2.0));
  ok = ok && chi_err <= 1e-6 && contrast_err <= 1e-6;

  return {ok, "forward rel " + fmt(worst_forward) + ", trace " + fmt(worst_trace) +
                  ", phase err " + fmt(chi_err) + ", contrast err " + fmt(contrast_err)};
}

// 10. Two CLI runs of the worked example with the same config and seed are
//     byte-identical and report chi = -0.1.
Outcome check_cli_determinism(const std::string& cli, const fs::path& configs_dir) {
  const fs::path config = configs_dir / "optics_worked_example.cfg";
  if (!fs::exists(config)) return {false, "missing config " + config.string()};

  auto run_once = [&](const fs::path& out) -> bool {
    std::error_code ec;
    fs::remove(out, ec);
    const std::string cmd = "\"" + cli + "\" run \"" + config.string() + "\" --seed 7 --output \"" +
                            out.string() + "\" 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) && WEXITSTATUS(rc) == 0 && fs::exists(out);
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };

  const fs::path out1 = fs::temp_directory_path() / "cpdyn_acceptance_run1.csv";
  const fs::path out2 = fs::temp_directory_path() / "cpdyn_acceptance_run2.csv";
  if (!run_once(out1) || !run_once(out2)) return {false, "cli run failed"};

  const std::string bytes1 = slurp(out1);
  const std::string bytes2 = slurp(out2);
  bool ok = !bytes1.empty() && bytes1 == bytes2;

  // pull chi out of the csv: first data row, column "chi"
  double chi = 0.0;
  bool found = false;
  {
    std::istringstream in(bytes1);
    std::string line;
    std::vector<std::string> columns;
    while (std::getline(in, line)) {
      if (line.empty() || line.rfind("# ", 0) == 0) continue;
      std::vector<std::string> cells;
      std::istringstream row(line);
      std::string cell;
      while (std::getline(row, cell, ',')) cells.push_back(cell);
      if (columns.empty()) {
        columns = cells;
        continue;
      }
      for (std::size_t c = 0; c < columns.size() && c < cells.size(); ++c)
        if (columns[c] == "chi") {
          chi = std::strtod(cells[c].c_str(), nullptr);
          found = true;
        }
      break;
    }
  }
  ok = ok && found && std::abs(chi - (-0.1)) <= 1e-12;
  return {ok, std::string(bytes1 == bytes2 ? "byte-identical" : "outputs differ") +
                  ", chi " + fmt(chi)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <cpdyn-cli-binary> <configs-dir>\n", argv[0]);
    return 64;
  }
  const std::string cli = argv[1];
  const fs::path configs_dir = argv[2];

  struct Check {
    const char* name;
    Outcome outcome;
  };
  std::vector<Check> checks;
  auto guard = [&checks](const char* name, auto&& fn) {
    try {
      checks.push_back({name, fn()});
    } catch (const std::exception& e) {
      checks.push_back({name, {false, std::string("exception: ") + e.what()}});
    }
  };

  guard("CP detection soundness", check_cp_detection);
  guard("single-particle reduction identity", check_reduction_identity);
  guard("trace conservation", check_trace_conservation);
  guard("decomposition step positivity and order", check_step_cp_and_order);
  guard("analytic decay oracle", check_analytic_decay);
  guard("semigroup composition", check_semigroup_composition);
  guard("diffusion cross-section anchor", check_cross_section_anchor);
  guard("optical-theorem balance", check_optical_theorem);
  guard("scenario consistency", check_scenarios);
  guard("cli determinism", [&] { return check_cli_determinism(cli, configs_dir); });

  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const bool ok = checks[i].outcome.ok;
    if (!ok) ++failures;
    std::printf("[%s] criterion %zu: %s (%s)\n", ok ? "PASS" : "FAIL", i + 1,
                checks[i].name, checks[i].outcome.detail.c_str());
  }
  if (failures > 0) std::printf("%d of %zu criteria failed\n", failures, checks.size());
  return failures;
}
