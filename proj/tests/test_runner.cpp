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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cpdyn/runner.hpp"

using namespace cpdyn;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path write_temp(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream out(p);
  out << content;
  return p;
}

fs::path out_path(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / name;
  fs::remove(p);
  return p;
}

// splits a rendered CSV into header comments and data rows keyed by column
struct ParsedCsv {
  std::vector<std::string> header;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

ParsedCsv parse_csv(const std::string& content) {
  ParsedCsv out;
  std::istringstream in(content);
  std::string line;
  bool have_columns = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      out.header.push_back(line.substr(2));
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (!have_columns) {
      out.columns = cells;
      have_columns = true;
    } else {
      out.rows.push_back(cells);
    }
  }
  return out;
}

double csv_value(const ParsedCsv& csv, std::size_t row, const std::string& column) {
  for (std::size_t c = 0; c < csv.columns.size(); ++c)
    if (csv.columns[c] == column) return std::strtod(csv.rows[row][c].c_str(), nullptr);
  FAIL("column not found: " << column);
  return 0.0;
}

RunConfig optics_config(const std::string& output) {
  RunConfig cfg = parse_config(
      "scenario = optics\nlambda = 2.0\nb = 5.0\nn_o = 1e-3\nD = 1e6\n");
  cfg.output = output;
  return cfg;
}

}  // namespace

TEST_CASE("the optics worked example writes chi = -0.1 in csv", "[runner]") {
  const fs::path out = out_path("cpdyn_run_optics.csv");
  const RunResult result = run(optics_config(out.string()));
  REQUIRE(result.exit_code == 0);
  REQUIRE(result.output_path == out.string());

  const ParsedCsv csv = parse_csv(slurp(out.string()));
  REQUIRE(csv.rows.size() == 1);
  REQUIRE(std::abs(csv_value(csv, 0, "chi") - (-0.1)) < 1e-12);
  REQUIRE(csv_value(csv, 0, "sigma_d") == Catch::Approx(4.0 * M_PI * 25e-10).epsilon(1e-12));
  REQUIRE(csv_value(csv, 0, "Sigma") == Catch::Approx(3.141592653589793e-5).epsilon(1e-12));
  REQUIRE(csv_value(csv, 0, "residual") < 1e-12);
  // resolved config is embedded, defaults included
  bool saw_quad = false;
  for (const std::string& h : csv.header) saw_quad |= (h == "quad_order = 64");
  REQUIRE(saw_quad);
}

TEST_CASE("identical configs produce byte-identical outputs", "[runner]") {
  const fs::path out1 = out_path("cpdyn_run_det1.csv");
  const fs::path out2 = out_path("cpdyn_run_det2.csv");
  run(optics_config(out1.string()));
  run(optics_config(out2.string()));
  REQUIRE(slurp(out1.string()) == slurp(out2.string()));
}

TEST_CASE("json output carries the config block and the rows", "[runner]") {
  const fs::path out = out_path("cpdyn_run_optics.json");
  RunConfig cfg = optics_config(out.string());
  cfg.format = OutputFormat::json;
  run(cfg);
  const ordered_json doc = ordered_json::parse(slurp(out.string()));
  REQUIRE(doc.contains("config"));
  REQUIRE(doc["config"]["scenario"] == "optics");
  REQUIRE(doc["config"]["quad_order"] == "64");
  REQUIRE(doc["results"].size() == 1);
  REQUIRE(std::abs(doc["results"][0]["chi"].get<double>() - (-0.1)) < 1e-12);
}

TEST_CASE("cp-check on an identity kraus file reports CP", "[runner]") {
  const fs::path kraus = write_temp("cpdyn_run_kraus_id.txt", "1 0\n0 1\n");
  const fs::path out = out_path("cpdyn_run_cp.json");
  RunConfig cfg = parse_config("scenario = cp-check\nformat = json\nkraus_file = " +
                               kraus.string() + "\n");
  cfg.output = out.string();
  const RunResult result = run(cfg);
  REQUIRE(result.exit_code == 0);
  const ordered_json doc = ordered_json::parse(slurp(out.string()));
  const auto& row = doc["results"][0];
  REQUIRE(row["verdict"] == "CP");
  REQUIRE(row["min_choi_eig"].get<double>() >= -1e-12);
  REQUIRE(row["completeness_residual"].get<double>() < 1e-14);
  REQUIRE(row["trace_preservation_residual"].get<double>() < 1e-14);
  REQUIRE(row["kraus_rank"] == 1);
}

TEST_CASE("cp-check on the transpose superoperator reports the witness", "[runner]") {
  // transpose in the column-stacking convention: the 4x4 commutation matrix
  const fs::path superop = write_temp("cpdyn_run_superop_t.txt",
                                      "1 0 0 0\n"
                                      "0 0 1 0\n"
                                      "0 1 0 0\n"
                                      "0 0 0 1\n");
  const fs::path out = out_path("cpdyn_run_cp_t.json");
  RunConfig cfg = parse_config("scenario = cp-check\nformat = json\nsuperop_file = " +
                               superop.string() + "\nextension_n = 2\n");
  cfg.output = out.string();
  const RunResult result = run(cfg);
  REQUIRE(result.exit_code == 0);  // a NotCP verdict is data, not a failure
  const ordered_json doc = ordered_json::parse(slurp(out.string()));
  const auto& row = doc["results"][0];
  REQUIRE(row["verdict"] == "NotCP");
  REQUIRE(std::abs(row["min_choi_eig"].get<double>() - (-1.0)) < 1e-12);
  REQUIRE(row["witness_value"].get<double>() < 0.0);
  REQUIRE(std::abs(row["witness_value"].get<double>() -
                   row["min_choi_eig"].get<double>()) < 1e-10);
  REQUIRE(row["extension_positive"] == false);
  REQUIRE(std::abs(row["extension_min_eig"].get<double>() - (-0.5)) < 1e-12);
}

TEST_CASE("evolve on operator files follows amplitude damping", "[runner]") {
  const fs::path w0 = write_temp("cpdyn_run_w0.txt", "0 0\n0 1\n");
  const fs::path ls = write_temp("cpdyn_run_ls.txt", "0 1\n0 0\n");
  const fs::path out = out_path("cpdyn_run_evolve.csv");
  RunConfig cfg = parse_config("scenario = evolve\nw0_file = " + w0.string() +
                               "\nls_file = " + ls.string() +
                               "\ndt = 1e-3\nt_final = 1.0\nmonitor_every = 100\n"
                               "write_states = true\n");
  cfg.output = out.string();
  const RunResult result = run(cfg);
  REQUIRE(result.exit_code == 0);
  const ParsedCsv csv = parse_csv(slurp(out.string()));
  REQUIRE(csv.rows.size() == 11);  // t = 0, 0.1, ..., 1.0
  const std::size_t last = csv.rows.size() - 1;
  REQUIRE(csv_value(csv, last, "t") == Catch::Approx(1.0));
  REQUIRE(csv_value(csv, last, "re_1_1") == Catch::Approx(std::exp(-1.0)).margin(1e-7));
  REQUIRE(csv_value(csv, last, "re_0_0") ==
          Catch::Approx(1.0 - std::exp(-1.0)).margin(1e-7));
  REQUIRE(csv_value(csv, last, "trace_dev") < 1e-9);
  REQUIRE(csv_value(csv, last, "min_eig") > -1e-12);
}

TEST_CASE("explicit non-conserving gamma runs to completion as data", "[runner]") {
  const fs::path w0 = write_temp("cpdyn_run_w0b.txt", "0.5 0\n0 0.5\n");
  const fs::path gamma = write_temp("cpdyn_run_gamma.txt", "0.1 0\n0 0.1\n");
  const fs::path out = out_path("cpdyn_run_leaky.csv");
  RunConfig cfg = parse_config("scenario = evolve\nw0_file = " + w0.string() +
                               "\ngamma_file = " + gamma.string() +
                               "\ngamma_mode = explicit\ndt = 1e-3\nt_final = 1.0\n"
                               "monitor_every = 1000\nwrite_states = true\n");
  cfg.output = out.string();
  const RunResult result = run(cfg);
  REQUIRE(result.exit_code == 0);  // trace loss is physics here, not a breach
  const ParsedCsv csv = parse_csv(slurp(out.string()));
  const std::size_t last = csv.rows.size() - 1;
  // dw/dt = -{Gamma, w} with Gamma = 0.1 I: w(t) = e^{-0.2 t} w(0)
  REQUIRE(csv_value(csv, last, "re_0_0") ==
          Catch::Approx(0.5 * std::exp(-0.2)).margin(1e-9));
  REQUIRE(csv_value(csv, last, "trace_dev") ==
          Catch::Approx(1.0 - std::exp(-0.2)).margin(1e-9));
}

TEST_CASE("rk4 positivity breaches exit with code 3", "[runner]") {
  const fs::path w0 = write_temp("cpdyn_run_w0c.txt", "0 0\n0 1\n");
  const fs::path ls = write_temp("cpdyn_run_lsc.txt", "0 1\n0 0\n");
  const fs::path out = out_path("cpdyn_run_breach.csv");
  RunConfig cfg = parse_config("scenario = evolve\nw0_file = " + w0.string() +
                               "\nls_file = " + ls.string() +
                               "\ndt = 3.0\nt_final = 3.0\nmonitor_every = 1\n");
  cfg.output = out.string();
  const RunResult result = run(cfg);
  REQUIRE(result.exit_code == 3);
  REQUIRE_FALSE(result.diagnostics.empty());
  REQUIRE(result.diagnostics[0].find("positivity breach") != std::string::npos);
  REQUIRE(fs::exists(out));  // results are still written

  RunConfig safe = cfg;
  safe.integrator = Integrator::kraus_step;
  safe.output = out_path("cpdyn_run_nobreach.csv").string();
  REQUIRE(run(safe).exit_code == 0);
}

TEST_CASE("interferometer rows carry measured and predicted values", "[runner]") {
  const fs::path out = out_path("cpdyn_run_ifm.csv");
  RunConfig cfg = parse_config(
      "scenario = interferometer\nlambda = 2.0\nb = 5.0\nn_o = 1e-3\nD = 1e6\n");
  cfg.output = out.string();
  REQUIRE(run(cfg).exit_code == 0);
  const ParsedCsv csv = parse_csv(slurp(out.string()));
  REQUIRE(std::abs(csv_value(csv, 0, "chi") - (-0.1)) < 1e-6);
  REQUIRE(std::abs(csv_value(csv, 0, "chi_predicted") - (-0.1)) < 1e-12);
  REQUIRE(csv_value(csv, 0, "contrast") ==
          Catch::Approx(csv_value(csv, 0, "contrast_predicted")).margin(1e-6));
}

TEST_CASE("sweeps order rows by index whatever the job count", "[runner]") {
  auto sweep_config = [](const std::string& output, int jobs) {
    RunConfig cfg = parse_config(
        "scenario = optics\nlambda = 2.0\nb = 5.0\nn_o = 1e-3\nD = 1e6\n"
        "sweep_param = D\nsweep_values = 1e5 2e5 4e5 8e5 1.6e6\n");
    cfg.output = output;
    cfg.jobs = jobs;
    return cfg;
  };
  const fs::path serial = out_path("cpdyn_run_sweep1.csv");
  const fs::path parallel = out_path("cpdyn_run_sweep3.csv");
  REQUIRE(run(sweep_config(serial.string(), 1)).exit_code == 0);
  REQUIRE(run(sweep_config(parallel.string(), 3)).exit_code == 0);

  const ParsedCsv csv = parse_csv(slurp(serial.string()));
  REQUIRE(csv.rows.size() == 5);
  REQUIRE(csv.columns[0] == "sweep_index");
  REQUIRE(csv.columns[1] == "D");
  for (std::size_t r = 0; r < 5; ++r) {
    REQUIRE(csv_value(csv, r, "sweep_index") == Catch::Approx(static_cast<double>(r)));
  }
  // chi is linear in D
  const double chi0 = csv_value(csv, 0, "chi");
  REQUIRE(csv_value(csv, 3, "chi") == Catch::Approx(8.0 * chi0).epsilon(1e-12));

  // ordering and data bytes do not depend on the worker count; only the
  // embedded `jobs` header line may differ between the two files
  auto data_of = [](const std::string& content) {
    std::istringstream in(content);
    std::string line, data;
    while (std::getline(in, line))
      if (line.rfind("# ", 0) != 0) data += line + "\n";
    return data;
  };
  REQUIRE(data_of(slurp(serial.string())) == data_of(slurp(parallel.string())));
}

TEST_CASE("sweep values must respect the swept key's domain", "[runner]") {
  RunConfig cfg = parse_config(
      "scenario = optics\nlambda = 2.0\nb = 5.0\nn_o = 1e-3\nD = 1e6\n"
      "sweep_param = lambda\nsweep_values = 1 -2\n");
  cfg.output = out_path("cpdyn_run_badsweep.csv").string();
  REQUIRE_THROWS_AS(run(cfg), DomainError);
}

TEST_CASE("malformed kraus files surface as exceptions before output", "[runner]") {
  const fs::path bad = write_temp("cpdyn_run_badkraus.txt", "1 0\n0 1\n\n1 0 0\n0 1 0\n0 0 1\n");
  RunConfig cfg = parse_config("scenario = cp-check\nkraus_file = " + bad.string() + "\n");
  const fs::path out = out_path("cpdyn_run_badkraus.csv");
  cfg.output = out.string();
  REQUIRE_THROWS_AS(run(cfg), DimensionMismatch);
  REQUIRE_FALSE(fs::exists(out));
}
