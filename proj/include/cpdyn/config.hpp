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

// Run configuration: flat `key = value` lines with optional cosmetic
// `[section]` headers and '#' comments. Keys are globally unique; sections
// carry no meaning, so a sectionless file parses identically. Every
// diagnostic names the key (and line) at fault; near-miss keys get a
// nearest-neighbor suggestion.

#ifndef CPDYN_CONFIG_HPP
#define CPDYN_CONFIG_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cpdyn/generator.hpp"
#include "cpdyn/integrate.hpp"

namespace cpdyn {

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

class UnknownKeyError : public std::runtime_error {
public:
  UnknownKeyError(const std::string& key, const std::string& suggestion)
      : std::runtime_error("unknown key '" + key + "'" +
                           (suggestion.empty() ? std::string()
                                               : " (did you mean '" + suggestion + "'?)")),
        key_(key),
        suggestion_(suggestion) {}
  const std::string& key() const { return key_; }
  const std::string& suggestion() const { return suggestion_; }

private:
  std::string key_;
  std::string suggestion_;
};

class DomainError : public std::runtime_error {
public:
  DomainError(const std::string& key, const std::string& constraint)
      : std::runtime_error("key '" + key + "': must satisfy " + constraint),
        key_(key),
        constraint_(constraint) {}
  const std::string& key() const { return key_; }
  const std::string& constraint() const { return constraint_; }

private:
  std::string key_;
  std::string constraint_;
};

enum class Scenario { cp_check, evolve, optics, interferometer };
enum class OutputFormat { csv, json };
enum class EvolveModel { operators, scattering };

struct SweepSpec {
  std::string param;
  std::vector<double> values;
};

struct RunConfig {
  Scenario scenario = Scenario::optics;

  std::string output;  // empty: derived from format at run time
  OutputFormat format = OutputFormat::csv;
  std::uint64_t seed = 0;
  int jobs = 1;

  // slab + beam (optics, interferometer, scattering model)
  double lambda = 0.0;  // [Å]
  double b_fm = 0.0;    // [fm]
  double n_o = 0.0;     // [Å^-3]
  double thickness = 0.0;  // key `D`, [Å]
  double s_constant = 1.0;
  std::string s_table;  // path, resolved against the config directory
  int quad_order = 64;
  int n_dirs = 16;

  // evolve
  EvolveModel model = EvolveModel::operators;
  std::string h0_file, v_file, gamma_file, ls_file, w0_file;
  GammaMode gamma_mode = GammaMode::derived;
  std::optional<double> dt;  // absent: suggested_dt of the built generator
  double t_final = 1.0;
  Integrator integrator = Integrator::rk4;
  bool renormalize = false;
  int monitor_every = 10;
  bool write_states = false;

  // cp-check
  std::string kraus_file, superop_file;
  double tol = 1e-10;
  int extension_n = 0;  // 0: skip the tensor-extension probe
  int extension_samples = 10;

  std::optional<SweepSpec> sweep;

  /// Every key relevant to the scenario with its final (defaulted) value, in
  /// schema order; embedded verbatim in output headers.
  std::vector<std::pair<std::string, std::string>> resolved;
};

namespace detail {

inline const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "scenario",    "output",      "format",       "seed",
      "jobs",        "lambda",      "b",            "n_o",
      "D",           "s_constant",  "s_table",      "quad_order",
      "n_dirs",      "model",       "h0_file",      "v_file",
      "gamma_file",  "ls_file",     "w0_file",      "gamma_mode",
      "dt",          "t_final",     "integrator",   "renormalize",
      "monitor_every", "write_states", "kraus_file", "superop_file",
      "tol",         "extension_n", "extension_samples", "sweep_param",
      "sweep_values"};
  return keys;
}

inline std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline std::string suggest_key(const std::string& key) {
  std::string best;
  std::size_t best_dist = 3;  // suggest only within edit distance 2
  for (const std::string& cand : known_keys()) {
    const std::size_t d = edit_distance(key, cand);
    if (d < best_dist) {
      best_dist = d;
      best = cand;
    }
  }
  return best;
}

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

struct RawEntry {
  std::string value;
  std::size_t line = 0;
};

inline double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError(key, "a real number");
  }
  if (used != text.size()) throw DomainError(key, "a real number");
  return v;
}

inline long long parse_int(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw DomainError(key, "an integer");
  }
  if (used != text.size()) throw DomainError(key, "an integer");
  return v;
}

inline bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw DomainError(key, "'true' or 'false'");
}

}  // namespace detail

/// Parses and fully validates config text. Relative paths in the config are
/// resolved against `base_dir` (the config file's directory) and must exist.
inline RunConfig parse_config(const std::string& text, const std::string& base_dir = "") {
  namespace fs = std::filesystem;

  std::map<std::string, detail::RawEntry> raw;
  {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      const std::string stripped = detail::trim(line);
      if (stripped.empty()) continue;
      if (stripped.front() == '[') {
        if (stripped.back() != ']' || stripped.size() < 3)
          throw ParseError(lineno, "malformed section header");
        continue;  // sections are cosmetic
      }
      const std::size_t eq = stripped.find('=');
      if (eq == std::string::npos) throw ParseError(lineno, "expected 'key = value'");
      const std::string key = detail::trim(stripped.substr(0, eq));
      const std::string value = detail::trim(stripped.substr(eq + 1));
      if (key.empty()) throw ParseError(lineno, "empty key");
      if (value.empty()) throw ParseError(lineno, "empty value for key '" + key + "'");
      const auto& keys = detail::known_keys();
      if (std::find(keys.begin(), keys.end(), key) == keys.end())
        throw UnknownKeyError(key, detail::suggest_key(key));
      if (raw.count(key)) throw ParseError(lineno, "duplicate key '" + key + "'");
      raw[key] = {value, lineno};
    }
  }

  auto has = [&](const std::string& key) { return raw.count(key) != 0; };
  auto get = [&](const std::string& key) { return raw.at(key).value; };
  auto resolve_path = [&](const std::string& key) {
    fs::path p(get(key));
    if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
    if (!fs::exists(p)) throw DomainError(key, "a path to an existing file");
    return p.string();
  };

  RunConfig cfg;

  if (!has("scenario")) throw DomainError("scenario", "present (one of cp-check, evolve, optics, interferometer)");
  {
    const std::string s = get("scenario");
    if (s == "cp-check") cfg.scenario = Scenario::cp_check;
    else if (s == "evolve") cfg.scenario = Scenario::evolve;
    else if (s == "optics") cfg.scenario = Scenario::optics;
    else if (s == "interferometer") cfg.scenario = Scenario::interferometer;
    else throw DomainError("scenario", "one of cp-check, evolve, optics, interferometer");
  }

  if (has("format")) {
    const std::string f = get("format");
    if (f == "csv") cfg.format = OutputFormat::csv;
    else if (f == "json") cfg.format = OutputFormat::json;
    else throw DomainError("format", "'csv' or 'json'");
  }
  if (has("output")) cfg.output = get("output");
  if (has("seed")) {
    const long long s = detail::parse_int("seed", get("seed"));
    if (s < 0) throw DomainError("seed", ">= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (has("jobs")) {
    const long long j = detail::parse_int("jobs", get("jobs"));
    if (j < 1) throw DomainError("jobs", ">= 1");
    cfg.jobs = static_cast<int>(j);
  }

  const bool needs_slab = cfg.scenario == Scenario::optics ||
                          cfg.scenario == Scenario::interferometer ||
                          (cfg.scenario == Scenario::evolve && has("model") &&
                           get("model") == "scattering");
  if (has("lambda")) {
    cfg.lambda = detail::parse_double("lambda", get("lambda"));
    if (!(cfg.lambda > 0.0)) throw DomainError("lambda", "> 0");
  } else if (needs_slab) {
    throw DomainError("lambda", "present for this scenario");
  }
  if (has("b")) cfg.b_fm = detail::parse_double("b", get("b"));
  else if (needs_slab) throw DomainError("b", "present for this scenario");
  if (has("n_o")) {
    cfg.n_o = detail::parse_double("n_o", get("n_o"));
    if (cfg.n_o < 0.0) throw DomainError("n_o", ">= 0");
  } else if (needs_slab) {
    throw DomainError("n_o", "present for this scenario");
  }
  if (has("D")) {
    cfg.thickness = detail::parse_double("D", get("D"));
    if (cfg.thickness < 0.0) throw DomainError("D", ">= 0");
  } else if (needs_slab) {
    throw DomainError("D", "present for this scenario");
  }
  if (has("s_constant")) {
    cfg.s_constant = detail::parse_double("s_constant", get("s_constant"));
    if (cfg.s_constant < 0.0) throw DomainError("s_constant", ">= 0");
  }
  if (has("s_table")) {
    if (has("s_constant"))
      throw DomainError("s_table", "not combined with s_constant");
    cfg.s_table = resolve_path("s_table");
  }
  if (has("quad_order")) {
    const long long q = detail::parse_int("quad_order", get("quad_order"));
    if (q < 2) throw DomainError("quad_order", ">= 2");
    cfg.quad_order = static_cast<int>(q);
  }
  if (has("n_dirs")) {
    const long long n = detail::parse_int("n_dirs", get("n_dirs"));
    if (n < 1) throw DomainError("n_dirs", ">= 1");
    cfg.n_dirs = static_cast<int>(n);
  }

  if (has("model")) {
    const std::string m = get("model");
    if (m == "operators") cfg.model = EvolveModel::operators;
    else if (m == "scattering") cfg.model = EvolveModel::scattering;
    else throw DomainError("model", "'operators' or 'scattering'");
  }
  if (has("h0_file")) cfg.h0_file = resolve_path("h0_file");
  if (has("v_file")) cfg.v_file = resolve_path("v_file");
  if (has("gamma_file")) cfg.gamma_file = resolve_path("gamma_file");
  if (has("ls_file")) cfg.ls_file = resolve_path("ls_file");
  if (has("w0_file")) cfg.w0_file = resolve_path("w0_file");
  if (has("gamma_mode")) {
    const std::string g = get("gamma_mode");
    if (g == "derived") cfg.gamma_mode = GammaMode::derived;
    else if (g == "explicit") cfg.gamma_mode = GammaMode::explicit_gamma;
    else throw DomainError("gamma_mode", "'derived' or 'explicit'");
  }
  if (cfg.gamma_mode == GammaMode::explicit_gamma && cfg.gamma_file.empty() &&
      cfg.scenario == Scenario::evolve && cfg.model == EvolveModel::operators)
    throw DomainError("gamma_file", "present when gamma_mode = explicit");
  if (has("dt")) {
    const double dt = detail::parse_double("dt", get("dt"));
    if (!(dt > 0.0)) throw DomainError("dt", "> 0");
    cfg.dt = dt;
  }
  if (has("t_final")) {
    cfg.t_final = detail::parse_double("t_final", get("t_final"));
    if (cfg.t_final < 0.0) throw DomainError("t_final", ">= 0");
  }
  if (has("integrator")) {
    const std::string i = get("integrator");
    if (i == "rk4") cfg.integrator = Integrator::rk4;
    else if (i == "kraus_step") cfg.integrator = Integrator::kraus_step;
    else throw DomainError("integrator", "'rk4' or 'kraus_step'");
  }
  if (has("renormalize")) cfg.renormalize = detail::parse_bool("renormalize", get("renormalize"));
  if (has("monitor_every")) {
    const long long m = detail::parse_int("monitor_every", get("monitor_every"));
    if (m < 1) throw DomainError("monitor_every", ">= 1");
    cfg.monitor_every = static_cast<int>(m);
  }
  if (has("write_states")) cfg.write_states = detail::parse_bool("write_states", get("write_states"));

  if (has("kraus_file")) cfg.kraus_file = resolve_path("kraus_file");
  if (has("superop_file")) cfg.superop_file = resolve_path("superop_file");
  if (has("tol")) {
    cfg.tol = detail::parse_double("tol", get("tol"));
    if (cfg.tol < 0.0) throw DomainError("tol", ">= 0");
  }
  if (has("extension_n")) {
    const long long n = detail::parse_int("extension_n", get("extension_n"));
    if (n < 0) throw DomainError("extension_n", ">= 0 (0 skips the probe)");
    cfg.extension_n = static_cast<int>(n);
  }
  if (has("extension_samples")) {
    const long long n = detail::parse_int("extension_samples", get("extension_samples"));
    if (n < 0) throw DomainError("extension_samples", ">= 0");
    cfg.extension_samples = static_cast<int>(n);
  }

  if (cfg.scenario == Scenario::cp_check) {
    if (cfg.kraus_file.empty() == cfg.superop_file.empty())
      throw DomainError("kraus_file", "exactly one of kraus_file, superop_file");
  }
  if (cfg.scenario == Scenario::evolve && cfg.model == EvolveModel::operators &&
      cfg.w0_file.empty())
    throw DomainError("w0_file", "present for the operators model");

  if (has("sweep_param") != has("sweep_values"))
    throw DomainError("sweep_param", "paired with sweep_values");
  if (has("sweep_param")) {
    static const std::vector<std::string> sweepable = {
        "lambda", "b", "n_o", "D", "s_constant", "dt", "t_final", "tol"};
    SweepSpec sweep;
    sweep.param = get("sweep_param");
    if (std::find(sweepable.begin(), sweepable.end(), sweep.param) == sweepable.end())
      throw DomainError("sweep_param", "one of lambda, b, n_o, D, s_constant, dt, t_final, tol");
    std::string list = get("sweep_values");
    std::replace(list.begin(), list.end(), ',', ' ');
    std::istringstream in(list);
    std::string tok;
    while (in >> tok) sweep.values.push_back(detail::parse_double("sweep_values", tok));
    if (sweep.values.empty()) throw DomainError("sweep_values", "at least one value");
    cfg.sweep = std::move(sweep);
  }

  // resolved view: scenario-relevant keys with final values, schema order
  auto put = [&](const std::string& key, const std::string& value) {
    cfg.resolved.emplace_back(key, value);
  };
  auto fmt_d = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  const char* scen = cfg.scenario == Scenario::cp_check ? "cp-check"
                     : cfg.scenario == Scenario::evolve ? "evolve"
                     : cfg.scenario == Scenario::optics ? "optics"
                                                        : "interferometer";
  put("scenario", scen);
  put("format", cfg.format == OutputFormat::csv ? "csv" : "json");
  put("seed", std::to_string(cfg.seed));
  put("jobs", std::to_string(cfg.jobs));
  if (needs_slab || cfg.scenario == Scenario::optics ||
      cfg.scenario == Scenario::interferometer) {
    put("lambda", fmt_d(cfg.lambda));
    put("b", fmt_d(cfg.b_fm));
    put("n_o", fmt_d(cfg.n_o));
    put("D", fmt_d(cfg.thickness));
    if (cfg.s_table.empty()) put("s_constant", fmt_d(cfg.s_constant));
    else put("s_table", cfg.s_table);
    put("quad_order", std::to_string(cfg.quad_order));
  }
  if (cfg.scenario == Scenario::evolve) {
    put("model", cfg.model == EvolveModel::operators ? "operators" : "scattering");
    if (cfg.model == EvolveModel::operators) {
      if (!cfg.h0_file.empty()) put("h0_file", cfg.h0_file);
      if (!cfg.v_file.empty()) put("v_file", cfg.v_file);
      if (!cfg.gamma_file.empty()) put("gamma_file", cfg.gamma_file);
      if (!cfg.ls_file.empty()) put("ls_file", cfg.ls_file);
      put("w0_file", cfg.w0_file);
      put("gamma_mode", cfg.gamma_mode == GammaMode::derived ? "derived" : "explicit");
    } else {
      put("n_dirs", std::to_string(cfg.n_dirs));
    }
    if (cfg.dt) put("dt", fmt_d(*cfg.dt));
    else put("dt", "auto");
    put("t_final", fmt_d(cfg.t_final));
    put("integrator", cfg.integrator == Integrator::rk4 ? "rk4" : "kraus_step");
    put("renormalize", cfg.renormalize ? "true" : "false");
    put("monitor_every", std::to_string(cfg.monitor_every));
    put("write_states", cfg.write_states ? "true" : "false");
  }
  if (cfg.scenario == Scenario::interferometer) {
    put("dt", cfg.dt ? fmt_d(*cfg.dt) : std::string("0.0001"));
    put("integrator", cfg.integrator == Integrator::rk4 ? "rk4" : "kraus_step");
  }
  if (cfg.scenario == Scenario::cp_check) {
    if (!cfg.kraus_file.empty()) put("kraus_file", cfg.kraus_file);
    if (!cfg.superop_file.empty()) put("superop_file", cfg.superop_file);
    put("tol", fmt_d(cfg.tol));
    put("extension_n", std::to_string(cfg.extension_n));
    put("extension_samples", std::to_string(cfg.extension_samples));
  }
  if (cfg.sweep) {
    put("sweep_param", cfg.sweep->param);
    std::string vals;
    for (std::size_t i = 0; i < cfg.sweep->values.size(); ++i) {
      if (i) vals += " ";
      vals += fmt_d(cfg.sweep->values[i]);
    }
    put("sweep_values", vals);
  }

  return cfg;
}

}  // namespace cpdyn

#endif  // CPDYN_CONFIG_HPP
