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

// Command-line entry point:
//   cpdyn run <config> [--output PATH] [--format csv|json] [--jobs N] [--seed S]
//   cpdyn validate <config>
// Exit codes: 0 success, 2 config/input validation failure, 3 numeric breach
// (output file still written). Results go only to the output file;
// diagnostics go to stderr.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "cpdyn/config.hpp"
#include "cpdyn/runner.hpp"

namespace {

struct LoadedConfig {
  cpdyn::RunConfig config;
};

std::optional<LoadedConfig> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open config file: " << path << "\n";
    return std::nullopt;
  }
  std::ostringstream text;
  text << in.rdbuf();
  const std::string base_dir = std::filesystem::path(path).parent_path().string();
  try {
    return LoadedConfig{cpdyn::parse_config(text.str(), base_dir)};
  } catch (const std::exception& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    return std::nullopt;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"completely positive dynamics toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output;
  std::string format;
  int jobs = 0;
  std::int64_t seed = -1;

  CLI::App* run_cmd = app.add_subcommand("run", "execute a scenario config");
  run_cmd->add_option("config", config_path, "config file path")->required();
  run_cmd->add_option("--output", output, "output file path (overrides config)");
  run_cmd->add_option("--format", format, "output format (overrides config)")
      ->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_option("--jobs", jobs, "sweep worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", seed, "seed (overrides config)")
      ->check(CLI::NonNegativeNumber);

  CLI::App* validate_cmd = app.add_subcommand("validate", "parse and validate a config");
  validate_cmd->add_option("config", config_path, "config file path")->required();

  CLI11_PARSE(app, argc, argv);

  auto loaded = load_config(config_path);
  if (!loaded) return 2;
  cpdyn::RunConfig& cfg = loaded->config;

  if (validate_cmd->parsed()) {
    std::cout << "valid\n";
    return 0;
  }

  auto update_resolved = [&cfg](const std::string& key, const std::string& value) {
    for (auto& [k, v] : cfg.resolved)
      if (k == key) v = value;
  };
  if (!output.empty()) cfg.output = output;
  if (!format.empty()) {
    cfg.format = format == "csv" ? cpdyn::OutputFormat::csv : cpdyn::OutputFormat::json;
    update_resolved("format", format);
  }
  if (jobs > 0) {
    cfg.jobs = jobs;
    update_resolved("jobs", std::to_string(jobs));
  }
  if (seed >= 0) {
    cfg.seed = static_cast<std::uint64_t>(seed);
    update_resolved("seed", std::to_string(seed));
  }

  try {
    const cpdyn::RunResult result = cpdyn::run(cfg);
    for (const std::string& d : result.diagnostics) std::cerr << "warning: " << d << "\n";
    std::cerr << "wrote " << result.output_path << "\n";
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
