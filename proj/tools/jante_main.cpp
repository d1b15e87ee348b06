// Copyright 2026 The Jante Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Talks to the library through the C interface only.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "jante/jante.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int exit_code(jante_status st) {
  switch (st) {
    case JANTE_OK: return kExitPass;
    case JANTE_ERR_VERIFY_FAILED: return kExitVerifyFailed;
    case JANTE_ERR_INVALID_ARGUMENT:
    case JANTE_ERR_DIMENSION_MISMATCH:
    case JANTE_ERR_DEGENERATE_CONFIGURATION:
    case JANTE_ERR_POINT_NOT_IN_KEEP:
    case JANTE_ERR_POINT_OUTSIDE_BODY:
    case JANTE_ERR_UNBOUNDED_BODY:
    case JANTE_ERR_CONFIG:
      return kExitConfig;
    default:
      return kExitRuntime;
  }
}

// Library messages already start with the error name.
void report_error() { std::cerr << "error: " << jante_last_error() << "\n"; }

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> runs;
  std::optional<std::string> out;
  std::size_t workers = 0;
};

int run(jante_command command, const Options& o) {
  jante_run_config* cfg = nullptr;
  jante_status st = jante_run_config_load(o.config.c_str(), &cfg);
  if (st != JANTE_OK) {
    report_error();
    return kExitConfig;
  }
  if (o.seed) st = jante_run_config_set_seed(cfg, *o.seed);
  if (st == JANTE_OK && o.runs) st = jante_run_config_set_runs(cfg, *o.runs);
  if (st == JANTE_OK && o.out) st = jante_run_config_set_output_dir(cfg, o.out->c_str());
  if (st != JANTE_OK) {
    report_error();
    jante_run_config_free(cfg);
    return kExitConfig;
  }
  char* report = nullptr;
  st = jante_run_command(command, cfg, o.workers, &report);
  if (report != nullptr) {
    std::cout << report << "\n";
    jante_string_free(report);
  }
  if (st != JANTE_OK && st != JANTE_ERR_VERIFY_FAILED) report_error();
  jante_run_config_free(cfg);
  return exit_code(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification tools for the Jante process"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(jante_version()));

  Options opts;
  std::optional<jante_command> chosen;
  const struct {
    const char* name;
    const char* help;
    jante_command command;
  } commands[] = {
      {"simulate", "Run one trajectory; writes trajectory.csv and summary.json", JANTE_CMD_SIMULATE},
      {"ensemble", "Run n_runs trajectories; writes ensemble.csv and reports", JANTE_CMD_ENSEMBLE},
      {"verify", "Run an ensemble and check the one-sided bounds", JANTE_CMD_VERIFY},
      {"keepmap", "Classify a planar grid by removal index; writes keepmap.csv", JANTE_CMD_KEEPMAP},
      {"constants", "Print the theory constants as JSON", JANTE_CMD_CONSTANTS},
      {"exodus", "Run until every initial point is gone; writes exodus.json", JANTE_CMD_EXODUS},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", opts.config, "Run configuration (JSON)")->required();
    sub->add_option("--seed", opts.seed, "Master seed override");
    sub->add_option("--runs", opts.runs, "Number of runs override");
    sub->add_option("--out", opts.out, "Output directory override");
    sub->add_option("--workers", opts.workers, "Worker threads (0 = all cores)");
    const jante_command command = c.command;
    sub->callback([&chosen, command] { chosen = command; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  return run(*chosen, opts);
}
