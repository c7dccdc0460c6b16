// Copyright 2026 The mfglq Authors
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

// Command-line front end over the C API.
//
//   mfglq <solve|chaos|trajectories|nash-check|simulate> --config run.json
//         [--seed S] [--n-steps N] [--out DIR]

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mfglq/mfglq.h"

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> n_steps;
  std::optional<std::string> out;
};

int Report(mfglq_status status) {
  if (status == MFGLQ_OK) return 0;
  std::fprintf(stderr, "error (%s): %s\n", mfglq_status_string(status), mfglq_last_error());
  return static_cast<int>(status);
}

int Run(const Options& opts, mfglq_command command) {
  mfglq_config* config = nullptr;
  if (mfglq_status st = mfglq_config_load(opts.config.c_str(), &config); st != MFGLQ_OK) {
    return Report(st);
  }
  mfglq_status st = MFGLQ_OK;
  if (opts.seed) st = mfglq_config_set_seed(config, *opts.seed);
  if (st == MFGLQ_OK && opts.n_steps) st = mfglq_config_set_n_steps(config, *opts.n_steps);
  if (st == MFGLQ_OK && opts.out) st = mfglq_config_set_output(config, opts.out->c_str());
  if (st == MFGLQ_OK) {
    st = mfglq_run(config, command);
    if (const char* w = mfglq_last_warnings(); st == MFGLQ_OK && *w) {
      std::fprintf(stderr, "warning: %s", w);
    }
  }
  mfglq_config_destroy(config);
  return Report(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Major/minor linear-quadratic mean field game solver"};
  app.set_version_flag("--version", mfglq_version());
  app.require_subcommand(1);

  Options opts;
  const std::pair<const char*, mfglq_command> commands[] = {
      {"solve", MFGLQ_CMD_SOLVE},
      {"chaos", MFGLQ_CMD_CHAOS},
      {"trajectories", MFGLQ_CMD_TRAJECTORIES},
      {"nash-check", MFGLQ_CMD_NASH_CHECK},
      {"simulate", MFGLQ_CMD_SIMULATE},
  };
  const char* help[] = {
      "Solve for the equilibrium; writes gains.json, riccati.csv, diagnostics.json",
      "Conditional correlations across flock sizes; writes chaos_<N>.csv, summary.csv",
      "Leader/follower trajectories per panel; writes traj_<panel>.csv, metrics.json",
      "Certify the equilibrium by gain perturbations; writes nash_report.json",
      "Simulate the finite game; writes paths.csv",
  };
  std::optional<mfglq_command> chosen;
  int i = 0;
  for (const auto& [name, command] : commands) {
    CLI::App* sub = app.add_subcommand(name, help[i++]);
    sub->add_option("--config", opts.config, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", opts.seed, "Override simulation.seed");
    sub->add_option("--n-steps", opts.n_steps, "Override grid.n_steps")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", opts.out, "Override the output directory");
    sub->callback([&chosen, command = command] { chosen = command; });
  }
  CLI11_PARSE(app, argc, argv);
  return Run(opts, *chosen);
}
