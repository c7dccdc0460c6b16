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

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mfglq/equilibrium.h"
#include "mfglq/flocking.h"
#include "mfglq/model.h"

namespace mfglq::app {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SolverKind { kClosedLoop, kOpenLoop, kBestResponseIteration };

std::string ToString(SolverKind kind);

struct SimulationSettings {
  int N = 50;
  std::uint64_t seed = 42;
};

struct ChaosSettings {
  std::vector<int> flock_sizes = {5, 10, 20, 50, 100};
  int replicates = 500;
  int followers = 5;
};

struct Panel {
  std::string name;
  double lambda0 = 0.0, lambda1 = 0.0, l0 = 0.0, l1 = 0.0;
};

struct TrajectorySettings {
  std::vector<Panel> panels;
  int N = 10;
  int seeds = 1;
  double follower_position_std = 1.0;
};

struct NashSettings {
  int directions = 5;
  double epsilon = 1e-3;
  double tolerance = 1e-4;
  std::uint64_t seed = 7;
  // Multiplies every equilibrium gain before the check.
  double gain_scale = 1.0;
};

struct RunConfig {
  nlohmann::json document;  // the parsed document with overrides applied
  bool is_flocking = false;
  FlockingParams flocking;  // valid when is_flocking
  nlohmann::json model_section;
  InitialLaw init;
  double horizon = 0.0;
  int n_steps = 0;
  SolverKind solver = SolverKind::kClosedLoop;
  IterationOptions iteration;
  bool open_loop_diagnostics = false;
  SimulationSettings simulation;
  ChaosSettings chaos;
  TrajectorySettings trajectories;
  NashSettings nash;
  std::string output_dir = "out";

  TimeGrid Grid() const { return TimeGrid(horizon, n_steps); }
  // Builds the game model (flocking configs are embedded first). Throws
  // ValidationError for invalid models.
  MajorMinorLqModel Model() const;
  // FNV-1a of the canonical document, as 16 hex digits.
  std::string Hash() const;
};

RunConfig ParseConfig(const nlohmann::json& document);
RunConfig ParseConfigText(const std::string& text);
RunConfig LoadConfig(const std::string& path);

// Re-derives the settings after a command-line override.
void OverrideSeed(RunConfig& config, std::uint64_t seed);
void OverrideSteps(RunConfig& config, int n_steps);
void OverrideOutput(RunConfig& config, const std::string& dir);

}  // namespace mfglq::app
