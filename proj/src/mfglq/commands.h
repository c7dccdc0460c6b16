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

#include <optional>
#include <string>
#include <vector>

#include "mfglq/config.h"
#include "mfglq/equilibrium.h"
#include "mfglq/evaluator.h"
#include "mfglq/simulator.h"

namespace mfglq::app {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Riccati paths behind the gains: for the closed-loop solver and the
// iteration these are K, k, S, SS, s; the open-loop solver adds P and p.
struct SolveOutcome {
  SolverKind solver = SolverKind::kClosedLoop;
  FeedbackStrategy strategy;
  std::vector<std::pair<std::string, MatrixPath>> riccati;
  double residual = 0.0;
  std::optional<double> consistency_error;
  std::optional<IterationResult> iteration;
};

// Solves the configured game without writing anything.
SolveOutcome SolveEquilibrium(const RunConfig& config, const MajorMinorLqModel& model);

// gains.json, riccati.csv, diagnostics.json.
SolveOutcome CmdSolve(const RunConfig& config);

struct ChaosRow {
  int N = 0;
  MatrixXd correlation;  // followers x followers, node-averaged
  double mean_abs_off_diag = 0.0;
  int excluded_nodes = 0;
};

// Conditional correlations of the first state component of the first
// `followers` minors across S replicates sharing the major noise, averaged
// over the grid nodes. Nodes where some follower has variance below 1e-14
// are skipped and counted.
ChaosRow ChaosCorrelation(const MajorMinorLqModel& model, const FeedbackStrategy& strategy,
                          const InitialLaw& init, const TimeGrid& grid, std::uint64_t seed,
                          int N, int replicates, int followers);

// chaos_<N>.csv per flock size and summary.csv. Warnings for undefined
// correlations are appended to `warnings` when given.
std::vector<ChaosRow> CmdChaos(const RunConfig& config,
                               std::vector<std::string>* warnings = nullptr);

struct PanelMetrics {
  std::string name;
  double leader_tracking = 0.0;  // time average of |V0 - nu|
  double flock_cohesion = 0.0;   // time average of |Vbar^N - V0|
};

// traj_<panel>.csv (first seed) and metrics.json; metrics are averaged over
// the configured number of seeds.
std::vector<PanelMetrics> CmdTrajectories(const RunConfig& config);

struct NashOutcome {
  NashGapReport major;
  NashGapReport minor;
  bool passed = false;
};

NashOutcome NashCheck(const RunConfig& config);

// nash_report.json. The caller reports failure through the exit status.
NashOutcome CmdNashCheck(const RunConfig& config);

// paths.csv for one finite-game run.
PathBundle CmdSimulate(const RunConfig& config);

nlohmann::json ToJson(const NashGapReport& report);

}  // namespace mfglq::app
