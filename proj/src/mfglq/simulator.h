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
#include <functional>
#include <ostream>
#include <vector>

#include "mfglq/model.h"
#include "mfglq/riccati.h"
#include "mfglq/strategy.h"

namespace mfglq {

struct SimConfig {
  int N = 1;  // number of minor players
  TimeGrid grid;
  std::uint64_t master_seed = 0;
  InitialLaw init;
  // Only Euler-Maruyama is supported.
  Scheme scheme = Scheme::kEuler;
  // Number of minor paths kept in the bundle (the first ones); -1 keeps all.
  // The empirical mean always uses all N minors.
  int recorded_minors = -1;
  bool record_controls = true;
};

struct SeedRecord {
  std::uint64_t master_seed = 0;
  std::uint64_t major_replicate = 0;
  std::uint64_t minor_replicate = 0;
};

// Paths are stored one column per grid node.
struct PathBundle {
  TimeGrid grid;
  int N = 0;
  MatrixXd major;                       // d0 x nodes
  std::vector<MatrixXd> minors;         // recorded minors, d x nodes each
  MatrixXd empirical_mean;              // d x nodes, over all N minors
  MatrixXd major_control;               // k0 x nodes (if recorded)
  std::vector<MatrixXd> minor_controls; // k x nodes per recorded minor
  MatrixXd major_noise;                 // m0 x steps, Brownian increments
  std::vector<std::uint64_t> minor_noise_checksum;  // per recorded minor
  SeedRecord seeds;
};

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Euler-Maruyama simulation of the major player and N minors, each using
// the feedback strategy evaluated at the left node.
PathBundle SimulateFiniteGame(const MajorMinorLqModel& model,
                              const FeedbackStrategy& strategy,
                              const SimConfig& config);

struct MeanFieldPaths {
  MatrixXd major;           // d0 x nodes
  MatrixXd cond_mean;       // d x nodes
  MatrixXd representative;  // d x nodes
  MatrixXd major_control;   // k0 x nodes
  MatrixXd representative_control;  // k x nodes
};

// Limit dynamics: Xbar follows its noise-free conditional-mean equation,
// the major player its own SDE, and one representative minor (using
// `deviation` when given, else the strategy) is driven by independent noise.
// Noise streams match SimulateFiniteGame with the same seed: agent 0 for the
// major, agent 1 for the representative.
MeanFieldPaths SimulateMeanField(const MajorMinorLqModel& model,
                                 const FeedbackStrategy& strategy,
                                 std::uint64_t seed, const TimeGrid& grid,
                                 const InitialLaw& init,
                                 const MinorGains* deviation = nullptr);

using ReplicateVisitor = std::function<void(int replicate, const PathBundle&)>;

// S replicates sharing the major noise (stream of agent 0, replicate 0) with
// fresh minor noises keyed by the replicate index. The major path itself
// still differs across replicates whenever it feeds back on the empirical
// mean.
void ForEachConditionalReplicate(const MajorMinorLqModel& model,
                                 const FeedbackStrategy& strategy,
                                 const SimConfig& config, int replicates,
                                 const ReplicateVisitor& visit);

std::vector<PathBundle> SimulateConditionalEnsemble(const MajorMinorLqModel& model,
                                                    const FeedbackStrategy& strategy,
                                                    const SimConfig& config,
                                                    int replicates);

// Columns t, agent_id, x_0, ...; agent 0 is the major player.
void WritePathBundleCsv(std::ostream& os, const PathBundle& bundle);

// Square root factor F with F F' = cov (cov symmetric PSD).
MatrixXd CovarianceFactor(const MatrixXd& cov);

}  // namespace mfglq
