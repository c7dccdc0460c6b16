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
#include <string>
#include <vector>

#include "mfglq/model.h"
#include "mfglq/riccati.h"
#include "mfglq/strategy.h"

namespace mfglq {

// First and second moments of a linear SDE dZ = (A(t) Z + c(t)) dt + N dW.
struct MomentPath {
  MatrixPath mean;  // dim x 1
  MatrixPath cov;   // dim x dim
};

using AffineDrift = std::function<Environment(double)>;

MomentPath PropagateMoments(const AffineDrift& drift, const MatrixXd& noise,
                            const VectorXd& init_mean, const MatrixXd& init_cov,
                            const TimeGrid& grid, Scheme scheme = Scheme::kRk4);

// Expected cost of the major player using `major` while the minors use
// `minor`. Moments are exact for the linear dynamics; the time integral uses
// the trapezoidal rule on the grid.
double MajorCost(const MajorMinorLqModel& model, const MajorGains& major,
                 const MinorGains& minor, const InitialLaw& init);

// Expected cost of one minor player using `deviation` while everybody else
// follows `strategy`.
double MinorCost(const MajorMinorLqModel& model, const MinorGains& deviation,
                 const FeedbackStrategy& strategy, const InitialLaw& init);

enum class Player { kMajor, kMinor };

std::string ToString(Player player);

struct NashGapReport {
  Player player = Player::kMajor;
  int directions = 0;
  double epsilon = 0.0;
  double baseline_cost = 0.0;
  std::vector<double> first_derivative;   // (J(+e) - J(-e)) / 2e
  std::vector<double> second_difference;  // J(+e) - 2 J(0) + J(-e)

  double MaxAbsFirstDerivative() const;
  double MinSecondDifference() const;
  // max |first derivative| <= tolerance * max(1, |J(0)|) and every second
  // difference >= 0.
  bool Passes(double tolerance) const;
};

// Perturbs the gains of `player` along `directions` seeded random directions
// of sup-norm one and reports central differences of its cost.
NashGapReport NashGap(const MajorMinorLqModel& model,
                      const FeedbackStrategy& strategy, Player player,
                      int directions, double epsilon, std::uint64_t seed,
                      const InitialLaw& init);

// Random smooth gain perturbation with sup-norm one (used by NashGap).
MajorGains RandomMajorDirection(const MajorGains& like, std::uint64_t key);
MinorGains RandomMinorDirection(const MinorGains& like, std::uint64_t key);

}  // namespace mfglq
