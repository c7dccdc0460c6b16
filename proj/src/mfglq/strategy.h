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

#include <utility>

#include "mfglq/model.h"
#include "mfglq/riccati.h"

namespace mfglq {

// a0 = phi0 + phi1 X0 + phi2 Xbar
struct MajorGains {
  MatrixPath phi0;  // k0 x 1
  MatrixPath phi1;  // k0 x d0
  MatrixPath phi2;  // k0 x d

  static MajorGains Zero(const Dims& dims, const TimeGrid& grid);

  // [phi2, phi1] at a node or sampled time: the gain on X = [Xbar; X0].
  MatrixXd StateGain(int node) const;
  MatrixXd StateGainAt(double t) const;

  double SupDistance(const MajorGains& other) const;
  MajorGains Combine(double a, const MajorGains& other, double b) const;
};

// a = phi0 + phi1 X + phi2 X0 + phi3 Xbar
struct MinorGains {
  MatrixPath phi0;  // k x 1
  MatrixPath phi1;  // k x d
  MatrixPath phi2;  // k x d0
  MatrixPath phi3;  // k x d

  static MinorGains Zero(const Dims& dims, const TimeGrid& grid);

  // [phi3, phi2]: the gain on X = [Xbar; X0].
  MatrixXd EnvironmentGain(int node) const;
  MatrixXd EnvironmentGainAt(double t) const;

  double SupDistance(const MinorGains& other) const;
  MinorGains Combine(double a, const MinorGains& other, double b) const;
};

struct FeedbackStrategy {
  MajorGains major;
  MinorGains minor;

  static FeedbackStrategy Zero(const Dims& dims, const TimeGrid& grid);
  const TimeGrid& grid() const { return major.phi0.grid(); }

  double SupDistance(const FeedbackStrategy& other) const;
  FeedbackStrategy Combine(double a, const FeedbackStrategy& other, double b) const;
  FeedbackStrategy Scaled(double factor) const { return Combine(factor, *this, 0.0); }
};

// Reduced dynamics dX = (Lcl X + Ccl) dt + DD0 dW0 seen by one player.
struct Environment {
  MatrixXd drift;   // n x n
  MatrixXd offset;  // n x 1
};

// Environment of the major player when the minors use `minor`; the major's
// own control is left out. Evaluated with cubic sampling between nodes.
Environment MajorEnvironmentAt(const MajorMinorLqModel& model,
                               const BlockSystem& blocks,
                               const MinorGains& minor, double t);

// Environment of a deviating minor player: both populations follow the
// strategy.
Environment FullEnvironmentAt(const MajorMinorLqModel& model,
                              const BlockSystem& blocks,
                              const FeedbackStrategy& strategy, double t);

// Node-wise paths (Lcl0, Ccl0).
std::pair<MatrixPath, MatrixPath> MajorEnvironment(const MajorMinorLqModel& model,
                                                   const MinorGains& minor);

// Node-wise paths (Lcl, Ccl).
std::pair<MatrixPath, MatrixPath> FullEnvironment(const MajorMinorLqModel& model,
                                                  const FeedbackStrategy& strategy);

}  // namespace mfglq
