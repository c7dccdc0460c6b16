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

#include <functional>

#include "mfglq/model.h"

namespace mfglq {

// Leader/follower flocking on velocities:
//   dV0 = a0 dt + Sigma0 dW0,  dVn = an dt + Sigma dWn,
// leader cost  l0*|V0 - nu(t)|^2 + l1*|V0 - Vbar|^2 + (1 - l0 - l1)|a0|^2,
// follower cost l0*|Vn - V0|^2   + l1*|Vn - Vbar|^2 + (1 - l0 - l1)|an|^2
// (leader weights lambda0/lambda1, follower weights l0/l1).
struct FlockingParams {
  int dv = 2;
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double l0 = 0.0;
  double l1 = 0.0;
  MatrixXd Sigma0;
  MatrixXd Sigma;
  VectorFunction nu;
  double T = 5.0;
};

// Circle traversal at speed 2*pi: nu(t) = [-2 pi sin(2 pi t), 2 pi cos(2 pi t)].
VectorXd CircleVelocity(double t);

// dv = 2, circle free will, Sigma0 = Sigma = 0.5 I, T = 5. The penalty
// weights have no canonical values and must be supplied.
FlockingParams FlockingPreset(double lambda0, double lambda1, double l0, double l1);

// Throws ValidationError when a weight is negative or a weight pair does
// not sum to less than one.
void CheckFlockingParams(const FlockingParams& params);

// Doubles the velocity state, X = [V; V], so that both targets fit the
// H/H0/H1 structure of the major-minor model.
MajorMinorLqModel EmbedFlocking(const FlockingParams& params);

// Initial law of the doubled state from Gaussian velocity laws.
InitialLaw EmbedInitialVelocities(const VectorXd& leader_mean, const MatrixXd& leader_cov,
                                  const VectorXd& follower_mean,
                                  const MatrixXd& follower_cov);

// Running costs in the original velocity variables; used to check the
// embedding.
double LeaderRunningCost(const FlockingParams& params, double t, const VectorXd& v0,
                         const VectorXd& vbar, const VectorXd& a0);
double FollowerRunningCost(const FlockingParams& params, const VectorXd& v,
                           const VectorXd& v0, const VectorXd& vbar, const VectorXd& a);

}  // namespace mfglq
