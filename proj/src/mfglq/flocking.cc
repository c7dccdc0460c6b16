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

#include "mfglq/flocking.h"

#include <cmath>
#include <numbers>

namespace mfglq {
namespace {

MatrixXd Doubled(const MatrixXd& block) {
  MatrixXd out(2 * block.rows(), block.cols());
  out << block, block;
  return out;
}

MatrixXd Diagonal2(double a, double b, int dv) {
  MatrixXd out = MatrixXd::Zero(2 * dv, 2 * dv);
  out.topLeftCorner(dv, dv).diagonal().setConstant(a);
  out.bottomRightCorner(dv, dv).diagonal().setConstant(b);
  return out;
}

}  // namespace

VectorXd CircleVelocity(double t) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  VectorXd v(2);
  v << -kTwoPi * std::sin(kTwoPi * t), kTwoPi * std::cos(kTwoPi * t);
  return v;
}

FlockingParams FlockingPreset(double lambda0, double lambda1, double l0, double l1) {
  FlockingParams p;
  p.dv = 2;
  p.lambda0 = lambda0;
  p.lambda1 = lambda1;
  p.l0 = l0;
  p.l1 = l1;
  p.Sigma0 = 0.5 * MatrixXd::Identity(2, 2);
  p.Sigma = 0.5 * MatrixXd::Identity(2, 2);
  p.nu = CircleVelocity;
  p.T = 5.0;
  return p;
}

void CheckFlockingParams(const FlockingParams& p) {
  if (p.dv < 1) throw ValidationError("flocking velocity dimension must be >= 1");
  if (!(p.lambda0 >= 0.0) || !(p.lambda1 >= 0.0)) {
    throw ValidationError("leader weights lambda0, lambda1 must be non-negative");
  }
  if (!(p.l0 >= 0.0) || !(p.l1 >= 0.0)) {
    throw ValidationError("follower weights l0, l1 must be non-negative");
  }
  if (!(p.lambda0 + p.lambda1 < 1.0)) {
    throw ValidationError("R0 not positive definite (lambda0 + lambda1 must be < 1)");
  }
  if (!(p.l0 + p.l1 < 1.0)) {
    throw ValidationError("R not positive definite (l0 + l1 must be < 1)");
  }
  if (p.Sigma0.rows() != p.dv || p.Sigma0.cols() != p.dv || p.Sigma.rows() != p.dv ||
      p.Sigma.cols() != p.dv) {
    throw ValidationError("Sigma0 and Sigma must be dv x dv");
  }
  if (!p.nu || p.nu(0.0).size() != p.dv) {
    throw ValidationError("free-will velocity nu must return dv components");
  }
}

MajorMinorLqModel EmbedFlocking(const FlockingParams& p) {
  CheckFlockingParams(p);
  const int dv = p.dv, n = 2 * dv;
  const MatrixXd I = MatrixXd::Identity(dv, dv);
  const MatrixXd zero = MatrixXd::Zero(n, n);

  MajorMinorLqModel m;
  m.dims = {n, n, dv, dv, dv, dv};
  m.L0 = m.L = m.F0 = m.F = m.G = zero;
  m.B0 = m.B = Doubled(I);
  m.D0 = Doubled(p.Sigma0);
  m.D = Doubled(p.Sigma);
  m.H = Diagonal2(1.0, 0.0, dv);
  m.H0 = m.H1 = Diagonal2(0.0, 1.0, dv);
  m.Q0 = Diagonal2(p.lambda0, p.lambda1, dv);
  m.Q = Diagonal2(p.l0, p.l1, dv);
  m.R0 = (1.0 - p.lambda0 - p.lambda1) * I;
  m.R = (1.0 - p.l0 - p.l1) * I;
  m.eta = VectorXd::Zero(n);
  m.eta0 = [nu = p.nu, dv](double t) -> VectorXd {
    VectorXd out = VectorXd::Zero(2 * dv);
    out.head(dv) = nu(t);
    return out;
  };
  m.T = p.T;
  return m;
}

InitialLaw EmbedInitialVelocities(const VectorXd& leader_mean, const MatrixXd& leader_cov,
                                  const VectorXd& follower_mean,
                                  const MatrixXd& follower_cov) {
  auto mean = [](const VectorXd& v) {
    VectorXd out(2 * v.size());
    out << v, v;
    return out;
  };
  auto cov = [](const MatrixXd& c) {
    MatrixXd out(2 * c.rows(), 2 * c.cols());
    out << c, c, c, c;
    return out;
  };
  return {mean(leader_mean), cov(leader_cov), mean(follower_mean), cov(follower_cov)};
}

double LeaderRunningCost(const FlockingParams& p, double t, const VectorXd& v0,
                         const VectorXd& vbar, const VectorXd& a0) {
  return p.lambda0 * (v0 - p.nu(t)).squaredNorm() + p.lambda1 * (v0 - vbar).squaredNorm() +
         (1.0 - p.lambda0 - p.lambda1) * a0.squaredNorm();
}

double FollowerRunningCost(const FlockingParams& p, const VectorXd& v, const VectorXd& v0,
                           const VectorXd& vbar, const VectorXd& a) {
  return p.l0 * (v - v0).squaredNorm() + p.l1 * (v - vbar).squaredNorm() +
         (1.0 - p.l0 - p.l1) * a.squaredNorm();
}

}  // namespace mfglq
