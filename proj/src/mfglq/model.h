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
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mfglq {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Time-dependent target for the major player. Constant targets are wrapped as
// constant functions.
using VectorFunction = std::function<VectorXd(double)>;

struct Dims {
  int d0 = 1;  // major state
  int d = 1;   // minor state
  int k0 = 1;  // major control
  int k = 1;   // minor control
  int m0 = 1;  // major noise
  int m = 1;   // minor noise
};

// Linear-quadratic game with one major player and a continuum of minor
// players. State equations:
//   dX0 = (L0 X0 + B0 a0 + F0 Xbar) dt + D0 dW0
//   dX  = (L X + B a + F Xbar + G X0) dt + D dW
// Running costs:
//   (X0 - H0 Xbar - eta0(t))' Q0 (...) + a0' R0 a0
//   (X - H X0 - H1 Xbar - eta)' Q (...) + a' R a
struct MajorMinorLqModel {
  Dims dims;
  MatrixXd L0, B0, F0, D0;
  MatrixXd L, B, F, G, D;
  MatrixXd Q0, Q, R0, R;
  MatrixXd H0, H, H1;
  VectorFunction eta0;
  VectorXd eta;
  double T = 1.0;

  static VectorFunction Constant(VectorXd v) {
    return [v = std::move(v)](double) { return v; };
  }
};

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  std::string Summary() const;
};

ValidationReport Validate(const MajorMinorLqModel& model);

// Returns a copy with Q0, Q, R0, R replaced by their symmetric parts. Throws
// ValidationError listing every violation if the model is invalid.
MajorMinorLqModel ValidatedModel(const MajorMinorLqModel& model);

// Reduced state X = [Xbar; X0] of dimension n = d + d0.
struct BlockSystem {
  int n = 0;
  MatrixXd LL0;  // [[L+F, G], [F0, L0]]
  MatrixXd BB0;  // [0; B0]
  MatrixXd BB;   // [B; 0]
  MatrixXd DD0;  // [0; D0]
  MatrixXd FF0;  // [-H0, I]' Q0 [-H0, I]
  VectorFunction f0;
};

BlockSystem AssembleBlocks(const MajorMinorLqModel& model);

// Derived constants shared by the solvers.
struct ControlWeights {
  MatrixXd R0inv;
  MatrixXd Rinv;
  MatrixXd major_quad;  // BB0 R0^{-1} BB0'  (n x n)
  MatrixXd minor_quad;  // B R^{-1} B'       (d x d)
  MatrixXd FG;          // [F, G]            (d x n)
  MatrixXd H1H;         // [H1, H]           (d x n)
};

// Law of the initial states: X0 ~ N(major_mean, major_cov), minor states
// i.i.d. N(minor_mean, minor_cov). The conditional mean Xbar starts at
// minor_mean.
struct InitialLaw {
  VectorXd major_mean;
  MatrixXd major_cov;
  VectorXd minor_mean;
  MatrixXd minor_cov;

  static InitialLaw Deterministic(const VectorXd& major, const VectorXd& minor);
  // Mean and covariance of X = [Xbar; X0].
  VectorXd ReducedMean() const;
  MatrixXd ReducedCov() const;
};

ControlWeights ComputeControlWeights(const MajorMinorLqModel& model,
                                     const BlockSystem& blocks);

}  // namespace mfglq
