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

#include <vector>

#include "mfglq/model.h"
#include "mfglq/riccati.h"
#include "mfglq/strategy.h"

namespace mfglq {

// Sign and scale conventions. Every system below is the Pontryagin system of
// the Hamiltonian y'(drift) + cost, so
//   optimal controls:  a0 = -1/2 R0^{-1} BB0' Y,   a = -1/2 R^{-1} B' Ytilde,
//   adjoint drivers:   2 FF0, 2 f0, 2 Q,
//   Riccati quadratic: -1/2 K (BB0 R0^{-1} BB0') K.
// Each Riccati variable is twice the Hessian of the corresponding value
// function. Halving it and doubling the gain prefactor gives the textbook
// form (FF0 source, full quadratic term, gain -R0^{-1} BB0' P); the gains are
// the same either way.

struct MajorResponse {
  MatrixPath K;  // n x n
  MatrixPath k;  // n x 1
  MajorGains gains;
};

struct MinorResponse {
  MatrixPath S;   // d x d, independent of the strategies
  MatrixPath SS;  // d x n
  MatrixPath s;   // d x 1
  MinorGains gains;
};

// Optimal feedback of the major player when the minors use `minor`.
MajorResponse MajorBestResponse(const MajorMinorLqModel& model,
                                const MinorGains& minor);

// Optimal feedback of one deviating minor player when the major and the rest
// of the population use `strategy`.
MinorResponse MinorBestResponse(const MajorMinorLqModel& model,
                                const FeedbackStrategy& strategy);

struct ClosedLoopSolution {
  MatrixPath K, k, S, SS, s;
  FeedbackStrategy strategy;
  double residual = 0.0;
};

// Integrates the coupled equilibrium system for (S, K, SS, k, s) backward in
// one RK4 state and reads the equilibrium gains off the fixed-point identities.
// Throws BlowUpError if the coupled Riccati system is not well posed on [0, T].
ClosedLoopSolution SolveClosedLoop(const MajorMinorLqModel& model,
                                   const TimeGrid& grid,
                                   Scheme scheme = Scheme::kRk4);

// Sup over nodes and gain entries of |strategy - best responses to it|.
double FixedPointResidual(const MajorMinorLqModel& model,
                          const FeedbackStrategy& strategy);

struct IterationOptions {
  int max_iterations = 50;
  double tolerance = 1e-8;
  // New strategy = damping * best response + (1 - damping) * old.
  double damping = 1.0;
};

struct IterationResult {
  FeedbackStrategy strategy;
  std::vector<double> history;  // sup-norm gain change per iteration
  bool converged = false;
  int iterations() const { return static_cast<int>(history.size()); }
};

IterationResult BestResponseIteration(const MajorMinorLqModel& model,
                                      const FeedbackStrategy& initial,
                                      const IterationOptions& options = {});

struct OpenLoopSolution {
  MatrixPath P;    // (n + d) x n, decoupling field of [YY; Ybar]
  MatrixPath p;    // (n + d) x 1
  MatrixPath S;    // d x d
  MatrixPath SS;   // d x n, individual minor decoupling
  MatrixPath s;    // d x 1
  FeedbackStrategy strategy;
  double consistency_error = 0.0;
};

// Decouples the reduced open-loop FBSDE with [YY; Ybar] = P X + p and then the
// individual minor adjoint with Ytilde = S Xtilde + SS X + s along the
// equilibrium X-dynamics. consistency_error compares S [I, 0] + SS and s with
// the Ybar blocks of P and p.
OpenLoopSolution SolveOpenLoop(const MajorMinorLqModel& model,
                               const TimeGrid& grid,
                               Scheme scheme = Scheme::kRk4);

}  // namespace mfglq
