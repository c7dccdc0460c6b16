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

#include "mfglq/equilibrium.h"

#include <algorithm>
#include <sstream>

namespace mfglq {
namespace {

void CheckGrid(const MajorMinorLqModel& model, const TimeGrid& grid) {
  if (std::abs(grid.horizon() - model.T) > 1e-12 * std::max(1.0, model.T)) {
    std::ostringstream os;
    os << "grid horizon " << grid.horizon() << " does not match model horizon "
       << model.T;
    throw std::invalid_argument(os.str());
  }
}

// Splits a path of k x n gains on X = [Xbar; X0] into its Xbar and X0 parts.
std::pair<MatrixPath, MatrixPath> SplitStateGain(const TimeGrid& grid,
                                                 const std::vector<MatrixXd>& g,
                                                 int d, int d0) {
  std::vector<MatrixXd> on_bar(g.size()), on_major(g.size());
  for (size_t i = 0; i < g.size(); ++i) {
    on_bar[i] = g[i].leftCols(d);
    on_major[i] = g[i].rightCols(d0);
  }
  return {MatrixPath(grid, std::move(on_bar)), MatrixPath(grid, std::move(on_major))};
}

MatrixPath Block(const MatrixPath& path, int row, int col, int rows, int cols) {
  std::vector<MatrixXd> out(path.size());
  for (int i = 0; i < path.size(); ++i) out[i] = path[i].block(row, col, rows, cols);
  return MatrixPath(path.grid(), std::move(out));
}

void Symmetrize(MatrixXd& m, int row, int col, int size) {
  auto b = m.block(row, col, size, size);
  const MatrixXd sym = 0.5 * (b + b.transpose());
  b = sym;
}

// Major gains from K and k: [phi2, phi1] = -1/2 R0^{-1} BB0' K.
MajorGains MajorGainsFrom(const MajorMinorLqModel& model, const BlockSystem& blocks,
                          const ControlWeights& w, const MatrixPath& K,
                          const MatrixPath& k) {
  const MatrixXd pre = -0.5 * w.R0inv * blocks.BB0.transpose();
  std::vector<MatrixXd> state(K.size()), offset(K.size());
  for (int i = 0; i < K.size(); ++i) {
    state[i] = pre * K[i];
    offset[i] = pre * k[i];
  }
  auto [on_bar, on_major] = SplitStateGain(K.grid(), state, model.dims.d, model.dims.d0);
  return {MatrixPath(K.grid(), std::move(offset)), std::move(on_major), std::move(on_bar)};
}

// Minor gains: phi1 = -1/2 R^{-1} B' S, [phi3, phi2] = -1/2 R^{-1} B' SS,
// phi0 = -1/2 R^{-1} B' s.
MinorGains MinorGainsFrom(const MajorMinorLqModel& model, const ControlWeights& w,
                          const MatrixPath& S, const MatrixPath& SS,
                          const MatrixPath& s) {
  const MatrixXd pre = -0.5 * w.Rinv * model.B.transpose();
  std::vector<MatrixXd> own(S.size()), env(S.size()), offset(S.size());
  for (int i = 0; i < S.size(); ++i) {
    own[i] = pre * S[i];
    env[i] = pre * SS[i];
    offset[i] = pre * s[i];
  }
  auto [on_bar, on_major] = SplitStateGain(S.grid(), env, model.dims.d, model.dims.d0);
  return {MatrixPath(S.grid(), std::move(offset)), MatrixPath(S.grid(), std::move(own)),
          std::move(on_major), std::move(on_bar)};
}

MatrixXd MinorSDot(const MajorMinorLqModel& model, const ControlWeights& w,
                   const MatrixXd& S) {
  const MatrixXd SL = S * model.L;
  return -(SL + SL.transpose() - 0.5 * S * w.minor_quad * S + 2.0 * model.Q);
}

// Layout of the minor adjoint state: [SS, s, S], d x (n + 1 + d).
struct MinorLayout {
  int d, n;
  auto SS(const MatrixXd& x) const { return x.leftCols(n); }
  auto s(const MatrixXd& x) const { return x.col(n); }
  auto S(const MatrixXd& x) const { return x.rightCols(d); }
};

// Time derivative of [SS, s, S] given the environment (drift, offset) of the
// deviating minor.
MatrixXd MinorAdjointRhs(const MajorMinorLqModel& model, const ControlWeights& w,
                         const MinorLayout& lay, const MatrixXd& x,
                         const MatrixXd& drift, const MatrixXd& offset) {
  const MatrixXd S = lay.S(x);
  const MatrixXd SS = lay.SS(x);
  const MatrixXd s = lay.s(x);
  const MatrixXd feedback = model.L.transpose() - 0.5 * S * w.minor_quad;
  MatrixXd out(x.rows(), x.cols());
  out.leftCols(lay.n) =
      -(SS * drift + feedback * SS + S * w.FG - 2.0 * model.Q * w.H1H);
  out.col(lay.n) = -(feedback * s + SS * offset - 2.0 * model.Q * model.eta);
  out.rightCols(lay.d) = MinorSDot(model, w, S);
  return out;
}

}  // namespace

MajorResponse MajorBestResponse(const MajorMinorLqModel& model,
                                const MinorGains& minor) {
  const BlockSystem blocks = AssembleBlocks(model);
  const ControlWeights w = ComputeControlWeights(model, blocks);
  const TimeGrid& grid = minor.phi0.grid();
  CheckGrid(model, grid);
  const int n = blocks.n;

  // State [K, k], n x (n + 1).
  auto rhs = [&](double t, const MatrixXd& x) -> MatrixXd {
    const Environment env = MajorEnvironmentAt(model, blocks, minor, t);
    const MatrixXd K = x.leftCols(n);
    const MatrixXd k = x.col(n);
    const MatrixXd KL = K * env.drift;
    MatrixXd out(n, n + 1);
    out.leftCols(n) = -(KL + KL.transpose() - 0.5 * K * w.major_quad * K + 2.0 * blocks.FF0);
    out.col(n) = -((env.drift.transpose() - 0.5 * K * w.major_quad) * k +
                   K * env.offset + 2.0 * blocks.f0(t));
    return out;
  };
  MatrixPath joint;
  try {
    joint = IntegrateBackward(rhs, MatrixXd::Zero(n, n + 1), grid, Scheme::kRk4,
                              [n](MatrixXd& x) { Symmetrize(x, 0, 0, n); });
  } catch (const BlowUpError& e) {
    throw BlowUpError("major best response", e.time());
  }
  MajorResponse r{Block(joint, 0, 0, n, n), Block(joint, 0, n, n, 1), {}};
  r.gains = MajorGainsFrom(model, blocks, w, r.K, r.k);
  return r;
}

MinorResponse MinorBestResponse(const MajorMinorLqModel& model,
                                const FeedbackStrategy& strategy) {
  const BlockSystem blocks = AssembleBlocks(model);
  const ControlWeights w = ComputeControlWeights(model, blocks);
  const TimeGrid& grid = strategy.grid();
  CheckGrid(model, grid);
  const int d = model.dims.d, n = blocks.n;
  const MinorLayout lay{d, n};

  auto rhs = [&](double t, const MatrixXd& x) -> MatrixXd {
    const Environment env = FullEnvironmentAt(model, blocks, strategy, t);
    return MinorAdjointRhs(model, w, lay, x, env.drift, env.offset);
  };
  MatrixPath joint;
  try {
    joint = IntegrateBackward(rhs, MatrixXd::Zero(d, n + 1 + d), grid, Scheme::kRk4,
                              [n](MatrixXd& x) { Symmetrize(x, 0, n + 1, x.rows()); });
  } catch (const BlowUpError& e) {
    throw BlowUpError("minor best response", e.time());
  }
  MinorResponse r{Block(joint, 0, n + 1, d, d), Block(joint, 0, 0, d, n),
                  Block(joint, 0, n, d, 1), {}};
  r.gains = MinorGainsFrom(model, w, r.S, r.SS, r.s);
  return r;
}

ClosedLoopSolution SolveClosedLoop(const MajorMinorLqModel& model,
                                   const TimeGrid& grid, Scheme scheme) {
  const BlockSystem blocks = AssembleBlocks(model);
  const ControlWeights w = ComputeControlWeights(model, blocks);
  CheckGrid(model, grid);
  const int d = model.dims.d, n = blocks.n;
  const MinorLayout lay{d, n};

  // B R^{-1} B' lifted to the reduced state: n x d with zero bottom block.
  const MatrixXd lifted_minor_quad = blocks.BB * w.Rinv * model.B.transpose();

  // State [[K, k, 0], [SS, s, S]], (n + d) x (n + 1 + d).
  auto rhs = [&](double t, const MatrixXd& x) -> MatrixXd {
    const MatrixXd K = x.topLeftCorner(n, n);
    const MatrixXd k = x.block(0, n, n, 1);
    const MatrixXd minor = x.bottomRows(d);
    const MatrixXd S = lay.S(minor);
    const MatrixXd s = lay.s(minor);
    MatrixXd W = lay.SS(minor);
    W.leftCols(d) += S;

    // Population feedback substituted from the fixed-point identities.
    const MatrixXd major_env = blocks.LL0 - 0.5 * lifted_minor_quad * W;
    const MatrixXd major_off = -0.5 * lifted_minor_quad * s;
    const MatrixXd full_env = major_env - 0.5 * w.major_quad * K;
    const MatrixXd full_off = major_off - 0.5 * w.major_quad * k;

    MatrixXd out = MatrixXd::Zero(x.rows(), x.cols());
    const MatrixXd KL = K * major_env;
    out.topLeftCorner(n, n) =
        -(KL + KL.transpose() - 0.5 * K * w.major_quad * K + 2.0 * blocks.FF0);
    out.block(0, n, n, 1) = -((major_env.transpose() - 0.5 * K * w.major_quad) * k +
                              K * major_off + 2.0 * blocks.f0(t));
    out.bottomRows(d) = MinorAdjointRhs(model, w, lay, minor, full_env, full_off);
    return out;
  };
  auto project = [n, d](MatrixXd& x) {
    Symmetrize(x, 0, 0, n);
    Symmetrize(x, n, n + 1, d);
  };
  MatrixPath joint;
  try {
    joint = IntegrateBackward(rhs, MatrixXd::Zero(n + d, n + 1 + d), grid, scheme,
                              project);
  } catch (const BlowUpError& e) {
    std::ostringstream os;
    os << "closed-loop equilibrium does not exist on [0," << model.T
       << "] at this horizon";
    throw BlowUpError(os.str(), e.time());
  }

  ClosedLoopSolution sol;
  sol.K = Block(joint, 0, 0, n, n);
  sol.k = Block(joint, 0, n, n, 1);
  sol.SS = Block(joint, n, 0, d, n);
  sol.s = Block(joint, n, n, d, 1);
  sol.S = Block(joint, n, n + 1, d, d);
  sol.strategy.major = MajorGainsFrom(model, blocks, w, sol.K, sol.k);
  sol.strategy.minor = MinorGainsFrom(model, w, sol.S, sol.SS, sol.s);
  sol.residual = FixedPointResidual(model, sol.strategy);
  return sol;
}

double FixedPointResidual(const MajorMinorLqModel& model,
                          const FeedbackStrategy& strategy) {
  const MajorResponse major = MajorBestResponse(model, strategy.minor);
  const MinorResponse minor = MinorBestResponse(model, strategy);
  return std::max(strategy.major.SupDistance(major.gains),
                  strategy.minor.SupDistance(minor.gains));
}

IterationResult BestResponseIteration(const MajorMinorLqModel& model,
                                      const FeedbackStrategy& initial,
                                      const IterationOptions& options) {
  if (!(options.tolerance > 0.0)) {
    throw std::invalid_argument("best response iteration needs tolerance > 0");
  }
  if (!(options.damping > 0.0 && options.damping <= 1.0)) {
    throw std::invalid_argument("damping must lie in (0, 1]");
  }
  IterationResult result{initial, {}, false};
  for (int it = 0; it < options.max_iterations; ++it) {
    const FeedbackStrategy& current = result.strategy;
    FeedbackStrategy response{MajorBestResponse(model, current.minor).gains,
                              MinorBestResponse(model, current).gains};
    FeedbackStrategy next =
        options.damping == 1.0
            ? std::move(response)
            : response.Combine(options.damping, current, 1.0 - options.damping);
    const double change = next.SupDistance(current);
    result.history.push_back(change);
    result.strategy = std::move(next);
    if (change <= options.tolerance) {
      result.converged = true;
      break;
    }
  }
  return result;
}

OpenLoopSolution SolveOpenLoop(const MajorMinorLqModel& model, const TimeGrid& grid,
                               Scheme scheme) {
  const BlockSystem blocks = AssembleBlocks(model);
  const ControlWeights w = ComputeControlWeights(model, blocks);
  CheckGrid(model, grid);
  const int d = model.dims.d, n = blocks.n, m = n + d;
  const MinorLayout lay{d, n};

  // Forward coupling M = [1/2 BB0 R0^{-1} BB0', 1/2 BB R^{-1} B'].
  MatrixXd M(n, m);
  M << 0.5 * w.major_quad, 0.5 * blocks.BB * w.Rinv * model.B.transpose();
  // A = blockdiag(LL0', L').
  MatrixXd A = MatrixXd::Zero(m, m);
  A.topLeftCorner(n, n) = blocks.LL0.transpose();
  A.bottomRightCorner(d, d) = model.L.transpose();
  MatrixXd C(m, n);
  MatrixXd Q_first = MatrixXd::Zero(d, n);
  Q_first.leftCols(d) = model.Q;
  C << 2.0 * blocks.FF0, 2.0 * (Q_first - model.Q * w.H1H);

  // State [[P, p, 0], [SS, s, S]], (m + d) x (n + 1 + d).
  auto rhs = [&](double t, const MatrixXd& x) -> MatrixXd {
    const MatrixXd P = x.topLeftCorner(m, n);
    const MatrixXd p = x.block(0, n, m, 1);
    const MatrixXd minor = x.bottomRows(d);
    const MatrixXd MP = M * P;
    VectorXd c(m);
    c << 2.0 * blocks.f0(t), -2.0 * model.Q * model.eta;

    MatrixXd out = MatrixXd::Zero(x.rows(), x.cols());
    out.topLeftCorner(m, n) = -(P * blocks.LL0 - P * MP + A * P + C);
    out.block(0, n, m, 1) = -((A - P * M) * p + c);
    // Individual minor along dX = ((LL0 - M P) X - M p) dt.
    out.bottomRows(d) =
        MinorAdjointRhs(model, w, lay, minor, blocks.LL0 - MP, -M * p);
    return out;
  };
  auto project = [n, m, d](MatrixXd& x) { Symmetrize(x, m, n + 1, d); };
  MatrixPath joint;
  try {
    joint = IntegrateBackward(rhs, MatrixXd::Zero(m + d, n + 1 + d), grid, scheme,
                              project);
  } catch (const BlowUpError& e) {
    throw BlowUpError("open-loop equilibrium FBSDE decoupling failed", e.time());
  }

  OpenLoopSolution sol;
  sol.P = Block(joint, 0, 0, m, n);
  sol.p = Block(joint, 0, n, m, 1);
  sol.SS = Block(joint, m, 0, d, n);
  sol.s = Block(joint, m, n, d, 1);
  sol.S = Block(joint, m, n + 1, d, d);

  double err = 0.0;
  for (int i = 0; i < grid.n_nodes(); ++i) {
    MatrixXd W = sol.SS[i];
    W.leftCols(d) += sol.S[i];
    err = std::max(err, (W - sol.P[i].bottomRows(d)).cwiseAbs().maxCoeff());
    err = std::max(err, (sol.s[i] - sol.p[i].bottomRows(d)).cwiseAbs().maxCoeff());
  }
  sol.consistency_error = err;

  sol.strategy.major = MajorGainsFrom(model, blocks, w, Block(sol.P, 0, 0, n, n),
                                      Block(sol.p, 0, 0, n, 1));
  sol.strategy.minor = MinorGainsFrom(model, w, sol.S, sol.SS, sol.s);
  return sol;
}

}  // namespace mfglq
