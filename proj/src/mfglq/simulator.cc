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

#include "mfglq/simulator.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "mfglq/csv.h"
#include "mfglq/rng.h"

namespace mfglq {
namespace {

void CheckStrategyGrid(const FeedbackStrategy& strategy, const TimeGrid& grid) {
  if (!(strategy.grid() == grid)) {
    throw std::invalid_argument("strategy grid differs from the simulation grid");
  }
}

std::uint64_t HashColumn(std::uint64_t h, const double* values, int count) {
  for (int i = 0; i < count; ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, &values[i], sizeof(bits));
    h = Mix64(h ^ bits);
  }
  return h;
}

[[noreturn]] void ThrowNonFinite(const char* what, int node, int agent) {
  std::ostringstream os;
  os << "non-finite " << what << " at node " << node << " for agent " << agent;
  throw SimulationError(os.str());
}

PathBundle Simulate(const MajorMinorLqModel& model, const FeedbackStrategy& strategy,
                    const SimConfig& config, std::uint64_t major_replicate,
                    std::uint64_t minor_replicate) {
  if (config.N < 1) throw std::invalid_argument("simulation needs N >= 1");
  if (config.scheme != Scheme::kEuler) {
    throw std::invalid_argument("simulation supports the Euler-Maruyama scheme only");
  }
  const TimeGrid& grid = config.grid;
  CheckStrategyGrid(strategy, grid);
  const Dims& dm = model.dims;
  const int N = config.N, nodes = grid.n_nodes();
  const int recorded = config.recorded_minors < 0 ? N : std::min(N, config.recorded_minors);
  const double dt = grid.dt(), sqrt_dt = std::sqrt(dt);
  const InitialLaw& init = config.init;

  PathBundle b;
  b.grid = grid;
  b.N = N;
  b.seeds = {config.master_seed, major_replicate, minor_replicate};
  b.major.resize(dm.d0, nodes);
  b.empirical_mean.resize(dm.d, nodes);
  b.minors.assign(recorded, MatrixXd(dm.d, nodes));
  b.major_noise.resize(dm.m0, grid.n_steps());
  b.minor_noise_checksum.assign(recorded, 0);
  if (config.record_controls) {
    b.major_control.resize(dm.k0, nodes);
    b.minor_controls.assign(recorded, MatrixXd(dm.k, nodes));
  }

  NormalStream major_rng(StreamKey(config.master_seed, 0, major_replicate));
  std::vector<NormalStream> minor_rng;
  minor_rng.reserve(N);
  for (int a = 1; a <= N; ++a) {
    minor_rng.emplace_back(StreamKey(config.master_seed, a, minor_replicate));
  }

  VectorXd x0(dm.d0), z0(dm.d0);
  major_rng.Fill(z0);
  x0 = init.major_mean + CovarianceFactor(init.major_cov) * z0;
  MatrixXd X(dm.d, N);
  {
    const MatrixXd factor = CovarianceFactor(init.minor_cov);
    VectorXd z(dm.d);
    for (int a = 0; a < N; ++a) {
      minor_rng[a].Fill(z);
      X.col(a) = init.minor_mean + factor * z;
    }
  }

  VectorXd w0(dm.m0);
  MatrixXd W(dm.m, N);
  VectorXd w(dm.m);
  for (int i = 0; i < nodes; ++i) {
    const VectorXd xbar = X.rowwise().mean();
    b.major.col(i) = x0;
    b.empirical_mean.col(i) = xbar;
    for (int r = 0; r < recorded; ++r) b.minors[r].col(i) = X.col(r);

    const VectorXd a0 = strategy.major.phi0[i] + strategy.major.phi1[i] * x0 +
                        strategy.major.phi2[i] * xbar;
    const VectorXd shared = strategy.minor.phi0[i] + strategy.minor.phi2[i] * x0 +
                            strategy.minor.phi3[i] * xbar;
    if (config.record_controls) {
      b.major_control.col(i) = a0;
      for (int r = 0; r < recorded; ++r) {
        b.minor_controls[r].col(i) = shared + strategy.minor.phi1[i] * X.col(r);
      }
    }
    if (i == nodes - 1) break;

    for (int a = 0; a < N; ++a) {
      minor_rng[a].Fill(w);
      W.col(a) = sqrt_dt * w;
      if (a < recorded) {
        b.minor_noise_checksum[a] = HashColumn(b.minor_noise_checksum[a], W.col(a).data(), dm.m);
      }
    }
    major_rng.Fill(w0);
    w0 *= sqrt_dt;
    b.major_noise.col(i) = w0;

    const MatrixXd A = model.L + model.B * strategy.minor.phi1[i];
    const VectorXd offset = model.B * shared + model.F * xbar + model.G * x0;
    MatrixXd drift = A * X;
    drift.colwise() += offset;
    X += dt * drift + model.D * W;
    x0 += dt * (model.L0 * x0 + model.B0 * a0 + model.F0 * xbar) + model.D0 * w0;

    if (!x0.allFinite()) ThrowNonFinite("state", i + 1, 0);
    if (!X.allFinite()) {
      for (int a = 0; a < N; ++a) {
        if (!X.col(a).allFinite()) ThrowNonFinite("state", i + 1, a + 1);
      }
    }
  }
  return b;
}

}  // namespace

MatrixXd CovarianceFactor(const MatrixXd& cov) {
  const MatrixXd sym = 0.5 * (cov + cov.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym);
  const VectorXd roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * roots.asDiagonal();
}

PathBundle SimulateFiniteGame(const MajorMinorLqModel& model,
                              const FeedbackStrategy& strategy,
                              const SimConfig& config) {
  return Simulate(model, strategy, config, 0, 0);
}

MeanFieldPaths SimulateMeanField(const MajorMinorLqModel& model,
                                 const FeedbackStrategy& strategy,
                                 std::uint64_t seed, const TimeGrid& grid,
                                 const InitialLaw& init,
                                 const MinorGains* deviation) {
  CheckStrategyGrid(strategy, grid);
  const MinorGains& own = deviation ? *deviation : strategy.minor;
  if (!(own.phi0.grid() == grid)) {
    throw std::invalid_argument("deviation grid differs from the simulation grid");
  }
  const Dims& dm = model.dims;
  const int nodes = grid.n_nodes();
  const double dt = grid.dt(), sqrt_dt = std::sqrt(dt);

  NormalStream major_rng(StreamKey(seed, 0, 0));
  NormalStream minor_rng(StreamKey(seed, 1, 0));
  VectorXd z0(dm.d0), z(dm.d);
  major_rng.Fill(z0);
  minor_rng.Fill(z);
  VectorXd x0 = init.major_mean + CovarianceFactor(init.major_cov) * z0;
  VectorXd x = init.minor_mean + CovarianceFactor(init.minor_cov) * z;
  VectorXd xbar = init.minor_mean;

  MeanFieldPaths out{MatrixXd(dm.d0, nodes), MatrixXd(dm.d, nodes), MatrixXd(dm.d, nodes),
                     MatrixXd(dm.k0, nodes), MatrixXd(dm.k, nodes)};
  VectorXd w0(dm.m0), w(dm.m);
  for (int i = 0; i < nodes; ++i) {
    out.major.col(i) = x0;
    out.cond_mean.col(i) = xbar;
    out.representative.col(i) = x;
    const auto& mg = strategy.major;
    const auto& pop = strategy.minor;
    const VectorXd a0 = mg.phi0[i] + mg.phi1[i] * x0 + mg.phi2[i] * xbar;
    const VectorXd a = own.phi0[i] + own.phi1[i] * x + own.phi2[i] * x0 + own.phi3[i] * xbar;
    out.major_control.col(i) = a0;
    out.representative_control.col(i) = a;
    if (i == nodes - 1) break;

    major_rng.Fill(w0);
    minor_rng.Fill(w);
    w0 *= sqrt_dt;
    w *= sqrt_dt;
    const VectorXd bar_drift = (model.L + model.F + model.B * (pop.phi1[i] + pop.phi3[i])) * xbar +
                               (model.B * pop.phi2[i] + model.G) * x0 + model.B * pop.phi0[i];
    const VectorXd major_drift = model.L0 * x0 + model.B0 * a0 + model.F0 * xbar;
    const VectorXd minor_drift = model.L * x + model.B * a + model.F * xbar + model.G * x0;
    x0 += dt * major_drift + model.D0 * w0;
    x += dt * minor_drift + model.D * w;
    xbar += dt * bar_drift;
    if (!x0.allFinite()) ThrowNonFinite("state", i + 1, 0);
    if (!x.allFinite() || !xbar.allFinite()) ThrowNonFinite("state", i + 1, 1);
  }
  return out;
}

void ForEachConditionalReplicate(const MajorMinorLqModel& model,
                                 const FeedbackStrategy& strategy,
                                 const SimConfig& config, int replicates,
                                 const ReplicateVisitor& visit) {
  if (replicates < 2) {
    throw std::invalid_argument("conditional ensemble needs at least 2 replicates");
  }
  for (int s = 0; s < replicates; ++s) {
    visit(s, Simulate(model, strategy, config, 0, static_cast<std::uint64_t>(s)));
  }
}

std::vector<PathBundle> SimulateConditionalEnsemble(const MajorMinorLqModel& model,
                                                    const FeedbackStrategy& strategy,
                                                    const SimConfig& config,
                                                    int replicates) {
  std::vector<PathBundle> out;
  out.reserve(std::max(replicates, 0));
  ForEachConditionalReplicate(model, strategy, config, replicates,
                              [&](int, const PathBundle& b) { out.push_back(b); });
  return out;
}

void WritePathBundleCsv(std::ostream& os, const PathBundle& bundle) {
  const int width = std::max<int>(bundle.major.rows(), bundle.empirical_mean.rows());
  os << "t,agent_id";
  for (int c = 0; c < width; ++c) os << ",x_" << c;
  os << '\n';
  auto row = [&](int node, int agent, const MatrixXd& path) {
    os << FormatDouble(bundle.grid.time(node)) << ',' << agent;
    for (int c = 0; c < width; ++c) {
      os << ',';
      if (c < path.rows()) os << FormatDouble(path(c, node));
    }
    os << '\n';
  };
  for (int i = 0; i < bundle.grid.n_nodes(); ++i) {
    row(i, 0, bundle.major);
    for (size_t a = 0; a < bundle.minors.size(); ++a) {
      row(i, static_cast<int>(a) + 1, bundle.minors[a]);
    }
  }
}

}  // namespace mfglq
