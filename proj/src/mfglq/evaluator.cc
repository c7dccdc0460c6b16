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

#include "mfglq/evaluator.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mfglq/rng.h"

namespace mfglq {
namespace {

void CheckInit(const MajorMinorLqModel& model, const InitialLaw& init) {
  if (init.major_mean.size() != model.dims.d0 || init.major_cov.rows() != model.dims.d0 ||
      init.major_cov.cols() != model.dims.d0 || init.minor_mean.size() != model.dims.d ||
      init.minor_cov.rows() != model.dims.d || init.minor_cov.cols() != model.dims.d) {
    throw std::invalid_argument("initial law does not match model dimensions");
  }
}

double Trapezoid(const TimeGrid& grid, const std::vector<double>& f) {
  double sum = 0.5 * (f.front() + f.back());
  for (size_t i = 1; i + 1 < f.size(); ++i) sum += f[i];
  return sum * grid.dt();
}

// E[(a + G Z)' W (a + G Z)] for Z with the given mean and covariance.
double QuadraticMoment(const VectorXd& a, const MatrixXd& G, const MatrixXd& W,
                       const VectorXd& mean, const MatrixXd& cov) {
  const VectorXd mu = a + G * mean;
  return mu.dot(W * mu) + (G.transpose() * W * G * cov).trace();
}

MatrixPath RandomPath(const MatrixPath& like, NormalStream& rng) {
  const TimeGrid& grid = like.grid();
  const double T = grid.horizon();
  MatrixXd c0(like.rows(), like.cols()), c1(like.rows(), like.cols()),
      c2(like.rows(), like.cols());
  for (auto* c : {&c0, &c1, &c2}) {
    for (Eigen::Index i = 0; i < c->size(); ++i) {
      c->data()[i] = 2.0 * rng.NextUniform() - 1.0;
    }
  }
  std::vector<MatrixXd> values(grid.n_nodes());
  for (int i = 0; i < grid.n_nodes(); ++i) {
    const double phase = std::numbers::pi * grid.time(i) / T;
    values[i] = c0 + std::cos(phase) * c1 + std::sin(phase) * c2;
  }
  return MatrixPath(grid, std::move(values));
}

}  // namespace

MomentPath PropagateMoments(const AffineDrift& drift, const MatrixXd& noise,
                            const VectorXd& init_mean, const MatrixXd& init_cov,
                            const TimeGrid& grid, Scheme scheme) {
  const int dim = init_mean.size();
  if (init_cov.rows() != dim || init_cov.cols() != dim || noise.rows() != dim) {
    throw std::invalid_argument("PropagateMoments: dimension mismatch");
  }
  const MatrixXd diffusion = noise * noise.transpose();
  // State [mean, cov], dim x (1 + dim).
  auto rhs = [&](double t, const MatrixXd& x) -> MatrixXd {
    const Environment env = drift(t);
    MatrixXd out(dim, dim + 1);
    out.col(0) = env.drift * x.col(0) + env.offset;
    const MatrixXd AS = env.drift * x.rightCols(dim);
    out.rightCols(dim) = AS + AS.transpose() + diffusion;
    return out;
  };
  auto symmetrize = [dim](MatrixXd& x) {
    const MatrixXd c = x.rightCols(dim);
    x.rightCols(dim) = 0.5 * (c + c.transpose());
  };
  MatrixXd init(dim, dim + 1);
  init << init_mean, init_cov;
  const MatrixPath joint = IntegrateForward(rhs, init, grid, scheme, symmetrize);
  std::vector<MatrixXd> mean(joint.size()), cov(joint.size());
  for (int i = 0; i < joint.size(); ++i) {
    mean[i] = joint[i].col(0);
    cov[i] = joint[i].rightCols(dim);
  }
  return {MatrixPath(grid, std::move(mean)), MatrixPath(grid, std::move(cov))};
}

double MajorCost(const MajorMinorLqModel& model, const MajorGains& major,
                 const MinorGains& minor, const InitialLaw& init) {
  CheckInit(model, init);
  const BlockSystem blocks = AssembleBlocks(model);
  const FeedbackStrategy strategy{major, minor};
  const TimeGrid& grid = strategy.grid();
  const MomentPath moments = PropagateMoments(
      [&](double t) { return FullEnvironmentAt(model, blocks, strategy, t); },
      blocks.DD0, init.ReducedMean(), init.ReducedCov(), grid);

  std::vector<double> integrand(grid.n_nodes());
  const int n = blocks.n;
  for (int i = 0; i < grid.n_nodes(); ++i) {
    const double t = grid.time(i);
    const VectorXd m = moments.mean[i];
    const MatrixXd& cov = moments.cov[i];
    const VectorXd eta0 = model.eta0(t);
    double v = QuadraticMoment(VectorXd::Zero(n), MatrixXd::Identity(n, n), blocks.FF0, m, cov);
    v += 2.0 * m.dot(blocks.f0(t)) + eta0.dot(model.Q0 * eta0);
    v += QuadraticMoment(major.phi0[i], major.StateGain(i), model.R0, m, cov);
    integrand[i] = v;
  }
  return Trapezoid(grid, integrand);
}

double MinorCost(const MajorMinorLqModel& model, const MinorGains& deviation,
                 const FeedbackStrategy& strategy, const InitialLaw& init) {
  CheckInit(model, init);
  const BlockSystem blocks = AssembleBlocks(model);
  const ControlWeights w = ComputeControlWeights(model, blocks);
  const TimeGrid& grid = strategy.grid();
  if (!(deviation.phi0.grid() == grid)) {
    throw std::invalid_argument("deviation and strategy live on different grids");
  }
  const int d = model.dims.d, n = blocks.n, dim = d + n;

  // Z = [Xtilde; Xbar; X0].
  auto drift = [&](double t) -> Environment {
    const Environment env = FullEnvironmentAt(model, blocks, strategy, t);
    Environment out{MatrixXd::Zero(dim, dim), VectorXd::Zero(dim)};
    out.drift.topLeftCorner(d, d) = model.L + model.B * deviation.phi1.Sample(t);
    out.drift.topRightCorner(d, n) = w.FG + model.B * deviation.EnvironmentGainAt(t);
    out.drift.bottomRightCorner(n, n) = env.drift;
    out.offset.topRows(d) = model.B * deviation.phi0.Sample(t);
    out.offset.bottomRows(n) = env.offset;
    return out;
  };
  MatrixXd noise = MatrixXd::Zero(dim, model.dims.m + model.dims.m0);
  noise.topLeftCorner(d, model.dims.m) = model.D;
  noise.bottomRightCorner(n, model.dims.m0) = blocks.DD0;
  VectorXd mean0(dim);
  mean0 << init.minor_mean, init.ReducedMean();
  MatrixXd cov0 = MatrixXd::Zero(dim, dim);
  cov0.topLeftCorner(d, d) = init.minor_cov;
  cov0.bottomRightCorner(n, n) = init.ReducedCov();
  const MomentPath moments = PropagateMoments(drift, noise, mean0, cov0, grid);

  // Tracking error e = [I, -[H1, H]] Z - eta.
  MatrixXd E(d, dim);
  E << MatrixXd::Identity(d, d), -w.H1H;
  std::vector<double> integrand(grid.n_nodes());
  for (int i = 0; i < grid.n_nodes(); ++i) {
    const VectorXd m = moments.mean[i];
    const MatrixXd& cov = moments.cov[i];
    double v = QuadraticMoment(-model.eta, E, model.Q, m, cov);
    MatrixXd gain(model.dims.k, dim);
    gain << deviation.phi1[i], deviation.EnvironmentGain(i);
    v += QuadraticMoment(deviation.phi0[i], gain, model.R, m, cov);
    integrand[i] = v;
  }
  return Trapezoid(grid, integrand);
}

std::string ToString(Player player) {
  return player == Player::kMajor ? "major" : "minor";
}

double NashGapReport::MaxAbsFirstDerivative() const {
  double worst = 0.0;
  for (double v : first_derivative) worst = std::max(worst, std::abs(v));
  return worst;
}

double NashGapReport::MinSecondDifference() const {
  if (second_difference.empty()) return 0.0;
  return *std::min_element(second_difference.begin(), second_difference.end());
}

bool NashGapReport::Passes(double tolerance) const {
  return MaxAbsFirstDerivative() <= tolerance * std::max(1.0, std::abs(baseline_cost)) &&
         MinSecondDifference() >= 0.0;
}

MajorGains RandomMajorDirection(const MajorGains& like, std::uint64_t key) {
  NormalStream rng(key);
  MajorGains dir{RandomPath(like.phi0, rng), RandomPath(like.phi1, rng),
                 RandomPath(like.phi2, rng)};
  const double scale = std::max({dir.phi0.SupNorm(), dir.phi1.SupNorm(), dir.phi2.SupNorm()});
  return dir.Combine(1.0 / scale, dir, 0.0);
}

MinorGains RandomMinorDirection(const MinorGains& like, std::uint64_t key) {
  NormalStream rng(key);
  MinorGains dir{RandomPath(like.phi0, rng), RandomPath(like.phi1, rng),
                 RandomPath(like.phi2, rng), RandomPath(like.phi3, rng)};
  const double scale = std::max({dir.phi0.SupNorm(), dir.phi1.SupNorm(),
                                 dir.phi2.SupNorm(), dir.phi3.SupNorm()});
  return dir.Combine(1.0 / scale, dir, 0.0);
}

NashGapReport NashGap(const MajorMinorLqModel& model,
                      const FeedbackStrategy& strategy, Player player,
                      int directions, double epsilon, std::uint64_t seed,
                      const InitialLaw& init) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("NashGap needs epsilon > 0");
  if (directions < 1) throw std::invalid_argument("NashGap needs at least one direction");
  NashGapReport report;
  report.player = player;
  report.directions = directions;
  report.epsilon = epsilon;

  auto cost = [&](double eps, std::uint64_t key) {
    if (player == Player::kMajor) {
      const MajorGains dir = RandomMajorDirection(strategy.major, key);
      return MajorCost(model, strategy.major.Combine(1.0, dir, eps), strategy.minor, init);
    }
    const MinorGains dir = RandomMinorDirection(strategy.minor, key);
    return MinorCost(model, strategy.minor.Combine(1.0, dir, eps), strategy, init);
  };
  report.baseline_cost =
      player == Player::kMajor
          ? MajorCost(model, strategy.major, strategy.minor, init)
          : MinorCost(model, strategy.minor, strategy, init);
  for (int j = 0; j < directions; ++j) {
    const std::uint64_t key = StreamKey(seed, player == Player::kMajor ? 0 : 1, j);
    const double plus = cost(epsilon, key);
    const double minus = cost(-epsilon, key);
    report.first_derivative.push_back((plus - minus) / (2.0 * epsilon));
    report.second_difference.push_back(plus - 2.0 * report.baseline_cost + minus);
  }
  return report;
}

}  // namespace mfglq
