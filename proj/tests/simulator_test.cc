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

#include <sstream>

#include <gtest/gtest.h>

#include "mfglq/equilibrium.h"
#include "mfglq/evaluator.h"
#include "mfglq/flocking.h"
#include "mfglq/rng.h"
#include "test_util.h"

namespace mfglq {
namespace {

SimConfig Config(int N, const TimeGrid& grid, std::uint64_t seed, const InitialLaw& init) {
  SimConfig c;
  c.N = N;
  c.grid = grid;
  c.master_seed = seed;
  c.init = init;
  return c;
}

MajorMinorLqModel Noiseless(MajorMinorLqModel m) {
  m.D0.setZero();
  m.D.setZero();
  return m;
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  NormalStream a(StreamKey(1, 2, 3)), b(StreamKey(1, 2, 3)), c(StreamKey(1, 3, 2));
  for (int i = 0; i < 10; ++i) {
    const double x = a.NextNormal();
    EXPECT_EQ(x, b.NextNormal());
    EXPECT_NE(x, c.NextNormal());
  }
  EXPECT_NE(StreamKey(0, 0, 1), StreamKey(0, 1, 0));
}

TEST(Rng, NormalMoments) {
  NormalStream rng(StreamKey(9, 0, 0));
  const int n = 200000;
  double s = 0.0, s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.NextNormal();
    s += x;
    s2 += x * x;
    s4 += x * x * x * x;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.01);
  EXPECT_NEAR(s4 / n, 3.0, 0.06);
}

TEST(FiniteGame, ZeroEverythingStaysAtZero) {
  MajorMinorLqModel m = Noiseless(testing::RandomModel(40, true));
  m.L0.setZero();
  m.L.setZero();
  m.F0.setZero();
  m.F.setZero();
  m.G.setZero();
  const TimeGrid grid(1.0, 50);
  const InitialLaw init = InitialLaw::Deterministic(VectorXd::Zero(2), VectorXd::Zero(2));
  const PathBundle b = SimulateFiniteGame(m, FeedbackStrategy::Zero(m.dims, grid),
                                          Config(3, grid, 1, init));
  EXPECT_EQ(b.major.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(b.empirical_mean.cwiseAbs().maxCoeff(), 0.0);
}

TEST(FiniteGame, DeterministicAndMeanIdentity) {
  const MajorMinorLqModel m = testing::RandomModel(41, true);
  const TimeGrid grid(1.0, 200);
  const FeedbackStrategy eq = SolveClosedLoop(m, grid).strategy;
  const SimConfig config = Config(7, grid, 99, testing::RandomInit(42, m.dims));
  const PathBundle a = SimulateFiniteGame(m, eq, config);
  const PathBundle b = SimulateFiniteGame(m, eq, config);
  EXPECT_EQ(a.major, b.major);
  EXPECT_EQ(a.major_noise, b.major_noise);
  EXPECT_EQ(a.minor_noise_checksum, b.minor_noise_checksum);
  for (int r = 0; r < 7; ++r) EXPECT_EQ(a.minors[r], b.minors[r]);

  for (int i = 0; i < grid.n_nodes(); ++i) {
    VectorXd mean = VectorXd::Zero(2);
    for (const MatrixXd& p : a.minors) mean += p.col(i);
    EXPECT_LE((mean / 7.0 - a.empirical_mean.col(i)).cwiseAbs().maxCoeff(), 1e-12);
  }
  SimConfig other = config;
  other.master_seed = 100;
  EXPECT_NE(SimulateFiniteGame(m, eq, other).major, a.major);
}

TEST(FiniteGame, RecordedSubsetKeepsTheFullMean) {
  const MajorMinorLqModel m = testing::RandomModel(43, true);
  const TimeGrid grid(1.0, 100);
  const FeedbackStrategy eq = SolveClosedLoop(m, grid).strategy;
  SimConfig config = Config(9, grid, 5, testing::RandomInit(44, m.dims));
  const PathBundle all = SimulateFiniteGame(m, eq, config);
  config.recorded_minors = 2;
  config.record_controls = false;
  const PathBundle some = SimulateFiniteGame(m, eq, config);
  ASSERT_EQ(some.minors.size(), 2u);
  EXPECT_EQ(some.minors[1], all.minors[1]);
  EXPECT_EQ(some.empirical_mean, all.empirical_mean);
}

TEST(FiniteGame, DoubledFlockingStatesKeepEqualHalves) {
  const FlockingParams p = testing::DemoFlocking();
  const MajorMinorLqModel m = EmbedFlocking(p);
  const TimeGrid grid(5.0, 1000);
  const FeedbackStrategy eq = SolveClosedLoop(m, grid).strategy;
  const InitialLaw init = EmbedInitialVelocities(VectorXd::Zero(2), 0.1 * MatrixXd::Identity(2, 2),
                                                 VectorXd::Ones(2), MatrixXd::Identity(2, 2));
  const PathBundle b = SimulateFiniteGame(m, eq, Config(10, grid, 3, init));
  EXPECT_LE((b.major.topRows(2) - b.major.bottomRows(2)).cwiseAbs().maxCoeff(), 1e-12);
  for (const MatrixXd& x : b.minors) {
    EXPECT_LE((x.topRows(2) - x.bottomRows(2)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(FiniteGame, SingleNoiselessMinorFollowsTheOde) {
  MajorMinorLqModel m = Noiseless(testing::RandomModel(45, true));
  const TimeGrid grid(1.0, 1000);
  const FeedbackStrategy eq = SolveClosedLoop(m, grid).strategy;
  const InitialLaw init = testing::RandomInit(46, m.dims);
  const InitialLaw point = InitialLaw::Deterministic(init.major_mean, init.minor_mean);
  const PathBundle b = SimulateFiniteGame(m, eq, Config(1, grid, 1, point));

  // With N = 1 the empirical mean is the minor itself.
  auto rhs = [&](double t, const MatrixXd& z) -> MatrixXd {
    const VectorXd x0 = z.topRows(2), x = z.bottomRows(2);
    const VectorXd a0 = eq.major.phi0.Sample(t) + eq.major.phi1.Sample(t) * x0 +
                        eq.major.phi2.Sample(t) * x;
    const VectorXd a = eq.minor.phi0.Sample(t) + eq.minor.phi1.Sample(t) * x +
                       eq.minor.phi2.Sample(t) * x0 + eq.minor.phi3.Sample(t) * x;
    MatrixXd out(4, 1);
    out << m.L0 * x0 + m.B0 * a0 + m.F0 * x, m.L * x + m.B * a + m.F * x + m.G * x0;
    return out;
  };
  MatrixXd z0(4, 1);
  z0 << point.major_mean, point.minor_mean;
  const MatrixPath ref = IntegrateForward(rhs, z0, grid);
  double err = 0.0;
  for (int i = 0; i < grid.n_nodes(); ++i) {
    err = std::max(err, (ref[i].bottomRows(2) - b.minors[0].col(i)).cwiseAbs().maxCoeff());
  }
  EXPECT_LE(err, 10.0 * grid.dt());
  EXPECT_GT(err, 0.0);
}

TEST(FiniteGame, NonFiniteStateNamesNodeAndAgent) {
  MajorMinorLqModel m = Noiseless(testing::RandomModel(47, false));
  m.L = 1e6 * MatrixXd::Identity(2, 2);
  const TimeGrid grid(1.0, 100);
  const InitialLaw init = InitialLaw::Deterministic(VectorXd::Zero(2), VectorXd::Ones(2));
  try {
    SimulateFiniteGame(m, FeedbackStrategy::Zero(m.dims, grid), Config(2, grid, 1, init));
    FAIL();
  } catch (const SimulationError& e) {
    EXPECT_NE(std::string(e.what()).find("for agent 1"), std::string::npos) << e.what();
  }
}

TEST(ConditionalEnsemble, SharesTheMajorNoiseOnly) {
  const MajorMinorLqModel m = EmbedFlocking(testing::DemoFlocking());
  const TimeGrid grid(5.0, 500);
  const FeedbackStrategy eq = SolveClosedLoop(m, grid).strategy;
  const InitialLaw init = EmbedInitialVelocities(VectorXd::Zero(2), MatrixXd::Zero(2, 2),
                                                 VectorXd::Zero(2), MatrixXd::Identity(2, 2));
  const std::vector<PathBundle> ens =
      SimulateConditionalEnsemble(m, eq, Config(5, grid, 17, init), 2);
  ASSERT_EQ(ens.size(), 2u);
  EXPECT_EQ(ens[0].major_noise, ens[1].major_noise);
  for (int a = 0; a < 5; ++a) {
    EXPECT_NE(ens[0].minor_noise_checksum[a], ens[1].minor_noise_checksum[a]);
  }
  EXPECT_THROW(SimulateConditionalEnsemble(m, eq, Config(5, grid, 17, init), 1),
               std::invalid_argument);
}

TEST(ConditionalEnsemble, NoiselessMinorsGiveIdenticalReplicates) {
  MajorMinorLqModel m = testing::RandomModel(48, true);
  m.D.setZero();
  const TimeGrid grid(1.0, 100);
  const FeedbackStrategy eq = SolveClosedLoop(m, grid).strategy;
  InitialLaw init = testing::RandomInit(49, m.dims);
  init.minor_cov.setZero();
  const std::vector<PathBundle> ens =
      SimulateConditionalEnsemble(m, eq, Config(4, grid, 2, init), 2);
  EXPECT_EQ(ens[0].major, ens[1].major);
  for (int a = 0; a < 4; ++a) EXPECT_EQ(ens[0].minors[a], ens[1].minors[a]);
}

TEST(MeanField, ConditionalMeanMatchesMomentEquation) {
  MajorMinorLqModel m = testing::RandomModel(50, true);
  m.D0.setZero();
  const TimeGrid grid(1.0, 1000);
  const FeedbackStrategy eq = SolveClosedLoop(m, grid).strategy;
  const InitialLaw init = testing::RandomInit(51, m.dims);
  const InitialLaw point = InitialLaw::Deterministic(init.major_mean, init.minor_mean);
  const MeanFieldPaths p = SimulateMeanField(m, eq, 8, grid, point);
  const BlockSystem blocks = AssembleBlocks(m);
  const MomentPath mp = PropagateMoments(
      [&](double t) { return FullEnvironmentAt(m, blocks, eq, t); }, blocks.DD0,
      point.ReducedMean(), point.ReducedCov(), grid, Scheme::kEuler);
  for (int i = 0; i < grid.n_nodes(); ++i) {
    EXPECT_LE((mp.mean[i].topRows(2) - p.cond_mean.col(i)).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LE((mp.mean[i].bottomRows(2) - p.major.col(i)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(MeanField, ZeroStrategyKeepsTheMeanAtZero) {
  MajorMinorLqModel m = testing::RandomModel(52, true);
  m.G.setZero();
  const TimeGrid grid(1.0, 100);
  InitialLaw init = testing::RandomInit(53, m.dims);
  init.minor_mean.setZero();
  const MeanFieldPaths p =
      SimulateMeanField(m, FeedbackStrategy::Zero(m.dims, grid), 4, grid, init);
  EXPECT_EQ(p.cond_mean.cwiseAbs().maxCoeff(), 0.0);
}

TEST(MeanField, FinalMeanMatchesEvaluatorInDistribution) {
  const MajorMinorLqModel m = EmbedFlocking(testing::DemoFlocking());
  const TimeGrid grid(5.0, 1000);
  const FeedbackStrategy eq = SolveClosedLoop(m, grid).strategy;
  const InitialLaw init = EmbedInitialVelocities(VectorXd::Zero(2), MatrixXd::Zero(2, 2),
                                                 VectorXd::Zero(2), MatrixXd::Identity(2, 2));
  const BlockSystem blocks = AssembleBlocks(m);
  const MomentPath mp = PropagateMoments(
      [&](double t) { return FullEnvironmentAt(m, blocks, eq, t); }, blocks.DD0,
      init.ReducedMean(), init.ReducedCov(), grid, Scheme::kEuler);
  const int seeds = 100;
  VectorXd sum = VectorXd::Zero(4), sum_sq = VectorXd::Zero(4);
  for (int s = 0; s < seeds; ++s) {
    SimConfig c = Config(20, grid, s, init);
    c.recorded_minors = 0;
    c.record_controls = false;
    const VectorXd x = SimulateFiniteGame(m, eq, c).empirical_mean.col(grid.n_steps());
    sum += x;
    sum_sq += x.cwiseProduct(x);
  }
  const VectorXd mean = sum / seeds;
  const VectorXd se = ((sum_sq / seeds - mean.cwiseProduct(mean)) / (seeds - 1)).cwiseSqrt();
  const VectorXd exact = mp.mean[grid.n_steps()].topRows(4);
  for (int c = 0; c < 4; ++c) EXPECT_LE(std::abs(mean[c] - exact[c]), 3.0 * se[c]) << c;
}

TEST(PathBundle, CsvLayout) {
  MajorMinorLqModel m = Noiseless(testing::RandomModel(54, false, 1, 1));
  const TimeGrid grid(1.0, 2);
  const InitialLaw init = InitialLaw::Deterministic(VectorXd::Ones(1), VectorXd::Zero(1));
  const PathBundle b =
      SimulateFiniteGame(m, FeedbackStrategy::Zero(m.dims, grid), Config(1, grid, 1, init));
  std::ostringstream os;
  WritePathBundleCsv(os, b);
  const std::string csv = os.str();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,agent_id,x_0");
  EXPECT_NE(csv.find("\n0,0,1\n0,1,0\n0.5,0,"), std::string::npos);
}

}  // namespace
}  // namespace mfglq
