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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and runtime budgets are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "../test_util.h"
#include "mfglq/commands.h"
#include "mfglq/equilibrium.h"
#include "mfglq/evaluator.h"
#include "mfglq/flocking.h"
#include "mfglq/riccati.h"
#include "mfglq/simulator.h"

namespace mfglq {
namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_seconds;  // <= 0: no runtime budget
  std::function<Verdict()> run;
};

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

// Demo flocking setup: leader at rest, followers with N(0, I) velocities.
constexpr int kDemoSteps = 5000;

InitialLaw DemoInit() {
  return EmbedInitialVelocities(VectorXd::Zero(2), MatrixXd::Zero(2, 2), VectorXd::Zero(2),
                                MatrixXd::Identity(2, 2));
}

const ClosedLoopSolution& DemoSolution() {
  static const ClosedLoopSolution sol =
      SolveClosedLoop(EmbedFlocking(testing::DemoFlocking()), TimeGrid(5.0, kDemoSteps));
  return sol;
}

Verdict RiccatiTanh() {
  const TimeGrid grid(1.0, 1000);
  const MatrixXd one = MatrixXd::Ones(1, 1);
  const MatrixPath S = SolveSymmetricRiccati([](double) { return MatrixXd::Zero(1, 1); }, one,
                                             [&](double) { return one; }, grid);
  double err = 0.0;
  for (int i = 0; i < grid.n_nodes(); ++i) {
    err = std::max(err, std::abs(S[i](0, 0) - std::tanh(1.0 - grid.time(i))));
  }
  return {err <= 1e-8, Fmt("max |S - tanh(1-t)| = %.3e (tol 1e-8)", err)};
}

Verdict LqrDecoupling() {
  double worst = 0.0;
  for (std::uint64_t seed : {201, 202}) {
    const MajorMinorLqModel m = testing::RandomModel(seed, false);
    const TimeGrid grid(m.T, 1000);
    const VectorXd eta0 = m.eta0(0.0);
    const int d0 = m.dims.d0, d = m.dims.d;
    std::vector<MatrixXd> major, minor;
    for (int i = 0; i < grid.n_nodes(); ++i) {
      major.push_back(testing::TrackingGain(m.L0, m.B0, m.Q0, m.R0, eta0, m.T, grid.time(i)));
      minor.push_back(testing::TrackingGain(m.L, m.B, m.Q, m.R, m.eta, m.T, grid.time(i)));
    }
    for (const FeedbackStrategy& s :
         {SolveClosedLoop(m, grid).strategy, SolveOpenLoop(m, grid).strategy}) {
      for (int i = 0; i < grid.n_nodes(); ++i) {
        const double e = std::max(
            {(s.major.phi1[i] - major[i].leftCols(d0)).cwiseAbs().maxCoeff(),
             (s.major.phi0[i] - major[i].rightCols(1)).cwiseAbs().maxCoeff(),
             s.major.phi2[i].cwiseAbs().maxCoeff(),
             (s.minor.phi1[i] - minor[i].leftCols(d)).cwiseAbs().maxCoeff(),
             (s.minor.phi0[i] - minor[i].rightCols(1)).cwiseAbs().maxCoeff(),
             s.minor.phi2[i].cwiseAbs().maxCoeff(), s.minor.phi3[i].cwiseAbs().maxCoeff()});
        worst = std::max(worst, e);
      }
    }
  }
  return {worst <= 1e-8,
          Fmt("sup |gain - LQR gain| = %.3e over open and closed loop, 2 models (tol 1e-8)",
              worst)};
}

Verdict FixedPoint() {
  const MajorMinorLqModel m = EmbedFlocking(testing::DemoFlocking());
  const ClosedLoopSolution& sol = DemoSolution();
  const IterationResult it =
      BestResponseIteration(m, FeedbackStrategy::Zero(m.dims, sol.strategy.grid()));
  const double gap = it.strategy.SupDistance(sol.strategy);
  const bool pass = sol.residual <= 1e-6 && it.converged && it.iterations() <= 50 && gap <= 1e-5;
  return {pass, Fmt("residual %.3e (tol 1e-6); iteration: %.0f iterations, sup gap %.3e "
                    "(tol 1e-5, <= 50 iterations)",
                    sol.residual, it.iterations(), gap)};
}

Verdict NashCertification() {
  const MajorMinorLqModel m = EmbedFlocking(testing::DemoFlocking());
  const FeedbackStrategy& eq = DemoSolution().strategy;
  const InitialLaw init = DemoInit();
  constexpr int kDirections = 5;
  constexpr double kTol = 1e-4;
  double worst_rel = 0.0, min_second = INFINITY;
  bool halved_fail = true;
  for (Player p : {Player::kMajor, Player::kMinor}) {
    const NashGapReport r = NashGap(m, eq, p, kDirections, 1e-3, 7, init);
    worst_rel = std::max(worst_rel,
                         r.MaxAbsFirstDerivative() / std::max(1.0, std::abs(r.baseline_cost)));
    min_second = std::min(min_second, r.MinSecondDifference());
    const NashGapReport h = NashGap(m, eq.Scaled(0.5), p, kDirections, 1e-3, 7, init);
    halved_fail = halved_fail && !h.Passes(kTol);
  }
  const bool pass = worst_rel <= kTol && min_second >= 0.0 && halved_fail;
  return {pass, Fmt("max relative dJ %.3e (tol 1e-4), min second difference %.3e (>= 0), "
                    "5 directions per player, halved gains fail: ",
                    worst_rel, min_second) +
                    (halved_fail ? "yes" : "no")};
}

Verdict OpenLoopConsistency() {
  const MajorMinorLqModel m = EmbedFlocking(testing::DemoFlocking());
  const OpenLoopSolution sol = SolveOpenLoop(m, TimeGrid(5.0, kDemoSteps));
  return {sol.consistency_error <= 1e-6,
          Fmt("consistency error %.3e (tol 1e-6)", sol.consistency_error)};
}

Verdict MomentVsMonteCarlo() {
  struct Case {
    MajorMinorLqModel model;
    InitialLaw init;
    int steps;
  };
  const MajorMinorLqModel a = testing::RandomModel(301, true);
  const MajorMinorLqModel b = testing::RandomModel(303, true, 1, 3, 2.0);
  const std::vector<Case> cases = {
      {a, testing::RandomInit(302, a.dims), 1000},
      {b, testing::RandomInit(304, b.dims), 2000},
      {EmbedFlocking(testing::DemoFlocking()), DemoInit(), kDemoSteps},
  };
  constexpr int kPaths = 10000;
  bool pass = true;
  double worst = 0.0;
  for (const Case& c : cases) {
    const TimeGrid grid(c.model.T, c.steps);
    const FeedbackStrategy eq = SolveClosedLoop(c.model, grid).strategy;
    const double exact_major = MajorCost(c.model, eq.major, eq.minor, c.init);
    const double exact_minor = MinorCost(c.model, eq.minor, eq, c.init);
    double s0 = 0, s0q = 0, s = 0, sq = 0;
    for (int p = 0; p < kPaths; ++p) {
      const testing::PathCosts pc = testing::RealizedCosts(
          c.model, SimulateMeanField(c.model, eq, 1000 + p, grid, c.init), grid);
      s0 += pc.major;
      s0q += pc.major * pc.major;
      s += pc.minor;
      sq += pc.minor * pc.minor;
    }
    auto z = [&](double sum, double sum_sq, double exact) {
      const double mean = sum / kPaths;
      const double se = std::sqrt((sum_sq / kPaths - mean * mean) / (kPaths - 1));
      return std::abs(mean - exact) / se;
    };
    const double z0 = z(s0, s0q, exact_major), z1 = z(s, sq, exact_minor);
    worst = std::max({worst, z0, z1});
    pass = pass && z0 <= 3.0 && z1 <= 3.0;
  }
  return {pass, Fmt("largest |MC - exact| = %.2f standard errors (tol 3) over 3 models, "
                    "both players, 1e4 paths",
                    worst)};
}

Verdict MeanFieldConsistency() {
  const MajorMinorLqModel m = EmbedFlocking(testing::DemoFlocking());
  const FeedbackStrategy& eq = DemoSolution().strategy;
  const TimeGrid& grid = eq.grid();
  const InitialLaw init = DemoInit();
  const std::vector<int> sizes = {10, 40, 160};
  constexpr int kSeeds = 20;
  std::vector<double> err(sizes.size(), 0.0);
  for (int seed = 0; seed < kSeeds; ++seed) {
    const MeanFieldPaths limit = SimulateMeanField(m, eq, seed, grid, init);
    for (size_t j = 0; j < sizes.size(); ++j) {
      SimConfig c;
      c.N = sizes[j];
      c.grid = grid;
      c.master_seed = seed;
      c.init = init;
      c.recorded_minors = 0;
      c.record_controls = false;
      const PathBundle b = SimulateFiniteGame(m, eq, c);
      double sup = 0.0;
      for (int i = 0; i < grid.n_nodes(); ++i) {
        sup = std::max(sup, (b.empirical_mean.col(i).head(2) - limit.cond_mean.col(i).head(2)).norm());
      }
      err[j] += sup / kSeeds;
    }
  }
  const double ratio = err[2] / err[0];
  const bool pass = err[0] > err[1] && err[1] > err[2] && ratio >= 0.15 && ratio <= 0.7;
  return {pass, Fmt("sup error N=10: %.4f, N=40: %.4f, N=160: %.4f; ratio %.3f (in [0.15, 0.7])",
                    err[0], err[1], err[2], ratio)};
}

double Spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<int> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (size_t k = 0; k < idx.size(); ++k) r[idx[k]] = static_cast<double>(k);
    return r;
  };
  const std::vector<double> rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double d2 = 0.0;
  for (size_t k = 0; k < x.size(); ++k) d2 += (rx[k] - ry[k]) * (rx[k] - ry[k]);
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

Verdict PropagationOfChaos() {
  const MajorMinorLqModel m = EmbedFlocking(testing::DemoFlocking());
  const FeedbackStrategy& eq = DemoSolution().strategy;
  const std::vector<int> sizes = {5, 10, 20, 50, 100};
  std::vector<double> n, value;
  std::string detail = "meanAbsOffDiag";
  for (int N : sizes) {
    const app::ChaosRow row = app::ChaosCorrelation(m, eq, DemoInit(), eq.grid(), 42, N, 500, 5);
    n.push_back(N);
    value.push_back(row.mean_abs_off_diag);
    detail += " N=" + std::to_string(N) + ": " + Fmt("%.4f", row.mean_abs_off_diag) + ";";
  }
  const double rho = Spearman(n, value);
  const bool pass = value.back() < 0.5 * value.front() && rho <= -0.8;
  return {pass, detail + Fmt(" Spearman %.2f (<= -0.8), N=100/N=5 = %.3f (< 0.5)", rho,
                             value.back() / value.front())};
}

Verdict TrajectoryComparatives() {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "mfglq_acceptance_traj";
  nlohmann::json doc = {
      {"flocking", {{"lambda0", 0.6}, {"lambda1", 0.2}, {"l0", 0.5}, {"l1", 0.3}, {"T", 5.0}}},
      {"grid", {{"n_steps", kDemoSteps}}},
      {"simulation", {{"seed", 42}}},
      {"experiment",
       {{"trajectories",
         {{"N", 10},
          {"seeds", 10},
          {"panels",
           {{{"name", "lambda_high"}, {"lambda0", 0.8}, {"lambda1", 0.1}},
            {{"name", "lambda_low"}, {"lambda0", 0.1}, {"lambda1", 0.8}},
            {{"name", "l_high"}, {"l0", 0.8}, {"l1", 0.1}},
            {{"name", "l_low"}, {"l0", 0.1}, {"l1", 0.8}}}}}}}},
      {"output", {{"dir", dir.string()}}}};
  const std::vector<app::PanelMetrics> p = app::CmdTrajectories(app::ParseConfig(doc));
  std::filesystem::remove_all(dir);
  const bool leader = p[0].leader_tracking < p[1].leader_tracking;
  const bool flock = p[2].flock_cohesion < p[3].flock_cohesion;
  return {leader && flock,
          Fmt("|V0 - nu|: %.4f (lambda0=0.8) vs %.4f (lambda0=0.1); |Vbar - V0|: %.4f (l0=0.8) "
              "vs %.4f (l0=0.1); 10 seeds",
              p[0].leader_tracking, p[1].leader_tracking, p[2].flock_cohesion,
              p[3].flock_cohesion)};
}

}  // namespace
}  // namespace mfglq

int main() {
  using mfglq::Criterion;
  const std::vector<Criterion> criteria = {
      {"riccati-analytic-oracle", 1.0, mfglq::RiccatiTanh},
      {"lqr-decoupling-oracle", 5.0, mfglq::LqrDecoupling},
      {"fixed-point-agreement", 30.0, mfglq::FixedPoint},
      {"nash-certification", 60.0, mfglq::NashCertification},
      {"open-loop-consistency", 0.0, mfglq::OpenLoopConsistency},
      {"moment-vs-monte-carlo", 0.0, mfglq::MomentVsMonteCarlo},
      {"mean-field-consistency", 120.0, mfglq::MeanFieldConsistency},
      {"propagation-of-chaos", 600.0, mfglq::PropagationOfChaos},
      {"trajectory-comparatives", 120.0, mfglq::TrajectoryComparatives},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    mfglq::Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = c.budget_seconds <= 0.0 || secs < c.budget_seconds;
    const bool pass = v.pass && in_budget;
    failures += pass ? 0 : 1;
    std::string budget = c.budget_seconds > 0.0
                             ? mfglq::Fmt("%.1fs, budget %.0fs", secs, c.budget_seconds)
                             : mfglq::Fmt("%.1fs", secs);
    std::printf("[%s] %s: %s (%s)\n", pass ? "PASS" : "FAIL", c.name.c_str(), v.detail.c_str(),
                budget.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
