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

#include "mfglq/commands.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

namespace mfglq::app {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json SmallModel() {
  return json::parse(R"({
    "model": {
      "L0": [[-0.2]], "B0": [[1.0]], "D0": [[0.3]], "F0": [[0.1]],
      "L": [[0.1]], "B": [[1.0]], "D": [[0.4]], "F": [[-0.2]], "G": [[0.3]],
      "Q0": [[1.0]], "Q": [[2.0]], "R0": [[1.0]], "R": [[0.5]],
      "H0": [[0.5]], "H": [[0.4]], "H1": [[0.2]],
      "eta0": [1.0], "eta": [-0.5], "T": 1.0,
      "init": {"major_mean": [0.5], "major_std": 0.2, "minor_mean": [0.0], "minor_std": 1.0}
    },
    "grid": {"n_steps": 200},
    "simulation": {"N": 4, "seed": 3},
    "experiment": {
      "chaos": {"flock_sizes": [3, 6], "replicates": 20},
      "nash": {"directions": 3}
    }
  })");
}

json Flocking() {
  return json::parse(R"({
    "flocking": {"lambda0": 0.6, "lambda1": 0.2, "l0": 0.5, "l1": 0.3, "T": 5.0},
    "grid": {"n_steps": 500},
    "experiment": {"trajectories": {"N": 3, "seeds": 2,
      "panels": [{"name": "a", "lambda0": 0.8, "lambda1": 0.1}]}}
  })");
}

class CommandTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mfglq_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunConfig Load(json doc) {
    doc["output"]["dir"] = dir_.string();
    return ParseConfig(doc);
  }

  std::string Read(const std::string& file) {
    std::ifstream in(dir_ / file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

TEST(Config, FlockingDefaults) {
  json doc = Flocking();
  doc.erase("grid");
  const RunConfig c = ParseConfig(doc);
  EXPECT_TRUE(c.is_flocking);
  EXPECT_EQ(c.n_steps, 5000);
  EXPECT_EQ(c.Grid().n_nodes(), 5001);
  EXPECT_EQ(c.solver, SolverKind::kClosedLoop);
  EXPECT_EQ(c.chaos.replicates, 500);
  EXPECT_EQ(c.Model().dims.d0, 4);
  // Followers start at N(0, I) velocities, the leader at rest.
  EXPECT_EQ(c.init.minor_cov(0, 2), 1.0);
  EXPECT_EQ(c.init.major_cov.norm(), 0.0);
}

TEST(Config, RawModel) {
  const RunConfig c = ParseConfig(SmallModel());
  const MajorMinorLqModel m = c.Model();
  EXPECT_EQ(m.G(0, 0), 0.3);
  EXPECT_EQ(m.eta0(0.7)[0], 1.0);
  EXPECT_NEAR(c.init.major_cov(0, 0), 0.04, 1e-15);
  EXPECT_TRUE(Validate(m).ok());
}

TEST(Config, Rejections) {
  auto rejects = [](json doc, const std::string& text) {
    try {
      ParseConfig(doc);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(text), std::string::npos) << e.what();
    }
  };
  json both = SmallModel();
  both["flocking"] = Flocking()["flocking"];
  rejects(both, "exactly one");
  json solver = SmallModel();
  solver["solver"] = "shooting";
  rejects(solver, "unknown solver");
  json s1 = SmallModel();
  s1["experiment"]["chaos"]["replicates"] = 1;
  rejects(s1, "replicates must be >= 2");
  json n0 = SmallModel();
  n0["simulation"]["N"] = 0;
  rejects(n0, "N must be >= 1");
  json missing = SmallModel();
  missing["model"].erase("Q0");
  EXPECT_THROW(ParseConfig(missing), ConfigError);
  EXPECT_THROW(ParseConfigText("{not json"), ConfigError);
  EXPECT_THROW(LoadConfig("/nonexistent/run.json"), ConfigError);
}

TEST(Config, OverridesChangeTheHash) {
  RunConfig c = ParseConfig(SmallModel());
  const std::string before = c.Hash();
  EXPECT_EQ(before.size(), 16u);
  EXPECT_EQ(ParseConfig(SmallModel()).Hash(), before);
  OverrideSeed(c, 77);
  EXPECT_EQ(c.simulation.seed, 77u);
  EXPECT_NE(c.Hash(), before);
  OverrideSteps(c, 50);
  EXPECT_EQ(c.Grid().n_steps(), 50);
  EXPECT_THROW(OverrideSteps(c, 1), ConfigError);
}

TEST_F(CommandTest, SolveWritesConsistentFiles) {
  json doc = SmallModel();
  doc["open_loop_diagnostics"] = true;
  const RunConfig c = Load(doc);
  const SolveOutcome out = CmdSolve(c);
  const json gains = json::parse(Read("gains.json"));
  EXPECT_EQ(gains["grid"]["t"].size(), 201u);
  EXPECT_EQ(gains["major"]["phi1"][100][0][0].get<double>(), out.strategy.major.phi1[100](0, 0));
  const json diag = json::parse(Read("diagnostics.json"));
  EXPECT_LE(diag["fixed_point_residual"].get<double>(), 1e-6);
  EXPECT_LE(diag["consistency_error"].get<double>(), 1e-6);
  EXPECT_EQ(diag["metadata"]["config_hash"], c.Hash());
  const std::string csv = Read("riccati.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "# config_hash=" + c.Hash());
  EXPECT_NE(csv.find("t,K_0_0,K_0_1,K_1_0,K_1_1,k_0_0,k_1_0,S_0_0,SS_0_0,SS_0_1,s_0_0\n"),
            std::string::npos);
}

TEST_F(CommandTest, RerunsAreIdenticalApartFromTheTimestamp) {
  const RunConfig c = Load(SmallModel());
  auto snapshot = [&] {
    CmdSolve(c);
    CmdSimulate(c);
    json diag = json::parse(Read("diagnostics.json"));
    diag["metadata"].erase("generated_at");
    return Read("riccati.csv") + Read("paths.csv") + diag.dump();
  };
  EXPECT_EQ(snapshot(), snapshot());
}

TEST_F(CommandTest, IterationSolverRecordsHistory) {
  json doc = SmallModel();
  doc["solver"] = "best-response-iteration";
  const SolveOutcome out = CmdSolve(Load(doc));
  ASSERT_TRUE(out.iteration.has_value());
  EXPECT_TRUE(out.iteration->converged);
  const json diag = json::parse(Read("diagnostics.json"));
  EXPECT_EQ(diag["iteration"]["history"].size(), static_cast<size_t>(out.iteration->iterations()));
}

TEST_F(CommandTest, ZeroStateCostsGiveZeroGains) {
  json doc = SmallModel();
  doc["model"]["Q0"] = {{0.0}};
  doc["model"]["Q"] = {{0.0}};
  CmdSolve(Load(doc));
  const json gains = json::parse(Read("gains.json"));
  for (const char* player : {"major", "minor"}) {
    for (const auto& [name, path] : gains[player].items()) {
      for (const json& node : path) EXPECT_EQ(node[0].front().get<double>(), 0.0) << name;
    }
  }
  EXPECT_TRUE(CmdNashCheck(Load(doc)).passed);
}

TEST_F(CommandTest, NashCheckFlagsHalvedGains) {
  const RunConfig good = Load(SmallModel());
  const NashOutcome ok = CmdNashCheck(good);
  EXPECT_TRUE(ok.passed);
  EXPECT_EQ(ok.major.directions, 3);
  json doc = SmallModel();
  doc["experiment"]["nash"]["gain_scale"] = 0.5;
  const NashOutcome bad = CmdNashCheck(Load(doc));
  EXPECT_FALSE(bad.passed);
  EXPECT_FALSE(json::parse(Read("nash_report.json"))["passed"].get<bool>());
}

TEST_F(CommandTest, ChaosMatricesHaveUnitDiagonal) {
  std::vector<std::string> warnings;
  const std::vector<ChaosRow> rows = CmdChaos(Load(SmallModel()), &warnings);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].correlation.rows(), 3);
  EXPECT_EQ(rows[1].correlation.rows(), 5);
  for (const ChaosRow& r : rows) {
    EXPECT_EQ(r.correlation.diagonal(), VectorXd::Ones(r.correlation.rows()));
    EXPECT_EQ(r.correlation, r.correlation.transpose());
    EXPECT_EQ(r.excluded_nodes, 0);
  }
  EXPECT_TRUE(warnings.empty());
  const std::string summary = Read("summary.csv");
  EXPECT_NE(summary.find("N,mean_abs_off_diag,excluded_nodes\n3,"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "chaos_6.csv"));
}

TEST_F(CommandTest, ChaosWithoutIdiosyncraticNoiseIsUndefined) {
  json doc = SmallModel();
  doc["model"]["D"] = {{0.0}};
  doc["model"]["init"]["minor_std"] = 0.0;
  std::vector<std::string> warnings;
  const std::vector<ChaosRow> rows = CmdChaos(Load(doc), &warnings);
  EXPECT_TRUE(std::isnan(rows[0].mean_abs_off_diag));
  EXPECT_EQ(rows[0].excluded_nodes, 201);
  EXPECT_FALSE(warnings.empty());
  EXPECT_NE(Read("chaos_3.csv").find("nan"), std::string::npos);
}

TEST_F(CommandTest, TrajectoriesWritePanelsAndMetrics) {
  const std::vector<PanelMetrics> m = CmdTrajectories(Load(Flocking()));
  ASSERT_EQ(m.size(), 1u);
  EXPECT_GT(m[0].leader_tracking, 0.0);
  const std::string csv = Read("traj_a.csv");
  EXPECT_NE(csv.find("t,agent_id,pos_0,pos_1,vel_0,vel_1\n0,0,0,0,"), std::string::npos);
  const json metrics = json::parse(Read("metrics.json"));
  EXPECT_EQ(metrics["panels"][0]["time_averaged_leader_tracking"].get<double>(),
            m[0].leader_tracking);
}

TEST_F(CommandTest, ZeroNoiseZeroWeightsGiveStraightLines) {
  json doc = Flocking();
  doc["flocking"]["sigma0"] = 0.0;
  doc["flocking"]["sigma"] = 0.0;
  doc["flocking"]["init"] = {{"leader_velocity_mean", {1.0, 0.5}},
                             {"follower_velocity_mean", {-1.0, 2.0}},
                             {"follower_velocity_std", 0.0}};
  doc["experiment"]["trajectories"]["panels"] = {
      {{"name", "free"}, {"lambda0", 0.0}, {"lambda1", 0.0}, {"l0", 0.0}, {"l1", 0.0}}};
  CmdTrajectories(Load(doc));
  std::istringstream csv(Read("traj_free.csv"));
  std::string line;
  std::getline(csv, line);
  std::getline(csv, line);
  while (std::getline(csv, line)) {
    double t, id, px, py, vx, vy;
    char sep;
    std::istringstream row(line);
    row >> t >> sep >> id >> sep >> px >> sep >> py >> sep >> vx >> sep >> vy;
    if (id == 0) {
      EXPECT_NEAR(px, t, 1e-12);
      EXPECT_NEAR(py, 0.5 * t, 1e-12);
    } else {
      EXPECT_EQ(vx, -1.0);
      EXPECT_EQ(vy, 2.0);
    }
  }
}

TEST_F(CommandTest, InvalidWeightsAreReported) {
  json doc = Flocking();
  doc["flocking"]["lambda1"] = 0.4;
  try {
    CmdSolve(Load(doc));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("R0 not positive definite"), std::string::npos);
  }
}

}  // namespace
}  // namespace mfglq::app
