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

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>

#include "mfglq/csv.h"
#include "mfglq/flocking.h"
#include "mfglq/rng.h"

namespace mfglq::app {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kVarianceFloor = 1e-14;
// Replicate tag for the initial-position streams of the trajectory command.
constexpr std::uint64_t kPositionStream = std::numeric_limits<std::uint64_t>::max();

std::string Timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

json Metadata(const RunConfig& config, const std::string& command) {
  return {{"config_hash", config.Hash()}, {"generated_at", Timestamp()}, {"command", command}};
}

fs::path OutputPath(const RunConfig& config, const std::string& file) {
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create output directory '" + dir.string() + "'");
  return dir / file;
}

std::ofstream OpenOutput(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw OutputError("cannot write '" + path.string() + "'");
  return out;
}

void WriteJson(const fs::path& path, const json& doc) {
  std::ofstream out = OpenOutput(path);
  out << doc.dump(2) << '\n';
  if (!out) throw OutputError("failed writing '" + path.string() + "'");
}

std::ofstream OpenCsv(const RunConfig& config, const std::string& file) {
  std::ofstream out = OpenOutput(OutputPath(config, file));
  out << "# config_hash=" << config.Hash() << '\n';
  return out;
}

json ToJson(const MatrixXd& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json ToJson(const MatrixPath& path) {
  json nodes = json::array();
  for (int i = 0; i < path.size(); ++i) nodes.push_back(ToJson(path[i]));
  return nodes;
}

json GainsJson(const FeedbackStrategy& strategy) {
  const TimeGrid& grid = strategy.grid();
  json times = json::array();
  for (int i = 0; i < grid.n_nodes(); ++i) times.push_back(grid.time(i));
  return {
      {"grid", {{"T", grid.horizon()}, {"n_steps", grid.n_steps()}, {"t", times}}},
      {"major",
       {{"phi0", ToJson(strategy.major.phi0)},
        {"phi1", ToJson(strategy.major.phi1)},
        {"phi2", ToJson(strategy.major.phi2)}}},
      {"minor",
       {{"phi0", ToJson(strategy.minor.phi0)},
        {"phi1", ToJson(strategy.minor.phi1)},
        {"phi2", ToJson(strategy.minor.phi2)},
        {"phi3", ToJson(strategy.minor.phi3)}}},
  };
}

void WriteRiccatiCsv(std::ostream& os,
                     const std::vector<std::pair<std::string, MatrixPath>>& paths) {
  os << "t";
  for (const auto& [name, path] : paths) {
    for (int r = 0; r < path.rows(); ++r) {
      for (int c = 0; c < path.cols(); ++c) os << ',' << name << '_' << r << '_' << c;
    }
  }
  os << '\n';
  if (paths.empty()) return;
  const TimeGrid& grid = paths.front().second.grid();
  for (int i = 0; i < grid.n_nodes(); ++i) {
    os << FormatDouble(grid.time(i));
    for (const auto& [name, path] : paths) {
      for (int r = 0; r < path.rows(); ++r) {
        for (int c = 0; c < path.cols(); ++c) os << ',' << FormatDouble(path[i](r, c));
      }
    }
    os << '\n';
  }
}

double TimeAverage(const TimeGrid& grid, const std::vector<double>& f) {
  double sum = 0.5 * (f.front() + f.back());
  for (size_t i = 1; i + 1 < f.size(); ++i) sum += f[i];
  return sum * grid.dt() / grid.horizon();
}

FlockingParams PanelParams(const RunConfig& config, const Panel& panel) {
  FlockingParams p = config.flocking;
  p.lambda0 = panel.lambda0;
  p.lambda1 = panel.lambda1;
  p.l0 = panel.l0;
  p.l1 = panel.l1;
  return p;
}

}  // namespace

json ToJson(const NashGapReport& report) {
  return {{"player", ToString(report.player)},
          {"directions", report.directions},
          {"epsilon", report.epsilon},
          {"baseline_cost", report.baseline_cost},
          {"first_derivative", report.first_derivative},
          {"second_difference", report.second_difference},
          {"max_abs_first_derivative", report.MaxAbsFirstDerivative()},
          {"min_second_difference", report.MinSecondDifference()}};
}

SolveOutcome SolveEquilibrium(const RunConfig& config, const MajorMinorLqModel& model) {
  const TimeGrid grid = config.Grid();
  SolveOutcome out;
  out.solver = config.solver;
  switch (config.solver) {
    case SolverKind::kClosedLoop: {
      ClosedLoopSolution sol = SolveClosedLoop(model, grid);
      out.strategy = sol.strategy;
      out.residual = sol.residual;
      out.riccati = {{"K", sol.K}, {"k", sol.k}, {"S", sol.S}, {"SS", sol.SS}, {"s", sol.s}};
      break;
    }
    case SolverKind::kOpenLoop: {
      OpenLoopSolution sol = SolveOpenLoop(model, grid);
      out.strategy = sol.strategy;
      out.residual = FixedPointResidual(model, sol.strategy);
      out.consistency_error = sol.consistency_error;
      out.riccati = {{"P", sol.P}, {"p", sol.p}, {"S", sol.S}, {"SS", sol.SS}, {"s", sol.s}};
      break;
    }
    case SolverKind::kBestResponseIteration: {
      IterationResult it = BestResponseIteration(
          model, FeedbackStrategy::Zero(model.dims, grid), config.iteration);
      out.strategy = it.strategy;
      const MajorResponse major = MajorBestResponse(model, it.strategy.minor);
      const MinorResponse minor = MinorBestResponse(model, it.strategy);
      out.residual = std::max(major.gains.SupDistance(it.strategy.major),
                              minor.gains.SupDistance(it.strategy.minor));
      out.riccati = {{"K", major.K}, {"k", major.k}, {"S", minor.S}, {"SS", minor.SS},
                     {"s", minor.s}};
      out.iteration = std::move(it);
      break;
    }
  }
  if (config.open_loop_diagnostics && !out.consistency_error) {
    out.consistency_error = SolveOpenLoop(model, grid).consistency_error;
  }
  return out;
}

SolveOutcome CmdSolve(const RunConfig& config) {
  const MajorMinorLqModel model = config.Model();
  SolveOutcome out = SolveEquilibrium(config, model);

  json gains = GainsJson(out.strategy);
  gains["metadata"] = Metadata(config, "solve");
  WriteJson(OutputPath(config, "gains.json"), gains);

  std::ofstream csv = OpenCsv(config, "riccati.csv");
  WriteRiccatiCsv(csv, out.riccati);
  if (!csv) throw OutputError("failed writing riccati.csv");

  json diag = {{"metadata", Metadata(config, "solve")},
               {"solver", ToString(out.solver)},
               {"n_nodes", config.Grid().n_nodes()},
               {"fixed_point_residual", out.residual}};
  if (out.consistency_error) diag["consistency_error"] = *out.consistency_error;
  if (out.iteration) {
    diag["iteration"] = {{"converged", out.iteration->converged},
                         {"iterations", out.iteration->iterations()},
                         {"history", out.iteration->history}};
  }
  WriteJson(OutputPath(config, "diagnostics.json"), diag);
  return out;
}

ChaosRow ChaosCorrelation(const MajorMinorLqModel& model, const FeedbackStrategy& strategy,
                          const InitialLaw& init, const TimeGrid& grid, std::uint64_t seed,
                          int N, int replicates, int followers) {
  const int f = std::min(N, followers);
  const int nodes = grid.n_nodes();
  SimConfig sim;
  sim.N = N;
  sim.grid = grid;
  sim.master_seed = seed;
  sim.init = init;
  sim.recorded_minors = f;
  sim.record_controls = false;

  // Moments accumulated around the first replicate for stability.
  MatrixXd shift(f, nodes), sum = MatrixXd::Zero(f, nodes);
  std::vector<MatrixXd> cross(nodes, MatrixXd::Zero(f, f));
  ForEachConditionalReplicate(model, strategy, sim, replicates,
                              [&](int s, const PathBundle& b) {
                                for (int i = 0; i < nodes; ++i) {
                                  VectorXd x(f);
                                  for (int a = 0; a < f; ++a) x[a] = b.minors[a](0, i);
                                  if (s == 0) shift.col(i) = x;
                                  x -= shift.col(i);
                                  sum.col(i) += x;
                                  cross[i].noalias() += x * x.transpose();
                                }
                              });

  ChaosRow row;
  row.N = N;
  row.correlation = MatrixXd::Zero(f, f);
  int used = 0;
  for (int i = 0; i < nodes; ++i) {
    const VectorXd mean = sum.col(i) / replicates;
    const MatrixXd cov =
        (cross[i] - replicates * mean * mean.transpose()) / (replicates - 1.0);
    if (cov.diagonal().minCoeff() < kVarianceFloor) {
      ++row.excluded_nodes;
      continue;
    }
    const VectorXd inv_sd = cov.diagonal().cwiseSqrt().cwiseInverse();
    MatrixXd corr = inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();
    corr = 0.5 * (corr + corr.transpose()).eval();
    corr.diagonal().setOnes();
    row.correlation += corr;
    ++used;
  }
  if (used == 0) {
    row.correlation.setConstant(std::numeric_limits<double>::quiet_NaN());
    row.mean_abs_off_diag = std::numeric_limits<double>::quiet_NaN();
    return row;
  }
  row.correlation /= used;
  if (f < 2) {
    row.mean_abs_off_diag = std::numeric_limits<double>::quiet_NaN();
    return row;
  }
  double off = 0.0;
  for (int a = 0; a < f; ++a) {
    for (int c = 0; c < f; ++c) {
      if (a != c) off += std::abs(row.correlation(a, c));
    }
  }
  row.mean_abs_off_diag = off / (f * (f - 1.0));
  return row;
}

std::vector<ChaosRow> CmdChaos(const RunConfig& config, std::vector<std::string>* warnings) {
  const MajorMinorLqModel model = config.Model();
  const SolveOutcome solved = SolveEquilibrium(config, model);
  const TimeGrid grid = config.Grid();

  std::vector<ChaosRow> rows;
  for (int N : config.chaos.flock_sizes) {
    ChaosRow row = ChaosCorrelation(model, solved.strategy, config.init, grid,
                                    config.simulation.seed, N, config.chaos.replicates,
                                    config.chaos.followers);
    if (warnings && row.excluded_nodes > 0) {
      warnings->push_back("N=" + std::to_string(N) + ": " +
                          std::to_string(row.excluded_nodes) +
                          " nodes with zero variance excluded");
    }
    if (warnings && std::isnan(row.mean_abs_off_diag)) {
      warnings->push_back("N=" + std::to_string(N) + ": correlation undefined");
    }
    std::ofstream csv = OpenCsv(config, "chaos_" + std::to_string(N) + ".csv");
    csv << "i";
    for (int c = 0; c < row.correlation.cols(); ++c) csv << ",c" << c;
    csv << '\n';
    for (int r = 0; r < row.correlation.rows(); ++r) {
      csv << r;
      for (int c = 0; c < row.correlation.cols(); ++c) {
        csv << ',' << FormatDouble(row.correlation(r, c));
      }
      csv << '\n';
    }
    if (!csv) throw OutputError("failed writing chaos csv");
    rows.push_back(std::move(row));
  }

  std::ofstream summary = OpenCsv(config, "summary.csv");
  summary << "N,mean_abs_off_diag,excluded_nodes\n";
  for (const ChaosRow& row : rows) {
    summary << row.N << ',' << FormatDouble(row.mean_abs_off_diag) << ','
            << row.excluded_nodes << '\n';
  }
  if (!summary) throw OutputError("failed writing summary.csv");
  return rows;
}

std::vector<PanelMetrics> CmdTrajectories(const RunConfig& config) {
  if (!config.is_flocking) {
    throw ConfigError("trajectories needs a 'flocking' section");
  }
  std::vector<Panel> panels = config.trajectories.panels;
  if (panels.empty()) {
    panels.push_back({"default", config.flocking.lambda0, config.flocking.lambda1,
                      config.flocking.l0, config.flocking.l1});
  }
  if (config.trajectories.seeds < 1) throw ConfigError("trajectories.seeds must be >= 1");
  const TimeGrid grid = config.Grid();
  const int dv = config.flocking.dv;
  const int N = config.trajectories.N;

  std::vector<PanelMetrics> metrics;
  json panel_json = json::array();
  for (const Panel& panel : panels) {
    const FlockingParams params = PanelParams(config, panel);
    const MajorMinorLqModel model = EmbedFlocking(params);
    const SolveOutcome solved = SolveEquilibrium(config, model);

    PanelMetrics m;
    m.name = panel.name;
    for (int k = 0; k < config.trajectories.seeds; ++k) {
      SimConfig sim;
      sim.N = N;
      sim.grid = grid;
      sim.master_seed = config.simulation.seed + static_cast<std::uint64_t>(k);
      sim.init = config.init;
      sim.record_controls = false;
      const PathBundle b = SimulateFiniteGame(model, solved.strategy, sim);

      std::vector<double> tracking(grid.n_nodes()), cohesion(grid.n_nodes());
      for (int i = 0; i < grid.n_nodes(); ++i) {
        const VectorXd v0 = b.major.col(i).head(dv);
        tracking[i] = (v0 - params.nu(grid.time(i))).norm();
        cohesion[i] = (b.empirical_mean.col(i).head(dv) - v0).norm();
      }
      m.leader_tracking += TimeAverage(grid, tracking);
      m.flock_cohesion += TimeAverage(grid, cohesion);
      if (k != 0) continue;

      std::ofstream csv = OpenCsv(config, "traj_" + panel.name + ".csv");
      csv << "t,agent_id";
      for (int c = 0; c < dv; ++c) csv << ",pos_" << c;
      for (int c = 0; c < dv; ++c) csv << ",vel_" << c;
      csv << '\n';
      // Positions by trapezoidal integration; the leader starts at the
      // origin, followers with an isotropic Gaussian scatter.
      std::vector<const MatrixXd*> agents{&b.major};
      for (const MatrixXd& minor : b.minors) agents.push_back(&minor);
      std::vector<VectorXd> pos(agents.size(), VectorXd::Zero(dv));
      for (size_t a = 1; a < agents.size(); ++a) {
        NormalStream rng(StreamKey(sim.master_seed, a, kPositionStream));
        rng.Fill(pos[a]);
        pos[a] *= config.trajectories.follower_position_std;
      }
      for (int i = 0; i < grid.n_nodes(); ++i) {
        for (size_t a = 0; a < agents.size(); ++a) {
          const VectorXd v = agents[a]->col(i).head(dv);
          if (i > 0) pos[a] += 0.5 * grid.dt() * (agents[a]->col(i - 1).head(dv) + v);
          csv << FormatDouble(grid.time(i)) << ',' << a;
          for (int c = 0; c < dv; ++c) csv << ',' << FormatDouble(pos[a][c]);
          for (int c = 0; c < dv; ++c) csv << ',' << FormatDouble(v[c]);
          csv << '\n';
        }
      }
      if (!csv) throw OutputError("failed writing trajectory csv");
    }
    m.leader_tracking /= config.trajectories.seeds;
    m.flock_cohesion /= config.trajectories.seeds;
    panel_json.push_back({{"name", m.name},
                          {"lambda0", panel.lambda0},
                          {"lambda1", panel.lambda1},
                          {"l0", panel.l0},
                          {"l1", panel.l1},
                          {"time_averaged_leader_tracking", m.leader_tracking},
                          {"time_averaged_flock_cohesion", m.flock_cohesion}});
    metrics.push_back(std::move(m));
  }
  WriteJson(OutputPath(config, "metrics.json"),
            {{"metadata", Metadata(config, "trajectories")},
             {"N", N},
             {"seeds", config.trajectories.seeds},
             {"panels", panel_json}});
  return metrics;
}

NashOutcome NashCheck(const RunConfig& config) {
  const MajorMinorLqModel model = config.Model();
  const SolveOutcome solved = SolveEquilibrium(config, model);
  const FeedbackStrategy strategy = solved.strategy.Scaled(config.nash.gain_scale);
  const NashSettings& s = config.nash;
  NashOutcome out;
  out.major = NashGap(model, strategy, Player::kMajor, s.directions, s.epsilon, s.seed,
                      config.init);
  out.minor = NashGap(model, strategy, Player::kMinor, s.directions, s.epsilon, s.seed,
                      config.init);
  out.passed = out.major.Passes(s.tolerance) && out.minor.Passes(s.tolerance);
  return out;
}

NashOutcome CmdNashCheck(const RunConfig& config) {
  NashOutcome out = NashCheck(config);
  WriteJson(OutputPath(config, "nash_report.json"),
            {{"metadata", Metadata(config, "nash-check")},
             {"tolerance", config.nash.tolerance},
             {"gain_scale", config.nash.gain_scale},
             {"passed", out.passed},
             {"players", {ToJson(out.major), ToJson(out.minor)}}});
  return out;
}

PathBundle CmdSimulate(const RunConfig& config) {
  const MajorMinorLqModel model = config.Model();
  const SolveOutcome solved = SolveEquilibrium(config, model);
  SimConfig sim;
  sim.N = config.simulation.N;
  sim.grid = config.Grid();
  sim.master_seed = config.simulation.seed;
  sim.init = config.init;
  PathBundle bundle = SimulateFiniteGame(model, solved.strategy, sim);
  std::ofstream csv = OpenCsv(config, "paths.csv");
  WritePathBundleCsv(csv, bundle);
  if (!csv) throw OutputError("failed writing paths.csv");
  return bundle;
}

}  // namespace mfglq::app
