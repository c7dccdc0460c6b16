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

#include "mfglq/config.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mfglq::app {
namespace {

using nlohmann::json;

MatrixXd ToMatrix(const json& j, const std::string& name) {
  if (j.is_number()) return MatrixXd::Constant(1, 1, j.get<double>());
  if (!j.is_array() || j.empty()) throw ConfigError(name + ": expected a matrix");
  if (!j.front().is_array()) {
    // A flat array is read as a column.
    MatrixXd m(j.size(), 1);
    for (size_t r = 0; r < j.size(); ++r) m(r, 0) = j[r].get<double>();
    return m;
  }
  const size_t cols = j.front().size();
  MatrixXd m(j.size(), cols);
  for (size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ConfigError(name + ": rows have different lengths");
    }
    for (size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

VectorXd ToVector(const json& j, const std::string& name) {
  if (j.is_number()) return VectorXd::Constant(1, j.get<double>());
  if (!j.is_array()) throw ConfigError(name + ": expected an array");
  VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

// Scalar s means s * I; otherwise a full matrix.
MatrixXd ScaledIdentity(const json& j, int dim, const std::string& name) {
  if (j.is_number()) return j.get<double>() * MatrixXd::Identity(dim, dim);
  return ToMatrix(j, name);
}

const json& Require(const json& section, const char* key, const std::string& where) {
  if (!section.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  return section.at(key);
}

template <typename T>
T Get(const json& section, const char* key, T fallback) {
  if (!section.is_object() || !section.contains(key)) return fallback;
  return section.at(key).get<T>();
}

VectorXd VectorOr(const json& section, const char* key, const VectorXd& fallback) {
  if (!section.is_object() || !section.contains(key)) return fallback;
  return ToVector(section.at(key), key);
}

// Covariance from "<prefix>_cov" (matrix) or "<prefix>_std" (scalar).
MatrixXd CovOr(const json& section, const std::string& prefix, int dim, double std_default) {
  const std::string cov_key = prefix + "_cov", std_key = prefix + "_std";
  if (section.is_object() && section.contains(cov_key)) {
    return ToMatrix(section.at(cov_key), cov_key);
  }
  const double s = Get<double>(section, std_key.c_str(), std_default);
  return s * s * MatrixXd::Identity(dim, dim);
}

void ParseFlocking(const json& f, RunConfig& c) {
  const std::string where = "flocking";
  FlockingParams p;
  p.dv = Get<int>(f, "dv", 2);
  p.lambda0 = Require(f, "lambda0", where).get<double>();
  p.lambda1 = Require(f, "lambda1", where).get<double>();
  p.l0 = Require(f, "l0", where).get<double>();
  p.l1 = Require(f, "l1", where).get<double>();
  p.Sigma0 = ScaledIdentity(f.value("sigma0", json(0.5)), p.dv, "sigma0");
  p.Sigma = ScaledIdentity(f.value("sigma", json(0.5)), p.dv, "sigma");
  p.T = Get<double>(f, "T", 5.0);
  const json nu = f.value("nu", json("circle"));
  if (nu.is_string()) {
    if (nu.get<std::string>() != "circle") {
      throw ConfigError("flocking.nu: unknown profile '" + nu.get<std::string>() + "'");
    }
    if (p.dv != 2) throw ConfigError("flocking.nu 'circle' needs dv = 2");
    p.nu = CircleVelocity;
  } else {
    p.nu = MajorMinorLqModel::Constant(ToVector(nu, "flocking.nu"));
  }
  c.is_flocking = true;
  c.flocking = p;
  c.horizon = p.T;

  const json init = f.value("init", json::object());
  const VectorXd zero = VectorXd::Zero(p.dv);
  c.init = EmbedInitialVelocities(
      VectorOr(init, "leader_velocity_mean", zero), CovOr(init, "leader_velocity", p.dv, 0.0),
      VectorOr(init, "follower_velocity_mean", zero),
      CovOr(init, "follower_velocity", p.dv, 1.0));
}

void ParseModel(const json& m, RunConfig& c) {
  c.model_section = m;
  c.is_flocking = false;
  c.horizon = Require(m, "T", "model").get<double>();
  const MajorMinorLqModel model = c.Model();
  const json init = m.value("init", json::object());
  const int d0 = model.dims.d0, d = model.dims.d;
  c.init.major_mean = VectorOr(init, "major_mean", VectorXd::Zero(d0));
  c.init.major_cov = CovOr(init, "major", d0, 0.0);
  c.init.minor_mean = VectorOr(init, "minor_mean", VectorXd::Zero(d));
  c.init.minor_cov = CovOr(init, "minor", d, 0.0);
  if (c.init.major_mean.size() != d0 || c.init.minor_mean.size() != d ||
      c.init.major_cov.rows() != d0 || c.init.minor_cov.rows() != d) {
    throw ConfigError("model.init: dimensions do not match the model");
  }
}

}  // namespace

std::string ToString(SolverKind kind) {
  switch (kind) {
    case SolverKind::kClosedLoop: return "closed-loop";
    case SolverKind::kOpenLoop: return "open-loop";
    case SolverKind::kBestResponseIteration: return "best-response-iteration";
  }
  return "unknown";
}

MajorMinorLqModel RunConfig::Model() const {
  if (is_flocking) return EmbedFlocking(flocking);
  const json& m = model_section;
  const std::string where = "model";
  MajorMinorLqModel model;
  auto mat = [&](const char* key) { return ToMatrix(Require(m, key, where), key); };
  model.L0 = mat("L0");
  model.B0 = mat("B0");
  model.D0 = mat("D0");
  model.L = mat("L");
  model.B = mat("B");
  model.D = mat("D");
  const int d0 = model.L0.rows(), d = model.L.rows();
  auto mat_or_zero = [&](const char* key, int rows, int cols) {
    return m.contains(key) ? ToMatrix(m.at(key), key) : MatrixXd::Zero(rows, cols);
  };
  model.F0 = mat_or_zero("F0", d0, d);
  model.F = mat_or_zero("F", d, d);
  model.G = mat_or_zero("G", d, d0);
  model.H0 = mat_or_zero("H0", d0, d);
  model.H = mat_or_zero("H", d, d0);
  model.H1 = mat_or_zero("H1", d, d);
  model.Q0 = mat("Q0");
  model.Q = mat("Q");
  model.R0 = mat("R0");
  model.R = mat("R");
  model.dims = {d0, d, static_cast<int>(model.B0.cols()), static_cast<int>(model.B.cols()),
                static_cast<int>(model.D0.cols()), static_cast<int>(model.D.cols())};
  model.eta0 = MajorMinorLqModel::Constant(
      m.contains("eta0") ? ToVector(m.at("eta0"), "eta0") : VectorXd::Zero(d0));
  model.eta = m.contains("eta") ? ToVector(m.at("eta"), "eta") : VectorXd::Zero(d);
  model.T = horizon;
  return model;
}

std::string RunConfig::Hash() const {
  const std::string text = document.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig ParseConfig(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  c.document = doc;
  const bool has_flocking = doc.contains("flocking");
  const bool has_model = doc.contains("model");
  if (has_flocking == has_model) {
    throw ConfigError("config needs exactly one of 'flocking' or 'model'");
  }
  if (has_flocking) {
    ParseFlocking(doc.at("flocking"), c);
  } else {
    ParseModel(doc.at("model"), c);
  }

  const json grid = doc.value("grid", json::object());
  if (grid.contains("T") && std::abs(grid.at("T").get<double>() - c.horizon) > 1e-12) {
    throw ConfigError("grid.T does not match the model horizon");
  }
  c.n_steps = Get<int>(grid, "n_steps", static_cast<int>(std::lround(1000.0 * c.horizon)));
  if (c.n_steps < 2) throw ConfigError("grid.n_steps must be >= 2");

  const std::string solver = doc.value("solver", std::string("closed-loop"));
  if (solver == "closed-loop") {
    c.solver = SolverKind::kClosedLoop;
  } else if (solver == "open-loop") {
    c.solver = SolverKind::kOpenLoop;
  } else if (solver == "best-response-iteration") {
    c.solver = SolverKind::kBestResponseIteration;
  } else {
    throw ConfigError("unknown solver '" + solver + "'");
  }
  const json iter = doc.value("iteration", json::object());
  c.iteration.max_iterations = Get<int>(iter, "max_iterations", 50);
  c.iteration.tolerance = Get<double>(iter, "tolerance", 1e-8);
  c.iteration.damping = Get<double>(iter, "damping", 1.0);
  c.open_loop_diagnostics = doc.value("open_loop_diagnostics", false);

  const json sim = doc.value("simulation", json::object());
  c.simulation.N = Get<int>(sim, "N", 50);
  c.simulation.seed = Get<std::uint64_t>(sim, "seed", 42);
  if (c.simulation.N < 1) throw ConfigError("simulation.N must be >= 1");

  const json exp = doc.value("experiment", json::object());
  const json chaos = exp.value("chaos", json::object());
  c.chaos.flock_sizes = Get<std::vector<int>>(chaos, "flock_sizes", c.chaos.flock_sizes);
  c.chaos.replicates = Get<int>(chaos, "replicates", c.chaos.replicates);
  c.chaos.followers = Get<int>(chaos, "followers", c.chaos.followers);
  if (c.chaos.replicates < 2) throw ConfigError("experiment.chaos.replicates must be >= 2");
  for (int n : c.chaos.flock_sizes) {
    if (n < 1) throw ConfigError("experiment.chaos.flock_sizes must be >= 1");
  }

  const json traj = exp.value("trajectories", json::object());
  c.trajectories.N = Get<int>(traj, "N", c.trajectories.N);
  c.trajectories.seeds = Get<int>(traj, "seeds", c.trajectories.seeds);
  c.trajectories.follower_position_std =
      Get<double>(traj, "follower_position_std", c.trajectories.follower_position_std);
  if (traj.contains("panels")) {
    int index = 0;
    for (const json& p : traj.at("panels")) {
      Panel panel;
      panel.name = p.value("name", "panel" + std::to_string(index));
      panel.lambda0 = p.value("lambda0", c.flocking.lambda0);
      panel.lambda1 = p.value("lambda1", c.flocking.lambda1);
      panel.l0 = p.value("l0", c.flocking.l0);
      panel.l1 = p.value("l1", c.flocking.l1);
      c.trajectories.panels.push_back(panel);
      ++index;
    }
  }

  const json nash = exp.value("nash", json::object());
  c.nash.directions = Get<int>(nash, "directions", c.nash.directions);
  c.nash.epsilon = Get<double>(nash, "epsilon", c.nash.epsilon);
  c.nash.tolerance = Get<double>(nash, "tolerance", c.nash.tolerance);
  c.nash.seed = Get<std::uint64_t>(nash, "seed", c.nash.seed);
  c.nash.gain_scale = Get<double>(nash, "gain_scale", c.nash.gain_scale);

  const json out = doc.value("output", json::object());
  c.output_dir = Get<std::string>(out, "dir", c.output_dir);
  return c;
}

RunConfig ParseConfigText(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    return ParseConfig(doc);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config has a malformed field: ") + e.what());
  }
}

RunConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseConfigText(ss.str());
}

void OverrideSeed(RunConfig& config, std::uint64_t seed) {
  nlohmann::json doc = config.document;
  doc["simulation"]["seed"] = seed;
  config = ParseConfig(doc);
}

void OverrideSteps(RunConfig& config, int n_steps) {
  nlohmann::json doc = config.document;
  doc["grid"]["n_steps"] = n_steps;
  config = ParseConfig(doc);
}

void OverrideOutput(RunConfig& config, const std::string& dir) {
  nlohmann::json doc = config.document;
  doc["output"]["dir"] = dir;
  config = ParseConfig(doc);
}

}  // namespace mfglq::app
