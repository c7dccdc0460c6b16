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

#include "mfglq/mfglq.h"

#include <cstring>
#include <exception>
#include <string>

#include "mfglq/commands.h"

struct mfglq_config {
  mfglq::app::RunConfig config;
};

struct mfglq_solution {
  mfglq::app::SolveOutcome outcome;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_warnings;

mfglq_status Fail(mfglq_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs `body` and maps exceptions to status codes.
template <typename F>
mfglq_status Guard(F&& body) {
  last_error.clear();
  last_warnings.clear();
  try {
    return body();
  } catch (const mfglq::ValidationError& e) {
    return Fail(MFGLQ_VALIDATION_ERROR, e.what());
  } catch (const mfglq::app::ConfigError& e) {
    return Fail(MFGLQ_CONFIG_ERROR, e.what());
  } catch (const mfglq::BlowUpError& e) {
    return Fail(MFGLQ_BLOWUP, e.what());
  } catch (const mfglq::app::OutputError& e) {
    return Fail(MFGLQ_IO_ERROR, e.what());
  } catch (const mfglq::SimulationError& e) {
    return Fail(MFGLQ_SIMULATION_ERROR, e.what());
  } catch (const std::invalid_argument& e) {
    return Fail(MFGLQ_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return Fail(MFGLQ_INTERNAL_ERROR, e.what());
  } catch (...) {
    return Fail(MFGLQ_INTERNAL_ERROR, "unknown error");
  }
}

const mfglq::MatrixPath* GainPath(const mfglq_solution* solution, mfglq_gain gain) {
  const mfglq::FeedbackStrategy& s = solution->outcome.strategy;
  switch (gain) {
    case MFGLQ_MAJOR_PHI0: return &s.major.phi0;
    case MFGLQ_MAJOR_PHI1: return &s.major.phi1;
    case MFGLQ_MAJOR_PHI2: return &s.major.phi2;
    case MFGLQ_MINOR_PHI0: return &s.minor.phi0;
    case MFGLQ_MINOR_PHI1: return &s.minor.phi1;
    case MFGLQ_MINOR_PHI2: return &s.minor.phi2;
    case MFGLQ_MINOR_PHI3: return &s.minor.phi3;
  }
  return nullptr;
}

}  // namespace

extern "C" {

const char* mfglq_version(void) { return "1.0.0"; }

const char* mfglq_last_error(void) { return last_error.c_str(); }

const char* mfglq_last_warnings(void) { return last_warnings.c_str(); }

const char* mfglq_status_string(mfglq_status status) {
  switch (status) {
    case MFGLQ_OK: return "ok";
    case MFGLQ_INVALID_ARGUMENT: return "invalid argument";
    case MFGLQ_CONFIG_ERROR: return "config error";
    case MFGLQ_VALIDATION_ERROR: return "validation error";
    case MFGLQ_BLOWUP: return "solver blow-up";
    case MFGLQ_IO_ERROR: return "i/o error";
    case MFGLQ_CHECK_FAILED: return "check failed";
    case MFGLQ_SIMULATION_ERROR: return "simulation error";
    case MFGLQ_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

mfglq_status mfglq_config_load(const char* path, mfglq_config** out) {
  return Guard([&] {
    if (!path || !out) return Fail(MFGLQ_INVALID_ARGUMENT, "null argument");
    *out = new mfglq_config{mfglq::app::LoadConfig(path)};
    return MFGLQ_OK;
  });
}

mfglq_status mfglq_config_parse(const char* json_text, mfglq_config** out) {
  return Guard([&] {
    if (!json_text || !out) return Fail(MFGLQ_INVALID_ARGUMENT, "null argument");
    *out = new mfglq_config{mfglq::app::ParseConfigText(json_text)};
    return MFGLQ_OK;
  });
}

mfglq_status mfglq_config_set_seed(mfglq_config* config, uint64_t seed) {
  return Guard([&] {
    if (!config) return Fail(MFGLQ_INVALID_ARGUMENT, "null config");
    mfglq::app::OverrideSeed(config->config, seed);
    return MFGLQ_OK;
  });
}

mfglq_status mfglq_config_set_n_steps(mfglq_config* config, int n_steps) {
  return Guard([&] {
    if (!config) return Fail(MFGLQ_INVALID_ARGUMENT, "null config");
    mfglq::app::OverrideSteps(config->config, n_steps);
    return MFGLQ_OK;
  });
}

mfglq_status mfglq_config_set_output(mfglq_config* config, const char* dir) {
  return Guard([&] {
    if (!config || !dir) return Fail(MFGLQ_INVALID_ARGUMENT, "null argument");
    mfglq::app::OverrideOutput(config->config, dir);
    return MFGLQ_OK;
  });
}

mfglq_status mfglq_config_hash(const mfglq_config* config, char* buf, size_t buf_size) {
  return Guard([&] {
    if (!config || !buf) return Fail(MFGLQ_INVALID_ARGUMENT, "null argument");
    const std::string hash = config->config.Hash();
    if (buf_size < hash.size() + 1) return Fail(MFGLQ_INVALID_ARGUMENT, "buffer too small");
    std::memcpy(buf, hash.c_str(), hash.size() + 1);
    return MFGLQ_OK;
  });
}

void mfglq_config_destroy(mfglq_config* config) { delete config; }

mfglq_status mfglq_run(const mfglq_config* config, mfglq_command command) {
  return Guard([&] {
    if (!config) return Fail(MFGLQ_INVALID_ARGUMENT, "null config");
    const mfglq::app::RunConfig& c = config->config;
    switch (command) {
      case MFGLQ_CMD_SOLVE:
        mfglq::app::CmdSolve(c);
        return MFGLQ_OK;
      case MFGLQ_CMD_CHAOS: {
        std::vector<std::string> warnings;
        mfglq::app::CmdChaos(c, &warnings);
        for (const std::string& w : warnings) last_warnings += w + "\n";
        return MFGLQ_OK;
      }
      case MFGLQ_CMD_TRAJECTORIES:
        mfglq::app::CmdTrajectories(c);
        return MFGLQ_OK;
      case MFGLQ_CMD_NASH_CHECK: {
        const mfglq::app::NashOutcome out = mfglq::app::CmdNashCheck(c);
        if (out.passed) return MFGLQ_OK;
        return Fail(MFGLQ_CHECK_FAILED,
                    "Nash check failed: max |dJ| major " +
                        std::to_string(out.major.MaxAbsFirstDerivative()) + ", minor " +
                        std::to_string(out.minor.MaxAbsFirstDerivative()));
      }
      case MFGLQ_CMD_SIMULATE:
        mfglq::app::CmdSimulate(c);
        return MFGLQ_OK;
    }
    return Fail(MFGLQ_INVALID_ARGUMENT, "unknown command");
  });
}

mfglq_status mfglq_solve(const mfglq_config* config, mfglq_solution** out) {
  return Guard([&] {
    if (!config || !out) return Fail(MFGLQ_INVALID_ARGUMENT, "null argument");
    const mfglq::MajorMinorLqModel model = config->config.Model();
    *out = new mfglq_solution{mfglq::app::SolveEquilibrium(config->config, model)};
    return MFGLQ_OK;
  });
}

mfglq_status mfglq_solution_residual(const mfglq_solution* solution, double* residual) {
  if (!solution || !residual) return Fail(MFGLQ_INVALID_ARGUMENT, "null argument");
  *residual = solution->outcome.residual;
  return MFGLQ_OK;
}

mfglq_status mfglq_solution_num_nodes(const mfglq_solution* solution, int* nodes) {
  if (!solution || !nodes) return Fail(MFGLQ_INVALID_ARGUMENT, "null argument");
  *nodes = solution->outcome.strategy.grid().n_nodes();
  return MFGLQ_OK;
}

mfglq_status mfglq_solution_gain_shape(const mfglq_solution* solution, mfglq_gain gain,
                                       int* rows, int* cols) {
  if (!solution || !rows || !cols) return Fail(MFGLQ_INVALID_ARGUMENT, "null argument");
  const mfglq::MatrixPath* path = GainPath(solution, gain);
  if (!path) return Fail(MFGLQ_INVALID_ARGUMENT, "unknown gain");
  *rows = path->rows();
  *cols = path->cols();
  return MFGLQ_OK;
}

mfglq_status mfglq_solution_gain(const mfglq_solution* solution, mfglq_gain gain, int node,
                                 double* values, size_t size) {
  if (!solution || !values) return Fail(MFGLQ_INVALID_ARGUMENT, "null argument");
  const mfglq::MatrixPath* path = GainPath(solution, gain);
  if (!path) return Fail(MFGLQ_INVALID_ARGUMENT, "unknown gain");
  if (node < 0 || node >= path->size()) return Fail(MFGLQ_INVALID_ARGUMENT, "node out of range");
  const Eigen::MatrixXd& m = (*path)[node];
  if (size < static_cast<size_t>(m.size())) {
    return Fail(MFGLQ_INVALID_ARGUMENT, "buffer too small");
  }
  std::memcpy(values, m.data(), sizeof(double) * m.size());
  return MFGLQ_OK;
}

void mfglq_solution_destroy(mfglq_solution* solution) { delete solution; }

}  // extern "C"
