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

#include "mfglq/strategy.h"

#include <algorithm>

namespace mfglq {

MajorGains MajorGains::Zero(const Dims& dims, const TimeGrid& grid) {
  return {MatrixPath::Constant(grid, MatrixXd::Zero(dims.k0, 1)),
          MatrixPath::Constant(grid, MatrixXd::Zero(dims.k0, dims.d0)),
          MatrixPath::Constant(grid, MatrixXd::Zero(dims.k0, dims.d))};
}

MatrixXd MajorGains::StateGain(int node) const {
  MatrixXd g(phi1.rows(), phi2.cols() + phi1.cols());
  g << phi2[node], phi1[node];
  return g;
}

MatrixXd MajorGains::StateGainAt(double t) const {
  MatrixXd g(phi1.rows(), phi2.cols() + phi1.cols());
  g << phi2.Sample(t), phi1.Sample(t);
  return g;
}

double MajorGains::SupDistance(const MajorGains& other) const {
  return std::max({phi0.SupDistance(other.phi0), phi1.SupDistance(other.phi1),
                   phi2.SupDistance(other.phi2)});
}

MajorGains MajorGains::Combine(double a, const MajorGains& other, double b) const {
  return {phi0.Combine(a, other.phi0, b), phi1.Combine(a, other.phi1, b),
          phi2.Combine(a, other.phi2, b)};
}

MinorGains MinorGains::Zero(const Dims& dims, const TimeGrid& grid) {
  return {MatrixPath::Constant(grid, MatrixXd::Zero(dims.k, 1)),
          MatrixPath::Constant(grid, MatrixXd::Zero(dims.k, dims.d)),
          MatrixPath::Constant(grid, MatrixXd::Zero(dims.k, dims.d0)),
          MatrixPath::Constant(grid, MatrixXd::Zero(dims.k, dims.d))};
}

MatrixXd MinorGains::EnvironmentGain(int node) const {
  MatrixXd g(phi1.rows(), phi3.cols() + phi2.cols());
  g << phi3[node], phi2[node];
  return g;
}

MatrixXd MinorGains::EnvironmentGainAt(double t) const {
  MatrixXd g(phi1.rows(), phi3.cols() + phi2.cols());
  g << phi3.Sample(t), phi2.Sample(t);
  return g;
}

double MinorGains::SupDistance(const MinorGains& other) const {
  return std::max({phi0.SupDistance(other.phi0), phi1.SupDistance(other.phi1),
                   phi2.SupDistance(other.phi2), phi3.SupDistance(other.phi3)});
}

MinorGains MinorGains::Combine(double a, const MinorGains& other, double b) const {
  return {phi0.Combine(a, other.phi0, b), phi1.Combine(a, other.phi1, b),
          phi2.Combine(a, other.phi2, b), phi3.Combine(a, other.phi3, b)};
}

FeedbackStrategy FeedbackStrategy::Zero(const Dims& dims, const TimeGrid& grid) {
  return {MajorGains::Zero(dims, grid), MinorGains::Zero(dims, grid)};
}

double FeedbackStrategy::SupDistance(const FeedbackStrategy& other) const {
  return std::max(major.SupDistance(other.major), minor.SupDistance(other.minor));
}

FeedbackStrategy FeedbackStrategy::Combine(double a, const FeedbackStrategy& other,
                                           double b) const {
  return {major.Combine(a, other.major, b), minor.Combine(a, other.minor, b)};
}

Environment MajorEnvironmentAt(const MajorMinorLqModel& model,
                               const BlockSystem& blocks,
                               const MinorGains& minor, double t) {
  const int d = model.dims.d;
  Environment env;
  env.drift = blocks.LL0;
  // Top row: [L + F + B(phi1 + phi3), G + B phi2].
  env.drift.topLeftCorner(d, d) += model.B * (minor.phi1.Sample(t) + minor.phi3.Sample(t));
  env.drift.topRightCorner(d, model.dims.d0) += model.B * minor.phi2.Sample(t);
  env.offset = blocks.BB * minor.phi0.Sample(t);
  return env;
}

Environment FullEnvironmentAt(const MajorMinorLqModel& model,
                              const BlockSystem& blocks,
                              const FeedbackStrategy& strategy, double t) {
  Environment env = MajorEnvironmentAt(model, blocks, strategy.minor, t);
  env.drift.noalias() += blocks.BB0 * strategy.major.StateGainAt(t);
  env.offset.noalias() += blocks.BB0 * strategy.major.phi0.Sample(t);
  return env;
}

std::pair<MatrixPath, MatrixPath> MajorEnvironment(const MajorMinorLqModel& model,
                                                   const MinorGains& minor) {
  const BlockSystem blocks = AssembleBlocks(model);
  const TimeGrid& grid = minor.phi0.grid();
  std::vector<MatrixXd> drift, offset;
  for (int i = 0; i < grid.n_nodes(); ++i) {
    Environment env = MajorEnvironmentAt(model, blocks, minor, grid.time(i));
    drift.push_back(std::move(env.drift));
    offset.push_back(std::move(env.offset));
  }
  return {MatrixPath(grid, std::move(drift)), MatrixPath(grid, std::move(offset))};
}

std::pair<MatrixPath, MatrixPath> FullEnvironment(const MajorMinorLqModel& model,
                                                  const FeedbackStrategy& strategy) {
  const BlockSystem blocks = AssembleBlocks(model);
  const TimeGrid& grid = strategy.grid();
  if (!(strategy.minor.phi0.grid() == grid)) {
    throw std::invalid_argument("major and minor strategies live on different grids");
  }
  std::vector<MatrixXd> drift, offset;
  for (int i = 0; i < grid.n_nodes(); ++i) {
    Environment env = FullEnvironmentAt(model, blocks, strategy, grid.time(i));
    drift.push_back(std::move(env.drift));
    offset.push_back(std::move(env.offset));
  }
  return {MatrixPath(grid, std::move(drift)), MatrixPath(grid, std::move(offset))};
}

}  // namespace mfglq
