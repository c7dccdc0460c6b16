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

#pragma once

#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mfglq {

using Eigen::MatrixXd;

// Uniform grid t_i = i * dt, i = 0..n_steps.
class TimeGrid {
 public:
  TimeGrid() = default;
  TimeGrid(double horizon, int n_steps);

  double horizon() const { return horizon_; }
  int n_steps() const { return n_steps_; }
  int n_nodes() const { return n_steps_ + 1; }
  double dt() const { return horizon_ / n_steps_; }
  double time(int i) const { return i == n_steps_ ? horizon_ : i * dt(); }

  bool operator==(const TimeGrid& other) const {
    return horizon_ == other.horizon_ && n_steps_ == other.n_steps_;
  }

 private:
  double horizon_ = 1.0;
  int n_steps_ = 2;
};

// One matrix per grid node, all of the same shape.
class MatrixPath {
 public:
  MatrixPath() = default;
  MatrixPath(TimeGrid grid, std::vector<MatrixXd> values);
  static MatrixPath Constant(const TimeGrid& grid, const MatrixXd& value);

  const TimeGrid& grid() const { return grid_; }
  int rows() const { return values_.empty() ? 0 : values_.front().rows(); }
  int cols() const { return values_.empty() ? 0 : values_.front().cols(); }
  int size() const { return static_cast<int>(values_.size()); }

  const MatrixXd& operator[](int i) const { return values_[i]; }
  MatrixXd& operator[](int i) { return values_[i]; }
  const std::vector<MatrixXd>& values() const { return values_; }

  // Piecewise-linear evaluation between nodes.
  MatrixXd At(double t) const;

  // Local cubic (4-node Lagrange) evaluation, exact at nodes. Used by the
  // RK4 stages that need coefficients half-way between nodes.
  MatrixXd Sample(double t) const;

  // Largest absolute entry difference over all nodes.
  double SupDistance(const MatrixPath& other) const;
  double SupNorm() const;

  // Pointwise a*this + b*other.
  MatrixPath Combine(double a, const MatrixPath& other, double b) const;

  // One row per node: t followed by the entries in row-major order.
  void WriteCsv(std::ostream& os, const std::string& name) const;

 private:
  TimeGrid grid_;
  std::vector<MatrixXd> values_;
};

class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& context, double time);
  double time() const { return time_; }

 private:
  double time_;
};

enum class Scheme { kRk4, kEuler };

// Right-hand side of dX/dt = rhs(t, X).
using MatrixRhs = std::function<MatrixXd(double, const MatrixXd&)>;

// Called after every step with the new value; may project it (e.g.
// symmetrize) in place.
using StepProjection = std::function<void(MatrixXd&)>;

// Integrates dX/dt = rhs(t, X) from X(T) = terminal down to t = 0. Throws
// BlowUpError if an entry exceeds 1e12 in magnitude or becomes non-finite.
MatrixPath IntegrateBackward(const MatrixRhs& rhs, const MatrixXd& terminal,
                             const TimeGrid& grid, Scheme scheme = Scheme::kRk4,
                             const StepProjection& project = nullptr);

// Integrates dX/dt = rhs(t, X) from X(0) = initial up to t = T.
MatrixPath IntegrateForward(const MatrixRhs& rhs, const MatrixXd& initial,
                            const TimeGrid& grid, Scheme scheme = Scheme::kRk4,
                            const StepProjection& project = nullptr);

using TimeMatrix = std::function<MatrixXd(double)>;

// Solves S' + S A(t) + A(t)' S - S M S + C(t) = 0, S(T) = 0.
MatrixPath SolveSymmetricRiccati(const TimeMatrix& A, const MatrixXd& M,
                                 const TimeMatrix& C, const TimeGrid& grid,
                                 Scheme scheme = Scheme::kRk4);

// Solves X' + A_left(t) X + X A_right(t) + forcing(t) = 0 with the given
// terminal value.
MatrixPath SolveLinearMatrixOde(const TimeMatrix& left, const TimeMatrix& right,
                                const TimeMatrix& forcing,
                                const MatrixXd& terminal, const TimeGrid& grid,
                                Scheme scheme = Scheme::kRk4);

// Wraps a path as a TimeMatrix using cubic sampling.
TimeMatrix Sampled(const MatrixPath& path);

}  // namespace mfglq
