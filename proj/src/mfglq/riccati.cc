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

#include "mfglq/riccati.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mfglq/csv.h"

namespace mfglq {
namespace {

constexpr double kBlowUpMagnitude = 1e12;

void CheckFinite(const MatrixXd& x, double t, const char* context) {
  if (!x.allFinite() || (x.size() > 0 && x.cwiseAbs().maxCoeff() > kBlowUpMagnitude)) {
    throw BlowUpError(context, t);
  }
}

MatrixXd Step(const MatrixRhs& rhs, double t, const MatrixXd& x, double h,
              Scheme scheme) {
  if (scheme == Scheme::kEuler) return x + h * rhs(t, x);
  const MatrixXd k1 = rhs(t, x);
  const MatrixXd k2 = rhs(t + 0.5 * h, x + (0.5 * h) * k1);
  const MatrixXd k3 = rhs(t + 0.5 * h, x + (0.5 * h) * k2);
  const MatrixXd k4 = rhs(t + h, x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

TimeGrid::TimeGrid(double horizon, int n_steps)
    : horizon_(horizon), n_steps_(n_steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("time grid horizon must be positive");
  }
  if (n_steps < 2) throw std::invalid_argument("time grid needs n_steps >= 2");
}

MatrixPath::MatrixPath(TimeGrid grid, std::vector<MatrixXd> values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.n_nodes()) {
    throw std::invalid_argument("matrix path needs one value per grid node");
  }
  for (const auto& v : values_) {
    if (v.rows() != values_.front().rows() || v.cols() != values_.front().cols()) {
      throw std::invalid_argument("matrix path values differ in shape");
    }
  }
}

MatrixPath MatrixPath::Constant(const TimeGrid& grid, const MatrixXd& value) {
  return MatrixPath(grid, std::vector<MatrixXd>(grid.n_nodes(), value));
}

MatrixXd MatrixPath::At(double t) const {
  const int n = grid_.n_steps();
  const double s = std::clamp(t / grid_.dt(), 0.0, static_cast<double>(n));
  const int i = std::min(static_cast<int>(std::floor(s)), n - 1);
  const double w = s - i;
  if (w == 0.0) return values_[i];
  return (1.0 - w) * values_[i] + w * values_[i + 1];
}

MatrixXd MatrixPath::Sample(double t) const {
  const int n = grid_.n_steps();
  const double s = std::clamp(t / grid_.dt(), 0.0, static_cast<double>(n));
  const double nearest = std::round(s);
  if (std::abs(s - nearest) <= 1e-9) return values_[static_cast<int>(nearest)];
  const int i = std::min(static_cast<int>(std::floor(s)), n - 1);
  const int width = std::min(4, n + 1);
  const int first = std::clamp(i - 1, 0, n + 1 - width);
  MatrixXd out = MatrixXd::Zero(rows(), cols());
  for (int a = first; a < first + width; ++a) {
    double weight = 1.0;
    for (int b = first; b < first + width; ++b) {
      if (b != a) weight *= (s - b) / static_cast<double>(a - b);
    }
    out.noalias() += weight * values_[a];
  }
  return out;
}

double MatrixPath::SupDistance(const MatrixPath& other) const {
  if (size() != other.size() || rows() != other.rows() || cols() != other.cols()) {
    throw std::invalid_argument("SupDistance: path shapes differ");
  }
  double worst = 0.0;
  for (int i = 0; i < size(); ++i) {
    if (values_[i].size() == 0) continue;
    worst = std::max(worst, (values_[i] - other.values_[i]).cwiseAbs().maxCoeff());
  }
  return worst;
}

double MatrixPath::SupNorm() const {
  double worst = 0.0;
  for (const auto& v : values_) {
    if (v.size() > 0) worst = std::max(worst, v.cwiseAbs().maxCoeff());
  }
  return worst;
}

MatrixPath MatrixPath::Combine(double a, const MatrixPath& other, double b) const {
  std::vector<MatrixXd> out(values_.size());
  for (size_t i = 0; i < values_.size(); ++i) {
    out[i] = a * values_[i] + b * other.values_[i];
  }
  return MatrixPath(grid_, std::move(out));
}

void MatrixPath::WriteCsv(std::ostream& os, const std::string& name) const {
  os << "t";
  for (int r = 0; r < rows(); ++r) {
    for (int c = 0; c < cols(); ++c) os << ',' << name << '_' << r << '_' << c;
  }
  os << '\n';
  for (int i = 0; i < size(); ++i) {
    os << FormatDouble(grid_.time(i));
    for (int r = 0; r < rows(); ++r) {
      for (int c = 0; c < cols(); ++c) os << ',' << FormatDouble(values_[i](r, c));
    }
    os << '\n';
  }
}

BlowUpError::BlowUpError(const std::string& context, double time)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << context << ": solution blew up at t = " << time;
        return os.str();
      }()),
      time_(time) {}

MatrixPath IntegrateBackward(const MatrixRhs& rhs, const MatrixXd& terminal,
                             const TimeGrid& grid, Scheme scheme,
                             const StepProjection& project) {
  const int n = grid.n_steps();
  std::vector<MatrixXd> values(n + 1);
  values[n] = terminal;
  if (project) project(values[n]);
  CheckFinite(values[n], grid.time(n), "backward integration");
  const double h = -grid.dt();
  for (int i = n; i > 0; --i) {
    MatrixXd next = Step(rhs, grid.time(i), values[i], h, scheme);
    if (project) project(next);
    CheckFinite(next, grid.time(i - 1), "backward integration");
    values[i - 1] = std::move(next);
  }
  return MatrixPath(grid, std::move(values));
}

MatrixPath IntegrateForward(const MatrixRhs& rhs, const MatrixXd& initial,
                            const TimeGrid& grid, Scheme scheme,
                            const StepProjection& project) {
  const int n = grid.n_steps();
  std::vector<MatrixXd> values(n + 1);
  values[0] = initial;
  if (project) project(values[0]);
  CheckFinite(values[0], 0.0, "forward integration");
  const double h = grid.dt();
  for (int i = 0; i < n; ++i) {
    MatrixXd next = Step(rhs, grid.time(i), values[i], h, scheme);
    if (project) project(next);
    CheckFinite(next, grid.time(i + 1), "forward integration");
    values[i + 1] = std::move(next);
  }
  return MatrixPath(grid, std::move(values));
}

MatrixPath SolveSymmetricRiccati(const TimeMatrix& A, const MatrixXd& M,
                                 const TimeMatrix& C, const TimeGrid& grid,
                                 Scheme scheme) {
  const int d = M.rows();
  auto rhs = [&](double t, const MatrixXd& S) -> MatrixXd {
    const MatrixXd a = A(t);
    const MatrixXd SA = S * a;
    return -(SA + SA.transpose() - S * M * S + C(t));
  };
  auto symmetrize = [](MatrixXd& S) { S = 0.5 * (S + S.transpose()).eval(); };
  return IntegrateBackward(rhs, MatrixXd::Zero(d, d), grid, scheme, symmetrize);
}

MatrixPath SolveLinearMatrixOde(const TimeMatrix& left, const TimeMatrix& right,
                                const TimeMatrix& forcing,
                                const MatrixXd& terminal, const TimeGrid& grid,
                                Scheme scheme) {
  const MatrixXd l0 = left(grid.horizon());
  const MatrixXd r0 = right(grid.horizon());
  const MatrixXd f0 = forcing(grid.horizon());
  if (l0.cols() != terminal.rows() || l0.rows() != terminal.rows() ||
      r0.rows() != terminal.cols() || r0.cols() != terminal.cols() ||
      f0.rows() != terminal.rows() || f0.cols() != terminal.cols()) {
    throw std::invalid_argument("SolveLinearMatrixOde: shape mismatch");
  }
  auto rhs = [&](double t, const MatrixXd& X) -> MatrixXd {
    return -(left(t) * X + X * right(t) + forcing(t));
  };
  return IntegrateBackward(rhs, terminal, grid, scheme);
}

TimeMatrix Sampled(const MatrixPath& path) {
  return [&path](double t) { return path.Sample(t); };
}

}  // namespace mfglq
