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

#include "mfglq/model.h"

#include <cmath>
#include <sstream>

namespace mfglq {
namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kPsdTolerance = 1e-12;

void CheckShape(const MatrixXd& m, const char* name, int rows, int cols,
                std::vector<std::string>* out) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream os;
    os << name << " has shape " << m.rows() << "x" << m.cols() << ", expected "
       << rows << "x" << cols;
    out->push_back(os.str());
  }
}

bool IsSymmetric(const MatrixXd& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= kSymmetryTolerance * scale;
}

double MinEigenvalue(const MatrixXd& m) {
  const MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void CheckWeight(const MatrixXd& m, const char* name, bool strict,
                 std::vector<std::string>* out) {
  if (m.size() == 0 || m.rows() != m.cols()) return;
  if (!m.allFinite()) {
    out->push_back(std::string(name) + " has non-finite entries");
    return;
  }
  if (!IsSymmetric(m)) {
    out->push_back(std::string(name) + " not symmetric");
    return;
  }
  const double lo = MinEigenvalue(m);
  if (strict && !(lo > 0.0)) {
    out->push_back(std::string(name) + " not positive definite");
  } else if (!strict && lo < -kPsdTolerance) {
    out->push_back(std::string(name) + " not positive semi-definite");
  }
}

}  // namespace

std::string ValidationReport::Summary() const {
  std::string s;
  for (const auto& v : violations) {
    if (!s.empty()) s += "; ";
    s += v;
  }
  return s;
}

ValidationReport Validate(const MajorMinorLqModel& model) {
  ValidationReport report;
  auto* out = &report.violations;
  const Dims& n = model.dims;
  if (n.d0 < 1 || n.d < 1 || n.k0 < 1 || n.k < 1 || n.m0 < 1 || n.m < 1) {
    out->push_back("all dimensions must be >= 1");
    return report;
  }
  CheckShape(model.L0, "L0", n.d0, n.d0, out);
  CheckShape(model.B0, "B0", n.d0, n.k0, out);
  CheckShape(model.F0, "F0", n.d0, n.d, out);
  CheckShape(model.D0, "D0", n.d0, n.m0, out);
  CheckShape(model.L, "L", n.d, n.d, out);
  CheckShape(model.B, "B", n.d, n.k, out);
  CheckShape(model.F, "F", n.d, n.d, out);
  CheckShape(model.G, "G", n.d, n.d0, out);
  CheckShape(model.D, "D", n.d, n.m, out);
  CheckShape(model.Q0, "Q0", n.d0, n.d0, out);
  CheckShape(model.Q, "Q", n.d, n.d, out);
  CheckShape(model.R0, "R0", n.k0, n.k0, out);
  CheckShape(model.R, "R", n.k, n.k, out);
  CheckShape(model.H0, "H0", n.d0, n.d, out);
  CheckShape(model.H, "H", n.d, n.d0, out);
  CheckShape(model.H1, "H1", n.d, n.d, out);
  if (model.eta.size() != n.d) out->push_back("eta has wrong length");
  if (!model.eta0) {
    out->push_back("eta0 is not set");
  } else if (model.eta0(0.0).size() != n.d0) {
    out->push_back("eta0 has wrong length");
  }
  if (!(model.T > 0.0) || !std::isfinite(model.T)) {
    out->push_back("horizon T must be positive");
  }
  CheckWeight(model.Q0, "Q0", false, out);
  CheckWeight(model.Q, "Q", false, out);
  CheckWeight(model.R0, "R0", true, out);
  CheckWeight(model.R, "R", true, out);
  return report;
}

MajorMinorLqModel ValidatedModel(const MajorMinorLqModel& model) {
  const ValidationReport report = Validate(model);
  if (!report.ok()) throw ValidationError(report.Summary());
  MajorMinorLqModel out = model;
  out.Q0 = 0.5 * (model.Q0 + model.Q0.transpose());
  out.Q = 0.5 * (model.Q + model.Q.transpose());
  out.R0 = 0.5 * (model.R0 + model.R0.transpose());
  out.R = 0.5 * (model.R + model.R.transpose());
  return out;
}

BlockSystem AssembleBlocks(const MajorMinorLqModel& model) {
  const ValidationReport report = Validate(model);
  if (!report.ok()) throw ValidationError(report.Summary());
  const Dims& dm = model.dims;
  const int d = dm.d, d0 = dm.d0, n = d + d0;

  BlockSystem b;
  b.n = n;
  b.LL0.resize(n, n);
  b.LL0 << model.L + model.F, model.G, model.F0, model.L0;
  b.BB0 = MatrixXd::Zero(n, dm.k0);
  b.BB0.bottomRows(d0) = model.B0;
  b.BB = MatrixXd::Zero(n, dm.k);
  b.BB.topRows(d) = model.B;
  b.DD0 = MatrixXd::Zero(n, dm.m0);
  b.DD0.bottomRows(d0) = model.D0;

  // M = [-H0, I] maps X to X0 - H0 Xbar.
  MatrixXd M(d0, n);
  M << -model.H0, MatrixXd::Identity(d0, d0);
  b.FF0 = M.transpose() * model.Q0 * M;
  b.FF0 = 0.5 * (b.FF0 + b.FF0.transpose());

  const MatrixXd Mt_Q0 = M.transpose() * model.Q0;
  b.f0 = [eta0 = model.eta0, Mt_Q0](double t) -> VectorXd {
    return -Mt_Q0 * eta0(t);
  };
  return b;
}

InitialLaw InitialLaw::Deterministic(const VectorXd& major, const VectorXd& minor) {
  return {major, MatrixXd::Zero(major.size(), major.size()), minor,
          MatrixXd::Zero(minor.size(), minor.size())};
}

VectorXd InitialLaw::ReducedMean() const {
  VectorXd m(minor_mean.size() + major_mean.size());
  m << minor_mean, major_mean;
  return m;
}

MatrixXd InitialLaw::ReducedCov() const {
  const int d = minor_mean.size(), d0 = major_mean.size();
  MatrixXd c = MatrixXd::Zero(d + d0, d + d0);
  c.bottomRightCorner(d0, d0) = major_cov;
  return c;
}

ControlWeights ComputeControlWeights(const MajorMinorLqModel& model,
                                     const BlockSystem& blocks) {
  ControlWeights w;
  w.R0inv = model.R0.llt().solve(MatrixXd::Identity(model.dims.k0, model.dims.k0));
  w.Rinv = model.R.llt().solve(MatrixXd::Identity(model.dims.k, model.dims.k));
  w.major_quad = blocks.BB0 * w.R0inv * blocks.BB0.transpose();
  w.minor_quad = model.B * w.Rinv * model.B.transpose();
  w.FG.resize(model.dims.d, blocks.n);
  w.FG << model.F, model.G;
  w.H1H.resize(model.dims.d, blocks.n);
  w.H1H << model.H1, model.H;
  return w;
}

}  // namespace mfglq
