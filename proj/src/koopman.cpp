// Copyright 2026 The DSS Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dss/koopman.hpp"

#include <stdexcept>

#include "dss/kernels.hpp"

namespace dss {

GramPair gram_matrices(const LiftedTrajectory& lifted) {
  const Eigen::Index n = lifted.size();
  if (n < 2) throw std::invalid_argument("gram_matrices: need at least 2 lifted points");
  const Eigen::Index dim = lifted.dimension();
  const Eigen::Index pairs = n - 1;

  RowMatrix g = RowMatrix::Zero(dim, dim);
  RowMatrix a = RowMatrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < pairs; ++k) {
    const double* cur = lifted.points.data() + k * dim;
    const double* next = cur + dim;
    kernels::outer_accumulate(g.data(), cur, cur, static_cast<std::size_t>(dim));
    kernels::outer_accumulate(a.data(), cur, next, static_cast<std::size_t>(dim));
  }
  const double inv_m = 1.0 / static_cast<double>(pairs);
  GramPair out;
  out.g = g * inv_m;
  out.a = a * inv_m;
  out.sample_count = pairs;
  return out;
}

Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& m, double rel_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double cutoff = sigma.size() > 0 ? rel_tol * sigma(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff && sigma(i) > 0.0) inv(i) = 1.0 / sigma(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

KoopmanOperator fit_koopman(const LiftedTrajectory& lifted) {
  const GramPair gp = gram_matrices(lifted);
  KoopmanOperator op;
  op.matrix = pseudoinverse(gp.g) * gp.a;
  op.window = {lifted.trial_id, 0, lifted.size()};
  op.residual = residual(op, lifted);
  return op;
}

LiftedPoint predict(const KoopmanOperator& op, const LiftedPoint& p) {
  if (p.size() != op.matrix.rows()) {
    throw std::invalid_argument("predict: point dimension " + std::to_string(p.size()) +
                                " != operator dimension " + std::to_string(op.matrix.rows()));
  }
  return op.matrix.transpose() * p;
}

double residual(const KoopmanOperator& op, const LiftedTrajectory& lifted) {
  if (lifted.dimension() != op.matrix.rows()) {
    throw std::invalid_argument("residual: dimension mismatch");
  }
  if (lifted.size() < 2) throw std::invalid_argument("residual: need at least 2 lifted points");
  double acc = 0.0;
  for (Eigen::Index k = 0; k + 1 < lifted.size(); ++k) {
    const Eigen::RowVectorXd err =
        lifted.points.row(k + 1) - lifted.points.row(k) * op.matrix;
    acc += err.squaredNorm();
  }
  return 0.5 * acc;
}

}  // namespace dss
