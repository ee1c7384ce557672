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

#include <cmath>

#include <doctest.h>
#include <Eigen/Dense>

#include "dss/koopman.hpp"
#include "dss/observables.hpp"
#include "dss/rng.hpp"

namespace dss {

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
  }
  return m;
}

// Row-convention trajectory following psi_{k+1}^T = psi_k^T * K exactly.
LiftedTrajectory orbit(const Eigen::MatrixXd& k_true, const Eigen::VectorXd& start,
                       Eigen::Index steps) {
  LiftedTrajectory lifted;
  lifted.dt = 0.1;
  lifted.trial_id = "orbit";
  lifted.points.resize(steps, start.size());
  Eigen::RowVectorXd row = start.transpose();
  for (Eigen::Index s = 0; s < steps; ++s) {
    lifted.points.row(s) = row;
    row = row * k_true;
  }
  return lifted;
}

}  // namespace

TEST_CASE("pseudoinverse satisfies the Moore-Penrose identities") {
  Rng rng(17);
  const Eigen::MatrixXd low_rank =
      random_matrix(8, 5, rng) * random_matrix(5, 8, rng);  // rank <= 5
  const Eigen::MatrixXd pinv = pseudoinverse(low_rank);

  CHECK((low_rank * pinv * low_rank - low_rank).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((pinv * low_rank * pinv - pinv).cwiseAbs().maxCoeff() < 1e-8);
  const Eigen::MatrixXd ap = low_rank * pinv;
  const Eigen::MatrixXd pa = pinv * low_rank;
  CHECK((ap - ap.transpose()).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((pa - pa.transpose()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("pseudoinverse of the identity is the identity") {
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(4, 4);
  CHECK((pseudoinverse(eye) - eye).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gram matrices average outer products over transition pairs") {
  LiftedTrajectory lifted;
  lifted.dt = 0.1;
  lifted.points.resize(2, 2);
  lifted.points << 1.0, 2.0, 3.0, 4.0;

  const GramPair gram = gram_matrices(lifted);
  CHECK(gram.sample_count == 1);
  Eigen::MatrixXd g_want(2, 2);
  g_want << 1.0, 2.0, 2.0, 4.0;  // psi_0 psi_0^T
  Eigen::MatrixXd a_want(2, 2);
  a_want << 3.0, 4.0, 6.0, 8.0;  // psi_0 psi_1^T
  CHECK((gram.g - g_want).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((gram.a - a_want).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("fit_koopman recovers an exact linear lifted system") {
  Rng rng(23);
  Eigen::MatrixXd k_true = random_matrix(3, 3, rng);
  k_true *= 0.95 / std::abs(k_true.eigenvalues().cwiseAbs().maxCoeff());

  Eigen::VectorXd start(3);
  start << 1.0, -0.4, 0.7;
  const LiftedTrajectory lifted = orbit(k_true, start, 60);

  const KoopmanOperator op = fit_koopman(lifted);
  CHECK((op.matrix - k_true).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(op.residual < 1e-12);
  CHECK(op.window.length == 60);
  CHECK(op.window.start == 0);
  CHECK(op.window.trial_id == "orbit");

  const LiftedPoint p = lifted.points.row(10).transpose();
  const LiftedPoint next = predict(op, p);
  CHECK((next.transpose() - lifted.points.row(11)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("fit_koopman matches a stacked least-squares oracle with noise") {
  Rng rng(29);
  Eigen::MatrixXd k_true = random_matrix(4, 4, rng);
  k_true *= 0.9 / std::abs(k_true.eigenvalues().cwiseAbs().maxCoeff());

  Eigen::VectorXd start(4);
  start << 1.0, 0.3, -0.8, 0.5;
  LiftedTrajectory lifted = orbit(k_true, start, 120);
  for (Eigen::Index i = 0; i < lifted.points.rows(); ++i) {
    for (Eigen::Index j = 0; j < lifted.points.cols(); ++j) {
      lifted.points(i, j) += 1e-4 * rng.gaussian();
    }
  }

  const Eigen::Index m = lifted.points.rows() - 1;
  const Eigen::MatrixXd x = lifted.points.topRows(m);
  const Eigen::MatrixXd y = lifted.points.bottomRows(m);
  const Eigen::MatrixXd k_lsq = x.colPivHouseholderQr().solve(y);

  const KoopmanOperator op = fit_koopman(lifted);
  CHECK((op.matrix - k_lsq).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("residual measures one-step prediction error") {
  LiftedTrajectory lifted;
  lifted.dt = 1.0;
  lifted.points.resize(3, 1);
  lifted.points << 1.0, 2.0, 4.0;

  KoopmanOperator op;
  op.matrix = Eigen::MatrixXd::Constant(1, 1, 2.0);
  CHECK(residual(op, lifted) == doctest::Approx(0.0));

  op.matrix(0, 0) = 1.0;
  // (1/2) * ((2-1)^2 + (4-2)^2) = 2.5
  CHECK(residual(op, lifted) == doctest::Approx(2.5));
}

TEST_CASE("fit_koopman rejects too-short input") {
  LiftedTrajectory lifted;
  lifted.points.resize(1, 2);
  lifted.points << 1.0, 2.0;
  CHECK_THROWS_AS(fit_koopman(lifted), std::invalid_argument);
}

TEST_CASE("rank-deficient windows fit without error") {
  LiftedTrajectory lifted;
  lifted.dt = 0.5;
  lifted.points.resize(5, 3);
  for (Eigen::Index k = 0; k < 5; ++k) {
    lifted.points(k, 0) = static_cast<double>(k + 1);
    lifted.points(k, 1) = 2.0 * static_cast<double>(k + 1);  // colinear
    lifted.points(k, 2) = 1.0;
  }
  const KoopmanOperator op = fit_koopman(lifted);
  CHECK(op.matrix.allFinite());
  // Minimum-norm solution still reproduces the data it was fit on.
  for (Eigen::Index k = 0; k + 1 < 5; ++k) {
    const LiftedPoint next = predict(op, lifted.points.row(k).transpose());
    CHECK((next.transpose() - lifted.points.row(k + 1)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

}  // namespace dss
