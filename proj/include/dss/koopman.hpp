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

#pragma once

#include <string>

#include "dss/observables.hpp"
#include "dss/types.hpp"

namespace dss {

struct WindowRef {
  std::string trial_id;
  Eigen::Index start = 0;
  Eigen::Index length = 0;
};

// Finite-dimensional Koopman estimate over one data window.
//
// Row convention throughout: lifted row vectors evolve as
//   psi(x_{k+1})^T ~= psi(x_k)^T * matrix,
// i.e. stacking lifted points as rows Psi and their successors as Psi',
// `matrix` is the least-squares solution of Psi * K = Psi'.
struct KoopmanOperator {
  Eigen::MatrixXd matrix;  // N x N
  std::string basis_id;
  WindowRef window;
  double residual = 0.0;
};

struct GramPair {
  Eigen::MatrixXd g;           // (1/M) sum psi_k psi_k^T
  Eigen::MatrixXd a;           // (1/M) sum psi_k psi_{k+1}^T
  Eigen::Index sample_count;   // M = |lifted| - 1 transition pairs
};

GramPair gram_matrices(const LiftedTrajectory& lifted);

// Closed-form fit K = pinv(G) * A; minimum-norm solution on rank-deficient
// windows. The stored residual is the squared-error objective on the
// window's own data.
KoopmanOperator fit_koopman(const LiftedTrajectory& lifted);

// One-step lifted prediction p^T K.
LiftedPoint predict(const KoopmanOperator& op, const LiftedPoint& p);

// (1/2) sum_k ||psi(x_{k+1}) - predict(K, psi(x_k))||^2.
double residual(const KoopmanOperator& op, const LiftedTrajectory& lifted);

// SVD pseudoinverse; singular values below rel_tol * sigma_max are dropped.
Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& m, double rel_tol = 1e-10);

}  // namespace dss
