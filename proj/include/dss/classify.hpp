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

#include <cstdint>
#include <vector>

#include "dss/observables.hpp"
#include "dss/types.hpp"

namespace dss {

struct SvmParams {
  double c = 1.0;
  double gamma = 0.0;      // 0 selects 1 / (dim * mean feature variance)
  double tolerance = 1e-3;
  std::int64_t max_iter = 200000;  // per binary subproblem
};

// One binary classifier of the one-vs-one ensemble. Support vector rows
// live in the shared SvmModel matrix; decision(x) > 0 votes class_a.
struct BinarySvm {
  int class_a = 0;
  int class_b = 0;
  std::vector<Eigen::Index> sv_index;
  Eigen::VectorXd coef;  // alpha_i * y_i, y = +1 for class_a
  double rho = 0.0;
};

struct SvmModel {
  Eigen::VectorXd mean;   // feature standardization
  Eigen::VectorXd scale;  // per-feature sigma; 1 where degenerate
  double gamma = 0.0;
  double c = 1.0;
  std::vector<int> classes;  // ascending class labels seen in training
  bool degenerate = false;   // single-class training set
  RowMatrix support_vectors; // standardized coordinates
  std::vector<BinarySvm> binaries;

  Eigen::Index dimension() const { return mean.size(); }
  int num_classes() const { return static_cast<int>(classes.size()); }
};

// Trains a one-vs-one RBF ensemble with sequential minimal optimization.
// Features are standardized internally; gamma = 0 picks the default above.
// A single-class input produces a constant classifier flagged degenerate.
SvmModel train_svm(const RowMatrix& points, const std::vector<int>& labels,
                   const SvmParams& params);

// Signed decision value of one binary classifier on a raw-feature point.
double binary_decision(const SvmModel& model, std::size_t binary_index,
                       const LiftedPoint& point);

// Majority vote over all pairs; vote and score ties resolve toward the
// lower class index.
int classify(const SvmModel& model, const LiftedPoint& point);

// Classifies every sample of an already-lifted trajectory.
std::vector<int> classify_trajectory(const SvmModel& model, const LiftedTrajectory& lifted);

// Lifts every sample of the trajectory through the basis, then classifies.
std::vector<int> classify_trajectory(const SvmModel& model, const BasisSpec& basis,
                                     const Trajectory& trajectory);

}  // namespace dss
