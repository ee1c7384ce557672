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
#include <vector>

#include "dss/types.hpp"

namespace dss {

// One scalar observable of the extended state (x, u). The dictionary is a
// fixed menu of primitives so that a basis round-trips through config and
// model files without embedding code.
struct Primitive {
  enum class Kind {
    kState,            // x_i
    kControl,          // u
    kConst,            // 1
    kProdStates,       // x_i * x_j
    kControlTimesState,// u * x_i
    kControlSquared,   // u^2
    kSin,              // sin(x_i)
    kCos,              // cos(x_i)
    kCosSq,            // cos^2(x_i)
    kControlCos,       // u * cos(x_i)
    kControlSin,       // u * sin(x_i)
    kSatCosSqControl,  // |s| * cos^2(u * pi / |s|), param = s
  };

  Kind kind = Kind::kConst;
  int i = -1;
  int j = -1;
  double param = 0.0;

  double eval(const Eigen::VectorXd& state, double control) const;
  std::string name() const;
  // Highest state index referenced, or -1.
  int max_state_index() const;
};

class BasisSpec {
 public:
  // angle_dims lists state components wrapped to (-pi, pi] before any
  // primitive sees them.
  BasisSpec(std::string id, int state_dim, std::vector<Primitive> entries,
            std::vector<int> angle_dims = {});

  int dimension() const { return static_cast<int>(entries_.size()); }
  int state_dim() const { return state_dim_; }
  const std::string& id() const { return id_; }
  const std::vector<Primitive>& entries() const { return entries_; }
  const std::vector<int>& angle_dims() const { return angle_dims_; }
  std::vector<std::string> names() const;

 private:
  std::string id_;
  int state_dim_;
  std::vector<Primitive> entries_;
  std::vector<int> angle_dims_;
};

using LiftedPoint = Eigen::VectorXd;

struct LiftedTrajectory {
  RowMatrix points;  // samples x N, one lifted point per row
  double dt = 0.0;
  std::string trial_id;

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dimension() const { return points.cols(); }
};

LiftedPoint evaluate_basis(const BasisSpec& spec, const Eigen::VectorXd& state, double control);

LiftedTrajectory lift_trajectory(const BasisSpec& spec, const Trajectory& traj);

// The 10-entry cart-pendulum basis
// [theta, x_c, theta_dot, xc_dot, u, u cos(theta), u cos(theta_dot),
//  |u_sat| cos^2(u pi / |u_sat|), xc_dot^2, 1].
BasisSpec cartpole_basis(double u_sat);

// [x_0, ..., x_{d-1}]; control ignored.
BasisSpec identity_basis(int state_dim);

// [x_0, ..., x_{d-1}, 1]; control ignored.
BasisSpec linear_const_basis(int state_dim);

}  // namespace dss
