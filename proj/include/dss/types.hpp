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

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>

namespace dss {

// Row-major so that per-sample rows are contiguous for the kernels.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kPi = 3.14159265358979323846;

// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * kPi;
  a = std::fmod(a + kPi, kTwoPi);
  if (a <= 0.0) a += kTwoPi;
  return a - kPi;
}

// Time-stamped state + control samples of one trial. States are rows; the
// column layout is system-specific (the cart-pendulum uses
// [theta, x_c, theta_dot, xc_dot]).
struct Trajectory {
  RowMatrix states;          // samples x state_dim
  Eigen::VectorXd controls;  // one control value per sample
  double dt = 0.0;
  double t0 = 0.0;
  std::string trial_id;
  std::string agent_tag;
  uint64_t seed = 0;

  Eigen::Index size() const { return states.rows(); }
  Eigen::Index state_dim() const { return states.cols(); }
};

}  // namespace dss
