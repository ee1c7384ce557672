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
#include <stdexcept>

#include <doctest.h>

#include "dss/observables.hpp"

namespace dss {

TEST_CASE("cartpole basis evaluates the documented observables") {
  const BasisSpec basis = cartpole_basis(20.0);
  REQUIRE(basis.dimension() == 10);
  CHECK(basis.state_dim() == 4);
  CHECK(basis.angle_dims() == std::vector<int>{0});

  Eigen::VectorXd state(4);
  state << 0.3, -0.2, 1.5, 0.4;
  const double u = 2.0;
  const LiftedPoint z = evaluate_basis(basis, state, u);

  CHECK(z(0) == doctest::Approx(0.3));
  CHECK(z(1) == doctest::Approx(-0.2));
  CHECK(z(2) == doctest::Approx(1.5));
  CHECK(z(3) == doctest::Approx(0.4));
  CHECK(z(4) == doctest::Approx(2.0));
  CHECK(z(5) == doctest::Approx(2.0 * std::cos(0.3)));
  CHECK(z(6) == doctest::Approx(2.0 * std::cos(1.5)));
  CHECK(z(7) == doctest::Approx(18.090169943749473).epsilon(1e-12));
  CHECK(z(8) == doctest::Approx(0.16));
  CHECK(z(9) == doctest::Approx(1.0));
}

TEST_CASE("angle dimensions are wrapped before evaluation") {
  const BasisSpec basis = cartpole_basis(20.0);
  Eigen::VectorXd state(4);
  state << 3.5 * kPi, 0.0, 0.0, 0.0;
  const LiftedPoint z = evaluate_basis(basis, state, 0.0);
  CHECK(z(0) == doctest::Approx(wrap_angle(3.5 * kPi)));
  CHECK(std::abs(z(0)) <= kPi);
}

TEST_CASE("identity and linear-const bases") {
  const BasisSpec ident = identity_basis(3);
  CHECK(ident.dimension() == 3);
  Eigen::VectorXd x(3);
  x << 1.0, -2.0, 0.5;
  const LiftedPoint zi = evaluate_basis(ident, x, 9.0);
  CHECK(zi(0) == 1.0);
  CHECK(zi(1) == -2.0);
  CHECK(zi(2) == 0.5);

  const BasisSpec lc = linear_const_basis(2);
  CHECK(lc.dimension() == 3);
  Eigen::VectorXd y(2);
  y << 4.0, 5.0;
  const LiftedPoint zl = evaluate_basis(lc, y, 0.0);
  CHECK(zl(2) == 1.0);
  CHECK(lc.names().back() == "1");
}

TEST_CASE("basis names are stable") {
  const auto names = cartpole_basis(20.0).names();
  CHECK(names[0] == "x0");
  CHECK(names[4] == "u");
  CHECK(names[5] == "u*cos(x0)");
  CHECK(names[8] == "x3*x3");
  CHECK(names[9] == "1");
}

TEST_CASE("basis construction rejects bad specs") {
  CHECK_THROWS_AS(identity_basis(0), std::invalid_argument);
  std::vector<Primitive> entries;
  entries.push_back({Primitive::Kind::kState, 3, -1, 0.0});
  CHECK_THROWS_AS(BasisSpec("bad", 2, entries), std::invalid_argument);
  std::vector<Primitive> sat;
  sat.push_back({Primitive::Kind::kSatCosSqControl, -1, -1, 0.0});
  CHECK_THROWS_AS(BasisSpec("sat", 1, sat), std::invalid_argument);
}

TEST_CASE("lift_trajectory maps every sample and copies metadata") {
  Trajectory traj;
  traj.states.resize(3, 2);
  traj.states << 0.0, 1.0, 0.5, -1.0, 1.5, 2.0;
  traj.controls = Eigen::VectorXd::LinSpaced(3, 0.0, 2.0);
  traj.dt = 0.25;
  traj.trial_id = "lift-me";

  const BasisSpec basis = linear_const_basis(2);
  const LiftedTrajectory lifted = lift_trajectory(basis, traj);
  CHECK(lifted.size() == 3);
  CHECK(lifted.dimension() == 3);
  CHECK(lifted.dt == 0.25);
  CHECK(lifted.trial_id == "lift-me");
  CHECK(lifted.points(1, 0) == 0.5);
  CHECK(lifted.points(2, 2) == 1.0);

  Trajectory empty;
  empty.controls = Eigen::VectorXd();
  CHECK_THROWS_AS(lift_trajectory(basis, empty), std::invalid_argument);

  Trajectory mismatched = traj;
  mismatched.controls = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(lift_trajectory(basis, mismatched), std::invalid_argument);
}

TEST_CASE("evaluate_basis rejects bad input") {
  const BasisSpec basis = identity_basis(2);
  Eigen::VectorXd wrong(3);
  wrong.setZero();
  CHECK_THROWS_AS(evaluate_basis(basis, wrong, 0.0), std::invalid_argument);
  Eigen::VectorXd nan(2);
  nan << 0.0, std::nan("");
  CHECK_THROWS_AS(evaluate_basis(basis, nan, 0.0), std::invalid_argument);
}

}  // namespace dss
