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

#include "dss/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dss/errors.hpp"

namespace dss {
namespace {

std::string xi(int i) { return "x" + std::to_string(i); }

}  // namespace

double Primitive::eval(const Eigen::VectorXd& state, double control) const {
  switch (kind) {
    case Kind::kState: return state(i);
    case Kind::kControl: return control;
    case Kind::kConst: return 1.0;
    case Kind::kProdStates: return state(i) * state(j);
    case Kind::kControlTimesState: return control * state(i);
    case Kind::kControlSquared: return control * control;
    case Kind::kSin: return std::sin(state(i));
    case Kind::kCos: return std::cos(state(i));
    case Kind::kCosSq: {
      const double c = std::cos(state(i));
      return c * c;
    }
    case Kind::kControlCos: return control * std::cos(state(i));
    case Kind::kControlSin: return control * std::sin(state(i));
    case Kind::kSatCosSqControl: {
      const double s = std::abs(param);
      const double c = std::cos(control * kPi / s);
      return s * c * c;
    }
  }
  throw NumericError("unknown basis primitive");
}

std::string Primitive::name() const {
  switch (kind) {
    case Kind::kState: return xi(i);
    case Kind::kControl: return "u";
    case Kind::kConst: return "1";
    case Kind::kProdStates: return xi(i) + "*" + xi(j);
    case Kind::kControlTimesState: return "u*" + xi(i);
    case Kind::kControlSquared: return "u^2";
    case Kind::kSin: return "sin(" + xi(i) + ")";
    case Kind::kCos: return "cos(" + xi(i) + ")";
    case Kind::kCosSq: return "cos^2(" + xi(i) + ")";
    case Kind::kControlCos: return "u*cos(" + xi(i) + ")";
    case Kind::kControlSin: return "u*sin(" + xi(i) + ")";
    case Kind::kSatCosSqControl: {
      const double s = std::abs(param);
      const std::string sat = std::to_string(s);
      return sat + "*cos^2(u*pi/" + sat + ")";
    }
  }
  return "?";
}

int Primitive::max_state_index() const {
  switch (kind) {
    case Kind::kControl:
    case Kind::kConst:
    case Kind::kControlSquared:
    case Kind::kSatCosSqControl:
      return -1;
    case Kind::kProdStates:
      return std::max(i, j);
    default:
      return i;
  }
}

BasisSpec::BasisSpec(std::string id, int state_dim, std::vector<Primitive> entries,
                     std::vector<int> angle_dims)
    : id_(std::move(id)),
      state_dim_(state_dim),
      entries_(std::move(entries)),
      angle_dims_(std::move(angle_dims)) {
  if (state_dim_ < 0) throw std::invalid_argument("basis: state_dim must be nonnegative");
  if (entries_.empty()) throw std::invalid_argument("basis: needs at least one entry");
  for (const Primitive& p : entries_) {
    if (p.max_state_index() >= state_dim_) {
      throw std::invalid_argument("basis: entry " + p.name() + " references state index " +
                                  std::to_string(p.max_state_index()) + " but state_dim is " +
                                  std::to_string(state_dim_));
    }
    if (p.kind == Primitive::Kind::kSatCosSqControl && std::abs(p.param) <= 0.0) {
      throw std::invalid_argument("basis: saturation scale must be nonzero");
    }
  }
  for (int d : angle_dims_) {
    if (d < 0 || d >= state_dim_) throw std::invalid_argument("basis: angle dim out of range");
  }
}

std::vector<std::string> BasisSpec::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const Primitive& p : entries_) out.push_back(p.name());
  return out;
}

LiftedPoint evaluate_basis(const BasisSpec& spec, const Eigen::VectorXd& state, double control) {
  if (state.size() != spec.state_dim()) {
    throw std::invalid_argument("evaluate_basis: state has dimension " +
                                std::to_string(state.size()) + ", basis expects " +
                                std::to_string(spec.state_dim()));
  }
  if (!state.allFinite() || !std::isfinite(control)) {
    throw std::invalid_argument("evaluate_basis: non-finite input");
  }
  Eigen::VectorXd wrapped = state;
  for (int d : spec.angle_dims()) wrapped(d) = wrap_angle(wrapped(d));

  LiftedPoint out(spec.dimension());
  for (int k = 0; k < spec.dimension(); ++k) {
    const double v = spec.entries()[k].eval(wrapped, control);
    if (!std::isfinite(v)) {
      throw NumericError("evaluate_basis: entry " + spec.entries()[k].name() +
                         " produced a non-finite value");
    }
    out(k) = v;
  }
  return out;
}

LiftedTrajectory lift_trajectory(const BasisSpec& spec, const Trajectory& traj) {
  if (traj.size() == 0) throw std::invalid_argument("lift_trajectory: empty trajectory");
  if (traj.controls.size() != traj.size()) {
    throw std::invalid_argument("lift_trajectory: control count != sample count");
  }
  LiftedTrajectory lifted;
  lifted.dt = traj.dt;
  lifted.trial_id = traj.trial_id;
  lifted.points.resize(traj.size(), spec.dimension());
  for (Eigen::Index k = 0; k < traj.size(); ++k) {
    try {
      lifted.points.row(k) = evaluate_basis(spec, traj.states.row(k), traj.controls(k)).transpose();
    } catch (const std::exception& e) {
      throw std::invalid_argument("lift_trajectory: sample " + std::to_string(k) + " of trial '" +
                                  traj.trial_id + "': " + e.what());
    }
  }
  return lifted;
}

BasisSpec cartpole_basis(double u_sat) {
  if (!(u_sat > 0.0)) throw std::invalid_argument("cartpole_basis: u_sat must be > 0");
  using K = Primitive::Kind;
  std::vector<Primitive> entries = {
      {K::kState, 0},                            // theta
      {K::kState, 1},                            // x_c
      {K::kState, 2},                            // theta_dot
      {K::kState, 3},                            // xc_dot
      {K::kControl},                             // u
      {K::kControlCos, 0},                       // u cos(theta)
      {K::kControlCos, 2},                       // u cos(theta_dot)
      {K::kSatCosSqControl, -1, -1, u_sat},      // |u_sat| cos^2(u pi/|u_sat|)
      {K::kProdStates, 3, 3},                    // xc_dot^2
      {K::kConst},                               // 1
  };
  return BasisSpec("cartpole", 4, std::move(entries), {0});
}

BasisSpec identity_basis(int state_dim) {
  if (state_dim < 1) throw std::invalid_argument("identity_basis: state_dim must be >= 1");
  std::vector<Primitive> entries;
  for (int d = 0; d < state_dim; ++d) entries.push_back({Primitive::Kind::kState, d});
  return BasisSpec("identity", state_dim, std::move(entries));
}

BasisSpec linear_const_basis(int state_dim) {
  if (state_dim < 1) throw std::invalid_argument("linear_const_basis: state_dim must be >= 1");
  std::vector<Primitive> entries;
  for (int d = 0; d < state_dim; ++d) entries.push_back({Primitive::Kind::kState, d});
  entries.push_back({Primitive::Kind::kConst});
  return BasisSpec("linear_const", state_dim, std::move(entries));
}

}  // namespace dss
