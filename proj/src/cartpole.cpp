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

#include "dss/cartpole.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "dss/errors.hpp"
#include "dss/log.hpp"

namespace dss {

namespace {

struct Deriv {
  double theta_dot = 0.0;
  double xc_dot = 0.0;
  double theta_dd = 0.0;
  double xc_dd = 0.0;
};

Deriv dynamics(const CartPoleState& s, double u, const SimParams& p) {
  Deriv d;
  d.theta_dot = s.theta_dot;
  d.xc_dot = s.xc_dot;
  d.theta_dd = (p.gravity / p.length) * std::sin(s.theta) -
               (u / p.length) * std::cos(s.theta) - p.damping * s.theta_dot;
  d.xc_dd = u;
  return d;
}

CartPoleState advance(const CartPoleState& s, const Deriv& d, double h) {
  CartPoleState out;
  out.theta = s.theta + h * d.theta_dot;
  out.x_c = s.x_c + h * d.xc_dot;
  out.theta_dot = s.theta_dot + h * d.theta_dd;
  out.xc_dot = s.xc_dot + h * d.xc_dd;
  return out;
}

}  // namespace

void SimParams::validate() const {
  if (length <= 0.0 || gravity <= 0.0) {
    throw std::invalid_argument("sim params: length and gravity must be positive");
  }
  if (damping < 0.0) throw std::invalid_argument("sim params: damping must be nonnegative");
  if (u_sat <= 0.0) throw std::invalid_argument("sim params: u_sat must be positive");
  if (dt <= 0.0) throw std::invalid_argument("sim params: dt must be positive");
}

CartPoleState step(const CartPoleState& state, double u, const SimParams& params,
                   bool* clamped) {
  if (!std::isfinite(u) || !std::isfinite(state.theta) || !std::isfinite(state.x_c) ||
      !std::isfinite(state.theta_dot) || !std::isfinite(state.xc_dot)) {
    throw std::invalid_argument("step: non-finite state or input");
  }
  const double bounded = std::clamp(u, -params.u_sat, params.u_sat);
  if (clamped) *clamped = bounded != u;

  const double h = params.dt;
  const Deriv k1 = dynamics(state, bounded, params);
  const Deriv k2 = dynamics(advance(state, k1, 0.5 * h), bounded, params);
  const Deriv k3 = dynamics(advance(state, k2, 0.5 * h), bounded, params);
  const Deriv k4 = dynamics(advance(state, k3, h), bounded, params);

  CartPoleState out;
  out.theta = state.theta +
              (h / 6.0) * (k1.theta_dot + 2.0 * k2.theta_dot + 2.0 * k3.theta_dot + k4.theta_dot);
  out.x_c = state.x_c + (h / 6.0) * (k1.xc_dot + 2.0 * k2.xc_dot + 2.0 * k3.xc_dot + k4.xc_dot);
  out.theta_dot = state.theta_dot +
                  (h / 6.0) * (k1.theta_dd + 2.0 * k2.theta_dd + 2.0 * k3.theta_dd + k4.theta_dd);
  out.xc_dot = state.xc_dot + (h / 6.0) * (k1.xc_dd + 2.0 * k2.xc_dd + 2.0 * k3.xc_dd + k4.xc_dd);
  out.theta = wrap_angle(out.theta);
  return out;
}

double total_energy(const CartPoleState& state, const SimParams& params) {
  const double l = params.length;
  return 0.5 * l * l * state.theta_dot * state.theta_dot +
         params.gravity * l * std::cos(state.theta);
}

Eigen::RowVector4d lqr_gain(const SimParams& params, double r) {
  params.validate();
  if (r <= 0.0) throw std::invalid_argument("lqr_gain: r must be positive");

  // Upright linearization; the input enters the pole through -u/l.
  Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
  a(0, 2) = 1.0;
  a(1, 3) = 1.0;
  a(2, 0) = params.gravity / params.length;
  a(2, 2) = -params.damping;
  Eigen::Vector4d b(0.0, 0.0, -1.0 / params.length, 1.0);

  // Zero-order-hold discretization through one matrix exponential.
  Eigen::Matrix<double, 5, 5> block = Eigen::Matrix<double, 5, 5>::Zero();
  block.topLeftCorner<4, 4>() = a * params.dt;
  block.topRightCorner<4, 1>() = b * params.dt;
  const Eigen::Matrix<double, 5, 5> expm = block.exp();
  const Eigen::Matrix4d ad = expm.topLeftCorner<4, 4>();
  const Eigen::Vector4d bd = expm.topRightCorner<4, 1>();

  const Eigen::Vector4d q_diag(200.0, 80.0, 0.01, 0.2);
  const Eigen::Matrix4d q = q_diag.asDiagonal();

  Eigen::Matrix4d p = q;
  Eigen::RowVector4d k = Eigen::RowVector4d::Zero();
  for (int iter = 0; iter < 100000; ++iter) {
    const double denom = r + bd.dot(p * bd);
    const Eigen::RowVector4d k_next = (bd.transpose() * p * ad) / denom;
    const Eigen::Matrix4d closed = ad - bd * k_next;
    const Eigen::Matrix4d p_next =
        q + k_next.transpose() * r * k_next + closed.transpose() * p * closed;
    const double delta = (p_next - p).cwiseAbs().maxCoeff();
    p = p_next;
    k = k_next;
    if (delta < 1e-12 * std::max(1.0, p.cwiseAbs().maxCoeff())) {
      return k;
    }
  }
  throw NumericError("lqr_gain: Riccati recursion did not converge");
}

OptimalController::OptimalController(const SimParams& params, const ControlGoal& goal,
                                     const Gains& gains)
    : params_(params), goal_(goal), gains_(gains) {
  params_.validate();
  if (std::abs(wrap_angle(goal_.theta)) > 1e-12) {
    throw std::invalid_argument("optimal controller: only the upright goal is supported");
  }
  k_ = dss::lqr_gain(params_, gains_.lqr_r);
  log::debug("cartpole", "lqr gain [", k_(0), ", ", k_(1), ", ", k_(2), ", ", k_(3), "]");
}

double OptimalController::control(const CartPoleState& state) const {
  const double theta_err = wrap_angle(state.theta - goal_.theta);
  if (std::abs(theta_err) <= gains_.switch_angle &&
      std::abs(state.theta_dot - goal_.theta_dot) <= gains_.switch_rate) {
    const Eigen::Vector4d err(theta_err, state.x_c - goal_.x_c,
                              state.theta_dot - goal_.theta_dot, state.xc_dot - goal_.xc_dot);
    return std::clamp(-(k_ * err)(0), -params_.u_sat, params_.u_sat);
  }

  const double energy = total_energy(state, params_);
  const double target = params_.gravity * params_.length;
  double u = gains_.energy * (energy - target) * state.theta_dot * std::cos(state.theta);
  if (std::abs(state.theta_dot) < 0.1 && energy < target - 1e-3) {
    u += gains_.kick;
  }
  u += -gains_.cart_p * (state.x_c - goal_.x_c) - gains_.cart_d * state.xc_dot;
  return std::clamp(u, -params_.u_sat, params_.u_sat);
}

double optimal_control(const CartPoleState& state, const SimParams& params,
                       const ControlGoal& goal) {
  return OptimalController(params, goal).control(state);
}

double assistance_filter(double u_user, double u_opt) {
  if (!std::isfinite(u_user) || !std::isfinite(u_opt)) {
    throw std::invalid_argument("assistance_filter: non-finite input");
  }
  if (u_user == 0.0) return 0.0;
  return u_user * u_opt > 0.0 ? u_user : 0.0;
}

SyntheticSubject::SyntheticSubject(const OptimalController& base, const Skill& skill, Rng rng,
                                   double u_sat)
    : base_(base), skill_(skill), rng_(rng), u_sat_(u_sat) {
  if (u_sat_ <= 0.0) throw std::invalid_argument("synthetic subject: u_sat must be positive");
  if (skill_.delay_samples < 0) {
    throw std::invalid_argument("synthetic subject: negative delay");
  }
  if (skill_.noise_sigma < 0.0) {
    throw std::invalid_argument("synthetic subject: negative noise sigma");
  }
}

double SyntheticSubject::control(const CartPoleState& state) {
  history_.push_back(state);
  const std::size_t want = static_cast<std::size_t>(skill_.delay_samples) + 1;
  while (history_.size() > want) history_.pop_front();
  const CartPoleState& seen = history_.front();
  double u = (1.0 + skill_.gain_error) * base_.control(seen);
  if (skill_.noise_sigma > 0.0) u += skill_.noise_sigma * rng_.gaussian();
  return std::clamp(u, -u_sat_, u_sat_);
}

Trajectory run_trial(const ControlPolicy& policy, const TrialOptions& options,
                     std::uint64_t seed, const std::string& trial_id) {
  options.params.validate();
  if (options.duration <= 0.0) throw std::invalid_argument("run_trial: duration must be positive");
  const double steps_raw = options.duration / options.params.dt;
  const auto steps = static_cast<Eigen::Index>(std::llround(steps_raw));
  if (std::abs(steps_raw - static_cast<double>(steps)) > 1e-9) {
    throw std::invalid_argument("run_trial: duration must be an integer number of steps");
  }

  Rng rng = Rng::split(seed, 0);
  CartPoleState state;
  state.theta = wrap_angle(rng.uniform(-kPi, kPi));
  state.x_c = 0.0;
  state.theta_dot = 0.0;
  state.xc_dot = 0.0;

  Trajectory trajectory;
  trajectory.states.resize(steps + 1, 4);
  trajectory.controls.resize(steps + 1);
  trajectory.dt = options.params.dt;
  trajectory.t0 = 0.0;
  trajectory.trial_id = trial_id;
  trajectory.agent_tag = options.agent_tag;
  trajectory.seed = seed;

  for (Eigen::Index k = 0; k <= steps; ++k) {
    const double u_raw = policy(state);
    const double u = std::clamp(u_raw, -options.params.u_sat, options.params.u_sat);
    trajectory.states(k, 0) = state.theta;
    trajectory.states(k, 1) = state.x_c;
    trajectory.states(k, 2) = state.theta_dot;
    trajectory.states(k, 3) = state.xc_dot;
    trajectory.controls(k) = u;
    if (k < steps) state = step(state, u, options.params);
  }
  return trajectory;
}

std::vector<Trajectory> generate_trials(
    const std::function<ControlPolicy(std::uint64_t trial_seed)>& make_policy,
    std::size_t count, const TrialOptions& options, std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("generate_trials: count must be positive");
  std::vector<Trajectory> trials;
  trials.reserve(count);
  for (std::size_t t = 0; t < count; ++t) {
    const std::uint64_t trial_seed = Rng::split(seed, t).next_u64();
    const ControlPolicy policy = make_policy(trial_seed);
    const std::string trial_id = options.trial_prefix + "-" + std::to_string(t);
    trials.push_back(run_trial(policy, options, trial_seed, trial_id));
  }
  return trials;
}

}  // namespace dss
