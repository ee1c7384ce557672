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
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "dss/rng.hpp"
#include "dss/types.hpp"

namespace dss {

// Pendulum on a cart with the cart acceleration as the input:
//   theta_dd = (g / l) sin(theta) - (u / l) cos(theta) - b * theta_dot
//   x_c_dd   = u
// theta = 0 is the upright pole; theta is kept in (-pi, pi].
struct CartPoleState {
  double theta = 0.0;
  double x_c = 0.0;
  double theta_dot = 0.0;
  double xc_dot = 0.0;
};

struct SimParams {
  double length = 1.0;
  double gravity = 9.81;
  double damping = 0.01;
  double u_sat = 20.0;
  double dt = 1.0 / 60.0;

  void validate() const;
};

struct ControlGoal {
  double theta = 0.0;
  double x_c = 1.0;
  double theta_dot = 0.0;
  double xc_dot = 0.0;
};

// One RK4 step under a zero-order-hold input. Inputs outside the
// saturation band are clamped; *clamped reports when that happened.
CartPoleState step(const CartPoleState& state, double u, const SimParams& params,
                   bool* clamped = nullptr);

// Pendulum energy (1/2) l^2 theta_dot^2 + g l cos(theta); the upright
// rest energy is g * l.
double total_energy(const CartPoleState& state, const SimParams& params);

// Energy-shaping swing-up blended with an LQR catch near the top. The
// control law is stateless: the same state always produces the same input.
class OptimalController {
 public:
  struct Gains {
    double energy = 2.0;        // swing-up pump gain
    double kick = 8.0;          // push applied from near-rest low energy
    double cart_p = 0.6;        // swing-up cart recentering
    double cart_d = 1.2;
    double lqr_r = 1.0;
    double switch_angle = 0.35; // |theta| below this and
    double switch_rate = 2.0;   // |theta_dot| below this engages the LQR
  };

  OptimalController(const SimParams& params, const ControlGoal& goal, const Gains& gains);
  OptimalController(const SimParams& params, const ControlGoal& goal)
      : OptimalController(params, goal, Gains{}) {}

  double control(const CartPoleState& state) const;
  const Eigen::RowVector4d& lqr_gain() const { return k_; }

 private:
  SimParams params_;
  ControlGoal goal_;
  Gains gains_;
  Eigen::RowVector4d k_;  // state order (theta, x_c, theta_dot, xc_dot)
};

// Convenience wrapper; builds the controller with default gains.
double optimal_control(const CartPoleState& state, const SimParams& params,
                       const ControlGoal& goal);

// Discrete LQR gain for the upright linearization, state order
// (theta, x_c, theta_dot, xc_dot), Q = diag(200, 80, 0.01, 0.2).
Eigen::RowVector4d lqr_gain(const SimParams& params, double r);

// Shared-control gate: the user input passes when it pushes in the same
// direction as the optimal input (or is zero); otherwise it is rejected
// and zero is applied. Magnitude is never increased.
double assistance_filter(double u_user, double u_opt);

// Imperfect operator: delayed state, scaled feedback, and additive input
// noise around the optimal policy. Holds the delay buffer and noise draw
// state, so one instance serves one trial.
class SyntheticSubject {
 public:
  struct Skill {
    double gain_error = 0.0;     // multiplies the optimal input by 1 + gain_error
    int delay_samples = 0;       // reaction lag in control periods
    double noise_sigma = 0.0;    // stddev of additive input noise
  };

  SyntheticSubject(const OptimalController& base, const Skill& skill, Rng rng,
                   double u_sat = 20.0);

  double control(const CartPoleState& state);
  const Skill& skill() const { return skill_; }

 private:
  const OptimalController& base_;
  Skill skill_;
  Rng rng_;
  double u_sat_;
  std::deque<CartPoleState> history_;
};

using ControlPolicy = std::function<double(const CartPoleState&)>;

struct TrialOptions {
  double duration = 30.0;
  SimParams params;
  std::string agent_tag = "optimal";
  std::string trial_prefix = "trial";
};

// Simulates one trial from a random downward-ish initial pole angle. The
// recorded input at each sample is what the policy produced there (after
// saturation), so samples and inputs align one-to-one.
Trajectory run_trial(const ControlPolicy& policy, const TrialOptions& options,
                     std::uint64_t seed, const std::string& trial_id);

// Batch helper: trial t uses the deterministic substream split(seed, t).
// The policy factory runs once per trial so stateful policies start fresh.
std::vector<Trajectory> generate_trials(
    const std::function<ControlPolicy(std::uint64_t trial_seed)>& make_policy,
    std::size_t count, const TrialOptions& options, std::uint64_t seed);

}  // namespace dss
