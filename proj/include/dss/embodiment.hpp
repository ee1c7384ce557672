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

#include <vector>

#include "dss/graph.hpp"
#include "dss/segmentation.hpp"
#include "dss/types.hpp"

namespace dss {

struct EmbodimentScore {
  double kl = 0.0;                 // nats
  SymbolDistribution agent;        // observed class frequencies
  SymbolDistribution reference;    // model distribution compared against
  Eigen::Index sample_count = 0;
};

// KL(p || q) in nats over matching supports. When p has mass where q has
// none, q is smoothed as (q + eps) / (1 + K * eps) with eps = 1e-10 before
// evaluation; otherwise q enters untouched, so kl(p, p) is exactly zero.
double kl_divergence(const SymbolDistribution& p, const SymbolDistribution& q);

// Class frequencies of the trajectories under the model's state-space
// partition, indexed like the model's exemplars.
SymbolDistribution behavior_frequencies(const DssModel& model,
                                        const std::vector<Trajectory>& trajectories);

// Task embodiment of an agent against a reference graph: KL from the
// reference state distribution to the agent's observed class frequencies.
// Lower is better; zero means the agent occupies behaviors exactly as the
// reference does.
EmbodimentScore task_embodiment(const BehaviorGraph& reference, const DssModel& model,
                                const std::vector<Trajectory>& trajectories);

// Time-integrated squared tracking error of the pole: sum over samples of
// wrap(theta - theta_goal)^2 + (theta_dot - theta_dot_goal)^2, times dt.
double integrated_mse(const Trajectory& trajectory, double theta_goal,
                      double theta_dot_goal);

}  // namespace dss
