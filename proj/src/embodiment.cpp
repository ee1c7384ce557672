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

#include "dss/embodiment.hpp"

#include <cmath>
#include <stdexcept>

#include "dss/errors.hpp"

namespace dss {

namespace {

constexpr double kSmoothingEps = 1e-10;
constexpr double kDistributionTol = 1e-8;

void check_distribution(const SymbolDistribution& d, const char* which) {
  if (d.size() == 0) {
    throw std::invalid_argument(std::string("kl_divergence: empty distribution ") + which);
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const double v = d.probabilities(i);
    if (!(v >= 0.0)) {
      throw std::invalid_argument(std::string("kl_divergence: negative entry in ") + which);
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kDistributionTol) {
    throw std::invalid_argument(std::string("kl_divergence: ") + which + " does not sum to 1");
  }
}

}  // namespace

double kl_divergence(const SymbolDistribution& p, const SymbolDistribution& q) {
  check_distribution(p, "p");
  check_distribution(q, "q");
  if (p.size() != q.size()) {
    throw std::invalid_argument("kl_divergence: distributions have different sizes");
  }

  bool needs_smoothing = false;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p.probabilities(i) > 0.0 && q.probabilities(i) == 0.0) {
      needs_smoothing = true;
      break;
    }
  }

  const double k = static_cast<double>(p.size());
  double kl = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double pi = p.probabilities(i);
    if (pi <= 0.0) continue;
    double qi = q.probabilities(i);
    if (needs_smoothing) qi = (qi + kSmoothingEps) / (1.0 + k * kSmoothingEps);
    kl += pi * std::log(pi / qi);
  }
  return kl < 0.0 ? 0.0 : kl;
}

SymbolDistribution behavior_frequencies(const DssModel& model,
                                        const std::vector<Trajectory>& trajectories) {
  if (trajectories.empty()) {
    throw std::invalid_argument("behavior_frequencies: no trajectories");
  }
  const int classes = model.num_classes();
  SymbolDistribution dist;
  dist.counts.assign(static_cast<std::size_t>(classes), 0);
  Eigen::Index total = 0;
  for (const Trajectory& trajectory : trajectories) {
    const std::vector<int> labels = classify_trajectory(model.svm, model.basis, trajectory);
    for (int label : labels) {
      if (label < 0 || label >= classes) {
        throw NumericError("behavior_frequencies: classifier produced an unknown class");
      }
      dist.counts[static_cast<std::size_t>(label)] += 1;
      ++total;
    }
  }
  dist.probabilities.resize(classes);
  for (int j = 0; j < classes; ++j) {
    dist.probabilities(j) =
        static_cast<double>(dist.counts[static_cast<std::size_t>(j)]) / static_cast<double>(total);
  }
  return dist;
}

EmbodimentScore task_embodiment(const BehaviorGraph& reference, const DssModel& model,
                                const std::vector<Trajectory>& trajectories) {
  if (reference.num_classes() != model.num_classes()) {
    throw std::invalid_argument("task_embodiment: reference graph and model class counts differ");
  }
  EmbodimentScore score;
  score.agent = behavior_frequencies(model, trajectories);
  score.reference = reference.distribution;
  score.kl = kl_divergence(score.reference, score.agent);
  for (Eigen::Index c : score.agent.counts) score.sample_count += c;
  return score;
}

double integrated_mse(const Trajectory& trajectory, double theta_goal, double theta_dot_goal) {
  if (trajectory.size() == 0) throw std::invalid_argument("integrated_mse: empty trajectory");
  if (trajectory.state_dim() < 3) {
    throw std::invalid_argument("integrated_mse: trajectory lacks (theta, x_c, theta_dot) layout");
  }
  double acc = 0.0;
  for (Eigen::Index k = 0; k < trajectory.size(); ++k) {
    const double dth = wrap_angle(trajectory.states(k, 0) - theta_goal);
    const double dom = trajectory.states(k, 2) - theta_dot_goal;
    acc += dth * dth + dom * dom;
  }
  return acc * trajectory.dt;
}

}  // namespace dss
