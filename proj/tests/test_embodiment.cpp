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
#include <vector>

#include <doctest.h>

#include "dss/embodiment.hpp"
#include "dss/rng.hpp"

namespace dss {

namespace {

SymbolDistribution make_dist(std::initializer_list<double> probs) {
  SymbolDistribution dist;
  dist.probabilities.resize(static_cast<Eigen::Index>(probs.size()));
  Eigen::Index i = 0;
  for (double p : probs) dist.probabilities(i++) = p;
  dist.counts.assign(probs.size(), 1);
  return dist;
}

// A hand-built two-class model over a one-dimensional identity basis: the
// classifier splits at zero, the reference graph spends 90% of its time in
// class 0.
DssModel make_line_model() {
  RowMatrix points(6, 1);
  points << -1.2, -1.0, -0.8, 0.8, 1.0, 1.2;
  const std::vector<int> labels = {0, 0, 0, 1, 1, 1};
  SvmModel svm = train_svm(points, labels, SvmParams{});

  ExemplarSet exemplars;
  for (int j = 0; j < 2; ++j) {
    KoopmanOperator op;
    op.matrix = Eigen::MatrixXd::Identity(1, 1);
    exemplars.exemplars.push_back(op);
  }
  std::vector<int> reference_labels;
  reference_labels.insert(reference_labels.end(), 9, 0);
  reference_labels.push_back(1);
  BehaviorGraph graph = build_graph(std::move(exemplars), {reference_labels});

  return DssModel(identity_basis(1), std::move(svm), std::move(graph),
                  SegmentationParams{}, 0);
}

Trajectory line_trajectory(std::initializer_list<double> xs) {
  Trajectory trajectory;
  trajectory.dt = 0.1;
  trajectory.trial_id = "line";
  trajectory.states.resize(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) trajectory.states(i++, 0) = x;
  trajectory.controls = Eigen::VectorXd::Zero(trajectory.states.rows());
  return trajectory;
}

}  // namespace

TEST_CASE("kl_divergence matches the closed form") {
  const double got = kl_divergence(make_dist({0.5, 0.5}), make_dist({0.25, 0.75}));
  // 0.5 ln 2 + 0.5 ln(2/3)
  CHECK(got == doctest::Approx(0.14384103622589042).epsilon(1e-10));
  CHECK(std::abs(got - 0.14384) < 1e-5);
}

TEST_CASE("kl of a distribution with itself is exactly zero") {
  const SymbolDistribution p = make_dist({0.3, 0.45, 0.25});
  CHECK(kl_divergence(p, p) == 0.0);

  const SymbolDistribution one_hot = make_dist({1.0, 0.0});
  CHECK(kl_divergence(one_hot, one_hot) == 0.0);
}

TEST_CASE("disjoint one-hot supports produce the smoothed ceiling") {
  const double got = kl_divergence(make_dist({1.0, 0.0}), make_dist({0.0, 1.0}));
  // ln((1 + 2 eps) / eps) with eps = 1e-10
  CHECK(got == doctest::Approx(std::log(1e10)).epsilon(1e-3));
  CHECK(std::abs(got - 23.0259) < 0.01);
}

TEST_CASE("kl_divergence is nonnegative and asymmetric") {
  Rng rng(53);
  for (int round = 0; round < 200; ++round) {
    Eigen::VectorXd p(4);
    Eigen::VectorXd q(4);
    for (int i = 0; i < 4; ++i) {
      p(i) = rng.uniform(0.01, 1.0);
      q(i) = rng.uniform(0.01, 1.0);
    }
    p /= p.sum();
    q /= q.sum();
    SymbolDistribution dp;
    dp.probabilities = p;
    SymbolDistribution dq;
    dq.probabilities = q;
    CHECK(kl_divergence(dp, dq) >= 0.0);
  }

  const SymbolDistribution a = make_dist({0.5, 0.5});
  const SymbolDistribution b = make_dist({0.25, 0.75});
  CHECK(kl_divergence(a, b) != doctest::Approx(kl_divergence(b, a)));
}

TEST_CASE("kl_divergence validates its inputs") {
  CHECK_THROWS_AS(kl_divergence(make_dist({0.5, 0.5}), make_dist({1.0})),
                  std::invalid_argument);
  CHECK_THROWS_AS(kl_divergence(make_dist({0.6, 0.6}), make_dist({0.5, 0.5})),
                  std::invalid_argument);
  CHECK_THROWS_AS(kl_divergence(make_dist({1.2, -0.2}), make_dist({0.5, 0.5})),
                  std::invalid_argument);
  CHECK_THROWS_AS(kl_divergence(make_dist({}), make_dist({})), std::invalid_argument);
}

TEST_CASE("integrated_mse matches a hand computation") {
  Trajectory trajectory;
  trajectory.dt = 0.5;
  trajectory.states.resize(1, 4);
  trajectory.states << 0.1, 7.0, 0.2, -3.0;  // x_c and xc_dot are ignored
  trajectory.controls = Eigen::VectorXd::Zero(1);

  // (0.1^2 + 0.2^2) * 0.5
  CHECK(integrated_mse(trajectory, 0.0, 0.0) == doctest::Approx(0.025).epsilon(1e-15));
}

TEST_CASE("integrated_mse wraps the angle error") {
  Trajectory trajectory;
  trajectory.dt = 1.0;
  trajectory.states.resize(1, 4);
  trajectory.states << 2.0 * kPi + 0.1, 0.0, 0.0, 0.0;
  trajectory.controls = Eigen::VectorXd::Zero(1);

  CHECK(integrated_mse(trajectory, 0.0, 0.0) == doctest::Approx(0.01).epsilon(1e-9));
}

TEST_CASE("integrated_mse rejects empty trajectories") {
  Trajectory trajectory;
  trajectory.dt = 0.1;
  trajectory.states.resize(0, 4);
  trajectory.controls.resize(0);
  CHECK_THROWS_AS(integrated_mse(trajectory, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("behavior_frequencies counts partition labels") {
  const DssModel model = make_line_model();
  const std::vector<Trajectory> trajectories = {
      line_trajectory({-1.0, -0.9, 1.0, 1.1}),
      line_trajectory({-1.1, 0.9}),
  };

  const SymbolDistribution freq = behavior_frequencies(model, trajectories);
  REQUIRE(freq.size() == 2);
  CHECK(freq.counts == std::vector<Eigen::Index>{3, 3});
  CHECK(freq.probabilities(0) == doctest::Approx(0.5));
}

TEST_CASE("task_embodiment reads reference-to-agent") {
  const DssModel model = make_line_model();
  const std::vector<Trajectory> trajectories = {line_trajectory({-1.0, -0.9, -1.1, 1.0})};

  const EmbodimentScore score = task_embodiment(model.graph, model, trajectories);
  const SymbolDistribution agent = behavior_frequencies(model, trajectories);

  CHECK(score.sample_count == 4);
  CHECK(score.kl ==
        doctest::Approx(kl_divergence(model.graph.distribution, agent)).epsilon(1e-15));
  CHECK(score.agent.probabilities == agent.probabilities);
  CHECK(score.reference.probabilities == model.graph.distribution.probabilities);

  // Direction check: the reference (0.9, 0.1) against the agent (0.75, 0.25).
  const double manual = 0.9 * std::log(0.9 / 0.75) + 0.1 * std::log(0.1 / 0.25);
  CHECK(score.kl == doctest::Approx(manual).epsilon(1e-12));
}

TEST_CASE("an agent matching the reference scores zero") {
  const DssModel model = make_line_model();
  std::vector<double> xs(9, -1.0);
  xs.push_back(1.0);
  Trajectory trajectory;
  trajectory.dt = 0.1;
  trajectory.trial_id = "match";
  trajectory.states.resize(10, 1);
  for (int i = 0; i < 10; ++i) trajectory.states(i, 0) = xs[static_cast<std::size_t>(i)];
  trajectory.controls = Eigen::VectorXd::Zero(10);

  const EmbodimentScore score = task_embodiment(model.graph, model, {trajectory});
  CHECK(score.kl == 0.0);
}

}  // namespace dss
