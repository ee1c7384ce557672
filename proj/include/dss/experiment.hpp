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

#include <filesystem>
#include <string>
#include <vector>

#include "dss/cartpole.hpp"
#include "dss/config.hpp"
#include "dss/segmentation.hpp"
#include "dss/stats.hpp"

namespace dss {

// One synthetic participant: session A is assisted for the experimental
// group and plain unassisted for controls; session B is always unassisted.
struct SubjectOutcome {
  std::string id;
  bool control = false;
  SyntheticSubject::Skill skill;
  double te_a = 0.0;   // task embodiment (KL, nats)
  double te_b = 0.0;
  double mse_a = 0.0;  // session mean integrated MSE
  double mse_b = 0.0;
  Eigen::Index samples_a = 0;
  Eigen::Index samples_b = 0;

  double delta_te() const { return te_b - te_a; }
  double delta_mse() const { return mse_b - mse_a; }
};

struct ExperimentReport {
  std::uint64_t seed = 0;
  double optimal_success_rate = 0.0;  // final-10 s inversion fraction
  int num_behaviors = 0;
  std::vector<double> reference_distribution;  // p over behavior classes
  double optimal_self_kl = 0.0;  // optimal data scored against its own model
  std::vector<SubjectOutcome> experimental;
  std::vector<SubjectOutcome> control;
  // Paired tests: session B against session A (unassisted minus assisted
  // for the experimental group).
  stats::PairedTestResult te_experimental;
  stats::PairedTestResult mse_experimental;
  stats::PairedTestResult te_control;
  stats::PairedTestResult mse_control;
};

// Runs the full surrogate study: optimal dataset, segmentation, synthetic
// subjects with and without the assistance filter, embodiment and MSE
// scoring, and paired statistics. Writes model.json, report.json,
// subjects.csv, sessions.csv, summary.txt (and figures/ when emit_svg)
// under out_dir. Partial outputs are removed if any stage fails.
ExperimentReport run_experiment(const RunConfig& config, const std::filesystem::path& out_dir,
                                int jobs, bool emit_svg);

// Fraction of trials keeping |theta| < 0.1 rad over their final 10 s.
double inversion_success_rate(const std::vector<Trajectory>& trials);

// Serialized form of the report, exposed so tests can check determinism.
std::string report_to_json(const ExperimentReport& report);

}  // namespace dss
