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
#include <filesystem>
#include <string>

#include "dss/cartpole.hpp"
#include "dss/observables.hpp"
#include "dss/segmentation.hpp"

namespace dss {

struct SkillRanges {
  double gain_error_min = -0.35;
  double gain_error_max = 0.25;
  int delay_min = 0;
  int delay_max = 9;
  double noise_min = 0.5;
  double noise_max = 4.0;
};

// Samples one subject's skill uniformly from the configured ranges.
SyntheticSubject::Skill draw_skill(const SkillRanges& ranges, Rng rng);

struct ExperimentConfig {
  std::size_t optimal_trials = 30;
  std::size_t subjects = 20;
  std::size_t control_subjects = 8;
  std::size_t trials_per_session = 10;
  double duration = 30.0;  // seconds per trial
  SkillRanges skill;
};

// Everything a run needs, serialized as one JSON document. Defaults mirror
// the experiment in the report: 30 optimal trials of 30 s at 60 Hz,
// windows of 120 samples at 75% overlap, 20 experimental and 8 control
// subjects.
struct RunConfig {
  std::uint64_t seed = 20260818;
  std::string basis = "cartpole";  // cartpole | identity | linear_const
  SimParams sim;
  ControlGoal goal;
  OptimalController::Gains controller;
  SegmentationParams segmentation;
  ExperimentConfig experiment;

  void validate() const;
  BasisSpec make_basis() const;
};

RunConfig default_config();

RunConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const RunConfig& config);

}  // namespace dss
