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

#include "dss/config.hpp"

#include <fstream>

#include <json.hpp>

#include "dss/errors.hpp"

namespace dss {

namespace {

using nlohmann::json;

json to_json(const RunConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["basis"] = c.basis;
  j["sim"] = {{"length", c.sim.length},
              {"gravity", c.sim.gravity},
              {"damping", c.sim.damping},
              {"u_sat", c.sim.u_sat},
              {"dt", c.sim.dt}};
  j["goal"] = {{"theta", c.goal.theta},
               {"x_c", c.goal.x_c},
               {"theta_dot", c.goal.theta_dot},
               {"xc_dot", c.goal.xc_dot}};
  j["controller"] = {{"energy", c.controller.energy},
                     {"kick", c.controller.kick},
                     {"cart_p", c.controller.cart_p},
                     {"cart_d", c.controller.cart_d},
                     {"lqr_r", c.controller.lqr_r},
                     {"switch_angle", c.controller.switch_angle},
                     {"switch_rate", c.controller.switch_rate}};
  j["segmentation"] = {{"window", {{"size", c.segmentation.window.size},
                                   {"overlap", c.segmentation.window.overlap}}},
                       {"min_cluster_size", c.segmentation.min_cluster_size},
                       {"svm", {{"c", c.segmentation.svm.c},
                                {"gamma", c.segmentation.svm.gamma},
                                {"tolerance", c.segmentation.svm.tolerance},
                                {"max_iter", c.segmentation.svm.max_iter}}},
                       {"svm_max_per_class", c.segmentation.svm_max_per_class}};
  j["experiment"] = {{"optimal_trials", c.experiment.optimal_trials},
                     {"subjects", c.experiment.subjects},
                     {"control_subjects", c.experiment.control_subjects},
                     {"trials_per_session", c.experiment.trials_per_session},
                     {"duration", c.experiment.duration},
                     {"skill", {{"gain_error_min", c.experiment.skill.gain_error_min},
                                {"gain_error_max", c.experiment.skill.gain_error_max},
                                {"delay_min", c.experiment.skill.delay_min},
                                {"delay_max", c.experiment.skill.delay_max},
                                {"noise_min", c.experiment.skill.noise_min},
                                {"noise_max", c.experiment.skill.noise_max}}}};
  return j;
}

RunConfig from_json(const json& j) {
  RunConfig c = default_config();
  c.seed = j.value("seed", c.seed);
  c.basis = j.value("basis", c.basis);
  if (j.contains("sim")) {
    const json& s = j["sim"];
    c.sim.length = s.value("length", c.sim.length);
    c.sim.gravity = s.value("gravity", c.sim.gravity);
    c.sim.damping = s.value("damping", c.sim.damping);
    c.sim.u_sat = s.value("u_sat", c.sim.u_sat);
    c.sim.dt = s.value("dt", c.sim.dt);
  }
  if (j.contains("goal")) {
    const json& g = j["goal"];
    c.goal.theta = g.value("theta", c.goal.theta);
    c.goal.x_c = g.value("x_c", c.goal.x_c);
    c.goal.theta_dot = g.value("theta_dot", c.goal.theta_dot);
    c.goal.xc_dot = g.value("xc_dot", c.goal.xc_dot);
  }
  if (j.contains("controller")) {
    const json& k = j["controller"];
    c.controller.energy = k.value("energy", c.controller.energy);
    c.controller.kick = k.value("kick", c.controller.kick);
    c.controller.cart_p = k.value("cart_p", c.controller.cart_p);
    c.controller.cart_d = k.value("cart_d", c.controller.cart_d);
    c.controller.lqr_r = k.value("lqr_r", c.controller.lqr_r);
    c.controller.switch_angle = k.value("switch_angle", c.controller.switch_angle);
    c.controller.switch_rate = k.value("switch_rate", c.controller.switch_rate);
  }
  if (j.contains("segmentation")) {
    const json& s = j["segmentation"];
    if (s.contains("window")) {
      c.segmentation.window.size = s["window"].value("size", c.segmentation.window.size);
      c.segmentation.window.overlap = s["window"].value("overlap", c.segmentation.window.overlap);
    }
    c.segmentation.min_cluster_size = s.value("min_cluster_size", c.segmentation.min_cluster_size);
    if (s.contains("svm")) {
      const json& v = s["svm"];
      c.segmentation.svm.c = v.value("c", c.segmentation.svm.c);
      c.segmentation.svm.gamma = v.value("gamma", c.segmentation.svm.gamma);
      c.segmentation.svm.tolerance = v.value("tolerance", c.segmentation.svm.tolerance);
      c.segmentation.svm.max_iter = v.value("max_iter", c.segmentation.svm.max_iter);
    }
    c.segmentation.svm_max_per_class = s.value("svm_max_per_class", c.segmentation.svm_max_per_class);
  }
  if (j.contains("experiment")) {
    const json& e = j["experiment"];
    c.experiment.optimal_trials = e.value("optimal_trials", c.experiment.optimal_trials);
    c.experiment.subjects = e.value("subjects", c.experiment.subjects);
    c.experiment.control_subjects = e.value("control_subjects", c.experiment.control_subjects);
    c.experiment.trials_per_session = e.value("trials_per_session", c.experiment.trials_per_session);
    c.experiment.duration = e.value("duration", c.experiment.duration);
    if (e.contains("skill")) {
      const json& s = e["skill"];
      c.experiment.skill.gain_error_min = s.value("gain_error_min", c.experiment.skill.gain_error_min);
      c.experiment.skill.gain_error_max = s.value("gain_error_max", c.experiment.skill.gain_error_max);
      c.experiment.skill.delay_min = s.value("delay_min", c.experiment.skill.delay_min);
      c.experiment.skill.delay_max = s.value("delay_max", c.experiment.skill.delay_max);
      c.experiment.skill.noise_min = s.value("noise_min", c.experiment.skill.noise_min);
      c.experiment.skill.noise_max = s.value("noise_max", c.experiment.skill.noise_max);
    }
  }
  return c;
}

}  // namespace

void RunConfig::validate() const {
  sim.validate();
  segmentation.window.validate();
  if (basis != "cartpole" && basis != "identity" && basis != "linear_const") {
    throw ConfigError("config: unknown basis '" + basis + "'");
  }
  if (segmentation.svm.c <= 0.0 || segmentation.svm.tolerance <= 0.0) {
    throw ConfigError("config: svm c and tolerance must be positive");
  }
  if (segmentation.min_cluster_size < 0) {
    throw ConfigError("config: min_cluster_size must be nonnegative (0 = auto)");
  }
  if (experiment.optimal_trials == 0 || experiment.trials_per_session == 0) {
    throw ConfigError("config: experiment trial counts must be positive");
  }
  if (experiment.duration <= 0.0) throw ConfigError("config: experiment duration must be positive");
  if (experiment.skill.gain_error_min > experiment.skill.gain_error_max ||
      experiment.skill.delay_min > experiment.skill.delay_max ||
      experiment.skill.noise_min > experiment.skill.noise_max) {
    throw ConfigError("config: skill ranges must have min <= max");
  }
  if (experiment.skill.delay_min < 0 || experiment.skill.noise_min < 0.0) {
    throw ConfigError("config: skill delay and noise must be nonnegative");
  }
}

BasisSpec RunConfig::make_basis() const {
  if (basis == "cartpole") return cartpole_basis(sim.u_sat);
  if (basis == "identity") return identity_basis(4);
  if (basis == "linear_const") return linear_const_basis(4);
  throw ConfigError("config: unknown basis '" + basis + "'");
}

RunConfig default_config() { return RunConfig{}; }

SyntheticSubject::Skill draw_skill(const SkillRanges& ranges, Rng rng) {
  SyntheticSubject::Skill skill;
  skill.gain_error = rng.uniform(ranges.gain_error_min, ranges.gain_error_max);
  const auto span = static_cast<std::uint64_t>(ranges.delay_max - ranges.delay_min + 1);
  skill.delay_samples = ranges.delay_min + static_cast<int>(rng.below(span));
  skill.noise_sigma = rng.uniform(ranges.noise_min, ranges.noise_max);
  return skill;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }
  try {
    RunConfig c = from_json(j);
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }
}

void save_config(const std::filesystem::path& path, const RunConfig& config) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("config: cannot open " + path.string() + " for writing");
  out << to_json(config).dump(2) << "\n";
  if (!out) throw ConfigError("config: write failed for " + path.string());
}

}  // namespace dss
