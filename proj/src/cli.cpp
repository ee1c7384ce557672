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

#include "dss/cli.hpp"

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dss/config.hpp"
#include "dss/embodiment.hpp"
#include "dss/errors.hpp"
#include "dss/experiment.hpp"
#include "dss/io.hpp"
#include "dss/log.hpp"
#include "dss/segmentation.hpp"

namespace dss {

namespace {

struct CommonOptions {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
  int jobs = 0;
  bool emit_svg = false;
};

void add_common(CLI::App* cmd, CommonOptions* opts, const std::string& default_out) {
  opts->out = default_out;
  cmd->add_option("--config", opts->config_path, "run configuration JSON (default: built-in)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts->seed, "override the master seed")
      ->each([opts](const std::string&) { opts->seed_given = true; });
  cmd->add_option("--out", opts->out, "output directory")->capture_default_str();
  cmd->add_option("--jobs", opts->jobs, "worker threads; 0 picks the hardware count")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--emit-svg", opts->emit_svg, "also write SVG figures (experiment)");
}

RunConfig resolve_config(const CommonOptions& opts) {
  RunConfig config = opts.config_path.empty() ? default_config() : load_config(opts.config_path);
  if (opts.seed_given) config.seed = opts.seed;
  config.validate();
  return config;
}

int cmd_simulate(const CommonOptions& opts, const std::string& agent, std::size_t trials_flag) {
  const RunConfig config = resolve_config(opts);
  const OptimalController controller(config.sim, config.goal, config.controller);

  TrialOptions options;
  options.duration = config.experiment.duration;
  options.params = config.sim;
  options.agent_tag = agent;
  options.trial_prefix = agent;

  std::size_t count = trials_flag;
  if (count == 0) {
    count = agent == "optimal" ? config.experiment.optimal_trials
                               : config.experiment.trials_per_session;
  }

  std::function<ControlPolicy(std::uint64_t)> make_policy;
  if (agent == "optimal") {
    make_policy = [&controller](std::uint64_t) -> ControlPolicy {
      return [&controller](const CartPoleState& s) { return controller.control(s); };
    };
  } else {
    const SyntheticSubject::Skill skill =
        draw_skill(config.experiment.skill, Rng::split(config.seed, 9000));
    log::info("simulate", "subject skill: gain_error ", skill.gain_error, ", delay ",
              skill.delay_samples, " samples, noise sigma ", skill.noise_sigma);
    const bool assisted = agent == "assisted";
    const double u_sat = config.sim.u_sat;
    make_policy = [&controller, skill, assisted, u_sat](std::uint64_t trial_seed) -> ControlPolicy {
      auto subject = std::make_shared<SyntheticSubject>(controller, skill,
                                                        Rng::split(trial_seed, 1), u_sat);
      if (assisted) {
        return [subject, &controller](const CartPoleState& s) {
          return assistance_filter(subject->control(s), controller.control(s));
        };
      }
      return [subject](const CartPoleState& s) { return subject->control(s); };
    };
  }

  const std::vector<Trajectory> trials = generate_trials(make_policy, count, options, config.seed);
  io::save_dataset(opts.out, trials, config.sim, config.seed);
  std::cout << "wrote " << trials.size() << " " << agent << " trials to " << opts.out << "\n";
  return 0;
}

int cmd_segment(const CommonOptions& opts, const std::string& data_dir) {
  const RunConfig config = resolve_config(opts);
  const std::vector<Trajectory> trials = io::load_dataset(data_dir);
  if (trials.empty()) throw DataError("segment: no trials in " + data_dir);

  const DssModel model = segment(trials, config.make_basis(), config.segmentation, config.seed);

  std::error_code ec;
  std::filesystem::create_directories(opts.out, ec);
  if (ec) throw DataError("segment: cannot create " + opts.out + ": " + ec.message());
  const auto model_path = std::filesystem::path(opts.out) / "model.json";
  io::save_model(model_path, model);

  std::cout << io::describe_graph(model.graph);
  std::cout << "wrote model to " << model_path.string() << "\n";
  return 0;
}

int cmd_embody(const CommonOptions& opts, const std::string& model_path,
               const std::string& data_dir) {
  const RunConfig config = resolve_config(opts);
  const DssModel model = io::load_model(model_path);
  const std::vector<Trajectory> trials = io::load_dataset(data_dir);
  if (trials.empty()) throw DataError("embody: no trials in " + data_dir);

  for (const Trajectory& trial : trials) {
    if (trial.state_dim() != model.basis.state_dim()) {
      throw DataError("embody: model basis expects state dimension " +
                      std::to_string(model.basis.state_dim()) + ", trial " + trial.trial_id +
                      " has " + std::to_string(trial.state_dim()));
    }
  }

  std::map<std::string, std::vector<Trajectory>> sessions;
  for (const Trajectory& trial : trials) {
    sessions[trial.agent_tag.empty() ? std::string("unknown") : trial.agent_tag].push_back(trial);
  }

  const std::string session_name = std::filesystem::path(data_dir).filename().string();
  std::vector<io::ScoreRow> rows;
  for (const auto& [tag, group] : sessions) {
    const EmbodimentScore score = task_embodiment(model.graph, model, group);
    double mse = 0.0;
    for (const Trajectory& trial : group) {
      mse += integrated_mse(trial, config.goal.theta, config.goal.theta_dot);
    }
    mse /= static_cast<double>(group.size());
    rows.push_back({tag, session_name.empty() ? "session" : session_name, score.kl, mse,
                    score.sample_count});
    std::cout << tag << ": kl " << score.kl << " nats, mean integrated MSE " << mse << " over "
              << group.size() << " trials (" << score.sample_count << " samples)\n";
  }

  std::error_code ec;
  std::filesystem::create_directories(opts.out, ec);
  if (ec) throw DataError("embody: cannot create " + opts.out + ": " + ec.message());
  const auto scores_path = std::filesystem::path(opts.out) / "scores.csv";
  io::write_scores_csv(scores_path, rows);
  std::cout << "wrote scores to " << scores_path.string() << "\n";
  return 0;
}

int cmd_experiment(const CommonOptions& opts) {
  const RunConfig config = resolve_config(opts);
  const ExperimentReport report = run_experiment(config, opts.out, opts.jobs, opts.emit_svg);
  std::cout << "behaviors: " << report.num_behaviors
            << "; optimal inversion rate: " << report.optimal_success_rate << "\n";
  std::cout << "experimental TE: t(" << report.te_experimental.df << ") = "
            << report.te_experimental.t << ", p = " << report.te_experimental.p << "\n";
  std::cout << "experimental MSE: t(" << report.mse_experimental.df << ") = "
            << report.mse_experimental.t << ", p = " << report.mse_experimental.p << "\n";
  std::cout << "control TE: p = " << report.te_control.p << "; control MSE: p = "
            << report.mse_control.p << "\n";
  std::cout << "report written to " << opts.out << "\n";
  return 0;
}

int cmd_config_init(const CommonOptions& opts, const std::string& file, bool force) {
  if (!force && std::filesystem::exists(file)) {
    throw ConfigError("config init: " + file + " already exists (use --force to overwrite)");
  }
  RunConfig config = default_config();
  if (opts.seed_given) config.seed = opts.seed;
  save_config(file, config);
  std::cout << "wrote default configuration to " << file << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"dynamical system segmentation toolkit"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  int rc = 0;

  CommonOptions sim_opts;
  std::string agent = "optimal";
  std::size_t trials_flag = 0;
  auto* sim = app.add_subcommand("simulate", "generate cart-pendulum trial CSVs + manifest");
  add_common(sim, &sim_opts, "dss-dataset");
  sim->add_option("--agent", agent, "optimal | subject | assisted")
      ->check(CLI::IsMember({"optimal", "subject", "assisted"}))
      ->capture_default_str();
  sim->add_option("--trials", trials_flag, "trial count; 0 uses the configured count");
  sim->callback([&]() { rc = cmd_simulate(sim_opts, agent, trials_flag); });

  CommonOptions seg_opts;
  std::string seg_data;
  auto* seg = app.add_subcommand("segment", "fit windowed operators, cluster, train the SVM");
  add_common(seg, &seg_opts, ".");
  seg->add_option("--data", seg_data, "dataset directory from `simulate`")
      ->required()
      ->check(CLI::ExistingDirectory);
  seg->callback([&]() { rc = cmd_segment(seg_opts, seg_data); });

  CommonOptions emb_opts;
  std::string emb_model;
  std::string emb_data;
  auto* emb = app.add_subcommand("embody", "score trials against a model");
  add_common(emb, &emb_opts, ".");
  emb->add_option("--model", emb_model, "model JSON from `segment`")
      ->required()
      ->check(CLI::ExistingFile);
  emb->add_option("--data", emb_data, "dataset directory to score")
      ->required()
      ->check(CLI::ExistingDirectory);
  emb->callback([&]() { rc = cmd_embody(emb_opts, emb_model, emb_data); });

  CommonOptions exp_opts;
  auto* exp = app.add_subcommand("experiment", "run the full assistance study and write the report");
  add_common(exp, &exp_opts, "dss-report");
  exp->callback([&]() { rc = cmd_experiment(exp_opts); });

  CommonOptions cfg_opts;
  std::string cfg_file = "dss.json";
  bool cfg_force = false;
  auto* cfg = app.add_subcommand("config", "configuration helpers");
  cfg->require_subcommand(1);
  auto* cfg_init = cfg->add_subcommand("init", "write the default configuration");
  cfg_init->add_option("--seed", cfg_opts.seed, "seed to store in the file")
      ->each([&cfg_opts](const std::string&) { cfg_opts.seed_given = true; });
  cfg_init->add_option("--out", cfg_file, "destination file")->capture_default_str();
  cfg_init->add_flag("--force", cfg_force, "overwrite an existing file");
  cfg_init->callback([&]() { rc = cmd_config_init(cfg_opts, cfg_file, cfg_force); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    log::error("cli", e.what());
    return 2;
  } catch (const DataError& e) {
    log::error("cli", e.what());
    return 3;
  } catch (const NumericError& e) {
    log::error("cli", e.what());
    return 4;
  } catch (const std::invalid_argument& e) {
    log::error("cli", e.what());
    return 2;
  } catch (const std::exception& e) {
    log::error("cli", e.what());
    return 1;
  }
  return rc;
}

}  // namespace dss
