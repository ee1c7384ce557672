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

#include "dss/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "dss/embodiment.hpp"
#include "dss/errors.hpp"
#include "dss/io.hpp"
#include "dss/log.hpp"
#include "dss/parallel.hpp"

namespace dss {

namespace {

using nlohmann::json;

// Substream tags for deriving independent seeds from the master seed.
constexpr std::uint64_t kOptimalStream = 1;
constexpr std::uint64_t kSessionBase = 1000;      // experimental sessions
constexpr std::uint64_t kControlSessionBase = 5000;
constexpr std::uint64_t kSkillBase = 9000;        // experimental skills
constexpr std::uint64_t kControlSkillBase = 9500;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct SessionResult {
  double te = 0.0;
  double mse = 0.0;
  Eigen::Index samples = 0;
};

SessionResult score_session(const DssModel& model, const std::vector<Trajectory>& trials,
                            const ControlGoal& goal) {
  const EmbodimentScore score = task_embodiment(model.graph, model, trials);
  SessionResult result;
  result.te = score.kl;
  result.samples = score.sample_count;
  double mse = 0.0;
  for (const Trajectory& trial : trials) {
    mse += integrated_mse(trial, goal.theta, goal.theta_dot);
  }
  result.mse = mse / static_cast<double>(trials.size());
  return result;
}

json test_to_json(const stats::PairedTestResult& r, const std::string& comparison) {
  json j;
  j["comparison"] = comparison;
  j["t"] = r.t;
  j["df"] = r.df;
  j["p"] = r.p;
  j["mean_a"] = r.mean_a;
  j["sd_a"] = r.sd_a;
  j["mean_b"] = r.mean_b;
  j["sd_b"] = r.sd_b;
  j["mean_diff"] = r.mean_diff;
  j["cohens_d"] = r.cohens_d;
  j["cohens_d_pooled"] = r.cohens_d_pooled;
  return j;
}

json subject_to_json(const SubjectOutcome& s) {
  json j;
  j["id"] = s.id;
  j["group"] = s.control ? "control" : "experimental";
  j["skill"] = {{"gain_error", s.skill.gain_error},
                {"delay_samples", s.skill.delay_samples},
                {"noise_sigma", s.skill.noise_sigma}};
  j["te_a"] = s.te_a;
  j["te_b"] = s.te_b;
  j["mse_a"] = s.mse_a;
  j["mse_b"] = s.mse_b;
  j["samples_a"] = s.samples_a;
  j["samples_b"] = s.samples_b;
  j["delta_te"] = s.delta_te();
  j["delta_mse"] = s.delta_mse();
  return j;
}

const char* kPalette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2",
                          "#edc948", "#b07aa1", "#9c755f"};

void write_delta_svg(const std::filesystem::path& path,
                     const std::vector<SubjectOutcome>& experimental,
                     const std::vector<SubjectOutcome>& control) {
  struct Panel {
    const char* title;
    std::vector<double> exp_values;
    std::vector<double> ctl_values;
  };
  Panel panels[2];
  panels[0].title = "delta task embodiment (nats)";
  panels[1].title = "delta integrated MSE";
  for (const SubjectOutcome& s : experimental) {
    panels[0].exp_values.push_back(s.delta_te());
    panels[1].exp_values.push_back(s.delta_mse());
  }
  for (const SubjectOutcome& s : control) {
    panels[0].ctl_values.push_back(s.delta_te());
    panels[1].ctl_values.push_back(s.delta_mse());
  }

  const double width = 960.0, height = 420.0, panel_w = 440.0, panel_h = 330.0;
  const double margin_left = 50.0, margin_top = 40.0, gap = 40.0;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

  for (int p = 0; p < 2; ++p) {
    const Panel& panel = panels[p];
    const double x0 = margin_left + p * (panel_w + gap);
    const double y0 = margin_top;
    double lo = 0.0, hi = 0.0;
    for (double v : panel.exp_values) { lo = std::min(lo, v); hi = std::max(hi, v); }
    for (double v : panel.ctl_values) { lo = std::min(lo, v); hi = std::max(hi, v); }
    const double pad = 0.08 * std::max(hi - lo, 1e-12);
    lo -= pad;
    hi += pad;
    const std::size_t total = panel.exp_values.size() + panel.ctl_values.size();
    const double step = panel_w / static_cast<double>(total + 1);
    auto ypix = [&](double v) { return y0 + panel_h * (1.0 - (v - lo) / (hi - lo)); };

    svg << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << panel_w << "\" height=\""
        << panel_h << "\" fill=\"none\" stroke=\"#444\"/>\n";
    svg << "<line x1=\"" << x0 << "\" y1=\"" << ypix(0.0) << "\" x2=\"" << x0 + panel_w
        << "\" y2=\"" << ypix(0.0) << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
    svg << "<text x=\"" << x0 + panel_w / 2.0 << "\" y=\"" << y0 - 12.0
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
        << panel.title << "</text>\n";
    svg << "<text x=\"" << x0 - 8.0 << "\" y=\"" << ypix(hi) + 12.0
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(hi)
        << "</text>\n";
    svg << "<text x=\"" << x0 - 8.0 << "\" y=\"" << ypix(lo)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(lo)
        << "</text>\n";

    std::size_t slot = 1;
    for (double v : panel.exp_values) {
      svg << "<circle cx=\"" << x0 + step * static_cast<double>(slot++) << "\" cy=\"" << ypix(v)
          << "\" r=\"5\" fill=\"" << kPalette[0] << "\"/>\n";
    }
    for (double v : panel.ctl_values) {
      const double cx = x0 + step * static_cast<double>(slot++);
      const double cy = ypix(v);
      svg << "<path d=\"M" << cx - 4.5 << " " << cy - 4.5 << " L" << cx + 4.5 << " " << cy + 4.5
          << " M" << cx - 4.5 << " " << cy + 4.5 << " L" << cx + 4.5 << " " << cy - 4.5
          << "\" stroke=\"" << kPalette[3] << "\" stroke-width=\"2\"/>\n";
    }
    svg << "<text x=\"" << x0 + 10.0 << "\" y=\"" << y0 + panel_h + 24.0
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << kPalette[0]
        << "\">circles: experimental</text>\n";
    svg << "<text x=\"" << x0 + 210.0 << "\" y=\"" << y0 + panel_h + 24.0
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << kPalette[3]
        << "\">crosses: control</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("figures: cannot open " + path.string() + " for writing");
  out << svg.str();
}

void write_partition_svg(const std::filesystem::path& path, const DssModel& model,
                         const ControlGoal& goal) {
  constexpr int kCells = 120;
  const double theta_lo = -kPi, theta_hi = kPi;
  const double omega_lo = -2.0 * kPi, omega_hi = 2.0 * kPi;
  const double width = 680.0, height = 560.0;
  const double plot_x = 70.0, plot_y = 40.0, plot_w = 540.0, plot_h = 460.0;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << plot_x + plot_w / 2.0 << "\" y=\"24\" text-anchor=\"middle\""
      << " font-family=\"sans-serif\" font-size=\"15\">state-space partition at u = 0</text>\n";

  const double cell_w = plot_w / kCells;
  const double cell_h = plot_h / kCells;
  Eigen::VectorXd state(4);
  for (int r = 0; r < kCells; ++r) {
    const double omega = omega_hi - (omega_hi - omega_lo) * (static_cast<double>(r) + 0.5) / kCells;
    for (int c = 0; c < kCells; ++c) {
      const double theta = theta_lo + (theta_hi - theta_lo) * (static_cast<double>(c) + 0.5) / kCells;
      state << theta, goal.x_c, omega, goal.xc_dot;
      const LiftedPoint lifted = evaluate_basis(model.basis, state, 0.0);
      const int label = classify(model.svm, lifted);
      svg << "<rect x=\"" << plot_x + c * cell_w << "\" y=\"" << plot_y + r * cell_h
          << "\" width=\"" << cell_w + 0.5 << "\" height=\"" << cell_h + 0.5 << "\" fill=\""
          << kPalette[label % 8] << "\"/>\n";
    }
  }
  svg << "<rect x=\"" << plot_x << "\" y=\"" << plot_y << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#222\"/>\n";
  svg << "<text x=\"" << plot_x + plot_w / 2.0 << "\" y=\"" << plot_y + plot_h + 36.0
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">theta (rad),"
      << " -pi to pi</text>\n";
  svg << "<text x=\"20\" y=\"" << plot_y + plot_h / 2.0
      << "\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 20 "
      << plot_y + plot_h / 2.0 << ")\" text-anchor=\"middle\">theta_dot (rad/s), -2pi to 2pi</text>\n";
  for (int j = 0; j < model.num_classes(); ++j) {
    svg << "<rect x=\"" << plot_x + plot_w + 14.0 << "\" y=\"" << plot_y + 22.0 * j
        << "\" width=\"14\" height=\"14\" fill=\"" << kPalette[j % 8] << "\"/>\n";
    svg << "<text x=\"" << plot_x + plot_w + 32.0 << "\" y=\"" << plot_y + 22.0 * j + 12.0
        << "\" font-family=\"sans-serif\" font-size=\"12\">behavior " << j << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("figures: cannot open " + path.string() + " for writing");
  out << svg.str();
}

std::string summary_text(const ExperimentReport& r, const RunConfig& config) {
  std::ostringstream out;
  const std::size_t n_exp = r.experimental.size();
  const std::size_t n_ctl = r.control.size();
  std::size_t positive_te = 0, positive_mse = 0;
  for (const SubjectOutcome& s : r.experimental) {
    positive_te += s.delta_te() > 0.0 ? 1 : 0;
    positive_mse += s.delta_mse() > 0.0 ? 1 : 0;
  }

  out << "Desk-scale assistance study (synthetic subjects)\n";
  out << "=================================================\n";
  out << "Seed " << r.seed << "; " << config.experiment.optimal_trials
      << " optimal trials of " << fmt(config.experiment.duration) << " s at "
      << fmt(1.0 / config.sim.dt) << " Hz.\n";
  out << "Optimal agent (energy-shaping swing-up + LQR catch, substituted for the original"
      << " optimal policy): inversion success rate " << fmt(r.optimal_success_rate)
      << "; self-consistency KL " << fmt(r.optimal_self_kl) << " nats.\n";
  out << "Segmentation found " << r.num_behaviors << " behaviors; reference distribution p = (";
  for (std::size_t i = 0; i < r.reference_distribution.size(); ++i) {
    if (i) out << ", ";
    out << fmt(r.reference_distribution[i]);
  }
  out << ").\n\n";

  out << "Experimental group (n = " << n_exp << "; session A assisted, session B unassisted):\n";
  out << "  task embodiment  unassisted mu = " << fmt(r.te_experimental.mean_a)
      << ", sigma = " << fmt(r.te_experimental.sd_a) << "; assisted mu = "
      << fmt(r.te_experimental.mean_b) << ", sigma = " << fmt(r.te_experimental.sd_b) << "\n";
  out << "  delta TE > 0 for " << positive_te << "/" << n_exp << " subjects\n";
  out << "  paired t-test (unassisted - assisted): t(" << r.te_experimental.df << ") = "
      << fmt(r.te_experimental.t) << ", p = " << fmt(r.te_experimental.p) << ", d = "
      << fmt(r.te_experimental.cohens_d) << " (paired), " << fmt(r.te_experimental.cohens_d_pooled)
      << " (pooled)\n";
  out << "  integrated MSE   unassisted mu = " << fmt(r.mse_experimental.mean_a)
      << ", sigma = " << fmt(r.mse_experimental.sd_a) << "; assisted mu = "
      << fmt(r.mse_experimental.mean_b) << ", sigma = " << fmt(r.mse_experimental.sd_b) << "\n";
  out << "  delta MSE > 0 for " << positive_mse << "/" << n_exp << " subjects\n";
  out << "  paired t-test (unassisted - assisted): t(" << r.mse_experimental.df << ") = "
      << fmt(r.mse_experimental.t) << ", p = " << fmt(r.mse_experimental.p) << ", d = "
      << fmt(r.mse_experimental.cohens_d) << " (paired), " << fmt(r.mse_experimental.cohens_d_pooled)
      << " (pooled)\n\n";

  out << "Control group (n = " << n_ctl << "; two unassisted sessions):\n";
  out << "  task embodiment: t(" << r.te_control.df << ") = " << fmt(r.te_control.t)
      << ", p = " << fmt(r.te_control.p) << "\n";
  out << "  integrated MSE:  t(" << r.mse_control.df << ") = " << fmt(r.mse_control.t)
      << ", p = " << fmt(r.mse_control.p) << "\n\n";

  out << "Task embodiment separates assisted from unassisted sessions at p = "
      << fmt(r.te_experimental.p) << " versus p = " << fmt(r.mse_experimental.p)
      << " for integrated MSE on the same data.\n";
  out << "Scores are KL divergences in nats; lower TE means greater embodiment.\n";
  return out.str();
}

}  // namespace

double inversion_success_rate(const std::vector<Trajectory>& trials) {
  if (trials.empty()) throw std::invalid_argument("inversion_success_rate: no trials");
  std::size_t ok = 0;
  for (const Trajectory& trial : trials) {
    const auto tail = static_cast<Eigen::Index>(std::llround(10.0 / trial.dt));
    const Eigen::Index begin = trial.size() > tail ? trial.size() - tail : 0;
    bool inverted = true;
    for (Eigen::Index k = begin; k < trial.size(); ++k) {
      if (std::abs(wrap_angle(trial.states(k, 0))) >= 0.1) {
        inverted = false;
        break;
      }
    }
    ok += inverted ? 1 : 0;
  }
  return static_cast<double>(ok) / static_cast<double>(trials.size());
}

std::string report_to_json(const ExperimentReport& report) {
  json j;
  j["schema_version"] = io::kSchemaVersion;
  j["kind"] = "dss-experiment-report";
  j["seed"] = report.seed;
  j["units"] = {{"task_embodiment", "nats"}, {"integrated_mse", "rad^2 s"}};
  j["optimal"] = {{"success_rate", report.optimal_success_rate},
                  {"self_kl", report.optimal_self_kl}};
  j["model"] = {{"num_behaviors", report.num_behaviors},
                {"reference_distribution", report.reference_distribution}};
  json experimental = json::array();
  for (const SubjectOutcome& s : report.experimental) experimental.push_back(subject_to_json(s));
  json control = json::array();
  for (const SubjectOutcome& s : report.control) control.push_back(subject_to_json(s));
  j["subjects"] = {{"experimental", std::move(experimental)}, {"control", std::move(control)}};
  j["tests"] = {
      {"te_experimental", test_to_json(report.te_experimental, "unassisted - assisted")},
      {"mse_experimental", test_to_json(report.mse_experimental, "unassisted - assisted")},
      {"te_control", test_to_json(report.te_control, "session2 - session1")},
      {"mse_control", test_to_json(report.mse_control, "session2 - session1")}};
  j["notes"] = json::array({
      "optimal agent substituted: energy-shaping swing-up with an LQR catch",
      "task embodiment is KL(reference || agent) over behavior-class frequencies",
      "synthetic subjects: delayed, gain-scaled, noise-injected copies of the optimal policy"});
  return j.dump(2) + "\n";
}

ExperimentReport run_experiment(const RunConfig& config, const std::filesystem::path& out_dir,
                                int jobs, bool emit_svg) {
  config.validate();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw DataError("experiment: cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  auto cleanup = [&written]() {
    for (const auto& path : written) {
      std::error_code ignore;
      std::filesystem::remove(path, ignore);
    }
  };

  try {
    const BasisSpec basis = config.make_basis();
    const OptimalController controller(config.sim, config.goal, config.controller);

    TrialOptions optimal_options;
    optimal_options.duration = config.experiment.duration;
    optimal_options.params = config.sim;
    optimal_options.agent_tag = "optimal";
    optimal_options.trial_prefix = "optimal";
    log::info("experiment", "generating ", config.experiment.optimal_trials, " optimal trials");
    std::vector<Trajectory> optimal_trials(config.experiment.optimal_trials);
    {
      const std::uint64_t stream_seed = Rng::split(config.seed, kOptimalStream).next_u64();
      parallel_for(jobs, optimal_trials.size(), [&](std::size_t t) {
        const std::uint64_t trial_seed = Rng::split(stream_seed, t).next_u64();
        const ControlPolicy policy = [&controller](const CartPoleState& s) {
          return controller.control(s);
        };
        optimal_trials[t] = run_trial(policy, optimal_options, trial_seed,
                                      "optimal-" + std::to_string(t));
      });
    }

    ExperimentReport report;
    report.seed = config.seed;
    report.optimal_success_rate = inversion_success_rate(optimal_trials);
    log::info("experiment", "optimal inversion success rate ", report.optimal_success_rate);

    log::info("experiment", "segmenting the optimal dataset");
    const DssModel model = segment(optimal_trials, basis, config.segmentation, config.seed);
    report.num_behaviors = model.num_classes();
    for (Eigen::Index i = 0; i < model.graph.distribution.probabilities.size(); ++i) {
      report.reference_distribution.push_back(model.graph.distribution.probabilities(i));
    }
    const EmbodimentScore self_score = task_embodiment(model.graph, model, optimal_trials);
    report.optimal_self_kl = self_score.kl;
    log::info("experiment", "model has ", report.num_behaviors,
              " behaviors; optimal self KL ", report.optimal_self_kl);

    // Sessions: one subject owns substreams for skill and per-session trials.
    const std::size_t n_exp = config.experiment.subjects;
    const std::size_t n_ctl = config.experiment.control_subjects;
    report.experimental.resize(n_exp);
    report.control.resize(n_ctl);

    TrialOptions subject_options = optimal_options;

    auto run_session = [&](const SyntheticSubject::Skill& skill, bool assisted,
                           std::uint64_t session_stream, const std::string& prefix) -> SessionResult {
      TrialOptions options = subject_options;
      options.agent_tag = assisted ? "assisted-subject" : "subject";
      options.trial_prefix = prefix;
      const std::uint64_t session_seed = Rng::split(config.seed, session_stream).next_u64();
      std::vector<Trajectory> trials(config.experiment.trials_per_session);
      for (std::size_t t = 0; t < trials.size(); ++t) {
        const std::uint64_t trial_seed = Rng::split(session_seed, t).next_u64();
        auto subject = std::make_shared<SyntheticSubject>(controller, skill,
                                                          Rng::split(trial_seed, 1),
                                                          config.sim.u_sat);
        ControlPolicy policy;
        if (assisted) {
          policy = [subject, &controller](const CartPoleState& s) {
            const double u_user = subject->control(s);
            return assistance_filter(u_user, controller.control(s));
          };
        } else {
          policy = [subject](const CartPoleState& s) { return subject->control(s); };
        }
        trials[t] = run_trial(policy, options, trial_seed, prefix + "-t" + std::to_string(t));
      }
      return score_session(model, trials, config.goal);
    };

    log::info("experiment", "scoring ", n_exp, " experimental and ", n_ctl, " control subjects");
    parallel_for(jobs, n_exp + n_ctl, [&](std::size_t idx) {
      if (idx < n_exp) {
        const std::size_t i = idx;
        SubjectOutcome& subject = report.experimental[i];
        subject.id = "s" + std::to_string(i);
        subject.control = false;
        subject.skill = draw_skill(config.experiment.skill, Rng::split(config.seed, kSkillBase + i));
        const SessionResult assisted = run_session(subject.skill, true, kSessionBase + 2 * i,
                                                   subject.id + "-assisted");
        const SessionResult unassisted = run_session(subject.skill, false, kSessionBase + 2 * i + 1,
                                                     subject.id + "-unassisted");
        subject.te_a = assisted.te;
        subject.mse_a = assisted.mse;
        subject.samples_a = assisted.samples;
        subject.te_b = unassisted.te;
        subject.mse_b = unassisted.mse;
        subject.samples_b = unassisted.samples;
      } else {
        const std::size_t i = idx - n_exp;
        SubjectOutcome& subject = report.control[i];
        subject.id = "c" + std::to_string(i);
        subject.control = true;
        subject.skill =
            draw_skill(config.experiment.skill, Rng::split(config.seed, kControlSkillBase + i));
        const SessionResult first = run_session(subject.skill, false, kControlSessionBase + 2 * i,
                                                subject.id + "-session1");
        const SessionResult second = run_session(subject.skill, false,
                                                 kControlSessionBase + 2 * i + 1,
                                                 subject.id + "-session2");
        subject.te_a = first.te;
        subject.mse_a = first.mse;
        subject.samples_a = first.samples;
        subject.te_b = second.te;
        subject.mse_b = second.mse;
        subject.samples_b = second.samples;
      }
    });

    auto collect = [](const std::vector<SubjectOutcome>& subjects, bool te, bool second) {
      std::vector<double> values;
      values.reserve(subjects.size());
      for (const SubjectOutcome& s : subjects) {
        if (te) values.push_back(second ? s.te_b : s.te_a);
        else values.push_back(second ? s.mse_b : s.mse_a);
      }
      return values;
    };
    report.te_experimental = stats::paired_t_test(collect(report.experimental, true, true),
                                                  collect(report.experimental, true, false));
    report.mse_experimental = stats::paired_t_test(collect(report.experimental, false, true),
                                                   collect(report.experimental, false, false));
    report.te_control = stats::paired_t_test(collect(report.control, true, true),
                                             collect(report.control, true, false));
    report.mse_control = stats::paired_t_test(collect(report.control, false, true),
                                              collect(report.control, false, false));

    // Artifacts.
    const auto model_path = out_dir / "model.json";
    io::save_model(model_path, model);
    written.push_back(model_path);

    const auto report_path = out_dir / "report.json";
    {
      std::ofstream out(report_path, std::ios::binary);
      if (!out) throw DataError("experiment: cannot open " + report_path.string());
      out << report_to_json(report);
    }
    written.push_back(report_path);

    const auto subjects_path = out_dir / "subjects.csv";
    {
      std::string text =
          "subject,group,gain_error,delay_samples,noise_sigma,"
          "te_a,te_b,mse_a,mse_b,delta_te,delta_mse\n";
      char buf[512];
      auto add = [&](const SubjectOutcome& s) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      s.id.c_str(), s.control ? "control" : "experimental", s.skill.gain_error,
                      s.skill.delay_samples, s.skill.noise_sigma, s.te_a, s.te_b, s.mse_a, s.mse_b,
                      s.delta_te(), s.delta_mse());
        text += buf;
      };
      for (const SubjectOutcome& s : report.experimental) add(s);
      for (const SubjectOutcome& s : report.control) add(s);
      std::ofstream out(subjects_path, std::ios::binary);
      if (!out) throw DataError("experiment: cannot open " + subjects_path.string());
      out << text;
    }
    written.push_back(subjects_path);

    const auto sessions_path = out_dir / "sessions.csv";
    {
      std::vector<io::ScoreRow> rows;
      rows.push_back({"optimal", "optimal", report.optimal_self_kl, 0.0, self_score.sample_count});
      double optimal_mse = 0.0;
      for (const Trajectory& trial : optimal_trials) {
        optimal_mse += integrated_mse(trial, config.goal.theta, config.goal.theta_dot);
      }
      rows.front().mse = optimal_mse / static_cast<double>(optimal_trials.size());
      for (const SubjectOutcome& s : report.experimental) {
        rows.push_back({s.id, "assisted", s.te_a, s.mse_a, s.samples_a});
        rows.push_back({s.id, "unassisted", s.te_b, s.mse_b, s.samples_b});
      }
      for (const SubjectOutcome& s : report.control) {
        rows.push_back({s.id, "session1", s.te_a, s.mse_a, s.samples_a});
        rows.push_back({s.id, "session2", s.te_b, s.mse_b, s.samples_b});
      }
      io::write_scores_csv(sessions_path, rows);
    }
    written.push_back(sessions_path);

    const auto summary_path = out_dir / "summary.txt";
    {
      std::ofstream out(summary_path, std::ios::binary);
      if (!out) throw DataError("experiment: cannot open " + summary_path.string());
      out << summary_text(report, config);
    }
    written.push_back(summary_path);

    if (emit_svg) {
      const auto figures = out_dir / "figures";
      std::filesystem::create_directories(figures, ec);
      if (ec) throw DataError("experiment: cannot create " + figures.string());
      write_delta_svg(figures / "delta_scatter.svg", report.experimental, report.control);
      written.push_back(figures / "delta_scatter.svg");
      write_partition_svg(figures / "partitions.svg", model, config.goal);
      written.push_back(figures / "partitions.svg");
    }

    log::info("experiment", "wrote report to ", out_dir.string());
    return report;
  } catch (...) {
    cleanup();
    throw;
  }
}

}  // namespace dss
