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

#include "dss/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "dss/errors.hpp"
#include "dss/log.hpp"

namespace dss {

Eigen::Index WindowSpec::stride() const {
  const double raw = static_cast<double>(size) * (1.0 - overlap);
  return std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::llround(raw)));
}

void WindowSpec::validate() const {
  if (size < 2) throw std::invalid_argument("window: size must be at least 2");
  if (!(overlap >= 0.0 && overlap < 1.0)) {
    throw std::invalid_argument("window: overlap must lie in [0, 1)");
  }
}

std::vector<Eigen::Index> window_starts(Eigen::Index samples, const WindowSpec& spec) {
  spec.validate();
  std::vector<Eigen::Index> starts;
  if (samples < spec.size) return starts;
  const Eigen::Index stride = spec.stride();
  for (Eigen::Index s = 0; s + spec.size <= samples; s += stride) starts.push_back(s);
  return starts;
}

OperatorBank operator_bank(const std::vector<LiftedTrajectory>& trials, const WindowSpec& spec) {
  spec.validate();
  if (trials.empty()) throw std::invalid_argument("operator_bank: no trials");

  OperatorBank bank;
  bank.dimension = trials.front().points.cols();
  for (std::size_t ti = 0; ti < trials.size(); ++ti) {
    const LiftedTrajectory& trial = trials[ti];
    if (trial.points.cols() != bank.dimension) {
      throw std::invalid_argument("operator_bank: inconsistent lifted dimension across trials");
    }
    const std::vector<Eigen::Index> starts = window_starts(trial.points.rows(), spec);
    if (starts.empty()) {
      log::warn("segment", "trial ", trial.trial_id, " shorter than one window; skipped");
      continue;
    }
    for (Eigen::Index s : starts) {
      LiftedTrajectory window;
      window.points = trial.points.middleRows(s, spec.size);
      window.dt = trial.dt;
      window.trial_id = trial.trial_id;
      KoopmanOperator op = fit_koopman(window);
      op.window = {trial.trial_id, s, spec.size};
      bank.operators.push_back(std::move(op));
      bank.windows.push_back({trial.trial_id, ti, s, spec.size});
    }
  }
  return bank;
}

namespace {

FeatureMatrix flatten_bank(const OperatorBank& bank) {
  const Eigen::Index n = static_cast<Eigen::Index>(bank.size());
  const Eigen::Index dim = bank.dimension * bank.dimension;
  FeatureMatrix features;
  features.rows.resize(n, dim);
  features.source_ids.reserve(bank.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::MatrixXd& k = bank.operators[static_cast<std::size_t>(i)].matrix;
    features.rows.row(i) = Eigen::Map<const Eigen::RowVectorXd>(k.data(), dim);
    features.source_ids.push_back(bank.windows[static_cast<std::size_t>(i)].trial_id);
  }
  return features;
}

int auto_min_cluster_size(std::size_t windows) {
  return std::max(3, static_cast<int>(std::llround(0.05 * static_cast<double>(windows))));
}

}  // namespace

ExemplarSet synthesize_exemplars(const OperatorBank& bank, const ClusterResult& clusters) {
  if (clusters.labels.size() != bank.size()) {
    throw std::invalid_argument("synthesize_exemplars: cluster result does not match bank");
  }
  if (clusters.num_classes == 0) {
    throw DataError("segmentation failure: no behaviors found (all windows are noise)");
  }
  ExemplarSet set;
  const Eigen::Index dim = bank.dimension;
  for (int j = 0; j < clusters.num_classes; ++j) {
    RowMatrix acc = RowMatrix::Zero(dim, dim);
    double weight = 0.0;
    for (std::size_t i = 0; i < bank.size(); ++i) {
      if (clusters.labels[i] != j) continue;
      const double w = clusters.membership[i];
      acc += w * bank.operators[i].matrix;
      weight += w;
    }
    if (weight <= 0.0) {
      throw NumericError("synthesize_exemplars: class with zero total membership");
    }
    KoopmanOperator exemplar;
    exemplar.matrix = acc / weight;
    exemplar.basis_id = bank.operators.front().basis_id;
    exemplar.window = {"exemplar", 0, 0};
    exemplar.residual = 0.0;
    set.exemplars.push_back(std::move(exemplar));
  }
  return set;
}

LabeledDataset label_samples(const OperatorBank& bank, const ClusterResult& clusters,
                             const std::vector<LiftedTrajectory>& trials) {
  if (clusters.labels.size() != bank.size()) {
    throw std::invalid_argument("label_samples: cluster result does not match bank");
  }
  LabeledDataset out;
  out.num_classes = clusters.num_classes;
  out.labels.resize(trials.size());

  // Group window indices per trial; windows arrive in start order.
  std::vector<std::vector<std::size_t>> per_trial(trials.size());
  for (std::size_t w = 0; w < bank.size(); ++w) {
    per_trial[bank.windows[w].trial_index].push_back(w);
  }

  for (std::size_t ti = 0; ti < trials.size(); ++ti) {
    const Eigen::Index n = trials[ti].points.rows();
    std::vector<int>& labels = out.labels[ti];
    labels.assign(static_cast<std::size_t>(n), -1);
    for (Eigen::Index s = 0; s < n; ++s) {
      int best = -1;
      double best_membership = -1.0;
      for (std::size_t w : per_trial[ti]) {
        const WindowSlice& slice = bank.windows[w];
        if (slice.start > s) break;
        if (s >= slice.start + slice.length) continue;
        if (clusters.labels[w] < 0) continue;
        if (clusters.membership[w] > best_membership) {
          best_membership = clusters.membership[w];
          best = clusters.labels[w];
        }
      }
      labels[static_cast<std::size_t>(s)] = best;
    }
  }
  return out;
}

std::vector<std::vector<int>> LabeledDataset::sequences() const {
  std::vector<std::vector<int>> runs;
  for (const auto& trial : labels) {
    std::vector<int> run;
    for (int label : trial) {
      if (label < 0) {
        if (!run.empty()) runs.push_back(std::move(run));
        run.clear();
      } else {
        run.push_back(label);
      }
    }
    if (!run.empty()) runs.push_back(std::move(run));
  }
  return runs;
}

DssModel segment(const std::vector<Trajectory>& trials, const BasisSpec& basis,
                 const SegmentationParams& params, std::uint64_t seed) {
  if (trials.empty()) throw std::invalid_argument("segment: no trials");
  params.window.validate();

  std::vector<LiftedTrajectory> lifted;
  lifted.reserve(trials.size());
  for (const Trajectory& trial : trials) lifted.push_back(lift_trajectory(basis, trial));

  OperatorBank bank = operator_bank(lifted, params.window);
  if (bank.size() == 0) {
    throw DataError("segment: no trial is long enough for a single window");
  }
  for (KoopmanOperator& op : bank.operators) op.basis_id = basis.id();
  log::info("segment", "fit ", bank.size(), " window operators of dimension ", bank.dimension);

  const int mcs = params.min_cluster_size > 0 ? params.min_cluster_size
                                              : auto_min_cluster_size(bank.size());
  const FeatureMatrix features = flatten_bank(bank);
  const ClusterResult clusters = hdbscan(features, mcs);
  std::size_t noise = 0;
  for (int label : clusters.labels) noise += label < 0 ? 1 : 0;
  log::info("segment", "clustering found ", clusters.num_classes, " classes (mcs ", mcs,
            ", noise ", noise, "/", clusters.labels.size(), ")");

  ExemplarSet exemplars = synthesize_exemplars(bank, clusters);
  const LabeledDataset dataset = label_samples(bank, clusters, lifted);

  // Assemble the SVM training set from labeled samples, capped per class.
  std::vector<std::vector<std::pair<std::size_t, Eigen::Index>>> members(
      static_cast<std::size_t>(clusters.num_classes));
  for (std::size_t ti = 0; ti < lifted.size(); ++ti) {
    for (std::size_t s = 0; s < dataset.labels[ti].size(); ++s) {
      const int label = dataset.labels[ti][s];
      if (label >= 0) {
        members[static_cast<std::size_t>(label)].emplace_back(ti, static_cast<Eigen::Index>(s));
      }
    }
  }
  std::vector<std::pair<std::size_t, Eigen::Index>> chosen;
  std::vector<int> chosen_labels;
  for (int j = 0; j < clusters.num_classes; ++j) {
    const auto& pool = members[static_cast<std::size_t>(j)];
    if (pool.empty()) {
      throw NumericError("segment: class without labeled samples");
    }
    const std::size_t cap = params.svm_max_per_class > 0
                                ? static_cast<std::size_t>(params.svm_max_per_class)
                                : pool.size();
    const std::size_t take = std::min(pool.size(), cap);
    for (std::size_t t = 0; t < take; ++t) {
      const std::size_t idx = (t * pool.size()) / take;  // even deterministic thinning
      chosen.push_back(pool[idx]);
      chosen_labels.push_back(j);
    }
  }
  RowMatrix train(static_cast<Eigen::Index>(chosen.size()), bank.dimension);
  for (std::size_t r = 0; r < chosen.size(); ++r) {
    train.row(static_cast<Eigen::Index>(r)) = lifted[chosen[r].first].points.row(chosen[r].second);
  }
  SvmModel svm = train_svm(train, chosen_labels, params.svm);

  // The graph carries the label sequences seen through the trained
  // partition, so reference and later scoring share one code path and a
  // dataset scored against its own model diverges by exactly zero.
  std::vector<std::vector<int>> partition_labels;
  partition_labels.reserve(lifted.size());
  for (const LiftedTrajectory& trial : lifted) {
    partition_labels.push_back(classify_trajectory(svm, trial));
  }
  BehaviorGraph graph = build_graph(std::move(exemplars), partition_labels);

  SegmentationParams recorded = params;
  recorded.min_cluster_size = mcs;
  return DssModel(basis, std::move(svm), std::move(graph), recorded, seed);
}

}  // namespace dss
