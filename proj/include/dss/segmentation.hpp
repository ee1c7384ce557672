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
#include <string>
#include <vector>

#include "dss/classify.hpp"
#include "dss/cluster.hpp"
#include "dss/graph.hpp"
#include "dss/koopman.hpp"
#include "dss/observables.hpp"
#include "dss/types.hpp"

namespace dss {

struct WindowSpec {
  Eigen::Index size = 120;
  double overlap = 0.75;  // fraction in [0, 1)

  Eigen::Index stride() const;
  void validate() const;
};

// Location of one window inside the trial list fed to operator_bank.
struct WindowSlice {
  std::string trial_id;
  std::size_t trial_index = 0;
  Eigen::Index start = 0;
  Eigen::Index length = 0;
};

struct OperatorBank {
  std::vector<KoopmanOperator> operators;
  std::vector<WindowSlice> windows;  // parallel to operators
  Eigen::Index dimension = 0;        // lifted dimension N

  std::size_t size() const { return operators.size(); }
};

// Per-trial sample labels; -1 marks samples no non-noise window covers.
struct LabeledDataset {
  std::vector<std::vector<int>> labels;
  int num_classes = 0;

  // Contiguous labeled runs, split wherever a -1 appears and never
  // bridging trials. Ready for graph construction.
  std::vector<std::vector<int>> sequences() const;
};

struct SegmentationParams {
  WindowSpec window;
  int min_cluster_size = 0;          // 0 selects max(3, round(0.05 * #windows))
  SvmParams svm;
  Eigen::Index svm_max_per_class = 1500;  // training subsample cap, 0 = unlimited
};

struct DssModel {
  BasisSpec basis;
  SvmModel svm;
  BehaviorGraph graph;
  SegmentationParams params;
  std::uint64_t seed = 0;

  DssModel(BasisSpec basis_in, SvmModel svm_in, BehaviorGraph graph_in,
           SegmentationParams params_in, std::uint64_t seed_in)
      : basis(std::move(basis_in)),
        svm(std::move(svm_in)),
        graph(std::move(graph_in)),
        params(params_in),
        seed(seed_in) {}

  const ExemplarSet& exemplars() const { return graph.nodes; }
  int num_classes() const { return graph.num_classes(); }
};

// Window start offsets for one trajectory of n samples: 0, stride, ... with
// every window exactly spec.size long; a short tail is dropped.
std::vector<Eigen::Index> window_starts(Eigen::Index samples, const WindowSpec& spec);

// Fits one operator per window across all trials. Windows never span two
// trials. Trials shorter than one window contribute nothing; if every trial
// is that short the bank is empty.
OperatorBank operator_bank(const std::vector<LiftedTrajectory>& trials, const WindowSpec& spec);

// Per-class mean of member operators, weighted by cluster membership.
// Requires at least one non-noise class.
ExemplarSet synthesize_exemplars(const OperatorBank& bank, const ClusterResult& clusters);

// Labels every sample of every trial by the covering window with the
// highest membership (ties to the earliest window start). Samples covered
// only by noise windows, or not covered at all, get -1.
LabeledDataset label_samples(const OperatorBank& bank, const ClusterResult& clusters,
                             const std::vector<LiftedTrajectory>& trials);

// Full segmentation: lift, window, fit, cluster, synthesize exemplars,
// train the partition classifier, and assemble the behavior graph.
// Deterministic for fixed inputs; the seed is recorded in the model.
DssModel segment(const std::vector<Trajectory>& trials, const BasisSpec& basis,
                 const SegmentationParams& params, std::uint64_t seed);

}  // namespace dss
