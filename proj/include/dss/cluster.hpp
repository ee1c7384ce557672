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

#include <cstddef>
#include <string>
#include <vector>

#include "dss/types.hpp"

namespace dss {

struct FeatureMatrix {
  RowMatrix rows;                        // n points x D features
  std::vector<std::string> source_ids;   // optional; empty or size n

  Eigen::Index size() const { return rows.rows(); }
  Eigen::Index dim() const { return rows.cols(); }
};

struct ClusterResult {
  std::vector<int> labels;         // -1 noise, else 0..B (first-appearance order)
  std::vector<double> membership;  // in [0,1]; 0 for noise
  int num_classes = 0;             // B + 1
};

// Condensed-tree summary, exposed for debugging dumps.
struct ClusterDiagnostics {
  struct Node {
    int id = 0;
    int parent = -1;
    double birth_lambda = 0.0;
    int size = 0;
    double stability = 0.0;
    bool selected = false;
    int final_class = -1;  // class index if this node became a class
  };
  std::vector<Node> nodes;
  double duplicate_lambda_cap = 0.0;  // lambda substituted for zero distances
};

// Hierarchical density-based clustering with noise.
//
// Pipeline: core distances (distance to the min_cluster_size-th nearest
// neighbor), mutual-reachability distances, minimum spanning tree,
// condensed cluster tree at minimum size min_cluster_size, cluster
// selection by maximum stability (the tree root is eligible, so a dataset
// that is one dense clump yields one class), and per-point membership as
// the point's departure lambda over the cluster's maximum lambda.
//
// Ties (MST construction, equal-stability selection) resolve toward the
// lowest input index, so results are deterministic. Fewer rows than
// min_cluster_size cannot form any cluster; every point is labeled noise.
ClusterResult hdbscan(const FeatureMatrix& points, int min_cluster_size,
                      ClusterDiagnostics* diagnostics = nullptr);

// Row indices with label j, in input order. j must be a valid class.
std::vector<std::size_t> class_members(const ClusterResult& result, int j);

}  // namespace dss
