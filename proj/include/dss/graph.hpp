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

#include <set>
#include <utility>
#include <vector>

#include "dss/koopman.hpp"
#include "dss/types.hpp"

namespace dss {

// One synthesized operator per behavior class, indexed by class.
struct ExemplarSet {
  std::vector<KoopmanOperator> exemplars;

  int size() const { return static_cast<int>(exemplars.size()); }
};

// Discrete distribution over behavior classes.
struct SymbolDistribution {
  Eigen::VectorXd probabilities;
  std::vector<Eigen::Index> counts;

  Eigen::Index size() const { return probabilities.size(); }
};

struct BehaviorGraph {
  ExemplarSet nodes;
  std::set<std::pair<int, int>> edges;  // ordered (from, to), self-loops included
  SymbolDistribution distribution;

  int num_classes() const { return nodes.size(); }
};

// Ordered class-to-class transitions observed within each sequence.
// Sequences never bridge, so no cross-trial transitions appear.
std::set<std::pair<int, int>> extract_edges(const std::vector<std::vector<int>>& sequences);

// Pooled per-class occupancy over every label in every sequence.
SymbolDistribution state_distribution(const std::vector<std::vector<int>>& sequences,
                                      int num_classes);

BehaviorGraph build_graph(ExemplarSet exemplars,
                          const std::vector<std::vector<int>>& sequences);

}  // namespace dss
