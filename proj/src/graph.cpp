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

#include "dss/graph.hpp"

#include <stdexcept>

namespace dss {

namespace {

void check_labels(const std::vector<std::vector<int>>& sequences, int num_classes) {
  for (const auto& seq : sequences) {
    for (int label : seq) {
      if (label < 0 || label >= num_classes) {
        throw std::invalid_argument("behavior graph: label outside [0, num_classes)");
      }
    }
  }
}

}  // namespace

std::set<std::pair<int, int>> extract_edges(const std::vector<std::vector<int>>& sequences) {
  std::set<std::pair<int, int>> edges;
  for (const auto& seq : sequences) {
    for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
      if (seq[k] < 0 || seq[k + 1] < 0) {
        throw std::invalid_argument("extract_edges: negative label in sequence");
      }
      edges.insert({seq[k], seq[k + 1]});
    }
  }
  return edges;
}

SymbolDistribution state_distribution(const std::vector<std::vector<int>>& sequences,
                                      int num_classes) {
  if (num_classes <= 0) throw std::invalid_argument("state_distribution: no classes");
  check_labels(sequences, num_classes);
  SymbolDistribution dist;
  dist.counts.assign(static_cast<std::size_t>(num_classes), 0);
  Eigen::Index total = 0;
  for (const auto& seq : sequences) {
    for (int label : seq) {
      dist.counts[static_cast<std::size_t>(label)] += 1;
      ++total;
    }
  }
  if (total == 0) throw std::invalid_argument("state_distribution: no labeled samples");
  dist.probabilities.resize(num_classes);
  for (int j = 0; j < num_classes; ++j) {
    dist.probabilities(j) =
        static_cast<double>(dist.counts[static_cast<std::size_t>(j)]) / static_cast<double>(total);
  }
  return dist;
}

BehaviorGraph build_graph(ExemplarSet exemplars,
                          const std::vector<std::vector<int>>& sequences) {
  if (exemplars.size() == 0) throw std::invalid_argument("build_graph: no exemplars");
  check_labels(sequences, exemplars.size());
  BehaviorGraph graph;
  graph.distribution = state_distribution(sequences, exemplars.size());
  graph.edges = extract_edges(sequences);
  graph.nodes = std::move(exemplars);
  return graph;
}

}  // namespace dss
