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

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <doctest.h>

#include "dss/cluster.hpp"
#include "fixtures.hpp"

namespace dss {

namespace {

int noise_count(const ClusterResult& result) {
  return static_cast<int>(std::count(result.labels.begin(), result.labels.end(), -1));
}

}  // namespace

TEST_CASE("hdbscan separates two well-spaced blobs") {
  const testing::BlobFixture fixture = testing::make_blobs(2, 40, 2, 0.05, 7);
  const ClusterResult result = hdbscan(fixture.features, 5);

  CHECK(result.num_classes == 2);
  CHECK(testing::label_agreement(result.labels, fixture.truth) == doctest::Approx(1.0));
  CHECK(noise_count(result) <= 4);  // 5% of 80
  for (std::size_t i = 0; i < result.labels.size(); ++i) {
    CHECK(result.membership[i] >= 0.0);
    CHECK(result.membership[i] <= 1.0);
    if (result.labels[i] == -1) CHECK(result.membership[i] == 0.0);
  }
}

TEST_CASE("hdbscan separates three blobs in five dimensions") {
  const testing::BlobFixture fixture = testing::make_blobs(3, 30, 5, 0.05, 11);
  const ClusterResult result = hdbscan(fixture.features, 5);

  CHECK(result.num_classes == 3);
  CHECK(testing::label_agreement(result.labels, fixture.truth) == doctest::Approx(1.0));
  CHECK(noise_count(result) <= 4);  // 5% of 90
}

TEST_CASE("class labels follow first appearance in input order") {
  const testing::BlobFixture fixture = testing::make_blobs(3, 25, 2, 0.05, 13);
  const ClusterResult result = hdbscan(fixture.features, 5);

  int seen = 0;
  for (int label : result.labels) {
    if (label < 0) continue;
    CHECK(label <= seen);
    if (label == seen) ++seen;
  }
  CHECK(seen == result.num_classes);
}

TEST_CASE("uniform rescaling leaves the clustering unchanged") {
  const testing::BlobFixture fixture = testing::make_blobs(2, 40, 3, 0.05, 17);
  const ClusterResult base = hdbscan(fixture.features, 5);

  for (double scale : {4.0, 0.25}) {
    FeatureMatrix scaled = fixture.features;
    scaled.rows *= scale;
    const ClusterResult result = hdbscan(scaled, 5);
    CHECK(result.labels == base.labels);
    CHECK(result.num_classes == base.num_classes);
  }
}

TEST_CASE("duplicate points collapse into a single cluster") {
  FeatureMatrix points;
  points.rows.setOnes(10, 3);
  const ClusterResult result = hdbscan(points, 3);

  CHECK(result.num_classes == 1);
  for (int label : result.labels) CHECK(label == 0);
  for (double m : result.membership) {
    CHECK(m >= 0.0);
    CHECK(m <= 1.0);
    CHECK(std::isfinite(m));
  }
}

TEST_CASE("fewer points than min_cluster_size labels everything noise") {
  const testing::BlobFixture fixture = testing::make_blobs(1, 4, 2, 0.05, 19);
  const ClusterResult result = hdbscan(fixture.features, 5);

  CHECK(result.num_classes == 0);
  CHECK(noise_count(result) == 4);
}

TEST_CASE("class_members returns input-order indices for one class") {
  const testing::BlobFixture fixture = testing::make_blobs(2, 20, 2, 0.05, 23);
  const ClusterResult result = hdbscan(fixture.features, 5);

  std::size_t total = 0;
  for (int j = 0; j < result.num_classes; ++j) {
    const std::vector<std::size_t> members = class_members(result, j);
    total += members.size();
    CHECK(std::is_sorted(members.begin(), members.end()));
    for (std::size_t idx : members) CHECK(result.labels[idx] == j);
  }
  total += static_cast<std::size_t>(noise_count(result));
  CHECK(total == result.labels.size());

  CHECK_THROWS_AS(class_members(result, result.num_classes), std::invalid_argument);
  CHECK_THROWS_AS(class_members(result, -1), std::invalid_argument);
}

TEST_CASE("hdbscan rejects invalid arguments") {
  const testing::BlobFixture fixture = testing::make_blobs(1, 10, 2, 0.05, 29);
  CHECK_THROWS_AS(hdbscan(fixture.features, 1), std::invalid_argument);

  FeatureMatrix empty;
  empty.rows.resize(0, 2);
  CHECK_THROWS_AS(hdbscan(empty, 5), std::invalid_argument);

  FeatureMatrix bad = fixture.features;
  bad.rows(3, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(hdbscan(bad, 3), std::invalid_argument);
}

TEST_CASE("hdbscan is deterministic") {
  const testing::BlobFixture fixture = testing::make_blobs(3, 30, 4, 0.08, 31);
  const ClusterResult first = hdbscan(fixture.features, 6);
  const ClusterResult second = hdbscan(fixture.features, 6);

  CHECK(first.labels == second.labels);
  CHECK(first.membership == second.membership);
  CHECK(first.num_classes == second.num_classes);
}

TEST_CASE("diagnostics expose a selected condensed tree") {
  const testing::BlobFixture fixture = testing::make_blobs(2, 30, 2, 0.05, 37);
  ClusterDiagnostics diagnostics;
  const ClusterResult result = hdbscan(fixture.features, 5, &diagnostics);

  CHECK(result.num_classes == 2);
  REQUIRE(!diagnostics.nodes.empty());
  int selected = 0;
  for (const ClusterDiagnostics::Node& node : diagnostics.nodes) {
    if (node.selected) {
      ++selected;
      CHECK(node.final_class >= 0);
      CHECK(node.final_class < result.num_classes);
    }
    CHECK(node.stability >= 0.0);
  }
  CHECK(selected == result.num_classes);
}

}  // namespace dss
