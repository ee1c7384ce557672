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
#include <vector>

#include "dss/cartpole.hpp"
#include "dss/segmentation.hpp"
#include "dss/types.hpp"

namespace dss::io {

inline constexpr int kSchemaVersion = 1;

// CSV schema: header "t,theta,x_c,theta_dot,xc_dot,u", one row per sample,
// doubles printed with %.17g so values round-trip exactly.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory);

// Reads the schema above. Malformed content raises DataError naming the
// row and column. The trial id defaults to the file stem; agent tag and
// seed come from the dataset manifest when loading a whole dataset.
Trajectory read_trajectory_csv(const std::filesystem::path& path);

struct ManifestEntry {
  std::string file;
  std::string trial_id;
  std::string agent_tag;
  std::uint64_t seed = 0;
  Eigen::Index samples = 0;
};

struct DatasetManifest {
  int schema_version = kSchemaVersion;
  std::uint64_t seed = 0;
  SimParams params;
  std::vector<ManifestEntry> entries;
};

void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);
DatasetManifest read_manifest(const std::filesystem::path& path);

// Writes trial CSVs plus manifest.json under dir (created if missing).
DatasetManifest save_dataset(const std::filesystem::path& dir,
                             const std::vector<Trajectory>& trials, const SimParams& params,
                             std::uint64_t seed);

// Loads every manifest entry; per-trial metadata is restored from the
// manifest.
std::vector<Trajectory> load_dataset(const std::filesystem::path& dir,
                                     DatasetManifest* manifest_out = nullptr);

// Model file: one JSON document with an embedded schema version. Loading
// a saved model reproduces scoring bit-for-bit (doubles serialize with
// shortest-round-trip formatting).
void save_model(const std::filesystem::path& path, const DssModel& model);
DssModel load_model(const std::filesystem::path& path);

struct ScoreRow {
  std::string subject;
  std::string session;
  double kl = 0.0;
  double mse = 0.0;
  Eigen::Index samples = 0;
};

void write_scores_csv(const std::filesystem::path& path, const std::vector<ScoreRow>& rows);

// Plain-text behavior graph description: nodes, edges, distribution.
std::string describe_graph(const BehaviorGraph& graph);

}  // namespace dss::io
