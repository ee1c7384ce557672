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

#include <atomic>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "dss/cluster.hpp"
#include "dss/rng.hpp"
#include "dss/types.hpp"

namespace dss::testing {

// Scratch directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("dss-test-" + std::to_string(counter.fetch_add(1)) + "-" +
             std::to_string(reinterpret_cast<std::uintptr_t>(this) & 0xffff));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline Eigen::Matrix2d rotation(double phi) {
  Eigen::Matrix2d r;
  r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return r;
}

struct SwitchedFixture {
  Trajectory trajectory;     // 1200 samples, 2-state, zero control
  Eigen::Matrix2d mode_a;    // x_{k+1} = mode_a * x_k for k < switch_at
  Eigen::Matrix2d mode_b;
  Eigen::Index switch_at = 600;
};

// Two-mode piecewise-linear system: damped rotations with distinct angles,
// switching once mid-trajectory, plus tiny state noise so no two windows
// coincide exactly.
inline SwitchedFixture make_switched_fixture(std::uint64_t seed = 42,
                                             double noise_sigma = 1e-8) {
  SwitchedFixture fx;
  fx.mode_a = 0.999 * rotation(0.2);
  fx.mode_b = 0.998 * rotation(-0.35);

  constexpr Eigen::Index kSamples = 1200;
  Rng rng(seed);
  fx.trajectory.states.resize(kSamples, 2);
  fx.trajectory.controls = Eigen::VectorXd::Zero(kSamples);
  fx.trajectory.dt = 0.01;
  fx.trajectory.trial_id = "switched";

  Eigen::Vector2d x(1.0, 0.2);
  for (Eigen::Index k = 0; k < kSamples; ++k) {
    fx.trajectory.states.row(k) = x.transpose();
    const Eigen::Matrix2d& mode = k < fx.switch_at ? fx.mode_a : fx.mode_b;
    x = mode * x;
    x(0) += noise_sigma * rng.gaussian();
    x(1) += noise_sigma * rng.gaussian();
  }
  return fx;
}

struct BlobFixture {
  FeatureMatrix features;
  std::vector<int> truth;
};

// `count` isotropic Gaussian blobs of `per` points each in `dim`
// dimensions, centers well separated relative to sigma.
inline BlobFixture make_blobs(int count, int per, int dim, double sigma,
                              std::uint64_t seed) {
  BlobFixture fx;
  const Eigen::Index n = static_cast<Eigen::Index>(count) * per;
  fx.features.rows.resize(n, dim);
  Rng rng(seed);
  Eigen::Index row = 0;
  for (int c = 0; c < count; ++c) {
    Eigen::VectorXd center = Eigen::VectorXd::Zero(dim);
    center(c % dim) = 4.0 * (1.0 + c / dim);
    for (int p = 0; p < per; ++p, ++row) {
      for (int d = 0; d < dim; ++d) {
        fx.features.rows(row, d) = center(d) + sigma * rng.gaussian();
      }
      fx.features.source_ids.push_back("blob-" + std::to_string(c));
      fx.truth.push_back(c);
    }
  }
  return fx;
}

// Fraction of positions where labels agree with truth under the best
// one-to-one class mapping implied by first appearances; noise (-1) never
// matches.
inline double label_agreement(const std::vector<int>& labels, const std::vector<int>& truth) {
  std::vector<int> mapping(64, -1);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) continue;
    int& mapped = mapping[static_cast<std::size_t>(truth[i])];
    if (mapped == -1) mapped = labels[i];
    hits += mapped == labels[i] ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

}  // namespace dss::testing
