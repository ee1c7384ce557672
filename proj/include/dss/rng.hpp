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

#include <cmath>
#include <cstdint>

namespace dss {

// Splitmix64 stream. Self-contained so that seeded runs are reproducible
// across standard libraries and platforms, not just across runs of one
// binary. Streams are split per trial/subject by hashing (seed, index).
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  // Derives an independent stream for a substructure (trial, subject, ...).
  static Rng split(uint64_t seed, uint64_t stream) {
    Rng mixer(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
    mixer.next_u64();
    return Rng(mixer.next_u64());
  }

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Integer in [0, n).
  uint64_t below(uint64_t n) { return next_u64() % n; }

  // Standard normal via Box-Muller (trigonometric form, no rejection loop).
  double gaussian() {
    double u1 = uniform();
    const double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  double gaussian(double mean, double sigma) { return mean + sigma * gaussian(); }

 private:
  uint64_t state_;
};

}  // namespace dss
