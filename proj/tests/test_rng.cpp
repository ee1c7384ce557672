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

#include <cmath>
#include <cstdint>

#include <doctest.h>

#include "dss/rng.hpp"

namespace dss {

TEST_CASE("rng matches the splitmix64 reference sequence") {
  Rng rng(1);
  CHECK(rng.next_u64() == UINT64_C(0x910a2dec89025cc1));
  CHECK(rng.next_u64() == UINT64_C(0xbeeb8da1658eec67));
  CHECK(rng.next_u64() == UINT64_C(0xf893a2eefb32555e));
}

TEST_CASE("rng is deterministic per seed") {
  Rng a(123456);
  Rng b(123456);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(123457);
  CHECK(Rng(123456).next_u64() != c.next_u64());
}

TEST_CASE("split produces reproducible, distinct streams") {
  Rng a = Rng::split(99, 0);
  Rng a2 = Rng::split(99, 0);
  Rng b = Rng::split(99, 1);
  const std::uint64_t va = a.next_u64();
  CHECK(va == a2.next_u64());
  CHECK(va != b.next_u64());
  CHECK(Rng::split(98, 0).next_u64() != Rng::split(99, 0).next_u64());
}

TEST_CASE("uniform stays in [0, 1) and matches the bit recipe") {
  Rng rng(1);
  CHECK(rng.uniform() == doctest::Approx(0.5665615751722809).epsilon(1e-15));
  Rng r2(777);
  for (int i = 0; i < 1000; ++i) {
    const double u = r2.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("ranged uniform respects bounds") {
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const double v = rng.uniform(-2.0, 3.0);
    CHECK(v >= -2.0);
    CHECK(v < 3.0);
  }
}

TEST_CASE("gaussian has roughly standard moments") {
  Rng rng(2024);
  const int n = 20000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian();
    sum += g;
    sq += g * g;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.03);
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("below yields values under the bound") {
  Rng rng(31);
  for (int i = 0; i < 300; ++i) CHECK(rng.below(7) < 7);
}

}  // namespace dss
