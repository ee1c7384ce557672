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

// Reference kernels. These define the semantics the SIMD variants must
// reproduce (up to reassociation of the accumulation order).

#include "dss/kernels.hpp"

namespace dss::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void outer_accumulate_scalar(double* acc, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double* row = acc + i * n;
    const double ai = a[i];
    for (std::size_t j = 0; j < n; ++j) row[j] += ai * b[j];
  }
}

}  // namespace

namespace detail {
const Ops scalar_ops = {"scalar", dot_scalar, squared_distance_scalar, outer_accumulate_scalar};
}  // namespace detail

}  // namespace dss::kernels
