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

// NEON kernels. float64x2 is baseline on aarch64, so no runtime probe is
// needed beyond compiling for the architecture.

#include "dss/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace dss::kernels {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  for (; i + 2 <= n; i += 2) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
  }
  double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double squared_distance_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    const float64x2_t d1 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    acc0 = vfmaq_f64(acc0, d0, d0);
    acc1 = vfmaq_f64(acc1, d1, d1);
  }
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc0 = vfmaq_f64(acc0, d, d);
  }
  double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void outer_accumulate_neon(double* acc, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double* row = acc + i * n;
    const float64x2_t ai = vdupq_n_f64(a[i]);
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
      vst1q_f64(row + j, vfmaq_f64(vld1q_f64(row + j), ai, vld1q_f64(b + j)));
    }
    const double s = a[i];
    for (; j < n; ++j) row[j] += s * b[j];
  }
}

const Ops neon_ops_impl = {"neon", dot_neon, squared_distance_neon, outer_accumulate_neon};

}  // namespace

namespace detail {
const Ops* neon_ops() { return &neon_ops_impl; }
}  // namespace detail

}  // namespace dss::kernels

#else  // !__aarch64__

namespace dss::kernels::detail {
const Ops* neon_ops() { return nullptr; }
}  // namespace dss::kernels::detail

#endif
