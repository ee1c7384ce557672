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

// Arithmetic inner loops shared by the operator fitting, clustering, and
// classification stages. Scalar reference implementations always exist;
// AVX2 (x86-64) and NEON (aarch64) variants are selected at runtime when
// the CPU supports them. The variants agree with the reference kernels up
// to floating-point reassociation; the test suite checks equivalence.
//
// The environment variable DSS_KERNELS (scalar|avx2|neon|auto) forces a
// backend before first use.

namespace dss::kernels {

struct Ops {
  const char* name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  // acc (n x n, row-major) += a * b^T
  void (*outer_accumulate)(double* acc, const double* a, const double* b, std::size_t n);
};

// Active backend (dispatch happens once, on first use).
const Ops& active();

// Forces a backend by name; returns false if unavailable on this CPU.
// "auto" re-runs detection.
bool select(const std::string& name);

// Names of all backends usable on this CPU, best first.
std::string available();

inline double dot(const double* a, const double* b, std::size_t n) {
  return active().dot(a, b, n);
}
inline double squared_distance(const double* a, const double* b, std::size_t n) {
  return active().squared_distance(a, b, n);
}
inline void outer_accumulate(double* acc, const double* a, const double* b, std::size_t n) {
  active().outer_accumulate(acc, a, b, n);
}

namespace detail {
extern const Ops scalar_ops;
// Null when the build or CPU lacks the instruction set.
const Ops* avx2_ops();
const Ops* neon_ops();
}  // namespace detail

}  // namespace dss::kernels
