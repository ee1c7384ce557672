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

#include <utility>
#include <vector>

namespace dss::stats {

struct PairedTestResult {
  double t = 0.0;
  int df = 0;
  double p = 1.0;            // two-sided
  double mean_a = 0.0;
  double sd_a = 0.0;         // sample standard deviation (n - 1)
  double mean_b = 0.0;
  double sd_b = 0.0;
  double mean_diff = 0.0;    // mean(a - b)
  double cohens_d = 0.0;     // mean_diff / sd(a - b)
  double cohens_d_pooled = 0.0;  // mean_diff / sqrt((sd_a^2 + sd_b^2) / 2)
};

// Mean and sample standard deviation. Needs at least two values.
std::pair<double, double> summarize(const std::vector<double>& values);

// Regularized incomplete beta I_x(a, b) by continued fraction.
double incomplete_beta(double a, double b, double x);

// CDF of Student's t with df degrees of freedom; exact 0.5 at t = 0.
double student_t_cdf(double t, int df);

double cohens_d_paired(const std::vector<double>& a, const std::vector<double>& b);

// Two-sided paired t-test. Requires equal sizes, n >= 2, and a nonzero
// spread of differences.
PairedTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace dss::stats
