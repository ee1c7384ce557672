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

#include "dss/stats.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

#include "dss/errors.hpp"

namespace dss::stats {

namespace {

// Lentz continued fraction for the incomplete beta function.
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw NumericError("incomplete_beta: continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("incomplete_beta: a, b must be positive");
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("incomplete_beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, int df) {
  if (df < 1) throw std::invalid_argument("student_t_cdf: df must be >= 1");
  if (t == 0.0) return 0.5;
  const double v = static_cast<double>(df);
  const double x = v / (v + t * t);
  const double tail = 0.5 * incomplete_beta(0.5 * v, 0.5, x);
  return t > 0.0 ? 1.0 - tail : tail;
}

std::pair<double, double> summarize(const std::vector<double>& values) {
  if (values.size() < 2) throw std::invalid_argument("summarize: need at least two values");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

double cohens_d_paired(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("cohens_d_paired: size mismatch");
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  const auto [mean, sd] = summarize(diff);
  if (sd == 0.0) throw NumericError("cohens_d_paired: zero variance of differences");
  return mean / sd;
}

PairedTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired_t_test: size mismatch");
  if (a.size() < 2) throw std::invalid_argument("paired_t_test: need at least two pairs");

  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  const auto [mean_d, sd_d] = summarize(diff);
  if (sd_d == 0.0) throw NumericError("paired_t_test: zero variance of differences");

  PairedTestResult r;
  const double n = static_cast<double>(a.size());
  std::tie(r.mean_a, r.sd_a) = summarize(a);
  std::tie(r.mean_b, r.sd_b) = summarize(b);
  r.mean_diff = mean_d;
  r.df = static_cast<int>(a.size()) - 1;
  r.t = mean_d / (sd_d / std::sqrt(n));
  const double tail = r.t >= 0.0 ? 1.0 - student_t_cdf(r.t, r.df) : student_t_cdf(r.t, r.df);
  r.p = 2.0 * tail;
  if (r.p > 1.0) r.p = 1.0;
  r.cohens_d = mean_d / sd_d;
  const double pooled = std::sqrt(0.5 * (r.sd_a * r.sd_a + r.sd_b * r.sd_b));
  r.cohens_d_pooled = pooled > 0.0 ? mean_d / pooled : 0.0;
  return r;
}

}  // namespace dss::stats
