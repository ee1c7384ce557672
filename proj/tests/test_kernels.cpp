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
#include <string>
#include <vector>

#include <doctest.h>
#include <Eigen/Dense>

#include "dss/kernels.hpp"
#include "dss/rng.hpp"

namespace dss {

namespace {

std::vector<double> random_vector(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-2.0, 2.0);
  return v;
}

}  // namespace

TEST_CASE("scalar kernels agree with Eigen") {
  Rng rng(7);
  for (std::size_t n : {std::size_t{1}, std::size_t{3}, std::size_t{4}, std::size_t{7},
                        std::size_t{8}, std::size_t{17}, std::size_t{64}, std::size_t{100}}) {
    const std::vector<double> a = random_vector(n, rng);
    const std::vector<double> b = random_vector(n, rng);
    const Eigen::Map<const Eigen::VectorXd> va(a.data(), static_cast<Eigen::Index>(n));
    const Eigen::Map<const Eigen::VectorXd> vb(b.data(), static_cast<Eigen::Index>(n));

    const auto& ops = kernels::detail::scalar_ops;
    CHECK(ops.dot(a.data(), b.data(), n) == doctest::Approx(va.dot(vb)).epsilon(1e-12));
    CHECK(ops.squared_distance(a.data(), b.data(), n) ==
          doctest::Approx((va - vb).squaredNorm()).epsilon(1e-12));

    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                static_cast<Eigen::Index>(n));
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> got = acc;
    ops.outer_accumulate(got.data(), a.data(), b.data(), n);
    const Eigen::MatrixXd want = va * vb.transpose();
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("all available backends agree with the scalar reference") {
  Rng rng(11);
  const auto& scalar = kernels::detail::scalar_ops;
  std::vector<const kernels::Ops*> variants;
  if (const auto* ops = kernels::detail::avx2_ops()) variants.push_back(ops);
  if (const auto* ops = kernels::detail::neon_ops()) variants.push_back(ops);

  for (const kernels::Ops* ops : variants) {
    INFO("backend ", ops->name);
    for (std::size_t n : {std::size_t{1}, std::size_t{5}, std::size_t{8}, std::size_t{33},
                          std::size_t{100}, std::size_t{257}}) {
      const std::vector<double> a = random_vector(n, rng);
      const std::vector<double> b = random_vector(n, rng);
      CHECK(ops->dot(a.data(), b.data(), n) ==
            doctest::Approx(scalar.dot(a.data(), b.data(), n)).epsilon(1e-10));
      CHECK(ops->squared_distance(a.data(), b.data(), n) ==
            doctest::Approx(scalar.squared_distance(a.data(), b.data(), n)).epsilon(1e-10));

      std::vector<double> acc_scalar(n * n, 0.5);
      std::vector<double> acc_simd(n * n, 0.5);
      scalar.outer_accumulate(acc_scalar.data(), a.data(), b.data(), n);
      ops->outer_accumulate(acc_simd.data(), a.data(), b.data(), n);
      double max_diff = 0.0;
      for (std::size_t i = 0; i < n * n; ++i) {
        max_diff = std::max(max_diff, std::abs(acc_scalar[i] - acc_simd[i]));
      }
      CHECK(max_diff < 1e-10);
    }
  }
}

TEST_CASE("backend selection honors names and rejects unknowns") {
  CHECK(kernels::available().find("scalar") != std::string::npos);
  CHECK(kernels::select("scalar"));
  CHECK(std::string(kernels::active().name) == "scalar");
  CHECK_FALSE(kernels::select("bogus"));
  CHECK(std::string(kernels::active().name) == "scalar");
  CHECK(kernels::select("auto"));
}

}  // namespace dss
