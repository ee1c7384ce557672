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

#include "dss/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

#include "dss/errors.hpp"
#include "dss/kernels.hpp"
#include "dss/log.hpp"

namespace dss {

namespace {

constexpr double kTau = 1e-12;

struct BinarySolution {
  std::vector<double> alpha;  // box-constrained multipliers, class_a side is y=+1
  double rho = 0.0;
  std::int64_t iterations = 0;
};

// Two-class SMO with maximal-violating-pair working set selection and a
// second-order gain heuristic for the partner index. Kernel rows come from
// a dense precomputed matrix, which keeps the inner loop branch-free.
BinarySolution solve_binary(const RowMatrix& x, const std::vector<double>& y, double c,
                            double gamma, double tol, std::int64_t max_iter) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();

  RowMatrix kernel(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    kernel(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double sq = kernels::squared_distance(x.row(i).data(), x.row(j).data(),
                                                  static_cast<std::size_t>(d));
      const double k = std::exp(-gamma * sq);
      kernel(i, j) = k;
      kernel(j, i) = k;
    }
  }

  BinarySolution sol;
  sol.alpha.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<double> grad(static_cast<std::size_t>(n), -1.0);

  const auto in_up = [&](Eigen::Index t) {
    return (y[static_cast<std::size_t>(t)] > 0.0 && sol.alpha[static_cast<std::size_t>(t)] < c) ||
           (y[static_cast<std::size_t>(t)] < 0.0 && sol.alpha[static_cast<std::size_t>(t)] > 0.0);
  };
  const auto in_low = [&](Eigen::Index t) {
    return (y[static_cast<std::size_t>(t)] > 0.0 && sol.alpha[static_cast<std::size_t>(t)] > 0.0) ||
           (y[static_cast<std::size_t>(t)] < 0.0 && sol.alpha[static_cast<std::size_t>(t)] < c);
  };

  std::int64_t iter = 0;
  for (; iter < max_iter; ++iter) {
    Eigen::Index i = -1;
    double g_max = -std::numeric_limits<double>::infinity();
    double g_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t) {
      const double v = -y[static_cast<std::size_t>(t)] * grad[static_cast<std::size_t>(t)];
      if (in_up(t) && v > g_max) {
        g_max = v;
        i = t;
      }
      if (in_low(t)) g_min = std::min(g_min, v);
    }
    if (i < 0 || g_max - g_min <= tol) break;

    Eigen::Index j = -1;
    double best_gain = -std::numeric_limits<double>::infinity();
    const double yi = y[static_cast<std::size_t>(i)];
    for (Eigen::Index t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      const double v = -y[static_cast<std::size_t>(t)] * grad[static_cast<std::size_t>(t)];
      const double b = g_max - v;
      if (b <= 0.0) continue;
      double a = 2.0 - 2.0 * yi * y[static_cast<std::size_t>(t)] * kernel(i, t);
      if (a <= 0.0) a = kTau;
      const double gain = b * b / a;
      if (gain > best_gain) {
        best_gain = gain;
        j = t;
      }
    }
    if (j < 0) break;

    const double yj = y[static_cast<std::size_t>(j)];
    const double old_ai = sol.alpha[static_cast<std::size_t>(i)];
    const double old_aj = sol.alpha[static_cast<std::size_t>(j)];
    double& ai = sol.alpha[static_cast<std::size_t>(i)];
    double& aj = sol.alpha[static_cast<std::size_t>(j)];

    if (yi != yj) {
      double quad = 2.0 + 2.0 * kernel(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[static_cast<std::size_t>(i)] - grad[static_cast<std::size_t>(j)]) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0.0) {
        if (aj < 0.0) {
          aj = 0.0;
          ai = diff;
        }
        if (ai > c) {
          ai = c;
          aj = c - diff;
        }
      } else {
        if (ai < 0.0) {
          ai = 0.0;
          aj = -diff;
        }
        if (aj > c) {
          aj = c;
          ai = c + diff;
        }
      }
    } else {
      double quad = 2.0 - 2.0 * kernel(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[static_cast<std::size_t>(i)] - grad[static_cast<std::size_t>(j)]) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > c) {
        if (ai > c) {
          ai = c;
          aj = sum - c;
        }
        if (aj > c) {
          aj = c;
          ai = sum - c;
        }
      } else {
        if (aj < 0.0) {
          aj = 0.0;
          ai = sum;
        }
        if (ai < 0.0) {
          ai = 0.0;
          aj = sum;
        }
      }
    }

    const double dai = ai - old_ai;
    const double daj = aj - old_aj;
    if (dai == 0.0 && daj == 0.0) break;
    for (Eigen::Index t = 0; t < n; ++t) {
      grad[static_cast<std::size_t>(t)] +=
          y[static_cast<std::size_t>(t)] * (yi * kernel(t, i) * dai + yj * kernel(t, j) * daj);
    }
  }
  if (iter >= max_iter) {
    log::warn("svm", "binary subproblem hit the iteration cap (", max_iter, ")");
  }
  sol.iterations = iter;

  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  Eigen::Index free_count = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = y[static_cast<std::size_t>(t)] * grad[static_cast<std::size_t>(t)];
    const double a = sol.alpha[static_cast<std::size_t>(t)];
    if (a >= c) {
      if (y[static_cast<std::size_t>(t)] < 0.0) upper = std::min(upper, yg);
      else lower = std::max(lower, yg);
    } else if (a <= 0.0) {
      if (y[static_cast<std::size_t>(t)] > 0.0) upper = std::min(upper, yg);
      else lower = std::max(lower, yg);
    } else {
      free_sum += yg;
      ++free_count;
    }
  }
  sol.rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : (upper + lower) / 2.0;
  return sol;
}

Eigen::VectorXd standardize_point(const SvmModel& model, const LiftedPoint& point) {
  if (point.size() != model.dimension()) {
    throw std::invalid_argument("svm: point dimension does not match the model");
  }
  return (point - model.mean).cwiseQuotient(model.scale);
}

}  // namespace

SvmModel train_svm(const RowMatrix& points, const std::vector<int>& labels,
                   const SvmParams& params) {
  const Eigen::Index n = points.rows();
  const Eigen::Index d = points.cols();
  if (n == 0 || d == 0) throw std::invalid_argument("train_svm: empty training set");
  if (labels.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("train_svm: label count does not match point count");
  }
  if (!points.allFinite()) throw std::invalid_argument("train_svm: non-finite features");
  if (params.c <= 0.0) throw std::invalid_argument("train_svm: c must be positive");
  if (params.tolerance <= 0.0) throw std::invalid_argument("train_svm: tolerance must be positive");
  for (int label : labels) {
    if (label < 0) throw std::invalid_argument("train_svm: negative class label");
  }

  SvmModel model;
  model.c = params.c;
  model.mean = points.colwise().mean();
  Eigen::VectorXd var = Eigen::VectorXd::Zero(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    var += (points.row(i).transpose() - model.mean).array().square().matrix();
  }
  var /= static_cast<double>(n);
  model.scale = var.array().sqrt();
  for (Eigen::Index k = 0; k < d; ++k) {
    if (model.scale(k) <= 0.0) model.scale(k) = 1.0;
  }

  RowMatrix z(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    z.row(i) = (points.row(i).transpose() - model.mean).cwiseQuotient(model.scale).transpose();
  }

  if (params.gamma > 0.0) {
    model.gamma = params.gamma;
  } else {
    double mean_var = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
      mean_var += z.col(k).squaredNorm() / static_cast<double>(n);
    }
    mean_var /= static_cast<double>(d);
    model.gamma = mean_var > 0.0 ? 1.0 / (static_cast<double>(d) * mean_var)
                                 : 1.0 / static_cast<double>(d);
  }

  std::map<int, std::vector<Eigen::Index>> by_class;
  for (Eigen::Index i = 0; i < n; ++i) {
    by_class[labels[static_cast<std::size_t>(i)]].push_back(i);
  }
  for (const auto& [label, members] : by_class) model.classes.push_back(label);

  if (model.classes.size() == 1) {
    log::warn("svm", "single-class training set; producing a constant classifier");
    model.degenerate = true;
    model.support_vectors.resize(0, d);
    return model;
  }

  std::vector<Eigen::Index> sv_slot(static_cast<std::size_t>(n), -1);
  std::vector<Eigen::Index> sv_rows;
  for (std::size_t a = 0; a < model.classes.size(); ++a) {
    for (std::size_t b = a + 1; b < model.classes.size(); ++b) {
      const auto& rows_a = by_class[model.classes[a]];
      const auto& rows_b = by_class[model.classes[b]];
      const Eigen::Index m = static_cast<Eigen::Index>(rows_a.size() + rows_b.size());
      RowMatrix xs(m, d);
      std::vector<double> ys(static_cast<std::size_t>(m));
      std::vector<Eigen::Index> origin(static_cast<std::size_t>(m));
      Eigen::Index r = 0;
      for (Eigen::Index idx : rows_a) {
        xs.row(r) = z.row(idx);
        ys[static_cast<std::size_t>(r)] = 1.0;
        origin[static_cast<std::size_t>(r)] = idx;
        ++r;
      }
      for (Eigen::Index idx : rows_b) {
        xs.row(r) = z.row(idx);
        ys[static_cast<std::size_t>(r)] = -1.0;
        origin[static_cast<std::size_t>(r)] = idx;
        ++r;
      }

      const BinarySolution sol = solve_binary(xs, ys, params.c, model.gamma,
                                              params.tolerance, params.max_iter);
      BinarySvm bin;
      bin.class_a = model.classes[a];
      bin.class_b = model.classes[b];
      bin.rho = sol.rho;
      std::vector<double> coefs;
      for (Eigen::Index t = 0; t < m; ++t) {
        const double alpha = sol.alpha[static_cast<std::size_t>(t)];
        if (alpha <= 0.0) continue;
        const Eigen::Index idx = origin[static_cast<std::size_t>(t)];
        if (sv_slot[static_cast<std::size_t>(idx)] < 0) {
          sv_slot[static_cast<std::size_t>(idx)] = static_cast<Eigen::Index>(sv_rows.size());
          sv_rows.push_back(idx);
        }
        bin.sv_index.push_back(sv_slot[static_cast<std::size_t>(idx)]);
        coefs.push_back(alpha * ys[static_cast<std::size_t>(t)]);
      }
      bin.coef = Eigen::Map<const Eigen::VectorXd>(coefs.data(),
                                                   static_cast<Eigen::Index>(coefs.size()));
      model.binaries.push_back(std::move(bin));
    }
  }

  model.support_vectors.resize(static_cast<Eigen::Index>(sv_rows.size()), d);
  for (std::size_t s = 0; s < sv_rows.size(); ++s) {
    model.support_vectors.row(static_cast<Eigen::Index>(s)) = z.row(sv_rows[s]);
  }
  log::info("svm", "trained ", model.binaries.size(), " binary classifiers over ",
            model.classes.size(), " classes with ", sv_rows.size(), " shared support vectors");
  return model;
}

double binary_decision(const SvmModel& model, std::size_t binary_index,
                       const LiftedPoint& point) {
  if (binary_index >= model.binaries.size()) {
    throw std::invalid_argument("binary_decision: index out of range");
  }
  const Eigen::VectorXd zp = standardize_point(model, point);
  const BinarySvm& bin = model.binaries[binary_index];
  double value = 0.0;
  for (Eigen::Index t = 0; t < bin.coef.size(); ++t) {
    const Eigen::Index row = bin.sv_index[static_cast<std::size_t>(t)];
    const double sq = kernels::squared_distance(zp.data(), model.support_vectors.row(row).data(),
                                                static_cast<std::size_t>(zp.size()));
    value += bin.coef(t) * std::exp(-model.gamma * sq);
  }
  return value - bin.rho;
}

namespace {

// Votes over a precomputed kernel row; zp must already be standardized.
int classify_kernel_row(const SvmModel& model, const Eigen::VectorXd& kernel_row) {
  std::map<int, int> votes;
  for (int label : model.classes) votes[label] = 0;
  for (const BinarySvm& bin : model.binaries) {
    double value = -bin.rho;
    for (Eigen::Index t = 0; t < bin.coef.size(); ++t) {
      value += bin.coef(t) * kernel_row(bin.sv_index[static_cast<std::size_t>(t)]);
    }
    votes[value >= 0.0 ? bin.class_a : bin.class_b] += 1;
  }
  int best_label = model.classes.front();
  int best_votes = -1;
  for (int label : model.classes) {
    if (votes[label] > best_votes) {
      best_votes = votes[label];
      best_label = label;
    }
  }
  return best_label;
}

void fill_kernel_row(const SvmModel& model, const Eigen::VectorXd& zp,
                     Eigen::VectorXd& kernel_row) {
  for (Eigen::Index s = 0; s < model.support_vectors.rows(); ++s) {
    const double sq = kernels::squared_distance(zp.data(), model.support_vectors.row(s).data(),
                                                static_cast<std::size_t>(zp.size()));
    kernel_row(s) = std::exp(-model.gamma * sq);
  }
}

}  // namespace

int classify(const SvmModel& model, const LiftedPoint& point) {
  if (model.classes.empty()) throw std::invalid_argument("classify: untrained model");
  if (model.degenerate) {
    standardize_point(model, point);  // still validates dimension
    return model.classes.front();
  }
  const Eigen::VectorXd zp = standardize_point(model, point);
  Eigen::VectorXd kernel_row(model.support_vectors.rows());
  fill_kernel_row(model, zp, kernel_row);
  return classify_kernel_row(model, kernel_row);
}

std::vector<int> classify_trajectory(const SvmModel& model, const LiftedTrajectory& lifted) {
  if (model.classes.empty()) throw std::invalid_argument("classify: untrained model");
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(lifted.points.rows()));
  if (model.degenerate) {
    labels.assign(static_cast<std::size_t>(lifted.points.rows()), model.classes.front());
    return labels;
  }
  if (lifted.points.cols() != model.dimension()) {
    throw std::invalid_argument("classify_trajectory: lifted dimension does not match the model");
  }
  Eigen::VectorXd zp(model.dimension());
  Eigen::VectorXd kernel_row(model.support_vectors.rows());
  for (Eigen::Index k = 0; k < lifted.points.rows(); ++k) {
    zp = (lifted.points.row(k).transpose() - model.mean).cwiseQuotient(model.scale);
    fill_kernel_row(model, zp, kernel_row);
    labels.push_back(classify_kernel_row(model, kernel_row));
  }
  return labels;
}

std::vector<int> classify_trajectory(const SvmModel& model, const BasisSpec& basis,
                                     const Trajectory& trajectory) {
  return classify_trajectory(model, lift_trajectory(basis, trajectory));
}

}  // namespace dss
