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

#include "dss/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "dss/errors.hpp"
#include "dss/kernels.hpp"
#include "dss/log.hpp"

namespace dss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct MstEdge {
  int a = 0;
  int b = 0;
  double weight = 0.0;
};

// Dendrogram over node ids [0, 2n-1): ids < n are points, the rest are
// merge nodes created in ascending weight order.
struct Dendrogram {
  std::vector<int> left;
  std::vector<int> right;
  std::vector<double> weight;
  std::vector<int> size;
  int n = 0;

  int node_size(int id) const { return id < n ? 1 : size[static_cast<std::size_t>(id - n)]; }
};

std::vector<double> pairwise_distances(const RowMatrix& rows) {
  const Eigen::Index n = rows.rows();
  const Eigen::Index d = rows.cols();
  std::vector<double> dist(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* pi = rows.row(i).data();
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double sq = kernels::squared_distance(pi, rows.row(j).data(), static_cast<std::size_t>(d));
      const double v = std::sqrt(sq);
      dist[static_cast<std::size_t>(i * n + j)] = v;
      dist[static_cast<std::size_t>(j * n + i)] = v;
    }
  }
  return dist;
}

std::vector<double> core_distances(const std::vector<double>& dist, Eigen::Index n, int mcs) {
  const int k = std::min<int>(mcs, static_cast<int>(n) - 1);
  std::vector<double> core(static_cast<std::size_t>(n), 0.0);
  std::vector<double> buf;
  buf.reserve(static_cast<std::size_t>(n) - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    buf.clear();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) buf.push_back(dist[static_cast<std::size_t>(i * n + j)]);
    }
    std::nth_element(buf.begin(), buf.begin() + (k - 1), buf.end());
    core[static_cast<std::size_t>(i)] = buf[static_cast<std::size_t>(k - 1)];
  }
  return core;
}

// Prim's algorithm on the implicit complete mutual-reachability graph.
std::vector<MstEdge> mutual_reachability_mst(const std::vector<double>& dist,
                                             const std::vector<double>& core, Eigen::Index n) {
  std::vector<bool> in_tree(static_cast<std::size_t>(n), false);
  std::vector<double> key(static_cast<std::size_t>(n), kInf);
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  std::vector<MstEdge> edges;
  edges.reserve(static_cast<std::size_t>(n) - 1);

  int current = 0;
  in_tree[0] = true;
  for (Eigen::Index added = 1; added < n; ++added) {
    for (Eigen::Index v = 0; v < n; ++v) {
      if (in_tree[static_cast<std::size_t>(v)]) continue;
      const double d = dist[static_cast<std::size_t>(current) * static_cast<std::size_t>(n) +
                            static_cast<std::size_t>(v)];
      const double mr = std::max(d, std::max(core[static_cast<std::size_t>(current)],
                                             core[static_cast<std::size_t>(v)]));
      if (mr < key[static_cast<std::size_t>(v)]) {
        key[static_cast<std::size_t>(v)] = mr;
        parent[static_cast<std::size_t>(v)] = current;
      }
    }
    int best = -1;
    double best_key = kInf;
    for (Eigen::Index v = 0; v < n; ++v) {
      if (in_tree[static_cast<std::size_t>(v)]) continue;
      if (key[static_cast<std::size_t>(v)] < best_key) {
        best_key = key[static_cast<std::size_t>(v)];
        best = static_cast<int>(v);
      }
    }
    in_tree[static_cast<std::size_t>(best)] = true;
    edges.push_back({parent[static_cast<std::size_t>(best)], best, best_key});
    current = best;
  }
  return edges;
}

Dendrogram single_linkage(std::vector<MstEdge> edges, int n) {
  std::stable_sort(edges.begin(), edges.end(), [](const MstEdge& x, const MstEdge& y) {
    if (x.weight != y.weight) return x.weight < y.weight;
    const int xa = std::min(x.a, x.b), xb = std::max(x.a, x.b);
    const int ya = std::min(y.a, y.b), yb = std::max(y.a, y.b);
    if (xa != ya) return xa < ya;
    return xb < yb;
  });

  Dendrogram dg;
  dg.n = n;
  dg.left.reserve(edges.size());
  dg.right.reserve(edges.size());
  dg.weight.reserve(edges.size());
  dg.size.reserve(edges.size());

  // Union-find over dendrogram node ids; roots point at the latest merge.
  std::vector<int> uf(static_cast<std::size_t>(2 * n - 1));
  for (std::size_t i = 0; i < uf.size(); ++i) uf[i] = static_cast<int>(i);
  auto find = [&uf](int x) {
    int root = x;
    while (uf[static_cast<std::size_t>(root)] != root) root = uf[static_cast<std::size_t>(root)];
    while (uf[static_cast<std::size_t>(x)] != root) {
      const int next = uf[static_cast<std::size_t>(x)];
      uf[static_cast<std::size_t>(x)] = root;
      x = next;
    }
    return root;
  };

  int next_id = n;
  for (const MstEdge& e : edges) {
    const int ra = find(e.a);
    const int rb = find(e.b);
    dg.left.push_back(ra);
    dg.right.push_back(rb);
    dg.weight.push_back(e.weight);
    dg.size.push_back(dg.node_size(ra) + dg.node_size(rb));
    uf[static_cast<std::size_t>(ra)] = next_id;
    uf[static_cast<std::size_t>(rb)] = next_id;
    ++next_id;
  }
  return dg;
}

struct CondensedTree {
  struct Node {
    int parent = -1;
    double birth_lambda = 0.0;
    int size = 0;
    std::vector<int> children;
    double stability = 0.0;
  };
  std::vector<Node> nodes;
  std::vector<int> point_cluster;     // condensed node each point departed from
  std::vector<double> point_lambda;   // lambda at departure
  double lambda_cap = 1.0;
};

void collect_points(const Dendrogram& dg, int node, std::vector<int>* out) {
  if (node < dg.n) {
    out->push_back(node);
    return;
  }
  std::vector<int> stack = {node};
  while (!stack.empty()) {
    const int cur = stack.back();
    stack.pop_back();
    if (cur < dg.n) {
      out->push_back(cur);
      continue;
    }
    const std::size_t m = static_cast<std::size_t>(cur - dg.n);
    stack.push_back(dg.left[m]);
    stack.push_back(dg.right[m]);
  }
}

CondensedTree condense(const Dendrogram& dg, int mcs) {
  CondensedTree ct;
  const int n = dg.n;
  ct.point_cluster.assign(static_cast<std::size_t>(n), -1);
  ct.point_lambda.assign(static_cast<std::size_t>(n), 0.0);

  double min_pos = kInf;
  for (double w : dg.weight) {
    if (w > 0.0 && w < min_pos) min_pos = w;
  }
  ct.lambda_cap = std::isfinite(min_pos) ? 2.0 / min_pos : 1.0;
  auto lam = [&ct](double d) { return d > 0.0 ? 1.0 / d : ct.lambda_cap; };

  const int root = 2 * n - 2;
  ct.nodes.push_back({-1, 0.0, n, {}, 0.0});

  std::vector<int> fallout;
  std::vector<std::pair<int, int>> stack = {{root, 0}};  // dendrogram node, condensed id
  while (!stack.empty()) {
    auto [node, cid] = stack.back();
    stack.pop_back();
    while (true) {
      const std::size_t m = static_cast<std::size_t>(node - n);
      const int l = dg.left[m];
      const int r = dg.right[m];
      const double lambda = lam(dg.weight[m]);
      const int sl = dg.node_size(l);
      const int sr = dg.node_size(r);
      const bool big_l = sl >= mcs;
      const bool big_r = sr >= mcs;
      if (big_l && big_r) {
        for (int child : {l, r}) {
          const int child_id = static_cast<int>(ct.nodes.size());
          ct.nodes.push_back({cid, lambda, dg.node_size(child), {}, 0.0});
          ct.nodes[static_cast<std::size_t>(cid)].children.push_back(child_id);
          stack.emplace_back(child, child_id);
        }
        break;
      }
      if (!big_l && !big_r) {
        fallout.clear();
        collect_points(dg, l, &fallout);
        collect_points(dg, r, &fallout);
        for (int p : fallout) {
          ct.point_cluster[static_cast<std::size_t>(p)] = cid;
          ct.point_lambda[static_cast<std::size_t>(p)] = lambda;
        }
        break;
      }
      const int small = big_l ? r : l;
      fallout.clear();
      collect_points(dg, small, &fallout);
      for (int p : fallout) {
        ct.point_cluster[static_cast<std::size_t>(p)] = cid;
        ct.point_lambda[static_cast<std::size_t>(p)] = lambda;
      }
      node = big_l ? l : r;
    }
  }

  // Stability: direct point departures plus child births, relative to the
  // cluster's own birth lambda.
  for (std::size_t p = 0; p < ct.point_cluster.size(); ++p) {
    const int cid = ct.point_cluster[p];
    ct.nodes[static_cast<std::size_t>(cid)].stability +=
        ct.point_lambda[p] - ct.nodes[static_cast<std::size_t>(cid)].birth_lambda;
  }
  for (std::size_t c = 1; c < ct.nodes.size(); ++c) {
    const auto& child = ct.nodes[c];
    ct.nodes[static_cast<std::size_t>(child.parent)].stability +=
        static_cast<double>(child.size) * (child.birth_lambda -
                                           ct.nodes[static_cast<std::size_t>(child.parent)].birth_lambda);
  }
  return ct;
}

// Excess-of-mass selection: a node is kept when its own stability is at
// least the sum over its subtree's best selection; ties keep the parent.
std::vector<bool> select_clusters(const CondensedTree& ct) {
  const std::size_t m = ct.nodes.size();
  std::vector<bool> selected(m, false);
  std::vector<double> best(m, 0.0);
  for (std::size_t i = m; i-- > 0;) {
    const auto& node = ct.nodes[i];
    if (node.children.empty()) {
      selected[i] = true;
      best[i] = node.stability;
      continue;
    }
    double child_sum = 0.0;
    for (int c : node.children) child_sum += best[static_cast<std::size_t>(c)];
    if (node.stability >= child_sum) {
      selected[i] = true;
      best[i] = node.stability;
    } else {
      best[i] = child_sum;
    }
  }
  // Keep only the highest selected node on each root path.
  std::vector<bool> shadowed(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    const int parent = ct.nodes[i].parent;
    if (parent >= 0) {
      const std::size_t up = static_cast<std::size_t>(parent);
      shadowed[i] = shadowed[up] || selected[up];
    }
    if (shadowed[i]) selected[i] = false;
  }
  return selected;
}

}  // namespace

ClusterResult hdbscan(const FeatureMatrix& points, int min_cluster_size,
                      ClusterDiagnostics* diagnostics) {
  const Eigen::Index n = points.size();
  if (n == 0) throw std::invalid_argument("hdbscan: empty feature matrix");
  if (min_cluster_size < 2) throw std::invalid_argument("hdbscan: min_cluster_size must be >= 2");
  if (!points.rows.allFinite()) throw std::invalid_argument("hdbscan: non-finite feature values");
  if (!points.source_ids.empty() && points.source_ids.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("hdbscan: source_ids size mismatch");
  }

  ClusterResult result;
  result.labels.assign(static_cast<std::size_t>(n), -1);
  result.membership.assign(static_cast<std::size_t>(n), 0.0);
  if (n < min_cluster_size) {
    log::warn("cluster", "only ", n, " points for min_cluster_size ", min_cluster_size,
              "; labeling all as noise");
    if (diagnostics) *diagnostics = {};
    return result;
  }

  const std::vector<double> dist = pairwise_distances(points.rows);
  const std::vector<double> core = core_distances(dist, n, min_cluster_size);
  const std::vector<MstEdge> mst = mutual_reachability_mst(dist, core, n);
  const Dendrogram dg = single_linkage(mst, static_cast<int>(n));
  const CondensedTree ct = condense(dg, min_cluster_size);
  const std::vector<bool> selected = select_clusters(ct);

  // Map each point up to the unique selected node on its path, if any.
  std::vector<int> owner(ct.nodes.size(), -1);
  for (std::size_t c = 0; c < ct.nodes.size(); ++c) {
    if (selected[c]) {
      owner[c] = static_cast<int>(c);
    } else if (ct.nodes[c].parent >= 0) {
      owner[c] = owner[static_cast<std::size_t>(ct.nodes[c].parent)];
    }
  }

  std::vector<int> class_of_node(ct.nodes.size(), -1);
  std::vector<double> lambda_max(ct.nodes.size(), 0.0);
  std::vector<int> assigned(static_cast<std::size_t>(n), -1);
  int next_class = 0;
  for (Eigen::Index p = 0; p < n; ++p) {
    const int cid = ct.point_cluster[static_cast<std::size_t>(p)];
    const int own = owner[static_cast<std::size_t>(cid)];
    if (own < 0) continue;
    if (class_of_node[static_cast<std::size_t>(own)] < 0) {
      class_of_node[static_cast<std::size_t>(own)] = next_class++;
    }
    assigned[static_cast<std::size_t>(p)] = own;
    lambda_max[static_cast<std::size_t>(own)] =
        std::max(lambda_max[static_cast<std::size_t>(own)],
                 ct.point_lambda[static_cast<std::size_t>(p)]);
  }
  for (Eigen::Index p = 0; p < n; ++p) {
    const int own = assigned[static_cast<std::size_t>(p)];
    if (own < 0) continue;
    result.labels[static_cast<std::size_t>(p)] = class_of_node[static_cast<std::size_t>(own)];
    const double lmax = lambda_max[static_cast<std::size_t>(own)];
    result.membership[static_cast<std::size_t>(p)] =
        lmax > 0.0 ? ct.point_lambda[static_cast<std::size_t>(p)] / lmax : 1.0;
  }
  result.num_classes = next_class;

  if (diagnostics) {
    diagnostics->nodes.clear();
    diagnostics->nodes.reserve(ct.nodes.size());
    for (std::size_t c = 0; c < ct.nodes.size(); ++c) {
      ClusterDiagnostics::Node node;
      node.id = static_cast<int>(c);
      node.parent = ct.nodes[c].parent;
      node.birth_lambda = ct.nodes[c].birth_lambda;
      node.size = ct.nodes[c].size;
      node.stability = ct.nodes[c].stability;
      node.selected = selected[c];
      node.final_class = class_of_node[c];
      diagnostics->nodes.push_back(node);
    }
    diagnostics->duplicate_lambda_cap = ct.lambda_cap;
  }
  return result;
}

std::vector<std::size_t> class_members(const ClusterResult& result, int j) {
  if (j < 0 || j >= result.num_classes) {
    throw std::invalid_argument("class_members: class index out of range");
  }
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < result.labels.size(); ++i) {
    if (result.labels[i] == j) members.push_back(i);
  }
  return members;
}

}  // namespace dss
