#include "hyphc/dasgupta.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "hyphc/rng.hpp"

namespace hyphc {

namespace {

void check_sizes(const Dendrogram& t, const SimilarityMatrix& w) {
  if (w.rows() != w.cols()) throw std::invalid_argument("similarity matrix must be square");
  if (w.rows() != t.n_leaves())
    throw std::invalid_argument("similarity matrix size does not match leaf count");
}

double pair_sum(const SimilarityMatrix& w) {
  const int n = static_cast<int>(w.rows());
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) s += w(i, j);
  return s;
}

}  // namespace

double dasgupta_cost(const Dendrogram& t, const SimilarityMatrix& w) {
  check_sizes(t, w);
  const int n = t.n_leaves();
  const std::vector<int> counts = t.subtree_leaf_counts();

  // For every active root keep the leaf list and the column-sum vector
  // S_v[j] = sum_{x in leaves(v)} w(x, j); the cross-pair similarity of a
  // merge is then a single pass over the smaller side's leaves.
  std::vector<std::vector<int>> members(t.n_nodes());
  std::vector<Eigen::VectorXd> colsum(t.n_nodes());
  for (int i = 0; i < n; ++i) {
    members[i] = {i};
    colsum[i] = w.row(i);
  }

  double cost = 0.0;
  for (int v = n; v < t.n_nodes(); ++v) {
    int a = t.left(v);
    int b = t.right(v);
    if (members[a].size() < members[b].size()) std::swap(a, b);
    double cross = 0.0;
    for (const int y : members[b]) cross += colsum[a][y];
    cost += static_cast<double>(counts[v]) * cross;

    colsum[v] = std::move(colsum[a]);
    colsum[v] += colsum[b];
    colsum[a].resize(0);
    colsum[b].resize(0);
    members[v] = std::move(members[a]);
    members[v].insert(members[v].end(), members[b].begin(), members[b].end());
    members[b].clear();
  }
  return cost;
}

double dasgupta_cost_triplet(const Dendrogram& t, const SimilarityMatrix& w) {
  check_sizes(t, w);
  const int n = t.n_leaves();

  Eigen::MatrixXi lca_depth(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) lca_depth(i, j) = t.depth(t.lca(i, j));

  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const int dij = lca_depth(i, j);
        const int dik = lca_depth(i, k);
        const int djk = lca_depth(j, k);
        double deepest;
        if (dij > dik && dij > djk)
          deepest = w(i, j);
        else if (dik > djk)
          deepest = w(i, k);
        else
          deepest = w(j, k);
        sum += w(i, j) + w(i, k) + w(j, k) - deepest;
      }
    }
  }
  return sum + 2.0 * pair_sum(w);
}

CostBounds cost_bounds(const SimilarityMatrix& w) {
  const int n = static_cast<int>(w.rows());
  if (n < 3) throw std::invalid_argument("cost bounds need at least 3 points");
  CostBounds out;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double wij = w(i, j);
      for (int k = j + 1; k < n; ++k) {
        const double a = wij + w(i, k);
        const double b = wij + w(j, k);
        const double c = w(i, k) + w(j, k);
        out.lower += std::min({a, b, c});
        out.upper += std::max({a, b, c});
      }
    }
  }
  const double pairs = 2.0 * pair_sum(w);
  out.lower += pairs;
  out.upper += pairs;
  return out;
}

CostBounds cost_bounds_sampled(const SimilarityMatrix& w, std::int64_t count, std::uint64_t seed) {
  const int n = static_cast<int>(w.rows());
  if (n < 3) throw std::invalid_argument("cost bounds need at least 3 points");
  if (count < 1) throw std::invalid_argument("sample count must be positive");
  Rng rng(seed);
  double lo_sum = 0.0;
  double hi_sum = 0.0;
  for (std::int64_t s = 0; s < count; ++s) {
    int i = rng.uniform_int(n);
    int j = rng.uniform_int(n);
    while (j == i) j = rng.uniform_int(n);
    int k = rng.uniform_int(n);
    while (k == i || k == j) k = rng.uniform_int(n);
    const double a = w(i, j) + w(i, k);
    const double b = w(i, j) + w(j, k);
    const double c = w(i, k) + w(j, k);
    lo_sum += std::min({a, b, c});
    hi_sum += std::max({a, b, c});
  }
  const double total_triplets =
      static_cast<double>(n) * (n - 1) * (n - 2) / 6.0;
  const double pairs = 2.0 * pair_sum(w);
  CostBounds out;
  out.lower = lo_sum / static_cast<double>(count) * total_triplets + pairs;
  out.upper = hi_sum / static_cast<double>(count) * total_triplets + pairs;
  return out;
}

double dendrogram_purity(const Dendrogram& t, const std::vector<int>& labels) {
  const int n = t.n_leaves();
  if (static_cast<int>(labels.size()) != n)
    throw std::invalid_argument("label count does not match leaf count");

  std::unordered_map<int, int> remap;
  for (const int l : labels)
    if (!remap.count(l)) remap.emplace(l, static_cast<int>(remap.size()));
  const int n_classes = static_cast<int>(remap.size());

  const std::vector<int> sizes = t.subtree_leaf_counts();
  std::vector<std::vector<long>> class_counts(t.n_nodes());
  for (int i = 0; i < n; ++i) {
    class_counts[i].assign(n_classes, 0);
    class_counts[i][remap.at(labels[i])] = 1;
  }

  double numerator = 0.0;
  long pair_count = 0;
  for (int v = n; v < t.n_nodes(); ++v) {
    const auto& ca = class_counts[t.left(v)];
    const auto& cb = class_counts[t.right(v)];
    std::vector<long> merged(n_classes);
    for (int c = 0; c < n_classes; ++c) {
      merged[c] = ca[c] + cb[c];
      const long cross = ca[c] * cb[c];
      if (cross > 0) {
        numerator += static_cast<double>(cross) * static_cast<double>(merged[c]) / sizes[v];
        pair_count += cross;
      }
    }
    class_counts[v] = std::move(merged);
  }
  if (pair_count == 0) throw std::invalid_argument("no pair of leaves shares a class");
  return numerator / static_cast<double>(pair_count);
}

}  // namespace hyphc
