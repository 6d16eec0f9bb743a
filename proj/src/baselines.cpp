#include "hyphc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "hyphc/rng.hpp"

namespace hyphc {

namespace {

void check_square(const SimilarityMatrix& w) {
  if (w.rows() != w.cols() || w.rows() < 2)
    throw std::invalid_argument("similarity matrix must be square with n >= 2");
}

Dendrogram linkage_similarity(const SimilarityMatrix& w, LinkageMethod method) {
  const int n = static_cast<int>(w.rows());
  Eigen::MatrixXd s = w;
  s.diagonal().setZero();

  std::vector<int> node_id(n);      // dendrogram node of each active cluster
  std::vector<int> sizes(n, 1);
  std::vector<bool> active(n, true);
  std::iota(node_id.begin(), node_id.end(), 0);

  MergeList merges;
  merges.reserve(n - 1);
  int next_id = n;
  for (int step = 0; step < n - 1; ++step) {
    int best_a = -1, best_b = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < n; ++a) {
      if (!active[a]) continue;
      for (int b = a + 1; b < n; ++b) {
        if (!active[b]) continue;
        const double v = s(a, b);
        const bool better =
            v > best || (v == best && (best_a == -1 || std::pair(node_id[a], node_id[b]) <
                                                           std::pair(node_id[best_a], node_id[best_b])));
        if (better) {
          best = v;
          best_a = a;
          best_b = b;
        }
      }
    }

    for (int c = 0; c < n; ++c) {
      if (!active[c] || c == best_a || c == best_b) continue;
      double merged;
      switch (method) {
        case LinkageMethod::single:
          merged = std::max(s(best_a, c), s(best_b, c));
          break;
        case LinkageMethod::complete:
          merged = std::min(s(best_a, c), s(best_b, c));
          break;
        default:  // average
          merged = (sizes[best_a] * s(best_a, c) + sizes[best_b] * s(best_b, c)) /
                   static_cast<double>(sizes[best_a] + sizes[best_b]);
          break;
      }
      s(best_a, c) = s(c, best_a) = merged;
    }

    merges.emplace_back(node_id[best_a], node_id[best_b]);
    node_id[best_a] = next_id++;
    sizes[best_a] += sizes[best_b];
    active[best_b] = false;
  }
  return Dendrogram::from_merges(n, merges);
}

Dendrogram linkage_ward(const SimilarityMatrix& w) {
  const int n = static_cast<int>(w.rows());
  Eigen::MatrixXd d2(n, n);  // squared distances
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d = std::max(0.0, 2.0 - w(i, j));
      d2(i, j) = d * d;
    }
    d2(i, i) = 0.0;
  }

  std::vector<int> node_id(n);
  std::vector<double> sizes(n, 1.0);
  std::vector<bool> active(n, true);
  std::iota(node_id.begin(), node_id.end(), 0);

  MergeList merges;
  merges.reserve(n - 1);
  int next_id = n;
  for (int step = 0; step < n - 1; ++step) {
    int best_a = -1, best_b = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a < n; ++a) {
      if (!active[a]) continue;
      for (int b = a + 1; b < n; ++b) {
        if (!active[b]) continue;
        const double v = d2(a, b);
        const bool better =
            v < best || (v == best && (best_a == -1 || std::pair(node_id[a], node_id[b]) <
                                                           std::pair(node_id[best_a], node_id[best_b])));
        if (better) {
          best = v;
          best_a = a;
          best_b = b;
        }
      }
    }

    const double na = sizes[best_a];
    const double nb = sizes[best_b];
    for (int c = 0; c < n; ++c) {
      if (!active[c] || c == best_a || c == best_b) continue;
      const double nc = sizes[c];
      const double merged = ((na + nc) * d2(best_a, c) + (nb + nc) * d2(best_b, c) -
                             nc * d2(best_a, best_b)) /
                            (na + nb + nc);
      d2(best_a, c) = d2(c, best_a) = merged;
    }

    merges.emplace_back(node_id[best_a], node_id[best_b]);
    node_id[best_a] = next_id++;
    sizes[best_a] += nb;
    active[best_b] = false;
  }
  return Dendrogram::from_merges(n, merges);
}

// Local search bisection on the size-normalized within-cluster similarity.
// side[x] marks membership of the first part. Sweeps points in index order,
// committing any single-point move that improves the objective, until a
// sweep makes no change.
std::pair<std::vector<int>, std::vector<int>> bisect(const std::vector<int>& idx,
                                                     const SimilarityMatrix& w, Rng& rng,
                                                     int restarts) {
  const int m = static_cast<int>(idx.size());
  std::vector<char> best_side;
  double best_obj = -std::numeric_limits<double>::infinity();

  for (int r = 0; r < restarts; ++r) {
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    for (int t = m - 1; t > 0; --t)
      std::swap(perm[t], perm[rng.uniform_int(t + 1)]);

    std::vector<char> side(m, 0);
    for (int t = 0; t < m / 2; ++t) side[perm[t]] = 1;

    // sa/sb: similarity of each point to the current parts.
    std::vector<double> sa(m, 0.0), sb(m, 0.0);
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y) {
        if (x == y) continue;
        (side[y] ? sa : sb)[x] += w(idx[x], idx[y]);
      }
    double within_a = 0.0, within_b = 0.0;
    int na = 0, nb = 0;
    for (int x = 0; x < m; ++x) {
      if (side[x]) {
        within_a += sa[x];
        ++na;
      } else {
        within_b += sb[x];
        ++nb;
      }
    }

    auto objective = [](double wa, int ca, double wb, int cb) {
      return wa / ca + wb / cb;
    };
    bool changed = true;
    while (changed) {
      changed = false;
      for (int x = 0; x < m; ++x) {
        const bool in_a = side[x];
        if ((in_a && na == 1) || (!in_a && nb == 1)) continue;
        const double cur = objective(within_a, na, within_b, nb);
        double wa = within_a, wb = within_b;
        int ca = na, cb = nb;
        if (in_a) {
          wa -= 2.0 * sa[x];
          wb += 2.0 * sb[x];
          --ca;
          ++cb;
        } else {
          wb -= 2.0 * sb[x];
          wa += 2.0 * sa[x];
          --cb;
          ++ca;
        }
        if (objective(wa, ca, wb, cb) > cur + 1e-12 * std::max(1.0, std::abs(cur))) {
          within_a = wa;
          within_b = wb;
          na = ca;
          nb = cb;
          side[x] = !side[x];
          const double sign = side[x] ? 1.0 : -1.0;
          for (int y = 0; y < m; ++y) {
            if (y == x) continue;
            const double v = w(idx[x], idx[y]);
            sa[y] += sign * v;
            sb[y] -= sign * v;
          }
          changed = true;
        }
      }
    }

    const double obj = objective(within_a, na, within_b, nb);
    if (obj > best_obj) {
      best_obj = obj;
      best_side = side;
    }
  }

  std::vector<int> part_a, part_b;
  for (int x = 0; x < m; ++x) (best_side[x] ? part_a : part_b).push_back(idx[x]);
  return {part_a, part_b};
}

}  // namespace

Dendrogram linkage(const SimilarityMatrix& w, LinkageMethod method) {
  check_square(w);
  if (method == LinkageMethod::ward) return linkage_ward(w);
  return linkage_similarity(w, method);
}

Dendrogram bisecting_kmeans(const SimilarityMatrix& w, std::uint64_t seed, int restarts) {
  check_square(w);
  if (restarts < 1) throw std::invalid_argument("restarts must be positive");
  const int n = static_cast<int>(w.rows());
  Rng rng(seed);

  MergeList merges;
  merges.reserve(n - 1);
  int next_id = n;
  auto recurse = [&](auto&& self, const std::vector<int>& idx) -> int {
    if (idx.size() == 1) return idx[0];
    if (idx.size() == 2) {
      merges.emplace_back(idx[0], idx[1]);
      return next_id++;
    }
    const auto [part_a, part_b] = bisect(idx, w, rng, restarts);
    const int left = self(self, part_a);
    const int right = self(self, part_b);
    merges.emplace_back(left, right);
    return next_id++;
  };
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  recurse(recurse, all);
  return Dendrogram::from_merges(n, merges);
}

}  // namespace hyphc
