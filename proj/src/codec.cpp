#include "hyphc/codec.hpp"

#include <cmath>
#include <numbers>

namespace hyphc {

namespace {

PointList<double> to_points(const Embedding& z) {
  PointList<double> pts(z.n());
  for (int i = 0; i < z.n(); ++i) pts[i] = {z.coords(i, 0), z.coords(i, 1)};
  return pts;
}

}  // namespace

Dendrogram exact_decode(const Embedding& z) { return exact_decode_points(to_points(z)); }

Dendrogram greedy_decode(const Embedding& z) {
  const int n = z.n();
  if (n < 2) throw std::invalid_argument("decoding needs at least 2 points");

  std::vector<double> norms(n), phi(n);
  for (int i = 0; i < n; ++i) {
    norms[i] = z.coords.row(i).norm();
    phi[i] = std::atan2(z.coords(i, 1), z.coords(i, 0));
  }
  const auto [min_it, max_it] = std::minmax_element(norms.begin(), norms.end());
  if (*max_it - *min_it > 1e-6)
    throw std::invalid_argument(
        "greedy decoding requires a normalized embedding (norm spread > 1e-6); "
        "apply rescale_to_common_norm first");

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (phi[a] != phi[b]) return phi[a] < phi[b];
    return a < b;
  });

  // Gap t separates order[t] from its circular successor. Rotating the order
  // to start just past the widest gap turns the circle into a line whose
  // largest interior gap realizes the second circular cut, so the plain
  // recursive largest-gap split handles the root case too.
  std::vector<double> gap(n);
  for (int t = 0; t + 1 < n; ++t) gap[t] = phi[order[t + 1]] - phi[order[t]];
  gap[n - 1] = phi[order[0]] + 2.0 * std::numbers::pi - phi[order[n - 1]];
  int widest = 0;
  for (int t = 1; t < n; ++t)
    if (gap[t] > gap[widest]) widest = t;

  std::vector<int> leaf_seq(n);
  std::vector<double> seq_gap(n - 1);  // gap between consecutive rotated leaves
  for (int t = 0; t < n; ++t) leaf_seq[t] = order[(widest + 1 + t) % n];
  for (int t = 0; t + 1 < n; ++t) seq_gap[t] = gap[(widest + 1 + t) % n];

  MergeList merges;
  merges.reserve(n - 1);
  int next_id = n;
  // Splits [lo, hi) at its largest interior gap; returns the subtree's root id.
  auto build = [&](auto&& self, int lo, int hi) -> int {
    if (hi - lo == 1) return leaf_seq[lo];
    int cut = lo;
    for (int t = lo + 1; t + 1 < hi; ++t)
      if (seq_gap[t] > seq_gap[cut]) cut = t;
    const int left = self(self, lo, cut + 1);
    const int right = self(self, cut + 1, hi);
    merges.emplace_back(left, right);
    return next_id++;
  };
  build(build, 0, n);
  return Dendrogram::from_merges(n, merges);
}

Embedding sarkar_embed(const Dendrogram& t, double edge_length) {
  const PointList<double> pts = sarkar_embed_points<double>(t, edge_length);
  Embedding z;
  z.coords.resize(t.n_leaves(), 2);
  double max_norm = 0.0;
  for (int i = 0; i < t.n_leaves(); ++i) {
    z.coords(i, 0) = pts[i][0];
    z.coords(i, 1) = pts[i][1];
    max_norm = std::max(max_norm, z.coords.row(i).norm());
  }
  z.scale = std::min(max_norm, 1.0 - kBoundaryEps);
  return z;
}

}  // namespace hyphc
