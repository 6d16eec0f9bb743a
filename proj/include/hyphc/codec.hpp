#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyphc/geometry.hpp"
#include "hyphc/loss.hpp"
#include "hyphc/tree.hpp"

// Both directions of the tree <-> embedding correspondence: exact bottom-up
// decoding over sorted LCA depths, the greedy angular top-down decoder for
// normalized embeddings, and Sarkar's combinatorial tree embedding used as
// the encoder in round-trip checks. The decoder and encoder are templated on
// the scalar: at edge scales around 5 the construction pushes coordinates
// exponentially close to the boundary, beyond what double resolves for deep
// trees, so round-trip tests instantiate them with __float128.

namespace hyphc {

inline constexpr int kSarkarMaxLeaves = 64;

template <typename Scalar>
using PointList = std::vector<std::array<Scalar, 2>>;

namespace detail {

template <typename Scalar>
Scalar point_norm(const std::array<Scalar, 2>& p) {
  return num::sqrt(p[0] * p[0] + p[1] * p[1]);
}

template <typename Scalar>
Scalar angle_of(const std::array<Scalar, 2>& p) {
  return num::atan2(p[1], p[0]);
}

// Unsigned angle between two directions, folded into [0, pi].
template <typename Scalar>
Scalar angle_gap(Scalar phi_a, Scalar phi_b) {
  const Scalar pi = Scalar(3.14159265358979323846264338327950288L);
  Scalar d = num::abs(phi_a - phi_b);
  if (d > pi) d = Scalar(2) * pi - d;
  return d;
}

// Inversion in the circle centered at c with squared radius rho_sq.
template <typename Scalar>
std::array<Scalar, 2> invert(const std::array<Scalar, 2>& c, Scalar rho_sq,
                             const std::array<Scalar, 2>& p) {
  const Scalar dx = p[0] - c[0];
  const Scalar dy = p[1] - c[1];
  const Scalar f = rho_sq / (dx * dx + dy * dy);
  return {c[0] + f * dx, c[1] + f * dy};
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace detail

// Bottom-up decoding: sort all unordered pairs by decreasing hyperbolic LCA
// depth (ties by pair index) and merge the forests containing the endpoints.
template <typename Scalar>
Dendrogram exact_decode_points(const PointList<Scalar>& pts) {
  const int n = static_cast<int>(pts.size());
  if (n < 2) throw std::invalid_argument("decoding needs at least 2 points");

  std::vector<Scalar> radius(n), phi(n);
  for (int i = 0; i < n; ++i) {
    radius[i] = detail::point_norm(pts[i]);
    phi[i] = detail::angle_of(pts[i]);
  }

  struct PairDepth {
    Scalar depth;
    int i, j;
  };
  std::vector<PairDepth> pairs;
  pairs.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Scalar theta = detail::angle_gap(phi[i], phi[j]);
      pairs.push_back({lca_depth_polar(radius[i], radius[j], theta).depth, i, j});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const PairDepth& a, const PairDepth& b) {
    if (a.depth != b.depth) return a.depth > b.depth;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });

  detail::UnionFind uf(n);
  std::vector<int> root_of(n);
  for (int i = 0; i < n; ++i) root_of[i] = i;
  MergeList merges;
  merges.reserve(n - 1);
  int next_id = n;
  for (const PairDepth& p : pairs) {
    const int ra = uf.find(p.i);
    const int rb = uf.find(p.j);
    if (ra == rb) continue;
    merges.emplace_back(root_of[ra], root_of[rb]);
    uf.unite(ra, rb);
    root_of[uf.find(ra)] = next_id++;
    if (next_id == 2 * n - 1) break;
  }
  return Dendrogram::from_merges(n, merges);
}

// Sarkar's construction for a rooted binary tree: the root sits at the
// origin with its two subtrees in opposite directions; every other node is
// placed by reflecting its parent to the origin, spreading parent and
// children directions 2pi/3 apart, and reflecting back. Every tree edge gets
// hyperbolic length edge_length.
template <typename Scalar>
PointList<Scalar> sarkar_embed_points(const Dendrogram& t, Scalar edge_length) {
  if (t.n_leaves() > kSarkarMaxLeaves)
    throw std::invalid_argument("tree exceeds kSarkarMaxLeaves; the construction is precision-limited");
  if (!(edge_length > Scalar(0))) throw std::invalid_argument("edge length must be positive");

  const Scalar pi = Scalar(3.14159265358979323846264338327950288L);
  const Scalar r_edge = num::tanh(edge_length / Scalar(2));
  PointList<Scalar> pos(t.n_nodes());

  struct Frame {
    int node;
    int parent;
  };
  std::vector<Frame> stack;
  const int root = t.root();
  pos[root] = {Scalar(0), Scalar(0)};
  pos[t.left(root)] = {r_edge, Scalar(0)};
  pos[t.right(root)] = {-r_edge, Scalar(0)};
  stack.push_back({t.left(root), root});
  stack.push_back({t.right(root), root});

  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (t.is_leaf(f.node)) continue;

    const std::array<Scalar, 2>& pv = pos[f.node];
    const Scalar norm_sq = pv[0] * pv[0] + pv[1] * pv[1];
    if (!(norm_sq < Scalar(1)))
      throw std::domain_error(
          "sarkar embedding left the unit disk at working precision; "
          "reduce the edge scale below ~" +
          std::to_string(-std::log(std::numeric_limits<double>::epsilon()) /
                         std::max(1, t.depth(f.node))) +
          " or use a wider scalar");
    const std::array<Scalar, 2> center{pv[0] / norm_sq, pv[1] / norm_sq};
    const Scalar rho_sq = Scalar(1) / norm_sq - Scalar(1);

    const std::array<Scalar, 2> parent_img = detail::invert(center, rho_sq, pos[f.parent]);
    const Scalar phi_parent = detail::angle_of(parent_img);
    const std::array<int, 2> kids{t.left(f.node), t.right(f.node)};
    for (int c = 0; c < 2; ++c) {
      const Scalar phi = phi_parent + Scalar(2) * pi * Scalar(c + 1) / Scalar(3);
      const std::array<Scalar, 2> img{r_edge * num::cos(phi), r_edge * num::sin(phi)};
      pos[kids[c]] = detail::invert(center, rho_sq, img);
      stack.push_back({kids[c], f.node});
    }
  }

  PointList<Scalar> leaves(t.n_leaves());
  for (int i = 0; i < t.n_leaves(); ++i) leaves[i] = pos[i];
  return leaves;
}

// --- double-typed entry points over Embedding ---

Dendrogram exact_decode(const Embedding& z);

// Top-down decoder for common-norm embeddings: sort leaves by angle, treat
// the order as circular, cut at the two largest gaps for the top split and
// at the largest interior gap below. Throws if row norms differ by more than
// 1e-6 (rescale_to_common_norm first).
Dendrogram greedy_decode(const Embedding& z);

Embedding sarkar_embed(const Dendrogram& t, double edge_length);

}  // namespace hyphc
