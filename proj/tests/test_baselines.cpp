#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hyphc/baselines.hpp"
#include "hyphc/codec.hpp"
#include "oracles.hpp"

using namespace hyphc;

TEST_CASE("dominant pair merges first under every method") {
  SimilarityMatrix w(3, 3);
  w << 0, 0.9, 0.1, 0.9, 0, 0.1, 0.1, 0.1, 0;
  const Dendrogram expected = Dendrogram::from_merges(3, {{0, 1}, {3, 2}});
  for (const auto method : {LinkageMethod::single, LinkageMethod::average,
                            LinkageMethod::complete, LinkageMethod::ward}) {
    CHECK(isomorphic(linkage(w, method), expected));
  }
  CHECK(isomorphic(bisecting_kmeans(w, 0), expected));
}

TEST_CASE("single linkage equals the maximum spanning tree merge order") {
  Rng rng(89);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 5 + rng.uniform_int(16);
    const SimilarityMatrix w = testing::random_similarity(n, rng);
    const Dendrogram sl = linkage(w, LinkageMethod::single);

    // Kruskal over edges sorted by decreasing similarity.
    struct Edge {
      double w;
      int i, j;
    };
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) edges.push_back({w(i, j), i, j});
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.w > b.w; });
    std::vector<int> parent(n), root_of(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::iota(root_of.begin(), root_of.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    MergeList merges;
    int next = n;
    for (const Edge& e : edges) {
      const int a = find(e.i);
      const int b = find(e.j);
      if (a == b) continue;
      merges.emplace_back(root_of[a], root_of[b]);
      parent[a] = b;
      root_of[find(a)] = next++;
    }
    CHECK(isomorphic(sl, Dendrogram::from_merges(n, merges)));
  }
}

TEST_CASE("average linkage follows mean inter-cluster similarity") {
  // Clusters {0,1} and {2} tie on max similarity but differ on the mean:
  // average linkage must prefer the pair, single linkage is indifferent and
  // complete linkage prefers the lone point.
  SimilarityMatrix w(4, 4);
  w << 0.0, 0.8, 0.8, 0.1,
       0.8, 0.0, 0.2, 0.1,
       0.8, 0.2, 0.0, 0.1,
       0.1, 0.1, 0.1, 0.0;
  // First merge is (0,1) everywhere (0.8 ties broken toward smallest ids).
  // average: s({0,1},2) = 0.5, s({0,1},3) = 0.1 -> merge with 2 next.
  const Dendrogram al = linkage(w, LinkageMethod::average);
  CHECK(al.lca(0, 2) != al.root());
  CHECK(al.lca(0, 3) == al.root());
  // complete: s({0,1},2) = min(0.8, 0.2) = 0.2 > 0.1 -> also 2, checks update rule
  const Dendrogram cl = linkage(w, LinkageMethod::complete);
  CHECK(cl.lca(0, 2) != cl.root());
}

TEST_CASE("linkage is deterministic") {
  Rng rng(97);
  const SimilarityMatrix w = testing::random_similarity(15, rng);
  for (const auto method : {LinkageMethod::single, LinkageMethod::average,
                            LinkageMethod::complete, LinkageMethod::ward}) {
    const Dendrogram a = linkage(w, method);
    const Dendrogram b = linkage(w, method);
    CHECK(a.to_merges() == b.to_merges());
  }
}

TEST_CASE("bisecting kmeans recovers planted blocks") {
  const int n = 10;
  SimilarityMatrix w = SimilarityMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && (i < 5) == (j < 5)) w(i, j) = 1.0;

  const Dendrogram t = bisecting_kmeans(w, 3);
  auto left = t.leaves_below(t.left(t.root()));
  std::sort(left.begin(), left.end());
  const std::vector<int> lo{0, 1, 2, 3, 4}, hi{5, 6, 7, 8, 9};
  CHECK((left == lo || left == hi));
}

TEST_CASE("bisecting kmeans basics") {
  SimilarityMatrix w(2, 2);
  w << 0, 1, 1, 0;
  CHECK(bisecting_kmeans(w, 0).n_leaves() == 2);

  Rng rng(101);
  const SimilarityMatrix r = testing::random_similarity(12, rng);
  const Dendrogram a = bisecting_kmeans(r, 7);
  const Dendrogram b = bisecting_kmeans(r, 7);
  CHECK(a.to_merges() == b.to_merges());  // deterministic given the seed
  CHECK(a.subtree_leaf_counts()[a.root()] == 12);
}

TEST_CASE("zoo reproduction: linkage costs match the published table") {
  const SimilarityMatrix w = testing::zoo_affinity();
  const double al = dasgupta_cost(linkage(w, LinkageMethod::average), w);
  CHECK(std::abs(al - 2.829e5) / 2.829e5 < 0.01);
  const double sl = dasgupta_cost(linkage(w, LinkageMethod::single), w);
  CHECK(std::abs(sl - 2.897e5) / 2.897e5 < 0.01);
  const double cl = dasgupta_cost(linkage(w, LinkageMethod::complete), w);
  CHECK(std::abs(cl - 2.802e5) / 2.802e5 < 0.01);
  const double wl = dasgupta_cost(linkage(w, LinkageMethod::ward), w);
  CHECK(std::abs(wl - 2.827e5) / 2.827e5 < 0.01);
}

TEST_CASE("zoo reproduction: bisecting kmeans lands near the published cost") {
  const SimilarityMatrix w = testing::zoo_affinity();
  const double cost = dasgupta_cost(bisecting_kmeans(w, 0), w);
  CHECK(std::abs(cost - 2.861e5) / 2.861e5 < 0.03);
}
