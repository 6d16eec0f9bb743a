#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hyphc/dasgupta.hpp"
#include "hyphc/tree.hpp"
#include "oracles.hpp"

using namespace hyphc;

namespace {

// ((0,1),2)
Dendrogram cherry3() { return Dendrogram::from_merges(3, {{0, 1}, {3, 2}}); }

// ((0,1),(2,3))
Dendrogram balanced4() { return Dendrogram::from_merges(4, {{0, 1}, {2, 3}, {4, 5}}); }

// (((0,1),2),3)
Dendrogram caterpillar4() { return Dendrogram::from_merges(4, {{0, 1}, {4, 2}, {5, 3}}); }

SimilarityMatrix unit_similarity(int n) {
  SimilarityMatrix w = SimilarityMatrix::Ones(n, n);
  w.diagonal().setZero();
  return w;
}

}  // namespace

TEST_CASE("lca on the 3-leaf tree") {
  const Dendrogram t = cherry3();
  CHECK(t.lca(0, 1) == 3);
  CHECK(t.lca(0, 2) == t.root());
  CHECK(t.lca(1, 2) == t.root());
  CHECK(t.lca(1, 0) == t.lca(0, 1));
  CHECK_THROWS_AS(t.lca(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(t.lca(0, 5), std::out_of_range);
}

TEST_CASE("lca subtree always holds at least two leaves") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Dendrogram t = testing::random_tree(10, rng);
    const auto counts = t.subtree_leaf_counts();
    for (int i = 0; i < 10; ++i)
      for (int j = i + 1; j < 10; ++j) CHECK(counts[t.lca(i, j)] >= 2);
  }
}

TEST_CASE("subtree leaf counts") {
  const auto c3 = cherry3().subtree_leaf_counts();
  CHECK(c3 == std::vector<int>{1, 1, 1, 2, 3});
  const auto c4 = balanced4().subtree_leaf_counts();
  CHECK(c4[4] == 2);
  CHECK(c4[5] == 2);
  CHECK(c4[6] == 4);

  // Cross-check against direct leaf enumeration on random trees.
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const Dendrogram t = testing::random_tree(12, rng);
    const auto counts = t.subtree_leaf_counts();
    for (int v = 0; v < t.n_nodes(); ++v)
      CHECK(counts[v] == static_cast<int>(t.leaves_below(v).size()));
  }
}

TEST_CASE("dasgupta cost on small instances") {
  SimilarityMatrix w(3, 3);
  w << 0, 0.7, 0.2, 0.7, 0, 0.4, 0.2, 0.4, 0;
  // ((0,1),2): 2*w01 + 3*w02 + 3*w12
  CHECK(dasgupta_cost(cherry3(), w) == doctest::Approx(2 * 0.7 + 3 * 0.2 + 3 * 0.4));
  CHECK(dasgupta_cost_triplet(cherry3(), w) == doctest::Approx(2 * 0.7 + 3 * 0.2 + 3 * 0.4));

  CHECK_THROWS_AS(dasgupta_cost(balanced4(), w), std::invalid_argument);
}

TEST_CASE("unit-weight cliques cost (n^3 - n) / 3 on every tree") {
  for (int n = 3; n <= 6; ++n) {
    const SimilarityMatrix w = unit_similarity(n);
    const double expected = (std::pow(n, 3) - n) / 3.0;
    int trees = 0;
    testing::for_each_tree(n, [&](const Dendrogram& t) {
      ++trees;
      CHECK(dasgupta_cost(t, w) == doctest::Approx(expected));
    });
    int dfact = 1;
    for (int k = 2 * n - 3; k > 1; k -= 2) dfact *= k;
    CHECK(trees == dfact);
  }
  CHECK(dasgupta_cost_triplet(balanced4(), unit_similarity(4)) == doctest::Approx(20.0));
}

TEST_CASE("triplet form equals the direct form") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + rng.uniform_int(10);
    const Dendrogram t = testing::random_tree(n, rng);
    const SimilarityMatrix w = testing::random_similarity(n, rng);
    const double direct = dasgupta_cost(t, w);
    const double triplet = dasgupta_cost_triplet(t, w);
    CHECK(triplet == doctest::Approx(direct).epsilon(1e-9));
  }
}

TEST_CASE("cost bounds") {
  const auto unit = cost_bounds(unit_similarity(4));
  CHECK(unit.lower == doctest::Approx(20.0));
  CHECK(unit.upper == doctest::Approx(20.0));

  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + rng.uniform_int(8);
    const SimilarityMatrix w = testing::random_similarity(n, rng);
    const auto b = cost_bounds(w);
    const Dendrogram t = testing::random_tree(n, rng);
    const double c = dasgupta_cost(t, w);
    CHECK(b.lower <= c + 1e-9);
    CHECK(c <= b.upper + 1e-9);
  }
}

TEST_CASE("bounds sandwich the exhaustive optimum") {
  Rng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 5 + trial % 2;
    const SimilarityMatrix w = testing::random_similarity(n, rng);
    const auto b = cost_bounds(w);
    double best = std::numeric_limits<double>::infinity();
    double worst = -best;
    testing::for_each_tree(n, [&](const Dendrogram& t) {
      const double c = dasgupta_cost(t, w);
      best = std::min(best, c);
      worst = std::max(worst, c);
    });
    CHECK(b.lower <= best + 1e-9);
    CHECK(worst <= b.upper + 1e-9);
  }
}

TEST_CASE("sampled bounds approach exact bounds") {
  Rng rng(19);
  const SimilarityMatrix w = testing::random_similarity(12, rng);
  const auto exact = cost_bounds(w);
  const auto sampled = cost_bounds_sampled(w, 200000, 1);
  CHECK(sampled.lower == doctest::Approx(exact.lower).epsilon(0.02));
  CHECK(sampled.upper == doctest::Approx(exact.upper).epsilon(0.02));
  // Deterministic given the seed.
  const auto again = cost_bounds_sampled(w, 1000, 42);
  const auto again2 = cost_bounds_sampled(w, 1000, 42);
  CHECK(again.lower == again2.lower);
  CHECK(again.upper == again2.upper);
}

TEST_CASE("cost invariances") {
  Rng rng(23);
  const int n = 9;
  const Dendrogram t = testing::random_tree(n, rng);
  const SimilarityMatrix w = testing::random_similarity(n, rng);

  // Scaling the similarities scales costs and bounds.
  const double c = 3.7;
  CHECK(dasgupta_cost(t, SimilarityMatrix(c * w)) ==
        doctest::Approx(c * dasgupta_cost(t, w)).epsilon(1e-12));
  const auto b = cost_bounds(w);
  const auto bc = cost_bounds(SimilarityMatrix(c * w));
  CHECK(bc.lower == doctest::Approx(c * b.lower).epsilon(1e-12));
  CHECK(bc.upper == doctest::Approx(c * b.upper).epsilon(1e-12));

  // Relabeling leaves together with permuting w leaves the cost unchanged.
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(i + 1)]);
  SimilarityMatrix wp(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) wp(perm[i], perm[j]) = w(i, j);
  MergeList merges;
  for (const auto& [a, b2] : t.to_merges())
    merges.emplace_back(a < n ? perm[a] : a, b2 < n ? perm[b2] : b2);
  const Dendrogram tp = Dendrogram::from_merges(n, merges);
  CHECK(dasgupta_cost(tp, wp) == doctest::Approx(dasgupta_cost(t, w)).epsilon(1e-12));
}

TEST_CASE("dendrogram purity") {
  CHECK(dendrogram_purity(balanced4(), {0, 0, 0, 0}) == doctest::Approx(1.0));
  CHECK(dendrogram_purity(balanced4(), {0, 0, 1, 1}) == doctest::Approx(1.0));
  // (((a,b),c),d) with a,b = A and c,d = B: pair (a,b) pure, pair (c,d) at the
  // root with purity 1/2.
  CHECK(dendrogram_purity(caterpillar4(), {0, 0, 1, 1}) == doctest::Approx(0.75));
  CHECK_THROWS_AS(dendrogram_purity(balanced4(), {0, 1, 2, 3}), std::invalid_argument);
}

TEST_CASE("newick output") {
  CHECK(to_newick(cherry3()) == "((0,1),2);");
  CHECK(to_newick(cherry3(), {"1", "2", "3"}) == "((1,2),3);");
  CHECK(to_newick(balanced4()) == "((0,1),(2,3));");
  CHECK_THROWS_AS(to_newick(cherry3(), {"a"}), std::invalid_argument);
}

TEST_CASE("newick round trip") {
  Rng rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + rng.uniform_int(14);
    const Dendrogram t = testing::random_tree(n, rng);
    const Dendrogram back = from_newick(to_newick(t));
    CHECK(isomorphic(t, back));
  }
  CHECK_THROWS_AS(from_newick("((0,1),2)"), std::invalid_argument);   // missing ';'
  CHECK_THROWS_AS(from_newick("((0,1),5);"), std::invalid_argument);  // bad leaf ids
}

TEST_CASE("merge list validation") {
  CHECK_THROWS_AS(Dendrogram::from_merges(3, {{0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(Dendrogram::from_merges(3, {{0, 0}, {3, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(Dendrogram::from_merges(3, {{0, 4}, {3, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(Dendrogram::from_merges(3, {{0, 1}, {0, 2}}), std::invalid_argument);

  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Dendrogram t = testing::random_tree(8, rng);
    CHECK(isomorphic(Dendrogram::from_merges(8, t.to_merges()), t));
  }
}

TEST_CASE("isomorphism ignores child order") {
  const Dendrogram t = caterpillar4();
  MergeList mirrored;
  for (const auto& [a, b] : t.to_merges()) mirrored.emplace_back(b, a);
  CHECK(isomorphic(t, Dendrogram::from_merges(4, mirrored)));
  CHECK(!isomorphic(caterpillar4(), balanced4()));
  // Same shape, different leaf labels.
  CHECK(!isomorphic(Dendrogram::from_merges(4, {{0, 2}, {4, 1}, {5, 3}}), caterpillar4()));
}
