#pragma once

#include <cstdint>

#include "hyphc/dasgupta.hpp"
#include "hyphc/tree.hpp"

// Discrete comparison algorithms: agglomerative linkage driven directly by
// similarities, and top-down bisecting k-means via local search.

namespace hyphc {

enum class LinkageMethod { single, average, complete, ward };

// n-1 greedy merges. single/average/complete merge the pair of clusters with
// the largest max/mean/min inter-cluster similarity. ward converts
// similarities to distances d = max(0, 2 - w) (for the cosine affinity
// w = 1 + cos this is exactly 1 - cos) and applies the Lance-Williams ward
// update, merging the smallest variance increase. Ties break toward the
// smallest (node id, node id) pair.
Dendrogram linkage(const SimilarityMatrix& w, LinkageMethod method);

// Top-down recursion; every cluster is bisected by local search over
// single-point moves on the size-normalized within-cluster similarity
// (the similarity form of the 2-means objective), best of `restarts`
// random balanced initializations. Deterministic given the seed.
Dendrogram bisecting_kmeans(const SimilarityMatrix& w, std::uint64_t seed, int restarts = 5);

}  // namespace hyphc
