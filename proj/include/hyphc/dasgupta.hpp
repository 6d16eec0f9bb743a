#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "hyphc/tree.hpp"

// Discrete Dasgupta cost in both the subtree-size and the triplet form,
// instance-level cost bounds, and dendrogram purity. All sums run over
// unordered pairs i<j and unordered triplets i<j<k.

namespace hyphc {

// Symmetric pairwise similarities; the diagonal is ignored by every cost.
using SimilarityMatrix = Eigen::MatrixXd;

// sum_{i<j} w_ij * |leaves(T[i v j])|
double dasgupta_cost(const Dendrogram& t, const SimilarityMatrix& w);

// Triplet form: sum_{i<j<k} [w_ij + w_ik + w_jk - w_ijk(T)] + 2 sum_{i<j} w_ij,
// where w_ijk is the similarity of the pair with the deepest LCA. Identical to
// dasgupta_cost on every binary tree.
double dasgupta_cost_triplet(const Dendrogram& t, const SimilarityMatrix& w);

struct CostBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// LB/UB = sum_{i<j<k} min/max(w_ij+w_ik, w_ij+w_jk, w_ik+w_jk) + 2 sum_{i<j} w_ij.
CostBounds cost_bounds(const SimilarityMatrix& w);

// Monte-Carlo estimate: `count` uniform triplets, scaled by C(n,3).
CostBounds cost_bounds_sampled(const SimilarityMatrix& w, std::int64_t count, std::uint64_t seed);

// Average over same-class leaf pairs of the class fraction below their LCA.
// Throws if no two leaves share a class.
double dendrogram_purity(const Dendrogram& t, const std::vector<int>& labels);

}  // namespace hyphc
