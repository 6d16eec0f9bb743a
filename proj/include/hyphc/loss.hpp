#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "hyphc/dasgupta.hpp"

// Continuous relaxation of the Dasgupta objective over Poincare-disk leaf
// embeddings, triplet sampling strategies, and the spread diagnostic.

namespace hyphc {

using Coords = Eigen::Matrix<double, Eigen::Dynamic, 2>;

// Leaf coordinates plus the shared target norm used by the common-norm
// normalization during training.
struct Embedding {
  Coords coords;
  double scale = 0.5;

  int n() const { return static_cast<int>(coords.rows()); }
  Eigen::Vector2d point(int i) const { return coords.row(i).transpose(); }
};

struct Triplet {
  int i, j, k;  // i < j, k distinct from both
};

using TripletBatch = std::vector<Triplet>;

inline constexpr double kDefaultTau = 0.05;
inline constexpr double kDefaultSpreadMargin = 0.1;

// Max-subtracted softmax with temperature tau > 0.
Eigen::Vector3d scaled_softmax(const Eigen::Vector3d& a, double tau);

// sum over the batch of (w_ij + w_ik + w_jk - (w_ij, w_ik, w_jk) . softmax of
// the three LCA depths / tau), plus the constant 2 sum_{i<j} w_ij when
// pair_term is set. The pair term is needed when comparing against discrete
// Dasgupta costs; it is irrelevant for optimization.
double hyphc_loss(const Embedding& z, const SimilarityMatrix& w, const TripletBatch& batch,
                  double tau, bool pair_term);

// Euclidean gradient of the batch loss (without the constant pair term) with
// respect to the coordinates. Triplets whose pair geometry is degenerate or
// clamped contribute zero.
Coords hyphc_loss_grad(const Embedding& z, const SimilarityMatrix& w, const TripletBatch& batch,
                       double tau);

// All C(n,3) triplets, ordered lexicographically.
TripletBatch sample_all_triplets(int n);

// Every unordered pair (i,j) once, with the third leaf drawn uniformly from
// the others: ~n^2/2 triplets.
TripletBatch sample_quadratic_triplets(int n, std::uint64_t seed);

// `count` triplets with the pair drawn uniformly over unordered pairs.
TripletBatch sample_fixed_count_triplets(int n, std::int64_t count, std::uint64_t seed);

// Triplets violating the spread condition: max - min of the three LCA depths
// <= margin. Empty result means the embedding is margin-spread.
TripletBatch check_spread(const Embedding& z, double margin);

}  // namespace hyphc
