#include "hyphc/loss.hpp"

#include <cmath>
#include <stdexcept>

#include "hyphc/geometry.hpp"
#include "hyphc/rng.hpp"

namespace hyphc {

namespace {

void check_batch(const Embedding& z, const SimilarityMatrix& w, const TripletBatch& batch) {
  const int n = z.n();
  if (w.rows() != n || w.cols() != n)
    throw std::invalid_argument("similarity matrix size does not match embedding");
  for (const Triplet& t : batch) {
    if (t.i < 0 || t.j >= n || t.k < 0 || t.k >= n || t.i >= t.j || t.k == t.i || t.k == t.j)
      throw std::invalid_argument("malformed triplet");
  }
}

}  // namespace

Eigen::Vector3d scaled_softmax(const Eigen::Vector3d& a, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("temperature must be positive");
  const Eigen::Vector3d shifted = (a.array() - a.maxCoeff()).matrix() / tau;
  Eigen::Vector3d e = shifted.array().exp();
  return e / e.sum();
}

double hyphc_loss(const Embedding& z, const SimilarityMatrix& w, const TripletBatch& batch,
                  double tau, bool pair_term) {
  check_batch(z, w, batch);
  double loss = 0.0;
  for (const Triplet& t : batch) {
    const Eigen::Vector2d zi = z.point(t.i);
    const Eigen::Vector2d zj = z.point(t.j);
    const Eigen::Vector2d zk = z.point(t.k);
    Eigen::Vector3d depths(lca_depth(zi, zj).depth, lca_depth(zi, zk).depth,
                           lca_depth(zj, zk).depth);
    const Eigen::Vector3d sims(w(t.i, t.j), w(t.i, t.k), w(t.j, t.k));
    const Eigen::Vector3d p = scaled_softmax(depths, tau);
    loss += sims.sum() - sims.dot(p);
  }
  if (pair_term) {
    const int n = z.n();
    double pairs = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) pairs += w(i, j);
    loss += 2.0 * pairs;
  }
  return loss;
}

Coords hyphc_loss_grad(const Embedding& z, const SimilarityMatrix& w, const TripletBatch& batch,
                       double tau) {
  check_batch(z, w, batch);
  if (!(tau > 0.0)) throw std::invalid_argument("temperature must be positive");
  Coords grad = Coords::Zero(z.n(), 2);
  for (const Triplet& t : batch) {
    const Eigen::Vector2d zi = z.point(t.i);
    const Eigen::Vector2d zj = z.point(t.j);
    const Eigen::Vector2d zk = z.point(t.k);
    const LcaGrad gij = lca_depth_with_grad(zi, zj);
    const LcaGrad gik = lca_depth_with_grad(zi, zk);
    const LcaGrad gjk = lca_depth_with_grad(zj, zk);
    if (!gij.valid || !gik.valid || !gjk.valid) continue;

    const Eigen::Vector3d depths(gij.depth, gik.depth, gjk.depth);
    const Eigen::Vector3d sims(w(t.i, t.j), w(t.i, t.k), w(t.j, t.k));
    const Eigen::Vector3d p = scaled_softmax(depths, tau);
    const double mixed = sims.dot(p);
    // d loss / d depth_m = -p_m (w_m - mixed) / tau
    const Eigen::Vector3d dd = -(p.array() * (sims.array() - mixed)).matrix() / tau;

    grad.row(t.i) += (dd[0] * gij.dx + dd[1] * gik.dx).transpose();
    grad.row(t.j) += (dd[0] * gij.dy + dd[2] * gjk.dx).transpose();
    grad.row(t.k) += (dd[1] * gik.dy + dd[2] * gjk.dy).transpose();
  }
  return grad;
}

TripletBatch sample_all_triplets(int n) {
  if (n < 3) throw std::invalid_argument("triplet sampling needs at least 3 leaves");
  TripletBatch batch;
  batch.reserve(static_cast<size_t>(n) * (n - 1) * (n - 2) / 6);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) batch.push_back({i, j, k});
  return batch;
}

TripletBatch sample_quadratic_triplets(int n, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("triplet sampling needs at least 3 leaves");
  Rng rng(seed);
  TripletBatch batch;
  batch.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      int k = rng.uniform_int(n - 2);
      if (k >= i) ++k;
      if (k >= j) ++k;
      batch.push_back({i, j, k});
    }
  }
  return batch;
}

TripletBatch sample_fixed_count_triplets(int n, std::int64_t count, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("triplet sampling needs at least 3 leaves");
  if (count < 1) throw std::invalid_argument("triplet count must be positive");
  Rng rng(seed);
  TripletBatch batch;
  batch.reserve(static_cast<size_t>(count));
  for (std::int64_t s = 0; s < count; ++s) {
    const int i = rng.uniform_int(n);
    int j = rng.uniform_int(n - 1);
    if (j >= i) ++j;
    const int lo = std::min(i, j);
    const int hi = std::max(i, j);
    int k = rng.uniform_int(n - 2);
    if (k >= lo) ++k;
    if (k >= hi) ++k;
    batch.push_back({lo, hi, k});
  }
  return batch;
}

TripletBatch check_spread(const Embedding& z, double margin) {
  const int n = z.n();
  if (n < 3) throw std::invalid_argument("spread check needs at least 3 leaves");
  Eigen::MatrixXd depth(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) depth(i, j) = lca_depth(z.point(i), z.point(j)).depth;

  TripletBatch violations;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const double a = depth(i, j);
        const double b = depth(i, k);
        const double c = depth(j, k);
        const double spread = std::max({a, b, c}) - std::min({a, b, c});
        if (spread <= margin) violations.push_back({i, j, k});
      }
    }
  }
  return violations;
}

}  // namespace hyphc
