#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "hyphc/loss.hpp"

// Riemannian Adam on Poincare-disk leaf embeddings with the common-norm
// normalization. The step is Adam on metric-rescaled gradients followed by a
// retraction (Euclidean step, projection into the disk, renormalization to
// the shared scale). The shared scale is trained through an unconstrained
// parameter mapped smoothly onto (kScaleMin, 1 - kBoundaryEps).

namespace hyphc {

inline constexpr double kScaleMin = 0.1;

struct AdamParams {
  double lr = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct OptimizerState {
  long step = 0;
  Coords m;  // first moments, one row per leaf
  Coords v;  // second moments
  double scale_m = 0.0;
  double scale_v = 0.0;
  double scale_raw = 0.0;  // unconstrained scale parameter
  AdamParams params;
};

// Inverse conformal factor of the Poincare metric at x: ((1-|x|^2)^2 / 4).
double riemannian_factor(const Eigen::Vector2d& x);

// Metric-rescaled gradient ((1-|x|^2)^2/4) * euclidean_grad.
Eigen::Vector2d riemannian_grad(const Eigen::Vector2d& x, const Eigen::Vector2d& euclidean_grad);

// scale as a smooth function of the unconstrained parameter, and its inverse.
double scale_from_raw(double raw);
double raw_from_scale(double scale);

OptimizerState make_optimizer(const Embedding& z, const AdamParams& params);

// One optimizer step from the Euclidean loss gradient (d loss / d coords).
// Also advances the shared scale via the chain rule through the common-norm
// rescaling. Returns false (and leaves everything untouched) if the gradient
// contains non-finite entries.
bool adam_step(OptimizerState& state, Embedding& z, const Coords& grad);

// Rescales every row to Euclidean norm z.scale, preserving angles. Zero-norm
// rows are re-initialized at a deterministic pseudo-random angle; the return
// value counts such rows.
int rescale_to_common_norm(Embedding& z);

// n points at uniform random angles, all at norm init_scale.
Embedding init_embedding(int n, std::uint64_t seed, double init_scale);

}  // namespace hyphc
