#include "hyphc/optim.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hyphc/geometry.hpp"
#include "hyphc/rng.hpp"

namespace hyphc {

namespace {

constexpr double kScaleMax = 1.0 - kBoundaryEps;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

double riemannian_factor(const Eigen::Vector2d& x) {
  const double sq = x.squaredNorm();
  if (!(sq < 1.0)) throw std::domain_error("point outside the open unit disk");
  const double c = 1.0 - sq;
  return c * c / 4.0;
}

Eigen::Vector2d riemannian_grad(const Eigen::Vector2d& x, const Eigen::Vector2d& euclidean_grad) {
  return riemannian_factor(x) * euclidean_grad;
}

double scale_from_raw(double raw) { return kScaleMin + (kScaleMax - kScaleMin) * sigmoid(raw); }

double raw_from_scale(double scale) {
  const double t = (scale - kScaleMin) / (kScaleMax - kScaleMin);
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("scale outside (kScaleMin, 1 - kBoundaryEps)");
  return std::log(t / (1.0 - t));
}

OptimizerState make_optimizer(const Embedding& z, const AdamParams& params) {
  OptimizerState state;
  state.m = Coords::Zero(z.n(), 2);
  state.v = Coords::Zero(z.n(), 2);
  state.scale_raw = raw_from_scale(z.scale);
  state.params = params;
  return state;
}

int rescale_to_common_norm(Embedding& z) {
  int reinitialized = 0;
  for (int i = 0; i < z.n(); ++i) {
    const double norm = z.coords.row(i).norm();
    if (norm < kNormEps) {
      const double angle =
          static_cast<double>(splitmix64(static_cast<std::uint64_t>(i) * 0x9e3779b9ULL + 1) >> 11) *
          0x1.0p-53 * 2.0 * std::numbers::pi;
      z.coords.row(i) << std::cos(angle), std::sin(angle);
      ++reinitialized;
    } else {
      z.coords.row(i) /= norm;
    }
  }
  z.coords *= z.scale;
  return reinitialized;
}

bool adam_step(OptimizerState& state, Embedding& z, const Coords& grad) {
  if (grad.rows() != z.coords.rows()) throw std::invalid_argument("gradient shape mismatch");
  if (!grad.allFinite()) return false;

  const AdamParams& p = state.params;
  state.step += 1;
  const double bc1 = 1.0 - std::pow(p.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(p.beta2, static_cast<double>(state.step));

  // Chain rule through z_i = scale * unit(coords_i): the scale sees the
  // radial component of every row gradient.
  double scale_grad = 0.0;
  for (int i = 0; i < z.n(); ++i) {
    const double norm = z.coords.row(i).norm();
    if (norm > kNormEps) scale_grad += grad.row(i).dot(z.coords.row(i)) / norm;
  }
  const double s = sigmoid(state.scale_raw);
  const double raw_grad = scale_grad * (kScaleMax - kScaleMin) * s * (1.0 - s);

  for (int i = 0; i < z.n(); ++i) {
    const Eigen::Vector2d rg = riemannian_grad(z.point(i), grad.row(i).transpose());
    state.m.row(i) = p.beta1 * state.m.row(i) + (1.0 - p.beta1) * rg.transpose();
    state.v.row(i) =
        p.beta2 * state.v.row(i) + (1.0 - p.beta2) * rg.array().square().matrix().transpose();
    const Eigen::Vector2d m_hat = state.m.row(i).transpose() / bc1;
    const Eigen::Vector2d v_hat = state.v.row(i).transpose() / bc2;
    const Eigen::Vector2d step =
        (m_hat.array() / (v_hat.array().sqrt() + p.eps)).matrix();
    const Eigen::Vector2d updated = z.point(i) - p.lr * step;
    z.coords.row(i) = project_to_disk(updated).transpose();
  }

  state.scale_m = p.beta1 * state.scale_m + (1.0 - p.beta1) * raw_grad;
  state.scale_v = p.beta2 * state.scale_v + (1.0 - p.beta2) * raw_grad * raw_grad;
  const double sm_hat = state.scale_m / bc1;
  const double sv_hat = state.scale_v / bc2;
  state.scale_raw -= p.lr * sm_hat / (std::sqrt(sv_hat) + p.eps);
  z.scale = scale_from_raw(state.scale_raw);

  rescale_to_common_norm(z);
  return true;
}

Embedding init_embedding(int n, std::uint64_t seed, double init_scale) {
  if (n < 1) throw std::invalid_argument("embedding needs at least one point");
  if (!(init_scale > 0.0 && init_scale < 1.0 - kBoundaryEps))
    throw std::invalid_argument("init_scale outside (0, 1 - kBoundaryEps)");
  Rng rng(seed);
  Embedding z;
  z.coords.resize(n, 2);
  z.scale = init_scale;
  for (int i = 0; i < n; ++i) {
    const double angle = rng.uniform01() * 2.0 * std::numbers::pi;
    z.coords.row(i) << init_scale * std::cos(angle), init_scale * std::sin(angle);
  }
  return z;
}

}  // namespace hyphc
