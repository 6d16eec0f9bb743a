#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "hyphc/num.hpp"

// Poincare-disk primitives. The closed forms only depend on the two norms
// and the angle between the points, so the core is written in polar form and
// templated on the scalar type; the high-precision tree codec reuses it with
// __float128. Everything is arranged to stay accurate when points approach
// the boundary and angles shrink (tree embeddings push both exponentially):
// the recurring quantities are kept as offsets from 1, e.g.
// h = ((r^2+1)/(2r)) - 1 = (1-r)^2/(2r) and 1 - cos(theta) = 2 sin^2(theta/2),
// which avoids the cancellation the textbook expressions hit near r -> 1,
// theta -> 0.

namespace hyphc {

inline constexpr double kBoundaryEps = 1e-5;  // training keeps norms <= 1 - kBoundaryEps
inline constexpr double kNormEps = 1e-9;      // norms below this: treat as the origin

using DiskPoint = Eigen::Vector2d;

template <typename Scalar>
struct LcaResult {
  Scalar alpha{};   // angle from the first argument toward the second, in [0, theta]
  Scalar depth{};   // hyperbolic distance from the origin to the LCA point
  bool clamped = false;     // projection fell outside the geodesic segment
  bool degenerate = false;  // collinear/origin fallback was taken
};

namespace detail {

template <typename Scalar>
void require_inside_unit_disk(Scalar norm) {
  if (!(norm < Scalar(1))) throw std::domain_error("point outside the open unit disk");
}

// (r^2+1)/(2r) - 1, kept exact near the boundary.
template <typename Scalar>
Scalar half_secant_excess(Scalar r) {
  const Scalar eps = Scalar(1) - r;
  return eps * eps / (Scalar(2) * r);
}

// Shared tail of the LCA construction once t = tan(alpha) is known:
// A = (1 + hx) sqrt(1 + t^2) is the Euclidean half-secant of the geodesic
// circle; the LCA sits at norm 1/(A + sqrt(A^2-1)).
template <typename Scalar>
struct LcaCore {
  Scalar a_minus_1;
  Scalar radius;  // R = sqrt(A^2 - 1)
  Scalar depth;
};

template <typename Scalar>
LcaCore<Scalar> lca_core(Scalar hx, Scalar t) {
  LcaCore<Scalar> core;
  const Scalar t_sq = t * t;
  const Scalar root = num::sqrt(Scalar(1) + t_sq);
  core.a_minus_1 = hx + (Scalar(1) + hx) * t_sq / (Scalar(1) + root);
  core.radius = num::sqrt(core.a_minus_1 * (core.a_minus_1 + Scalar(2)));
  const Scalar denom = core.a_minus_1 + Scalar(1) + core.radius;  // A + R
  const Scalar u = Scalar(1) / denom;
  const Scalar one_minus_u = (core.a_minus_1 + core.radius) / denom;
  core.depth = num::log1p(Scalar(2) * u / one_minus_u);  // 2 atanh(u)
  return core;
}

}  // namespace detail

// d(o, x) for a point at Euclidean norm r.
template <typename Scalar>
Scalar dist_to_origin_polar(Scalar r) {
  detail::require_inside_unit_disk(r);
  return Scalar(2) * num::atanh(r);
}

// Geodesic distance between points at norms rx, ry separated by angle theta.
// cosh(d) = 1 + 2 c^2 / ((1-rx^2)(1-ry^2)) with c the Euclidean chord, folded
// into d = 2 asinh(c / sqrt((1-rx^2)(1-ry^2))) which is stable at both ends.
template <typename Scalar>
Scalar dist_polar(Scalar rx, Scalar ry, Scalar theta) {
  detail::require_inside_unit_disk(rx);
  detail::require_inside_unit_disk(ry);
  const Scalar half = theta / Scalar(2);
  const Scalar sin_half = num::sin(half);
  const Scalar versin = Scalar(2) * sin_half * sin_half;  // 1 - cos(theta)
  const Scalar chord_sq = (rx - ry) * (rx - ry) + Scalar(2) * rx * ry * versin;
  const Scalar denom =
      (Scalar(1) - rx) * (Scalar(1) + rx) * (Scalar(1) - ry) * (Scalar(1) + ry);
  return Scalar(2) * num::asinh(num::sqrt(chord_sq / denom));
}

// Hyperbolic LCA of two points given their norms and separating angle.
// alpha and the LCA norm come from the circle-inversion construction; the
// orthogonal projection of the origin onto the geodesic circle sits at angle
// alpha from x. When that projection lands outside the arc between x and y,
// the segment argmin is the nearer endpoint and the result is flagged
// clamped. tan(alpha) = ((hy-hx)/(1+hx) + (1-cos theta)) / sin(theta); the
// collinear fallbacks only fire when sin(theta) vanishes at working
// precision, since for boundary-hugging points even sub-1e-9 angles still
// carry real geometry.
template <typename Scalar>
LcaResult<Scalar> lca_depth_polar(Scalar rx, Scalar ry, Scalar theta) {
  detail::require_inside_unit_disk(rx);
  detail::require_inside_unit_disk(ry);
  LcaResult<Scalar> res;

  if (rx < Scalar(kNormEps) || ry < Scalar(kNormEps)) {
    // One point at the origin: the geodesic passes through it.
    res.depth = Scalar(0);
    res.degenerate = true;
    return res;
  }

  const Scalar sin_theta = num::sin(theta);
  const Scalar half = theta / Scalar(2);
  const Scalar sin_half = num::sin(half);
  const Scalar versin = Scalar(2) * sin_half * sin_half;

  if (sin_theta <= Scalar(0)) {
    res.degenerate = true;
    if (versin < Scalar(1)) {
      // Same ray: the segment argmin is the endpoint nearer the origin.
      res.clamped = true;
      if (rx <= ry) {
        res.depth = dist_to_origin_polar(rx);
        res.alpha = Scalar(0);
      } else {
        res.depth = dist_to_origin_polar(ry);
        res.alpha = theta;
      }
    } else {
      // Antipodal: the geodesic is a diameter through the origin.
      res.depth = Scalar(0);
      res.alpha = Scalar(0);
    }
    return res;
  }

  const Scalar hx = detail::half_secant_excess(rx);
  const Scalar hy = detail::half_secant_excess(ry);
  const Scalar t = ((hy - hx) / (Scalar(1) + hx) + versin) / sin_theta;
  const Scalar alpha = num::atan(t);

  if (alpha < Scalar(0)) {
    res.alpha = Scalar(0);
    res.depth = dist_to_origin_polar(rx);
    res.clamped = true;
    return res;
  }
  if (alpha > theta) {
    res.alpha = theta;
    res.depth = dist_to_origin_polar(ry);
    res.clamped = true;
    return res;
  }

  res.alpha = alpha;
  res.depth = detail::lca_core(hx, t).depth;
  return res;
}

// Euclidean norm of the LCA point for a non-clamped polar configuration.
template <typename Scalar>
Scalar lca_norm_polar(Scalar rx, Scalar alpha) {
  const Scalar t = num::sin(alpha) / num::cos(alpha);
  const auto core = detail::lca_core(detail::half_secant_excess(rx), t);
  return Scalar(1) / (core.a_minus_1 + Scalar(1) + core.radius);
}

// --- Eigen entry points (double) ---

inline double dist(const DiskPoint& x, const DiskPoint& y) {
  const double nx_sq = x.squaredNorm();
  const double ny_sq = y.squaredNorm();
  detail::require_inside_unit_disk(nx_sq);
  detail::require_inside_unit_disk(ny_sq);
  const double chord_sq = (x - y).squaredNorm();
  return 2.0 * std::asinh(std::sqrt(chord_sq / ((1.0 - nx_sq) * (1.0 - ny_sq))));
}

inline double dist_to_origin(const DiskPoint& x) { return dist_to_origin_polar(x.norm()); }

inline double gromov_product(const DiskPoint& x, const DiskPoint& y, const DiskPoint& base) {
  return 0.5 * (dist(x, base) + dist(base, y) - dist(x, y));
}

// Unsigned angle between x and y in [0, pi].
inline double angle_between(const DiskPoint& x, const DiskPoint& y) {
  const double cross = x.x() * y.y() - x.y() * y.x();
  return std::atan2(std::abs(cross), x.dot(y));
}

inline LcaResult<double> lca_depth(const DiskPoint& x, const DiskPoint& y) {
  return lca_depth_polar(x.norm(), y.norm(), angle_between(x, y));
}

inline DiskPoint lca_point(const DiskPoint& x, const DiskPoint& y) {
  const LcaResult<double> res = lca_depth(x, y);
  if (res.degenerate && !res.clamped) return DiskPoint::Zero();
  if (res.clamped) return res.alpha == 0.0 ? x : y;
  const double lca_norm = lca_norm_polar(x.norm(), res.alpha);
  // Rotate x-hat by alpha toward y.
  const double cross = x.x() * y.y() - x.y() * y.x();
  const double sign = cross >= 0.0 ? 1.0 : -1.0;
  const double phi = std::atan2(x.y(), x.x()) + sign * res.alpha;
  return lca_norm * DiskPoint(std::cos(phi), std::sin(phi));
}

struct LcaGrad {
  Eigen::Vector2d dx = Eigen::Vector2d::Zero();
  Eigen::Vector2d dy = Eigen::Vector2d::Zero();
  double depth = 0.0;
  bool valid = false;  // false in clamped/degenerate configurations (zero subgradient)
};

// Analytic gradient of lca_depth with respect to both points, obtained by
// chain-ruling the closed form through (rx, ry, theta).
inline LcaGrad lca_depth_with_grad(const DiskPoint& x, const DiskPoint& y) {
  LcaGrad out;
  const double rx = x.norm();
  const double ry = y.norm();
  const double theta = angle_between(x, y);
  const LcaResult<double> res = lca_depth_polar(rx, ry, theta);
  out.depth = res.depth;
  if (res.clamped || res.degenerate) return out;

  const double sin_theta = std::sin(theta);
  const double sin_half = std::sin(theta / 2);
  const double versin = 2.0 * sin_half * sin_half;
  const double hx = detail::half_secant_excess(rx);
  const double hy = detail::half_secant_excess(ry);
  const double gx = 1.0 + hx;  // (rx^2+1)/(2 rx)
  const double gpx = 0.5 * (1.0 - 1.0 / (rx * rx));
  const double gpy = 0.5 * (1.0 - 1.0 / (ry * ry));
  const double q_minus_1 = (hy - hx) / gx;
  const double t = (q_minus_1 + versin) / sin_theta;  // tan(alpha)
  const auto core = detail::lca_core(hx, t);
  const double big_a = core.a_minus_1 + 1.0;
  const double r_sq = core.a_minus_1 * (core.a_minus_1 + 2.0);

  // depth = 2 atanh(A - sqrt(A^2-1)) gives d depth / dA = -1 / (A^2 - 1);
  // A = g(rx) sqrt(1+t^2) and t = (q - cos theta)/sin theta close the chain.
  const double ddepth_dA = -1.0 / r_sq;
  const double dA_dt = big_a * t / (1.0 + t * t);
  const double dt_dq = 1.0 / sin_theta;
  const double dq_drx = -(1.0 + hy) * gpx / (gx * gx);
  const double dq_dry = gpy / gx;
  // 1 - q cos(theta) = versin - (q - 1)(1 - versin)
  const double dt_dtheta = (versin - q_minus_1 * (1.0 - versin)) / (sin_theta * sin_theta);

  const double ddepth_drx =
      ddepth_dA * (gpx * std::sqrt(1.0 + t * t) + dA_dt * dt_dq * dq_drx);
  const double ddepth_dry = ddepth_dA * dA_dt * dt_dq * dq_dry;
  const double ddepth_dtheta = ddepth_dA * dA_dt * dt_dtheta;

  const Eigen::Vector2d x_hat = x / rx;
  const Eigen::Vector2d y_hat = y / ry;
  const double cos_c = x_hat.dot(y_hat);
  // theta = acos(c): dtheta/dx = -(y/(rx ry) - c x/rx^2)/sin(theta)
  const Eigen::Vector2d dtheta_dx = -(y / (rx * ry) - cos_c * x / (rx * rx)) / sin_theta;
  const Eigen::Vector2d dtheta_dy = -(x / (rx * ry) - cos_c * y / (ry * ry)) / sin_theta;

  out.dx = ddepth_drx * x_hat + ddepth_dtheta * dtheta_dx;
  out.dy = ddepth_dry * y_hat + ddepth_dtheta * dtheta_dy;
  out.valid = true;
  return out;
}

inline std::pair<Eigen::Vector2d, Eigen::Vector2d> lca_depth_grad(const DiskPoint& x,
                                                                  const DiskPoint& y) {
  const LcaGrad g = lca_depth_with_grad(x, y);
  return {g.dx, g.dy};
}

// Rescale a point so its norm does not exceed 1 - kBoundaryEps.
inline DiskPoint project_to_disk(const DiskPoint& x) {
  const double n = x.norm();
  const double max_norm = 1.0 - kBoundaryEps;
  if (n <= max_norm) return x;
  return x * (max_norm / n);
}

}  // namespace hyphc
