#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hyphc/geometry.hpp"
#include "hyphc/rng.hpp"
#include "oracles.hpp"

using namespace hyphc;
using Eigen::Vector2d;

namespace {

Vector2d polar(double r, double phi) { return {r * std::cos(phi), r * std::sin(phi)}; }

Vector2d random_point(Rng& rng, double max_norm = 0.95) {
  const double r = max_norm * std::sqrt(rng.uniform01());
  return polar(r, rng.uniform(0.0, 2.0 * std::numbers::pi));
}

}  // namespace

TEST_CASE("distance basics") {
  const Vector2d o = Vector2d::Zero();
  CHECK(dist(o, o) == doctest::Approx(0.0));
  CHECK(dist(o, {0.5, 0.0}) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(dist_to_origin({0.0, 0.0}) == 0.0);
  CHECK(dist_to_origin({0.9, 0.0}) == doctest::Approx(2.0 * std::atanh(0.9)).epsilon(1e-12));

  CHECK_THROWS_AS(dist({1.0, 0.0}, {0.0, 0.0}), std::domain_error);
  CHECK_THROWS_AS(dist_to_origin({1.2, 0.0}), std::domain_error);

  Rng rng(7);
  for (int t = 0; t < 1000; ++t) {
    const Vector2d x = random_point(rng);
    const Vector2d y = random_point(rng);
    CHECK(dist(x, y) == doctest::Approx(dist(y, x)).epsilon(1e-12));
    CHECK(dist_to_origin(x) == doctest::Approx(dist(Vector2d::Zero(), x)).epsilon(1e-12));
    CHECK(dist(x, y) >= 0.0);
  }
}

TEST_CASE("metric axioms on random triples") {
  Rng rng(11);
  for (int t = 0; t < 500; ++t) {
    const Vector2d x = random_point(rng);
    const Vector2d y = random_point(rng);
    const Vector2d z = random_point(rng);
    CHECK(dist(x, z) <= dist(x, y) + dist(y, z) + 1e-9);
  }
  const Vector2d p{0.3, -0.2};
  CHECK(dist(p, p) == doctest::Approx(0.0));
}

TEST_CASE("gromov product") {
  const Vector2d o = Vector2d::Zero();
  Rng rng(13);
  for (int t = 0; t < 300; ++t) {
    const Vector2d x = random_point(rng);
    const Vector2d y = random_point(rng);
    CHECK(gromov_product(x, x, o) == doctest::Approx(dist(o, x)).epsilon(1e-10));
    const double g = gromov_product(x, y, o);
    CHECK(g <= std::min(dist(o, x), dist(o, y)) + 1e-9);
  }
}

TEST_CASE("four point condition with delta = log 3") {
  Rng rng(17);
  const double delta = std::log(3.0);
  for (int t = 0; t < 2000; ++t) {
    const Vector2d w = random_point(rng);
    const Vector2d x = random_point(rng);
    const Vector2d y = random_point(rng);
    const Vector2d z = random_point(rng);
    const double xy = gromov_product(x, y, w);
    const double xz = gromov_product(x, z, w);
    const double zy = gromov_product(z, y, w);
    CHECK(xy >= std::min(xz, zy) - delta - 1e-9);
  }
}

TEST_CASE("lca depth closed form") {
  // Equal norms: the construction is symmetric, alpha = theta / 2.
  for (const double r : {0.2, 0.5, 0.8}) {
    for (const double theta : {0.3, 1.0, 2.0}) {
      const auto res = lca_depth(polar(r, 0.4), polar(r, 0.4 + theta));
      CHECK(!res.clamped);
      CHECK(res.alpha == doctest::Approx(theta / 2).epsilon(1e-9));
    }
  }

  // Antipodal equal norms: the geodesic is a diameter through the origin.
  const auto antipodal = lca_depth(polar(0.6, 0.0), polar(0.6, std::numbers::pi));
  CHECK(antipodal.depth == doctest::Approx(0.0));

  // Frozen against the dense geodesic-sampling oracle.
  const auto quarter = lca_depth(polar(0.5, 0.0), polar(0.5, std::numbers::pi / 2));
  CHECK(quarter.depth == doctest::Approx(0.6411549397).epsilon(1e-8));
  const auto mixed = lca_depth(polar(0.3, 0.2), polar(0.7, 1.2));
  CHECK(mixed.depth == doctest::Approx(0.6178857492).epsilon(1e-7));
}

TEST_CASE("lca depth matches geodesic sampling oracle") {
  Rng rng(19);
  for (int t = 0; t < 50; ++t) {
    const Vector2d x = random_point(rng);
    const Vector2d y = random_point(rng);
    if (x.norm() < 0.05 || y.norm() < 0.05) continue;
    const double oracle = testing::min_depth_on_geodesic(x, y, 20000);
    const auto res = lca_depth(x, y);
    CHECK(res.depth == doctest::Approx(oracle).epsilon(1e-5));
  }
}

TEST_CASE("gromov sandwich") {
  Rng rng(23);
  const double delta = std::log(3.0);
  const Vector2d o = Vector2d::Zero();
  for (int t = 0; t < 2000; ++t) {
    const Vector2d x = random_point(rng);
    const Vector2d y = random_point(rng);
    const double g = gromov_product(x, y, o);
    const double d = lca_depth(x, y).depth;
    CHECK(d >= g - 1e-9);
    CHECK(d <= g + delta + 1e-9);
  }
}

TEST_CASE("lca point consistency") {
  Rng rng(29);
  for (int t = 0; t < 500; ++t) {
    const Vector2d x = random_point(rng);
    const Vector2d y = random_point(rng);
    if (x.norm() < 0.05 || y.norm() < 0.05) continue;
    const auto res = lca_depth(x, y);
    const Vector2d p = lca_point(x, y);
    CHECK(dist_to_origin(p) == doctest::Approx(res.depth).epsilon(1e-9));
  }

  // The returned point minimizes the depth over the sampled geodesic.
  const Vector2d x = polar(0.45, 0.3);
  const Vector2d y = polar(0.62, 1.4);
  const Vector2d p = lca_point(x, y);
  const double sampled = testing::min_depth_on_geodesic(x, y, 50000);
  CHECK(dist_to_origin(p) <= sampled + 1e-7);

  // Equal norms, antipodal: the LCA is the origin.
  CHECK(lca_point(polar(0.5, 0.2), polar(0.5, 0.2 + std::numbers::pi)).norm() ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("equal-norm depth decreases in angle") {
  for (const double r : {0.3, 0.6, 0.9}) {
    double prev = std::numeric_limits<double>::infinity();
    for (int s = 1; s <= 30; ++s) {
      const double theta = s * (std::numbers::pi - 0.02) / 30.0;
      const double d = lca_depth(polar(r, 0.0), polar(r, theta)).depth;
      CHECK(d < prev);
      prev = d;
    }
  }
}

TEST_CASE("rotational invariance") {
  Rng rng(31);
  for (int t = 0; t < 300; ++t) {
    const Vector2d x = random_point(rng);
    const Vector2d y = random_point(rng);
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const Eigen::Rotation2D<double> rot(phi);
    const Vector2d xr = rot * x;
    const Vector2d yr = rot * y;
    CHECK(dist(xr, yr) == doctest::Approx(dist(x, y)).epsilon(1e-10));
    CHECK(lca_depth(xr, yr).depth == doctest::Approx(lca_depth(x, y).depth).epsilon(1e-10));
  }
}

TEST_CASE("degenerate fallbacks") {
  // Same ray: depth is the nearer endpoint's.
  const auto ray = lca_depth({0.2, 0.0}, {0.7, 0.0});
  CHECK(ray.degenerate);
  CHECK(ray.depth == doctest::Approx(2.0 * std::atanh(0.2)).epsilon(1e-12));

  // A point at the origin puts the geodesic through the origin.
  const auto origin = lca_depth({0.0, 0.0}, {0.5, 0.1});
  CHECK(origin.degenerate);
  CHECK(origin.depth == 0.0);
}

TEST_CASE("lca depth gradient vs central differences") {
  Rng rng(37);
  const double h = 1e-6;
  int checked = 0;
  while (checked < 1000) {
    const Vector2d x = random_point(rng);
    const Vector2d y = random_point(rng);
    const double theta = angle_between(x, y);
    if (x.norm() < 0.05 || y.norm() < 0.05) continue;
    if (std::sin(theta) < 1e-3) continue;
    const auto res = lca_depth(x, y);
    if (res.clamped || res.degenerate) continue;
    if (res.alpha < 1e-3 || res.alpha > theta - 1e-3) continue;  // keep away from the clamp kink

    const LcaGrad g = lca_depth_with_grad(x, y);
    REQUIRE(g.valid);
    Eigen::Vector4d fd;
    for (int c = 0; c < 2; ++c) {
      Vector2d xp = x, xm = x;
      xp[c] += h;
      xm[c] -= h;
      fd[c] = (lca_depth(xp, y).depth - lca_depth(xm, y).depth) / (2 * h);
      Vector2d yp = y, ym = y;
      yp[c] += h;
      ym[c] -= h;
      fd[2 + c] = (lca_depth(x, yp).depth - lca_depth(x, ym).depth) / (2 * h);
    }
    Eigen::Vector4d an;
    an << g.dx, g.dy;
    const double rel = (an - fd).norm() / std::max(1e-8, fd.norm());
    CHECK(rel < 1e-4);
    ++checked;
  }
}

TEST_CASE("gradient symmetry") {
  // Swapping arguments swaps the gradients.
  const Vector2d x = polar(0.4, 0.3);
  const Vector2d y = polar(0.7, 1.1);
  const auto [dx, dy] = lca_depth_grad(x, y);
  const auto [dy2, dx2] = lca_depth_grad(y, x);
  CHECK((dx - dx2).norm() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK((dy - dy2).norm() == doctest::Approx(0.0).epsilon(1e-12));

  // Equal norms: radial gradient components agree by symmetry.
  const Vector2d a = polar(0.5, 0.0);
  const Vector2d b = polar(0.5, 0.9);
  const auto [da, db] = lca_depth_grad(a, b);
  CHECK(da.dot(a.normalized()) == doctest::Approx(db.dot(b.normalized())).epsilon(1e-9));
}
