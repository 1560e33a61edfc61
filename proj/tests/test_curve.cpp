#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "thickness/curve.hpp"
#include "thickness/fixtures.hpp"

using namespace nir;

namespace {

DiscreteCurve square_with(std::vector<Vec> pts) { return build_curve({pts}, 2); }

// Random rotation of R^n from Gram-Schmidt on a Gaussian matrix.
std::vector<Vec> random_rotation(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<Vec> q;
  while (q.size() < n) {
    Vec v(n);
    for (double& x : v) x = g(rng);
    for (const Vec& e : q) {
      const double d = dot(v, e);
      for (std::size_t i = 0; i < n; ++i) v[i] -= d * e[i];
    }
    if (norm(v) < 1e-8) continue;
    normalize_in_place(v);
    q.push_back(v);
  }
  return q;
}

Vec apply(const std::vector<Vec>& rot, ConstPoint p, ConstPoint shift) {
  Vec out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = dot(rot[i], p) + shift[i];
  return out;
}

}  // namespace

TEST(BuildCurve, InscribedPolygonPerimeter) {
  const auto c = fixtures::circle(1000);
  EXPECT_NEAR(c.length(), 2000.0 * std::sin(std::numbers::pi / 1000.0), 1e-12);
  EXPECT_EQ(c.vertex_count(), 1000u);
}

TEST(BuildCurve, RepeatedVertexIsDegenerate) {
  try {
    square_with({{0, 0}, {1, 0}, {1, 0}, {1, 1}, {0, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateSegment);
  }
}

TEST(BuildCurve, FigureEightSelfIntersects) {
  try {
    square_with({{0, 0}, {1, 1}, {1, 0}, {0, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SelfIntersection);
  }
}

TEST(BuildCurve, TooFewVertices) {
  try {
    square_with({{0, 0}, {1, 0}, {0, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooFewVertices);
  }
}

TEST(BuildCurve, MixedDimensionsRejected) {
  EXPECT_THROW(build_curve({{{0, 0}, {1, 0}, {1, 1, 0}, {0, 1}}}, 2), Error);
}

TEST(BuildCurve, CrossingComponentsRejected) {
  const auto a = fixtures::circle(64, 1.0), b = fixtures::circle(64, 1.0);
  auto shifted = b.mapped([](ConstPoint p) { return Vec{p[0] + 0.5, p[1]}; });
  EXPECT_THROW(build_curve_flat({a.ring(0).coords(), shifted.ring(0).coords()}, 2), Error);
}

TEST(BuildCurve, ArclengthStrictlyIncreasing) {
  const auto c = fixtures::ellipse(2, 1, 500);
  const Ring& r = c.ring(0);
  for (std::size_t i = 0; i < r.size(); ++i) EXPECT_LT(r.arclength_at(i), r.arclength_at(i + 1));
  EXPECT_DOUBLE_EQ(r.arclength_at(r.size()), r.length());
}

TEST(Tangents, CircleTangentsPerpendicularToRadius) {
  for (std::size_t n : {100u, 1000u}) {
    const auto c = fixtures::circle(n);
    const auto tf = estimate_tangents(c);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = c.ring(0).vertex(i);
      const auto t = tf.at(0, i);
      worst = std::max(worst, std::abs(dot(v, t)));
      EXPECT_NEAR(norm(t), 1.0, 1e-12);
    }
    EXPECT_LT(worst, 1.0 / (n * n));
  }
}

TEST(Tangents, CollinearFallbackOnFlat) {
  const auto c = fixtures::rounded_square(400);
  const auto tf = estimate_tangents(c);
  EXPECT_GT(tf.collinear_fallbacks, 0u);
  // The first vertices lie on the bottom flat, which runs along +x.
  const auto t = tf.at(0, 2);
  EXPECT_EQ(t[0], 1.0);
  EXPECT_EQ(t[1], 0.0);
}

TEST(Tangents, EllipseMatchesAnalyticTangent) {
  const double a = 2.0, b = 1.0;
  const auto c = fixtures::ellipse(a, b, 2000);
  const auto tf = estimate_tangents(c);
  double worst = 0.0;
  for (std::size_t i = 0; i < 2000; ++i) {
    const auto v = c.ring(0).vertex(i);
    const double th = std::atan2(v[1] / b, v[0] / a);
    Vec exact{-a * std::sin(th), b * std::cos(th)};
    normalize_in_place(exact);
    const auto t = tf.at(0, i);
    const double cross = exact[0] * t[1] - exact[1] * t[0];
    worst = std::max(worst, std::atan2(std::abs(cross), dot(exact, t)));
  }
  EXPECT_LT(worst, 1e-5);
}

TEST(Tangents, OrientationConsistent) {
  const auto c = fixtures::trefoil(600);
  const auto tf = estimate_tangents(c);
  const Ring& r = c.ring(0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Vec chord = sub(r.vertex(i + 1), r.vertex(i + r.size() - 1));
    EXPECT_GT(dot(tf.at(0, i), chord), 0.0);
  }
}

TEST(Tangents, RigidMotionEquivariance) {
  std::mt19937_64 rng(11);
  const auto c = fixtures::trefoil(300);
  const auto rot = random_rotation(3, rng);
  const Vec shift{0.3, -1.2, 2.5}, zero{0, 0, 0};
  const auto moved = c.mapped([&](ConstPoint p) { return apply(rot, p, shift); });
  const auto t0 = estimate_tangents(c), t1 = estimate_tangents(moved);
  for (std::size_t i = 0; i < 300; ++i) {
    const Vec expect = apply(rot, t0.at(0, i), zero);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(t1.at(0, i)[k], expect[k], 1e-12);
  }
}

TEST(PointAt, EndpointsAndMidpoint) {
  const auto c = square_with({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const auto v = point_at(c, make_coordinate(c, 0, 2, 0.0));
  EXPECT_EQ(v, (Vec{1, 1}));
  const auto m = point_at(c, make_coordinate(c, 0, 0, 0.5));
  EXPECT_EQ(m, (Vec{0.5, 0}));
}

TEST(PointAt, OutOfRange) {
  const auto c = fixtures::circle(16);
  EXPECT_THROW(point_at(c, {0, 16, 0.0, 0.0}), Error);
  EXPECT_THROW(point_at(c, {1, 0, 0.0, 0.0}), Error);
  EXPECT_THROW(point_at(c, {0, 0, 1.5, 0.0}), Error);
  EXPECT_THROW(coordinate_at_arclength(c, 0, -1.0), Error);
}

TEST(PointAt, HalfLengthIsAntipode) {
  for (std::size_t n : {64u, 256u, 1024u}) {
    const auto c = fixtures::circle(n);
    const auto p = point_at(c, coordinate_at_arclength(c, 0, 0.5 * c.length()));
    EXPECT_LT(dist(p, Vec{-1.0, 0.0}), 10.0 / (n * n));
  }
}

TEST(PointAt, OneLipschitzInArclength) {
  const auto c = fixtures::trefoil(200);
  const double L = c.length();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, L);
  for (int k = 0; k < 500; ++k) {
    const double s0 = u(rng), s1 = u(rng);
    const auto p0 = point_at_arclength(c, 0, s0), p1 = point_at_arclength(c, 0, s1);
    EXPECT_LE(dist(p0, p1), std::abs(s1 - s0) + 1e-12);
  }
}

TEST(Properties, PerimeterConvergesQuadratically) {
  const double rho = 2.5;
  double prev_err = 0.0;
  for (std::size_t n : {100u, 200u, 400u, 800u}) {
    const double err = 2 * std::numbers::pi * rho - fixtures::circle(n, rho).length();
    EXPECT_GT(err, 0.0);
    if (prev_err > 0.0) {
      EXPECT_NEAR(prev_err / err, 4.0, 0.05);
    }
    prev_err = err;
  }
}
