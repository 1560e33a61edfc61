#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "thickness/fixtures.hpp"
#include "thickness/kernel.hpp"
#include "thickness/parallel.hpp"

using namespace nir;

namespace {

// Doubly perpendicular chords of the analytic ellipse, found by a dense
// scan over parameter pairs followed by Newton refinement.
std::vector<double> ellipse_critical_chords(double a, double b, int grid) {
  auto P = [&](double t) { return std::array<double, 2>{a * std::cos(t), b * std::sin(t)}; };
  auto T = [&](double t) { return std::array<double, 2>{-a * std::sin(t), b * std::cos(t)}; };
  auto F = [&](double s, double t, double& f, double& g) {
    const auto p = P(s), q = P(t), tp = T(s), tq = T(t);
    const double dx = p[0] - q[0], dy = p[1] - q[1];
    f = dx * tp[0] + dy * tp[1];
    g = dx * tq[0] + dy * tq[1];
  };
  const double h = 2 * std::numbers::pi / grid;
  std::vector<double> lengths;
  for (int i = 0; i < grid; ++i)
    for (int j = i + grid / 20; j < grid - grid / 20 + i && j < grid; ++j) {
      double fs[4], gs[4];
      F(i * h, j * h, fs[0], gs[0]);
      F((i + 1) * h, j * h, fs[1], gs[1]);
      F(i * h, (j + 1) * h, fs[2], gs[2]);
      F((i + 1) * h, (j + 1) * h, fs[3], gs[3]);
      if (*std::min_element(fs, fs + 4) > 0 || *std::max_element(fs, fs + 4) < 0) continue;
      if (*std::min_element(gs, gs + 4) > 0 || *std::max_element(gs, gs + 4) < 0) continue;
      double s = (i + 0.5) * h, t = (j + 0.5) * h;
      for (int it = 0; it < 30; ++it) {
        double f, g, fs1, gs1, ft1, gt1;
        const double e = 1e-7;
        F(s, t, f, g);
        F(s + e, t, fs1, gs1);
        F(s, t + e, ft1, gt1);
        const double j00 = (fs1 - f) / e, j01 = (ft1 - f) / e, j10 = (gs1 - g) / e, j11 = (gt1 - g) / e;
        const double det = j00 * j11 - j01 * j10;
        if (std::abs(det) < 1e-14) break;
        s -= (j11 * f - j01 * g) / det;
        t -= (-j10 * f + j00 * g) / det;
      }
      const auto p = P(s), q = P(t);
      lengths.push_back(std::hypot(p[0] - q[0], p[1] - q[1]));
    }
  return lengths;
}

std::set<long> rounded(const std::vector<double>& xs, double unit) {
  std::set<long> out;
  for (double x : xs) out.insert(std::lround(x / unit));
  return out;
}

}  // namespace

TEST(SupCurvature, UnitCircle) { EXPECT_NEAR(sup_curvature(fixtures::circle(1000)), 1.0, 1e-5); }

TEST(SupCurvature, EllipseMatchesAnalyticPeak) {
  EXPECT_NEAR(sup_curvature(fixtures::ellipse(2, 1, 4000)), 2.0 / 1.0, 1e-3);
}

TEST(SupCurvature, StadiumFlatsContributeNothing) {
  const auto c = fixtures::stadium(2000);
  EXPECT_NEAR(sup_curvature(c), 1.0, 1e-4);
  const auto k = vertex_curvatures(c);
  EXPECT_EQ(k[0][10], 0.0);
}

TEST(FocalDistance, Values) {
  EXPECT_NEAR(focal_distance(fixtures::circle(1000)).value(), 1.0, 1e-5);
  EXPECT_NEAR(focal_distance(fixtures::ellipse(2, 1, 4000)).value(), 0.5, 1e-3);
  EXPECT_NEAR(focal_distance(fixtures::circle(1000, 3.0)).value(), 3.0, 1e-4);
}

TEST(DoubleCritical, CircleAntipodalChords) {
  const auto c = fixtures::circle(1000);
  const auto pairs = find_double_critical_pairs(c, estimate_tangents(c));
  ASSERT_GT(pairs.size(), 100u);
  for (const auto& p : pairs) {
    EXPECT_NEAR(p.chord_length, 2.0, 1e-4);
    EXPECT_LE(p.residual_angles[0], 1e-3);
    EXPECT_LE(p.residual_angles[1], 1e-3);
    EXPECT_NEAR(c.ring(0).arc_separation(p.p.s, p.q.s), 0.5 * c.length(), 0.01);
  }
}

TEST(DoubleCritical, EllipseAxisChordsOnly) {
  const auto c = fixtures::ellipse(2, 1, 4000);
  const auto pairs = find_double_critical_pairs(c, estimate_tangents(c));
  std::vector<double> found;
  for (const auto& p : pairs) found.push_back(p.chord_length);
  const auto oracle = ellipse_critical_chords(2, 1, 800);
  ASSERT_FALSE(oracle.empty());
  EXPECT_EQ(rounded(oracle, 0.01), (std::set<long>{200, 400}));
  EXPECT_EQ(rounded(found, 0.01), rounded(oracle, 0.01));
  for (double l : found) EXPECT_TRUE(std::abs(l - 2.0) < 1e-3 || std::abs(l - 4.0) < 1e-3) << l;
}

TEST(DoubleCritical, ConcentricCircles) {
  const auto c = fixtures::concentric(600, 1200);
  const auto pairs = find_double_critical_pairs(c, estimate_tangents(c));
  double cross_min = 1e9, inner_min = 1e9, outer_min = 1e9;
  for (const auto& p : pairs) {
    if (p.p.component != p.q.component) {
      cross_min = std::min(cross_min, p.chord_length);
      EXPECT_TRUE(std::abs(p.chord_length - 2.0) < 1e-3 || std::abs(p.chord_length - 4.0) < 1e-3);
    } else if (p.p.component == 0) {
      inner_min = std::min(inner_min, p.chord_length);
    } else {
      outer_min = std::min(outer_min, p.chord_length);
    }
  }
  EXPECT_NEAR(cross_min, 2.0, 1e-3);
  EXPECT_NEAR(inner_min, 2.0, 1e-3);
  EXPECT_NEAR(outer_min, 6.0, 1e-3);
}

TEST(DoubleCritical, MissingTangentsRejected) {
  const auto c = fixtures::circle(32);
  try {
    find_double_critical_pairs(c, TangentField{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoTangents);
  }
}

TEST(Mdc, Values) {
  EXPECT_NEAR(mdc(fixtures::circle(1000)).value(), 2.0, 1e-4);
  EXPECT_NEAR(mdc(fixtures::ellipse(2, 1, 4000)).value(), 2.0, 1e-3);
  EXPECT_NEAR(mdc(fixtures::concentric(600, 1200)).value(), 2.0, 1e-3);
}

TEST(Thickness, CircleTiesReportDoublyCritical) {
  const auto rep = thickness(fixtures::circle(1000));
  EXPECT_NEAR(rep.thickness.value(), 1.0, 1e-4);
  EXPECT_NEAR(rep.focal_distance.value(), 1.0, 1e-4);
  EXPECT_NEAR(rep.mdc.value() / 2, 1.0, 1e-4);
  EXPECT_EQ(rep.attaining_feature, AttainingFeature::DoublyCritical);
  ASSERT_TRUE(rep.critical_pair.has_value());
}

TEST(Thickness, EllipseIsFocal) {
  const auto rep = thickness(fixtures::ellipse(2, 1, 4000));
  EXPECT_NEAR(rep.thickness.value(), 0.5, 1e-3);
  EXPECT_EQ(rep.attaining_feature, AttainingFeature::Focal);
}

TEST(Thickness, Stadium) {
  const auto rep = thickness(fixtures::stadium(2000));
  EXPECT_NEAR(rep.focal_distance.value(), 1.0, 1e-4);
  EXPECT_NEAR(rep.mdc.value(), 2.0, 1e-4);
  EXPECT_NEAR(rep.thickness.value(), 1.0, 1e-4);
}

TEST(Thickness, OrderingAlwaysHolds) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto rep = thickness(fixtures::random_trig(seed, 800));
    EXPECT_LE(rep.thickness, rep.focal_distance);
    EXPECT_LE(rep.thickness, rep.mdc.scaled(0.5));
    EXPECT_EQ(rep.thickness, min(rep.focal_distance, rep.mdc.scaled(0.5)));
  }
}

TEST(Thickness, ScalingIsLinear) {
  const auto base = fixtures::random_trig(3, 600);
  const double t0 = thickness(base).thickness.value();
  for (double lambda : {0.5, 2.0, 10.0}) {
    const double t = thickness(base.scaled(lambda)).thickness.value();
    EXPECT_NEAR(t / (lambda * t0), 1.0, 1e-9) << lambda;
  }
}

TEST(Thickness, RigidMotionInvariance) {
  const auto base = fixtures::random_trig(5, 600);
  const double t0 = thickness(base).thickness.value();
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 3; ++trial) {
    // Random rotation via a unit quaternion.
    double q[4];
    for (double& x : q) x = g(rng);
    const double qn = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
    for (double& x : q) x /= qn;
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    const double R[3][3] = {{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
                            {2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
                            {2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}};
    const Vec shift{g(rng), g(rng), g(rng)};
    const auto moved = base.mapped([&](ConstPoint p) {
      Vec out(3);
      for (int i = 0; i < 3; ++i) out[i] = R[i][0] * p[0] + R[i][1] * p[1] + R[i][2] * p[2] + shift[i];
      return out;
    });
    EXPECT_NEAR(thickness(moved).thickness.value() / t0, 1.0, 1e-9);
  }
}

TEST(Thickness, ChordBoundFromCurvature) {
  for (const auto& c : {fixtures::circle(1000), fixtures::ellipse(2, 1, 2000), fixtures::stadium(1500),
                        fixtures::rounded_square(1200), fixtures::trefoil(1500)}) {
    const double C = sup_curvature(c);
    const Ring& r = c.ring(0);
    const double h = r.max_segment_length();
    const double slack = 2.0 * h * h * C;
    const double smax = std::numbers::pi / (2 * C);
    for (std::size_t i = 0; i < r.size(); i += 7) {
      double s = 0.0;
      for (std::size_t j = 1; j < r.size(); ++j) {
        s += r.segment_length(i + j - 1);
        if (s > smax) break;
        EXPECT_GE(dist(r.vertex(i), r.vertex(i + j)), std::sin(s * C) / C - slack);
      }
    }
  }
}

TEST(Thickness, BitIdenticalAcrossThreadCounts) {
  const auto c = fixtures::random_trig(8, 1500);
  set_thread_count(1);
  const auto a = thickness(c);
  set_thread_count(4);
  const auto b = thickness(c);
  set_thread_count(0);
  EXPECT_EQ(a.thickness, b.thickness);
  EXPECT_EQ(a.mdc, b.mdc);
  EXPECT_EQ(a.critical_pair_count, b.critical_pair_count);
}
