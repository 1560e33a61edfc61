#include <gtest/gtest.h>

#include <cmath>

#include "thickness/fixtures.hpp"
#include "thickness/kernel.hpp"
#include "thickness/oracles.hpp"

using namespace nir;

namespace {

void expect_agreement(const DiscreteCurve& c, double rel = 1e-2) {
  const double t = thickness(c).thickness.value();
  const auto spec = default_sample_spec(t);
  const auto ball = rolling_ball_oracle(c, spec);
  const auto cut = cut_value_oracle(c, spec);
  EXPECT_NEAR(ball.value, t, rel * t);
  EXPECT_NEAR(cut.value, t, rel * t);
}

}  // namespace

TEST(RollingBall, UnitCircle) {
  const auto c = fixtures::circle(1000);
  const auto spec = default_sample_spec(1.0);
  const auto r = rolling_ball_oracle(c, spec);
  EXPECT_NEAR(r.value, 1.0, 2 * spec.bisection_tolerance);
}

TEST(RollingBall, EllipseAgreesWithFocalTerm) {
  const auto c = fixtures::ellipse(2, 1, 4000);
  const auto spec = default_sample_spec(0.5, 64);
  EXPECT_NEAR(rolling_ball_oracle(c, spec).value, 0.5, 5e-3);
}

TEST(RollingBall, ConcentricCircles) {
  const auto c = fixtures::concentric(1000, 3000);
  EXPECT_NEAR(rolling_ball_oracle(c, default_sample_spec(1.0)).value, 1.0, 5e-3);
}

TEST(RollingBall, BracketMissWhenConstant) {
  const auto c = fixtures::circle(200);
  NormalSampleSpec spec = default_sample_spec(1.0);
  spec.r_lo = 2.0;
  spec.r_hi = 3.0;
  try {
    rolling_ball_oracle(c, spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BracketMiss);
  }
  spec.r_lo = 0.1;
  spec.r_hi = 0.5;
  EXPECT_THROW(rolling_ball_oracle(c, spec), Error);
}

TEST(CutValue, CircleRays) {
  const auto c = fixtures::circle(1000);
  const auto spec = default_sample_spec(1.0);
  // Vertex 0 sits at (1, 0).
  EXPECT_EQ(normal_cut_value(c, 0, 0, Vec{1.0, 0.0}, spec), spec.r_hi);
  EXPECT_NEAR(normal_cut_value(c, 0, 0, Vec{-1.0, 0.0}, spec), 1.0, 2 * spec.bisection_tolerance);
  EXPECT_NEAR(cut_value_oracle(c, spec).value, 1.0, 2 * spec.bisection_tolerance);
}

TEST(CutValue, EllipseMajorVertexInward) {
  const auto c = fixtures::ellipse(2, 1, 4000);
  const auto spec = default_sample_spec(0.5);
  EXPECT_NEAR(normal_cut_value(c, 0, 0, Vec{-1.0, 0.0}, spec), 0.5, 5e-3);
}

TEST(CutValue, StadiumAcrossTheGap) {
  const auto c = fixtures::stadium(2000);
  const auto spec = default_sample_spec(1.0);
  // Vertex 0 starts the lower flat at (-2, -1); the flat midpoint is 2 further.
  const std::size_t mid = static_cast<std::size_t>(std::lround(2.0 / (c.length() / 2000)));
  EXPECT_NEAR(normal_cut_value(c, 0, mid, Vec{0.0, 1.0}, spec), 1.0, 1e-3);
}

TEST(Equivalence, Fixtures) {
  expect_agreement(fixtures::circle(1000));
  expect_agreement(fixtures::ellipse(2, 1, 4000));
  expect_agreement(fixtures::stadium(2000));
  expect_agreement(fixtures::rounded_square(2000));
  expect_agreement(fixtures::concentric(1000, 3000));
  expect_agreement(fixtures::trefoil(2000));
}

TEST(Equivalence, RandomTrigCurves) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) expect_agreement(fixtures::random_trig(seed, 2000));
}

TEST(Equivalence, DeterministicAcrossThreads) {
  const auto c = fixtures::random_trig(1, 1000);
  const auto spec = default_sample_spec(thickness(c).thickness.value());
  set_thread_count(1);
  const auto a = cut_value_oracle(c, spec);
  const auto b = rolling_ball_oracle(c, spec);
  set_thread_count(3);
  const auto a3 = cut_value_oracle(c, spec);
  const auto b3 = rolling_ball_oracle(c, spec);
  set_thread_count(0);
  EXPECT_EQ(a.value, a3.value);
  EXPECT_EQ(b.value, b3.value);
  EXPECT_EQ(a.vertex, a3.vertex);
}
