#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "thickness/fixtures.hpp"
#include "thickness/tightener.hpp"

using namespace nir;

namespace {

TightenConfig short_run(std::size_t steps) {
  TightenConfig c;
  c.steps = steps;
  return c;
}

void expect_monotone(const TightenTrace& tr) {
  double last = tr.initial_objective;
  for (const auto& r : tr.records) {
    EXPECT_LE(r.objective, last) << r.iteration;
    if (r.accepted) {
      EXPECT_LT(r.objective, last) << r.iteration;
    } else {
      EXPECT_EQ(r.objective, last) << r.iteration;
    }
    last = r.objective;
  }
}

// Every accepted curve is embedded, keeps the length, and is isotopic to
// its predecessor at rho = thickness / 8.
void expect_class_safe(const TightenTrace& tr) {
  ASSERT_EQ(tr.curves.size(), tr.accepted + 1);
  for (std::size_t i = 1; i < tr.curves.size(); ++i) {
    const auto& prev = tr.curves[i - 1];
    const auto& next = tr.curves[i];
    EXPECT_TRUE(is_valid(next)) << i;
    EXPECT_NEAR(next.length() / tr.length, 1.0, 1e-12);
    const double rho = suggested_rho(thickness(prev).thickness.value());
    EXPECT_EQ(isotopy_check(prev, next, rho).verdict, IsotopyVerdict::Isotopic) << i;
  }
}

}  // namespace

TEST(Tighten, PerturbedCircleApproachesRoundCircle) {
  const auto start = fixtures::perturbed_circle(400, 0.05, 7);
  const double circle = ropelength(fixtures::circle(400));
  EXPECT_NEAR(circle, 2 * std::numbers::pi, 1e-3);
  const auto tr = tighten(start, short_run(3000));
  EXPECT_GT(tr.initial_objective, 1.3 * circle);
  EXPECT_LT(tr.final_objective, 1.05 * circle);
  EXPECT_GE(tr.final_objective, circle * (1 - 1e-3));
  EXPECT_NEAR(tr.final_objective, ropelength(tr.final_curve), 1e-9 * tr.final_objective);
  expect_monotone(tr);
}

TEST(Tighten, RoundCircleIsAFixedPoint) {
  const auto start = fixtures::circle(300);
  const auto tr = tighten(start, short_run(400));
  EXPECT_LE(std::abs(tr.final_objective / tr.initial_objective - 1.0), 5e-3);
}

TEST(Tighten, EllipseIsMonotoneAndClassSafe) {
  const auto start = fixtures::ellipse(2, 1, 200);
  auto cfg = short_run(600);
  cfg.keep_curves = true;
  const auto tr = tighten(start, cfg);
  EXPECT_NEAR(tr.initial_objective, start.length() / 0.5, 0.01 * tr.initial_objective);
  EXPECT_LE(tr.final_objective, tr.initial_objective);
  EXPECT_GT(tr.accepted, 0u);
  expect_monotone(tr);
  expect_class_safe(tr);
}

TEST(Tighten, TrefoilIsMonotoneAndClassSafe) {
  auto cfg = short_run(200);
  cfg.keep_curves = true;
  const auto tr = tighten(fixtures::trefoil(300), cfg);
  EXPECT_GT(tr.accepted, 0u);
  expect_monotone(tr);
  expect_class_safe(tr);
}

TEST(Tighten, Deterministic) {
  const auto start = fixtures::perturbed_circle(200, 0.05, 3);
  const auto a = tighten(start, short_run(500));
  const auto b = tighten(start, short_run(500));
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].accepted, b.records[i].accepted);
    EXPECT_EQ(a.records[i].objective, b.records[i].objective);
  }
  EXPECT_EQ(a.final_curve.ring(0).coords(), b.final_curve.ring(0).coords());
}

TEST(Tighten, ScaleInvariant) {
  const auto start = fixtures::perturbed_circle(200, 0.05, 3);
  const auto base = tighten(start, short_run(400));
  for (double lambda : {0.5, 2.0, 10.0}) {
    const auto tr = tighten(start.scaled(lambda), short_run(400));
    ASSERT_EQ(tr.records.size(), base.records.size());
    for (std::size_t i = 0; i < tr.records.size(); ++i) {
      ASSERT_EQ(tr.records[i].accepted, base.records[i].accepted) << lambda << " " << i;
      EXPECT_NEAR(tr.records[i].objective / base.records[i].objective, 1.0, 1e-9);
    }
  }
}

TEST(Tighten, Errors) {
  // Figure eight: not embedded, so its thickness is zero.
  std::vector<double> eight;
  for (int i = 0; i < 200; ++i) {
    const double u = 2 * std::numbers::pi * i / 200.0;
    eight.insert(eight.end(), {std::sin(u), std::sin(u) * std::cos(u)});
  }
  try {
    tighten(DiscreteCurve::unchecked(2, {eight}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroThicknessStart);
  }
  auto bad = short_run(10);
  bad.cooling = 1.0;
  EXPECT_THROW(tighten(fixtures::circle(50), bad), Error);
  bad = short_run(0);
  EXPECT_THROW(tighten(fixtures::circle(50), bad), Error);
}
