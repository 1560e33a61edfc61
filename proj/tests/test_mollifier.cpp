#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "thickness/mollifier.hpp"

using namespace nir;

namespace {

// Composite Simpson rule with n (even) panels.
template <typename F>
double simpson(F&& f, double a, double b, std::size_t n) {
  const double h = (b - a) / static_cast<double>(n);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
  return s * h / 3.0;
}

void expect_mollifier_bounds(const GraphPatch& f, const MollifierSpec& spec) {
  const auto h = mollify(f, spec);
  for (const auto& c : mollifier_checks(f, h)) EXPECT_TRUE(c.holds()) << c.name << ": " << c.measured << " > " << c.bound;
  EXPECT_EQ(identity_violations(f, h), 0u);
  EXPECT_EQ(core_violations(h), 0u);
}

}  // namespace

TEST(Eta, ProfileBounds) {
  const auto b = measure_eta(10000);
  EXPECT_GE(b.min_value, 0.0);
  EXPECT_LE(b.max_value, 1.0);
  EXPECT_GE(b.min_d1, -2.25);
  EXPECT_LE(b.max_d1, 0.0);
  EXPECT_EQ(b.plateau_defect, 0.0);
  EXPECT_EQ(b.support_defect, 0.0);
  EXPECT_LE(b.max_abs_d2, 60.75 + 1e-9);
  EXPECT_GT(b.max_abs_d2, 60.7);
}

TEST(Eta, DerivativesMatchDifferences) {
  const Eta eta;
  const double e = 1e-6;
  for (double s = 0.45; s < 1.05; s += 0.0037) {
    EXPECT_NEAR(eta.d1(s), (eta(s + e) - eta(s - e)) / (2 * e), 1e-5);
    EXPECT_NEAR(eta.d2(s), (eta.d1(s + e) - eta.d1(s - e)) / (2 * e), 1e-4);
  }
  // C^2 at every breakpoint.
  for (double s : Eta::breaks) {
    EXPECT_NEAR(eta(s - 1e-12), eta(s + 1e-12), 1e-9);
    EXPECT_NEAR(eta.d1(s - 1e-12), eta.d1(s + 1e-12), 1e-9);
    EXPECT_NEAR(eta.d2(s - 1e-12), eta.d2(s + 1e-12), 1e-8);
  }
}

TEST(Eta, NormalizationConstantAgreesWithSimpson) {
  const Eta eta;
  for (std::size_t k : {1u, 2u, 3u}) {
    for (double delta : {0.01, 0.3}) {
      double moment = 0.0;
      for (std::size_t i = 0; i + 1 < Eta::breaks.size(); ++i)
        moment += simpson([&](double s) { return eta(s) * std::pow(s, double(k) - 1); }, Eta::breaks[i],
                          Eta::breaks[i + 1], 2000);
      const double area = k == 1 ? 2.0 : k == 2 ? 2 * std::numbers::pi : 4 * std::numbers::pi;
      const double expect = 1.0 / (area * std::pow(delta, double(k)) * moment);
      EXPECT_NEAR(normalization_constant(k, delta) / expect, 1.0, 1e-10);
    }
  }
}

TEST(Eta, CutoffConstants) {
  for (double rho : {0.25, 0.5, 1.0}) {
    const auto c1 = cutoff_constants(1, rho);
    EXPECT_NEAR(c1.a, 2.25 / (2 * rho), 1e-12);
    EXPECT_NEAR(c1.b, 60.75 / (4 * rho * rho), 1e-3 / (rho * rho));
    EXPECT_GE(cutoff_constants(2, rho).b, c1.b);
  }
}

TEST(Mollify, ZeroStaysZero) {
  const auto f = centered_patch(
      2, 1, 1.0, 40, [](ConstPoint) { return Vec{0.0}; }, [](ConstPoint) { return Vec{0.0, 0.0}; }, 0.0);
  const auto h = mollify(f, {0.1, 0.4});
  for (double v : h.patch.values()) EXPECT_EQ(v, 0.0);
  for (double v : h.patch.jacobians()) EXPECT_EQ(v, 0.0);
}

TEST(Mollify, AffineIsPreserved) {
  const auto f = centered_patch(
      2, 2, 1.0, 40, [](ConstPoint x) { return Vec{0.3 + 2 * x[0] - x[1], -1 + 0.5 * x[1]}; },
      [](ConstPoint) { return Vec{2, -1, 0, 0.5}; }, 0.0);
  const auto h = mollify(f, {0.1, 0.4});
  for (std::size_t n = 0; n < f.node_count(); ++n) {
    EXPECT_LE(dist(f.value(n), h.patch.value(n)), 1e-8);
    EXPECT_LE(dist(f.jacobian(n), h.patch.jacobian(n)), 1e-8);
  }
}

TEST(Mollify, SmoothedAbsoluteValue) {
  const auto f = smoothed_abs_patch(2.0, 800);
  const MollifierSpec spec{0.01, 0.5};
  const auto h = mollify(f, spec);
  const auto checks = mollifier_checks(f, h);
  EXPECT_EQ(checks[0].name, "value");
  EXPECT_LE(checks[0].measured, 0.01);
  EXPECT_EQ(h.constants.a, 2.25);
  EXPECT_LE(checks[1].measured, (h.constants.a + 1.0) * 0.01);
  expect_mollifier_bounds(f, spec);
  EXPECT_LT(h.constants.quadrature_defect, 1e-2);
}

TEST(Mollify, RandomLipschitzPatches) {
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    expect_mollifier_bounds(random_lipschitz_patch(seed, 2, 1 + seed % 2, 1.0, 80), {0.05, 0.3});
}

TEST(Mollify, SmoothsTheKinkInsideTheCore) {
  // |x| smoothed only at the origin: the gradient jump of size 2 is spread.
  const auto f = centered_patch(
      1, 1, 1.0, 400, [](ConstPoint x) { return Vec{std::abs(x[0])}; },
      [](ConstPoint x) { return Vec{x[0] > 0 ? 1.0 : x[0] < 0 ? -1.0 : 0.0}; }, 0.0);
  const auto h = mollify(f, {0.1, 0.3});
  EXPECT_LT(measured_lipschitz(h.patch), 20.0);
  EXPECT_GT(h.patch.value(400)[0], 0.0);
}

TEST(Mollify, DomainAndStencilChecks) {
  const auto f = smoothed_abs_patch(1.0, 100);
  try {
    mollify(f, {0.05, 0.5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DomainTooSmall);
  }
  EXPECT_THROW(mollify(f, {0.02, 0.2}), Error);  // delta < 4 h
  EXPECT_NO_THROW(mollify(f, {0.04, 0.2}));
}

TEST(Mollify, DeterministicAcrossThreads) {
  const auto f = random_lipschitz_patch(3, 2, 2, 1.0, 80);
  set_thread_count(1);
  const auto a = mollify(f, {0.05, 0.3});
  set_thread_count(4);
  const auto b = mollify(f, {0.05, 0.3});
  set_thread_count(0);
  EXPECT_TRUE(a.patch == b.patch);
}
