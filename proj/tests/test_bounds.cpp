#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "thickness/bounds.hpp"

using namespace nir;

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

TEST(Bounds, SphereVolumes) {
  EXPECT_NEAR(std::exp(log_sphere_volume(0)), 2.0, 1e-12);
  EXPECT_NEAR(std::exp(log_sphere_volume(1)), 2 * pi, 1e-12);
  EXPECT_NEAR(std::exp(log_sphere_volume(2)), 4 * pi, 1e-12);
  EXPECT_NEAR(std::exp(log_sphere_volume(3)), 2 * pi * pi, 1e-12);
  EXPECT_NEAR(std::exp(log_sphere_volume(4)), 8 * pi * pi / 3, 1e-12);
}

TEST(Bounds, CurvesInThreeSpace) {
  const auto b = class_count_bound(3, 1, 1.0, 1.0);
  EXPECT_EQ(b.R, 1.0);
  EXPECT_EQ(*b.i0, pi);
  EXPECT_EQ(*b.rho, 0.125);
  const double lambda = std::pow(16.0 / pi, 3);
  EXPECT_NEAR(*b.Lambda0 / lambda, 1.0, 1e-9);
  EXPECT_NEAR(*b.class_bound_exponent(), 132.0, 0.2);
  EXPECT_NEAR(*b.d0, 256.0, 1e-9);
  // (n-1) alpha_3 / (n alpha_1) e^{1-n} = 2 (2 pi^2) / (3 2 pi) e^{-2}.
  EXPECT_NEAR(*b.v0, 2.0 * pi / 3.0 * std::exp(-2.0), 1e-12);
  EXPECT_NEAR(*b.cover, std::pow(32.0, 3), 1e-6);
}

TEST(Bounds, RescalingByEpsilon) {
  const auto a = class_count_bound(3, 1, 2.0, 0.5);
  const auto b = class_count_bound(3, 1, 4.0, 1.0);
  EXPECT_EQ(a.R, 4.0);
  EXPECT_NEAR(a.log_Lambda0, b.log_Lambda0, 1e-12);
}

TEST(Bounds, CurvesAlwaysHaveInjectivityPi) {
  for (int n = 2; n <= 12; ++n) {
    const auto b = class_count_bound(n, 1, 3.0, 1.0);
    EXPECT_EQ(*b.i0, pi);
    EXPECT_LE(*b.rho, 0.125);
    EXPECT_NEAR(b.log_Lambda0, n * std::log(48.0 / pi), 1e-9);
  }
}

TEST(Bounds, SurfacesInFourSpaceInLogSpace) {
  const auto b = class_count_bound(4, 2, 1.0, 1.0);
  EXPECT_NEAR(b.log_i0, -2.0 * std::pow(8.0, 4), 1e-9);
  EXPECT_FALSE(b.i0.has_value());
  EXPECT_NEAR(b.log_Lambda0, 4.0 * (std::log(16.0) + 2.0 * std::pow(8.0, 4)), 1e-6);
  EXPECT_TRUE(std::isfinite(b.log_Lambda0));
  EXPECT_FALSE(b.Lambda0.has_value());
  EXPECT_NEAR(b.log_rho, b.log_i0 - std::log(4.0), 1e-9);
  // The volume bound is at least as sharp as the closed-form one.
  EXPECT_GE(b.log_i0_volume, b.log_i0);
  EXPECT_LE(b.log_i0_volume, std::log(pi));
}

TEST(Bounds, MonotoneInRadiusAndDimension) {
  for (int k : {1, 2}) {
    double prev = -1.0;
    for (double R = 0.25; R <= 8.0; R *= 1.5) {
      const double e = class_count_bound(k + 2, k, R, 1.0).log_Lambda0;
      EXPECT_GE(e, prev);
      prev = e;
    }
    prev = -1.0;
    for (int n = k + 1; n <= k + 8; ++n) {
      const double e = class_count_bound(n, k, 2.0, 1.0).log_Lambda0;
      EXPECT_GE(e, prev) << n;
      prev = e;
    }
  }
}

TEST(Bounds, ConstantsArePositive) {
  for (int n = 2; n <= 6; ++n)
    for (int k = 1; k < n; ++k)
      for (double R : {0.01, 1.0, 10.0}) {
        const auto b = class_count_bound(n, k, R, 1.0);
        EXPECT_TRUE(std::isfinite(b.log_d0));
        EXPECT_TRUE(std::isfinite(b.log_v0));
        EXPECT_TRUE(std::isfinite(b.log_rho));
        EXPECT_GE(b.log_Lambda0, 0.0);
      }
}

TEST(Bounds, InvalidDimensions) {
  for (auto [n, k] : {std::pair{3, 0}, std::pair{3, 3}, std::pair{2, 5}, std::pair{1, 1}}) {
    try {
      class_count_bound(n, k, 1.0, 1.0);
      FAIL() << n << " " << k;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidDims);
    }
  }
  EXPECT_THROW(class_count_bound(3, 1, -1.0, 1.0), Error);
}
