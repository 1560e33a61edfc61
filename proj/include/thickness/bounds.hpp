#pragma once

// A-priori bounds on the number of isotopy classes of closed k-manifolds in
// a ball of radius r in R^n whose thickness is at least epsilon. Constants
// blow up double-exponentially, so every quantity is carried as a natural
// logarithm and also in natural scale when it fits in a double.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "errors.hpp"

namespace nir {

struct BoundsReport {
  int n = 0;
  int k = 0;
  double r = 0.0;
  double epsilon = 0.0;
  /// Rescaled ambient radius r / epsilon.
  double R = 0.0;

  double log_d0 = 0.0;
  double log_v0 = 0.0;
  /// Lower bound for the injectivity radius used downstream: pi for k = 1,
  /// exp(-(n/2)(8R)^n) for k >= 2.
  double log_i0 = 0.0;
  /// Sharper volume-based lower bound min(pi, (pi v0 / alpha_n) sinh^{1-n} d0).
  double log_i0_volume = 0.0;
  /// min(d2/3, i0/4, d3) with d2 = 1/2, d3 = 1/8.
  double log_rho = 0.0;
  /// (16R / i0)^n, floored at one ball.
  double log_Lambda0 = 0.0;
  /// (4R / rho)^n from the covering argument.
  double log_cover = 0.0;

  /// Natural-scale values, absent when they overflow or underflow a double.
  std::optional<double> d0, v0, i0, i0_volume, rho, Lambda0, cover;

  /// The class bound is 2^Lambda0; its exponent is Lambda0.
  std::optional<double> class_bound_exponent() const { return Lambda0; }
};

/// log vol(S^j(1)) = log(2 pi^{(j+1)/2} / Gamma((j+1)/2)).
inline double log_sphere_volume(int j) {
  const double h = 0.5 * static_cast<double>(j + 1);
  return std::log(2.0) + h * std::log(std::numbers::pi) - std::lgamma(h);
}

/// log sinh(x) for x > 0 without overflow.
inline double log_sinh(double x) {
  if (x > 20.0) return x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x));
  return std::log(std::sinh(x));
}

/// exp(log_value) when it is a normal double, else nothing. `direct` is the
/// same quantity evaluated without logarithms, used when in range so that
/// exact inputs stay exact.
inline std::optional<double> natural_scale(double log_value, double direct) {
  constexpr double limit = 700.0;
  if (!(std::abs(log_value) < limit)) return std::nullopt;
  return std::isfinite(direct) && direct > 0.0 ? direct : std::exp(log_value);
}

inline BoundsReport class_count_bound(int n, int k, double r, double epsilon) {
  if (!(k >= 1 && n > k))
    fail(ErrorKind::InvalidDims, "need n > k >= 1, got n = " + std::to_string(n) + ", k = " + std::to_string(k));
  if (!(r > 0.0) || !(epsilon > 0.0)) fail(ErrorKind::InvalidArgument, "r and epsilon must be > 0");

  BoundsReport b;
  b.n = n;
  b.k = k;
  b.r = r;
  b.epsilon = epsilon;
  b.R = r / epsilon;
  const double dn = static_cast<double>(n);
  const double log_8R_n = dn * std::log(8.0 * b.R);

  b.log_d0 = log_8R_n - std::log(2.0);
  b.log_v0 = std::log(dn - 1.0) + log_sphere_volume(n) - std::log(dn) - log_sphere_volume(n - k - 1) + (1.0 - dn);

  const double d0 = std::exp(b.log_d0);
  const double log_hk = std::log(std::numbers::pi) + b.log_v0 - log_sphere_volume(n) +
                        (std::isfinite(d0) ? (1.0 - dn) * log_sinh(d0) : -std::numeric_limits<double>::infinity());
  b.log_i0_volume = std::min(std::log(std::numbers::pi), log_hk);
  b.log_i0 = k == 1 ? std::log(std::numbers::pi) : -0.5 * dn * std::exp(log_8R_n);

  b.log_rho = std::min({std::log(0.5 / 3.0), b.log_i0 - std::log(4.0), std::log(0.125)});
  b.log_cover = dn * (std::log(4.0 * b.R) - b.log_rho);
  b.log_Lambda0 = std::max(0.0, dn * (std::log(16.0 * b.R) - b.log_i0));

  const double pi = std::numbers::pi;
  b.d0 = natural_scale(b.log_d0, 0.5 * std::pow(8.0 * b.R, dn));
  b.v0 = natural_scale(b.log_v0, std::exp(b.log_v0));
  b.i0 = natural_scale(b.log_i0, k == 1 ? pi : std::exp(b.log_i0));
  b.i0_volume = natural_scale(b.log_i0_volume, std::exp(b.log_i0_volume));
  if (b.i0) {
    b.rho = std::min({0.5 / 3.0, *b.i0 / 4.0, 0.125});
    b.cover = natural_scale(b.log_cover, std::pow(4.0 * b.R / *b.rho, dn));
    b.Lambda0 = natural_scale(b.log_Lambda0, std::max(1.0, std::pow(16.0 * b.R / *b.i0, dn)));
  } else {
    b.rho = natural_scale(b.log_rho, std::exp(b.log_rho));
    b.cover = natural_scale(b.log_cover, std::exp(b.log_cover));
    b.Lambda0 = natural_scale(b.log_Lambda0, std::exp(b.log_Lambda0));
  }
  if (b.log_Lambda0 == 0.0) b.Lambda0 = 1.0;
  return b;
}

}  // namespace nir
