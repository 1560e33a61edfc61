#pragma once

// Curve generators for tests, experiments and the CLI.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "curve.hpp"
#include "errors.hpp"
#include "linalg.hpp"

namespace nir::fixtures {

using Parametric = std::function<Vec(double)>;  // closed curve on [0, 1)

/// Samples a closed parametric curve at n points equally spaced in
/// arclength. The length table is built on a dense parameter grid and
/// inverted piecewise linearly, then the exact curve is evaluated.
inline std::vector<double> sample_by_arclength(const Parametric& f, std::size_t n, std::size_t oversample = 32) {
  const std::size_t m = n * oversample;
  std::vector<double> cum(m + 1, 0.0);
  Vec prev = f(0.0);
  for (std::size_t i = 1; i <= m; ++i) {
    const Vec cur = f(static_cast<double>(i) / static_cast<double>(m));
    cum[i] = cum[i - 1] + dist(prev, cur);
    prev = cur;
  }
  const double L = cum[m];
  std::vector<double> out;
  std::size_t j = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double target = L * static_cast<double>(k) / static_cast<double>(n);
    while (j + 1 < m && cum[j + 1] <= target) ++j;
    const double w = (target - cum[j]) / (cum[j + 1] - cum[j]);
    const Vec p = f((static_cast<double>(j) + w) / static_cast<double>(m));
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

inline std::vector<double> sample_uniform(const Parametric& f, std::size_t n) {
  std::vector<double> out;
  for (std::size_t k = 0; k < n; ++k) {
    const Vec p = f(static_cast<double>(k) / static_cast<double>(n));
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

/// Regular n-gon inscribed in the circle of the given radius, in the x-y
/// plane of R^dim.
inline DiscreteCurve circle(std::size_t n, double radius = 1.0, std::size_t dim = 2) {
  const auto f = [&](double u) {
    Vec p(dim, 0.0);
    p[0] = radius * std::cos(2.0 * std::numbers::pi * u);
    p[1] = radius * std::sin(2.0 * std::numbers::pi * u);
    return p;
  };
  return build_curve_flat({sample_uniform(f, n)}, dim);
}

inline Parametric ellipse_curve(double a, double b) {
  return [a, b](double u) {
    const double th = 2.0 * std::numbers::pi * u;
    return Vec{a * std::cos(th), b * std::sin(th)};
  };
}

inline DiscreteCurve ellipse(double a, double b, std::size_t n) {
  return build_curve_flat({sample_uniform(ellipse_curve(a, b), n)}, 2);
}

/// Two semicircles of the given radius joined by straight flats of length
/// `flat`; the flats are 2*radius apart.
inline Parametric stadium_curve(double radius, double flat) {
  return [radius, flat](double u) {
    const double arc = std::numbers::pi * radius;
    const double L = 2.0 * flat + 2.0 * arc;
    double s = u * L;
    const double h = 0.5 * flat;
    if (s < flat) return Vec{-h + s, -radius};
    s -= flat;
    if (s < arc) {
      const double a = -0.5 * std::numbers::pi + s / radius;
      return Vec{h + radius * std::cos(a), radius * std::sin(a)};
    }
    s -= arc;
    if (s < flat) return Vec{h - s, radius};
    s -= flat;
    const double a = 0.5 * std::numbers::pi + s / radius;
    return Vec{-h + radius * std::cos(a), radius * std::sin(a)};
  };
}

inline DiscreteCurve stadium(std::size_t n, double radius = 1.0, double flat = 4.0) {
  return build_curve_flat({sample_uniform(stadium_curve(radius, flat), n)}, 2);
}

/// Square with rounded corners: four quarter circles of the given radius
/// joined by flats of length `flat`.
inline Parametric rounded_square_curve(double radius, double flat) {
  return [radius, flat](double u) {
    const double q = 0.5 * std::numbers::pi * radius;
    const double side = flat + q;
    const double L = 4.0 * side;
    const double s = u * L;
    const int k = std::min(3, static_cast<int>(s / side));
    const double r = s - k * side;
    const double h = 0.5 * flat;
    Vec p(2);
    if (r < flat) {
      p = {-h + r, -h - radius};
    } else {
      const double a = -0.5 * std::numbers::pi + (r - flat) / radius;
      p = {h + radius * std::cos(a), -h + radius * std::sin(a)};
    }
    const double rot = 0.5 * std::numbers::pi * k;
    const double c = std::cos(rot), sn = std::sin(rot);
    return Vec{c * p[0] - sn * p[1], sn * p[0] + c * p[1]};
  };
}

inline DiscreteCurve rounded_square(std::size_t n, double radius = 0.5, double flat = 1.0) {
  return build_curve_flat({sample_uniform(rounded_square_curve(radius, flat), n)}, 2);
}

/// Two coplanar concentric circles.
inline DiscreteCurve concentric(std::size_t n_inner, std::size_t n_outer, double r_inner = 1.0, double r_outer = 3.0) {
  const DiscreteCurve a = circle(n_inner, r_inner), b = circle(n_outer, r_outer);
  return build_curve_flat({a.ring(0).coords(), b.ring(0).coords()}, 2);
}

/// The (2,3) torus knot on a torus with radii 2 and 1.
inline Parametric trefoil_curve() {
  return [](double u) {
    const double t = 2.0 * std::numbers::pi * u;
    const double r = 2.0 + std::cos(3.0 * t);
    return Vec{r * std::cos(2.0 * t), r * std::sin(2.0 * t), std::sin(3.0 * t)};
  };
}

inline DiscreteCurve trefoil(std::size_t n) { return build_curve_flat({sample_by_arclength(trefoil_curve(), n)}, 3); }

/// Radial Fourier perturbation of the unit circle,
/// r(th) = 1 + sum_k (a_k cos k th + b_k sin k th), with independent
/// coefficients drawn from the seed.
struct FourierRadius {
  std::vector<double> a, b;  // index k = 0 unused
  double operator()(double th) const {
    double r = 1.0;
    for (std::size_t k = 1; k < a.size(); ++k) r += a[k] * std::cos(k * th) + b[k] * std::sin(k * th);
    return r;
  }
};

inline FourierRadius random_fourier_radius(std::uint64_t seed, std::size_t k_min, std::size_t k_max, double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FourierRadius fr;
  fr.a.assign(k_max + 1, 0.0);
  fr.b.assign(k_max + 1, 0.0);
  double total = 0.0;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    fr.a[k] = u(rng);
    fr.b[k] = u(rng);
    total += std::hypot(fr.a[k], fr.b[k]);
  }
  if (total > 0)
    for (std::size_t k = k_min; k <= k_max; ++k) {
      fr.a[k] *= amplitude / total;
      fr.b[k] *= amplitude / total;
    }
  return fr;
}

/// Unit circle with a smooth random radial perturbation of peak size at
/// most `amplitude` made of Fourier modes 2..4.
inline DiscreteCurve perturbed_circle(std::size_t n, double amplitude, std::uint64_t seed) {
  const FourierRadius fr = random_fourier_radius(seed, 2, 4, amplitude);
  const auto f = [&](double u) {
    const double th = 2.0 * std::numbers::pi * u;
    const double r = fr(th);
    return Vec{r * std::cos(th), r * std::sin(th)};
  };
  return build_curve_flat({sample_by_arclength(f, n)}, 2);
}

/// Random smooth closed curve given by trigonometric polynomials of degree
/// at most `degree`. Even seeds give planar star-shaped curves, odd seeds
/// add an out-of-plane trigonometric height and live in R^3. Radial
/// coefficients sum to at most 0.3, which keeps the curve embedded.
inline Parametric random_trig_curve(std::uint64_t seed, std::size_t degree = 5) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + 1);
  std::uniform_int_distribution<std::size_t> deg(2, degree);
  const std::size_t d = deg(rng);
  const FourierRadius fr = random_fourier_radius(rng(), 1, d, 0.3);
  FourierRadius height = random_fourier_radius(rng(), 1, d, 0.4);
  const bool spatial = seed % 2 == 1;
  return [fr, height, spatial](double u) {
    const double th = 2.0 * std::numbers::pi * u;
    const double r = fr(th);
    if (!spatial) return Vec{r * std::cos(th), r * std::sin(th)};
    return Vec{r * std::cos(th), r * std::sin(th), height(th) - 1.0};
  };
}

inline DiscreteCurve random_trig(std::uint64_t seed, std::size_t n, std::size_t degree = 5) {
  const bool spatial = seed % 2 == 1;
  return build_curve_flat({sample_by_arclength(random_trig_curve(seed, degree), n)}, spatial ? 3 : 2);
}

/// Moves every vertex of `curve` along its normal space by a smooth random
/// field of Fourier modes 1..4 in arclength, scaled so the largest
/// displacement equals `amplitude`. The result is not validated.
inline DiscreteCurve normal_perturbation(const DiscreteCurve& curve, double amplitude, std::uint64_t seed) {
  const TangentField tangents = estimate_tangents(curve);
  const std::size_t dim = curve.dim();
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> rings;
  std::vector<std::vector<double>> shift;
  double peak = 0.0;
  for (std::size_t c = 0; c < curve.component_count(); ++c) {
    const Ring& r = curve.ring(c);
    std::vector<FourierRadius> field;
    for (std::size_t d = 0; d < dim; ++d) field.push_back(random_fourier_radius(rng(), 1, 4, 1.0));
    auto& sh = shift.emplace_back(r.coords().size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double th = 2.0 * std::numbers::pi * r.arclength_at(i) / r.length();
      Vec v(dim);
      for (std::size_t d = 0; d < dim; ++d) v[d] = field[d](th) - 1.0;
      const auto t = tangents.at(c, i);
      const double along = dot(v, t);
      for (std::size_t d = 0; d < dim; ++d) v[d] -= along * t[d];
      peak = std::max(peak, norm(v));
      std::copy(v.begin(), v.end(), sh.begin() + static_cast<std::ptrdiff_t>(i * dim));
    }
  }
  const double scale = peak > 0.0 ? amplitude / peak : 0.0;
  for (std::size_t c = 0; c < curve.component_count(); ++c) {
    const auto& src = curve.ring(c).coords();
    auto& out = rings.emplace_back(src.begin(), src.end());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += scale * shift[c][j];
  }
  return DiscreteCurve::unchecked(dim, std::move(rings));
}

}  // namespace nir::fixtures
