#pragma once

// Small dense helpers for points in R^n. Points are contiguous runs of
// doubles (a row of a flat coordinate array), so everything takes spans.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace nir {

using ConstPoint = std::span<const double>;
using MutPoint = std::span<double>;
using Vec = std::vector<double>;

inline double dot(ConstPoint a, ConstPoint b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(ConstPoint a) { return dot(a, a); }
inline double norm(ConstPoint a) { return std::sqrt(norm2(a)); }

inline double dist2(ConstPoint a, ConstPoint b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double dist(ConstPoint a, ConstPoint b) { return std::sqrt(dist2(a, b)); }

inline Vec sub(ConstPoint a, ConstPoint b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec lerp(ConstPoint a, ConstPoint b, double t) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + t * (b[i] - a[i]);
  return r;
}

inline void normalize_in_place(MutPoint a) {
  const double n = norm(a);
  if (n > 0.0)
    for (double& x : a) x /= n;
}

inline Vec normalized(ConstPoint a) {
  Vec r(a.begin(), a.end());
  normalize_in_place(r);
  return r;
}

/// |a|^2 |b|^2 - (a.b)^2 via the Lagrange identity, which avoids the
/// cancellation of the direct form for nearly parallel vectors.
inline double wedge_norm2(ConstPoint a, ConstPoint b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const double w = a[i] * b[j] - a[j] * b[i];
      s += w * w;
    }
  return s;
}

/// Curvature 1/R of the circle through a, b, c (0 for collinear points).
inline double circumcurvature(ConstPoint a, ConstPoint b, ConstPoint c) {
  const Vec u = sub(b, a);
  const Vec w = sub(c, b);
  const double lu = norm(u), lw = norm(w), lac = dist(a, c);
  if (lu == 0.0 || lw == 0.0 || lac == 0.0) return 0.0;
  const double sin_turn = std::sqrt(wedge_norm2(u, w)) / (lu * lw);
  return 2.0 * sin_turn / lac;
}

/// Unit tangent at b of the circle through a, b, c, oriented from a to c.
/// Proportional to u/|u|^2 + w/|w|^2 with u = b - a, w = c - b.
inline Vec circumtangent(ConstPoint a, ConstPoint b, ConstPoint c) {
  const Vec u = sub(b, a);
  const Vec w = sub(c, b);
  const double iu = 1.0 / norm2(u), iw = 1.0 / norm2(w);
  Vec t(u.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = u[i] * iu + w[i] * iw;
  normalize_in_place(t);
  return t;
}

struct SegmentProjection {
  double dist2;
  double t;
};

/// Squared distance from p to the sub-segment a + t (b - a), t in [t0, t1].
inline SegmentProjection project_to_segment(ConstPoint p, ConstPoint a, ConstPoint b, double t0 = 0.0,
                                            double t1 = 1.0) {
  double ab2 = 0.0, apab = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double e = b[i] - a[i];
    ab2 += e * e;
    apab += (p[i] - a[i]) * e;
  }
  double t = ab2 > 0.0 ? apab / ab2 : 0.0;
  t = std::clamp(t, t0, t1);
  double d2 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = a[i] + t * (b[i] - a[i]) - p[i];
    d2 += d * d;
  }
  return {d2, t};
}

struct SegmentPairClosest {
  double dist2;
  double s;
  double t;
};

/// Closest points between segments p0p1 and q0q1 in R^n (Ericson, Real-Time
/// Collision Detection 5.1.9, written dimension-free).
inline SegmentPairClosest closest_segment_segment(ConstPoint p0, ConstPoint p1, ConstPoint q0, ConstPoint q1) {
  const std::size_t n = p0.size();
  double a = 0, e = 0, f = 0, b = 0, c = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d1 = p1[i] - p0[i], d2 = q1[i] - q0[i], r = p0[i] - q0[i];
    a += d1 * d1;
    e += d2 * d2;
    f += d2 * r;
    b += d1 * d2;
    c += d1 * r;
  }
  double s = 0.0, t = 0.0;
  const double denom = a * e - b * b;
  if (denom > 1e-14 * a * e) s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
  t = (b * s + f) / e;
  if (t < 0.0) {
    t = 0.0;
    s = std::clamp(-c / a, 0.0, 1.0);
  } else if (t > 1.0) {
    t = 1.0;
    s = std::clamp((b - c) / a, 0.0, 1.0);
  }
  double d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (p0[i] + s * (p1[i] - p0[i])) - (q0[i] + t * (q1[i] - q0[i]));
    d2 += d * d;
  }
  return {d2, s, t};
}

/// Orthonormal basis of the orthogonal complement of the unit vector t,
/// taken from the columns 2..n of the Householder reflector mapping e_1 to
/// +-t. Deterministic for a given t.
inline std::vector<Vec> normal_basis(ConstPoint t) {
  const std::size_t n = t.size();
  Vec v(t.begin(), t.end());
  const double sign = t[0] >= 0.0 ? 1.0 : -1.0;
  v[0] += sign;  // v = t + sign * e_1
  const double vv = norm2(v);
  std::vector<Vec> basis;
  basis.reserve(n - 1);
  for (std::size_t j = 1; j < n; ++j) {
    Vec col(n, 0.0);
    col[j] = 1.0;
    const double k = 2.0 * v[j] / vv;
    for (std::size_t i = 0; i < n; ++i) col[i] -= k * v[i];
    basis.push_back(std::move(col));
  }
  return basis;
}

/// Radical inverse of i in the given base (van der Corput).
inline double radical_inverse(std::size_t i, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

/// Deterministic low-discrepancy unit vectors on S^{d-1}. d == 1 yields the
/// two points {+1, -1}; d == 2 yields equally spaced angles; higher d maps a
/// Halton sequence through Box-Muller pairs and normalizes.
inline std::vector<Vec> sphere_directions(std::size_t d, std::size_t count) {
  std::vector<Vec> out;
  if (d == 1) {
    out.push_back({1.0});
    out.push_back({-1.0});
    return out;
  }
  if (d == 2) {
    for (std::size_t k = 0; k < count; ++k) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
      out.push_back({std::cos(a), std::sin(a)});
    }
    return out;
  }
  static constexpr unsigned primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  const std::size_t pairs = (d + 1) / 2;
  for (std::size_t k = 1; out.size() < count; ++k) {
    Vec g(2 * pairs);
    for (std::size_t p = 0; p < pairs; ++p) {
      const double u1 = radical_inverse(k, primes[(2 * p) % 16]);
      const double u2 = radical_inverse(k, primes[(2 * p + 1) % 16]);
      const double r = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300)));
      g[2 * p] = r * std::cos(2.0 * std::numbers::pi * u2);
      g[2 * p + 1] = r * std::sin(2.0 * std::numbers::pi * u2);
    }
    g.resize(d);
    if (norm(g) < 1e-12) continue;
    normalize_in_place(g);
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace nir
