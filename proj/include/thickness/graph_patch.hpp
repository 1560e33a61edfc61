#pragma once

// Sampled graphs f: R^k -> R^m on a uniform grid, with first-derivative
// samples, and the second-derivative test against the focal distance of
// the graph.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "extent.hpp"
#include "linalg.hpp"

namespace nir {

using Offset = std::vector<long>;

/// Uniform rectangular grid over a box in R^k carrying f (R^m) and its
/// Jacobian (m x k, row-major) at every node. Nodes are stored row-major
/// with the last axis fastest.
class GraphPatch {
 public:
  GraphPatch() = default;
  GraphPatch(std::size_t k, std::size_t m, Vec origin, double spacing, std::vector<std::size_t> shape)
      : k_(k), m_(m), origin_(std::move(origin)), spacing_(spacing), shape_(std::move(shape)) {
    if (k_ == 0 || m_ == 0) fail(ErrorKind::InvalidDims, "graph patch needs k, m >= 1");
    if (origin_.size() != k_ || shape_.size() != k_) fail(ErrorKind::DimensionMismatch, "origin/shape must have k entries");
    if (!(spacing_ > 0.0)) fail(ErrorKind::InvalidArgument, "grid spacing must be > 0");
    std::size_t n = 1;
    for (std::size_t s : shape_) n *= s;
    values_.assign(n * m_, 0.0);
    jacobian_.assign(n * m_ * k_, 0.0);
  }

  std::size_t k() const { return k_; }
  std::size_t m() const { return m_; }
  const Vec& origin() const { return origin_; }
  double spacing() const { return spacing_; }
  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t node_count() const { return values_.size() / m_; }

  double lipschitz_B() const { return lipschitz_B_; }
  void set_lipschitz_B(double b) { lipschitz_B_ = b; }
  /// Recorded bound A >= |f'| (Frobenius norm).
  double bound_A() const { return bound_A_; }
  void set_bound_A(double a) { bound_A_ = a; }
  /// sup over nodes of the Frobenius norm of f'.
  double measured_A() const {
    double a = 0.0;
    for (std::size_t i = 0; i < node_count(); ++i) a = std::max(a, norm(jacobian(i)));
    return a;
  }

  std::span<double> value(std::size_t node) { return {values_.data() + node * m_, m_}; }
  std::span<const double> value(std::size_t node) const { return {values_.data() + node * m_, m_}; }
  std::span<double> jacobian(std::size_t node) { return {jacobian_.data() + node * m_ * k_, m_ * k_}; }
  std::span<const double> jacobian(std::size_t node) const { return {jacobian_.data() + node * m_ * k_, m_ * k_}; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& jacobians() const { return jacobian_; }
  std::vector<double>& values() { return values_; }
  std::vector<double>& jacobians() { return jacobian_; }

  std::vector<std::size_t> multi_index(std::size_t node) const {
    std::vector<std::size_t> idx(k_);
    for (std::size_t d = k_; d-- > 0;) {
      idx[d] = node % shape_[d];
      node /= shape_[d];
    }
    return idx;
  }
  std::size_t node_at(const std::vector<std::size_t>& idx) const {
    std::size_t node = 0;
    for (std::size_t d = 0; d < k_; ++d) node = node * shape_[d] + idx[d];
    return node;
  }
  /// Node reached from `node` by an integer lattice offset, if inside.
  std::optional<std::size_t> shifted(std::size_t node, const Offset& off, long times = 1) const {
    auto idx = multi_index(node);
    for (std::size_t d = 0; d < k_; ++d) {
      const long j = static_cast<long>(idx[d]) + times * off[d];
      if (j < 0 || j >= static_cast<long>(shape_[d])) return std::nullopt;
      idx[d] = static_cast<std::size_t>(j);
    }
    return node_at(idx);
  }
  Vec position(std::size_t node) const {
    const auto idx = multi_index(node);
    Vec x(k_);
    for (std::size_t d = 0; d < k_; ++d) x[d] = origin_[d] + spacing_ * static_cast<double>(idx[d]);
    return x;
  }
  /// Nearest node to x, if x lies within half a spacing of the grid.
  std::optional<std::size_t> node_near(ConstPoint x) const {
    std::vector<std::size_t> idx(k_);
    for (std::size_t d = 0; d < k_; ++d) {
      const double j = std::round((x[d] - origin_[d]) / spacing_);
      if (j < 0 || j >= static_cast<double>(shape_[d])) return std::nullopt;
      idx[d] = static_cast<std::size_t>(j);
    }
    return node_at(idx);
  }
  /// Does the grid box contain the closed ball B(center, r)?
  bool contains_ball(ConstPoint center, double r) const {
    for (std::size_t d = 0; d < k_; ++d) {
      const double lo = origin_[d], hi = origin_[d] + spacing_ * static_cast<double>(shape_[d] - 1);
      if (center[d] - r < lo - 1e-12 * spacing_ || center[d] + r > hi + 1e-12 * spacing_) return false;
    }
    return true;
  }

  friend bool operator==(const GraphPatch&, const GraphPatch&) = default;

 private:
  std::size_t k_ = 0, m_ = 0;
  Vec origin_;
  double spacing_ = 0.0;
  std::vector<std::size_t> shape_;
  std::vector<double> values_;
  std::vector<double> jacobian_;
  double lipschitz_B_ = 0.0;
  double bound_A_ = 0.0;
};

using PatchFunction = std::function<Vec(ConstPoint)>;
using PatchJacobian = std::function<Vec(ConstPoint)>;  // m x k row-major

/// Samples f and its Jacobian on the grid.
inline GraphPatch sample_patch(std::size_t k, std::size_t m, Vec origin, double spacing,
                               std::vector<std::size_t> shape, const PatchFunction& f, const PatchJacobian& df,
                               double lipschitz_B) {
  GraphPatch p(k, m, std::move(origin), spacing, std::move(shape));
  for (std::size_t i = 0; i < p.node_count(); ++i) {
    const Vec x = p.position(i);
    const Vec v = f(x), j = df(x);
    if (v.size() != m || j.size() != m * k) fail(ErrorKind::DimensionMismatch, "sampled function has wrong shape");
    std::copy(v.begin(), v.end(), p.value(i).begin());
    std::copy(j.begin(), j.end(), p.jacobian(i).begin());
  }
  p.set_lipschitz_B(lipschitz_B);
  p.set_bound_A(p.measured_A());
  return p;
}

/// Cube grid centered at the origin: `half` nodes on each side of 0 along
/// every axis, spacing extent/half.
inline GraphPatch centered_patch(std::size_t k, std::size_t m, double extent, std::size_t half, const PatchFunction& f,
                                 const PatchJacobian& df, double lipschitz_B) {
  const double h = extent / static_cast<double>(half);
  return sample_patch(k, m, Vec(k, -extent), h, std::vector<std::size_t>(k, 2 * half + 1), f, df, lipschitz_B);
}

/// Largest Lipschitz ratio of f' between lattice neighbors (principal and
/// diagonal offsets), a lower estimate of the true constant.
inline double measured_lipschitz(const GraphPatch& p) {
  std::vector<Offset> offs;
  for (std::size_t i = 0; i < p.k(); ++i) {
    Offset e(p.k(), 0);
    e[i] = 1;
    offs.push_back(e);
    for (std::size_t j = i + 1; j < p.k(); ++j) {
      Offset a(p.k(), 0), b(p.k(), 0);
      a[i] = a[j] = 1;
      b[i] = 1;
      b[j] = -1;
      offs.push_back(a);
      offs.push_back(b);
    }
  }
  double best = 0.0;
  for (std::size_t n = 0; n < p.node_count(); ++n)
    for (const auto& off : offs) {
      const auto q = p.shifted(n, off);
      if (!q) continue;
      double len2 = 0.0;
      for (long o : off) len2 += static_cast<double>(o * o);
      best = std::max(best, dist(p.jacobian(n), p.jacobian(*q)) / (std::sqrt(len2) * p.spacing()));
    }
  return best;
}

/// Largest violation of |(f(x+he)-f(x))/h - f'(x).e| <= B h over interior
/// nodes and axis directions (<= 0 when consistent).
inline double finite_difference_excess(const GraphPatch& p) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < p.node_count(); ++n)
    for (std::size_t d = 0; d < p.k(); ++d) {
      Offset e(p.k(), 0);
      e[d] = 1;
      const auto q = p.shifted(n, e);
      if (!q) continue;
      double err2 = 0.0;
      for (std::size_t i = 0; i < p.m(); ++i) {
        const double fd = (p.value(*q)[i] - p.value(n)[i]) / p.spacing();
        const double e2 = fd - p.jacobian(n)[i * p.k() + d];
        err2 += e2 * e2;
      }
      worst = std::max(worst, std::sqrt(err2) - p.lipschitz_B() * p.spacing());
    }
  return worst;
}

namespace detail {

// Integer lattice offset pointing along the unit vector v, if any with
// entries up to 16.
inline Offset lattice_offset(ConstPoint v) {
  double big = 0.0;
  for (double x : v) big = std::max(big, std::abs(x));
  if (!(big > 0.0)) fail(ErrorKind::InvalidArgument, "zero direction");
  for (long q = 1; q <= 16; ++q) {
    Offset off(v.size());
    bool ok = true;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double t = v[i] / big * static_cast<double>(q);
      off[i] = std::lround(t);
      if (std::abs(t - static_cast<double>(off[i])) > 1e-9) ok = false;
    }
    if (ok) return off;
  }
  fail(ErrorKind::InvalidArgument, "direction is not a grid lattice direction");
}

inline double offset_length(const GraphPatch& p, const Offset& off) {
  double s = 0.0;
  for (long o : off) s += static_cast<double>(o * o);
  return std::sqrt(s) * p.spacing();
}

}  // namespace detail

/// Central second difference of f along a lattice offset at step `times`
/// multiples of it; empty when a stencil node falls off the grid.
inline std::optional<Vec> second_difference(const GraphPatch& p, std::size_t node, const Offset& off, long times = 1) {
  const auto a = p.shifted(node, off, times), b = p.shifted(node, off, -times);
  if (!a || !b) return std::nullopt;
  const double t = detail::offset_length(p, off) * static_cast<double>(times);
  Vec d(p.m());
  for (std::size_t i = 0; i < p.m(); ++i) d[i] = (p.value(*a)[i] - 2.0 * p.value(node)[i] + p.value(*b)[i]) / (t * t);
  return d;
}

/// Mixed second derivative d/dx_i (df/dx_j) at a node from central
/// differences of the Jacobian samples along axis i.
inline Vec mixed_second_difference(const GraphPatch& p, std::size_t node, std::size_t i, std::size_t j) {
  Offset e(p.k(), 0);
  e[i] = 1;
  const auto a = p.shifted(node, e), b = p.shifted(node, e, -1);
  if (!a || !b) fail(ErrorKind::BoundaryPoint, "mixed difference stencil leaves the grid");
  Vec d(p.m());
  for (std::size_t r = 0; r < p.m(); ++r)
    d[r] = (p.jacobian(*a)[r * p.k() + j] - p.jacobian(*b)[r * p.k() + j]) / (2.0 * p.spacing());
  return d;
}

/// I(f,p,v,w) = (1 + |f_v|^2) (1 + |grad(f.w)|^2)^(1/2).
inline double curvature_weight(const GraphPatch& p, std::size_t node, ConstPoint v, ConstPoint w) {
  const auto J = p.jacobian(node);
  double fv2 = 0.0;
  for (std::size_t r = 0; r < p.m(); ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < p.k(); ++c) s += J[r * p.k() + c] * v[c];
    fv2 += s * s;
  }
  double g2 = 0.0;
  for (std::size_t c = 0; c < p.k(); ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < p.m(); ++r) s += J[r * p.k() + c] * w[r];
    g2 += s * s;
  }
  return (1.0 + fv2) * std::sqrt(1.0 + g2);
}

/// Largest R for which |f_vv(p).w| <= I(f,p,v,w)/R holds at the node,
/// i.e. I/|f_vv.w|; unbounded when f_vv.w vanishes. v must be a lattice
/// direction of the grid; f_vv is the central second difference along it.
inline Extent curvature_radius_bound(const GraphPatch& p, std::size_t node, ConstPoint v, ConstPoint w) {
  if (v.size() != p.k() || w.size() != p.m()) fail(ErrorKind::DimensionMismatch, "v in R^k, w in R^m expected");
  const Offset off = detail::lattice_offset(v);
  const auto d2 = second_difference(p, node, off);
  if (!d2) fail(ErrorKind::BoundaryPoint, "second difference stencil leaves the grid");
  const Vec vu = normalized(v), wu = normalized(w);
  const double fvvw = std::abs(dot(*d2, wu));
  if (fvvw == 0.0) return Extent::unbounded();
  return Extent::finite(curvature_weight(p, node, vu, wu) / fvvw);
}

struct CertificateWitness {
  Vec point;   // p in R^k
  Vec v;       // unit direction in R^k
  Vec w;       // unit codirection in R^m, oriented so f_vv.w > 0
  Vec normal;  // n = (-grad(f.w), w)/|.| in R^(k+m)
  Vec center;  // (p, f(p)) + R n
  double second_derivative = 0.0;  // f_vv.w minus its error margin
  double weight = 0.0;             // I(f,p,v,w)
};

enum class CertificateVerdict { FocalAtLeast, FocalLessThan };

/// Sampled certificate: FocalAtLeast(R) means no scanned (p, v, w) violates
/// the necessary condition, which is evidence, not a proof.
struct CertificateResult {
  CertificateVerdict verdict = CertificateVerdict::FocalAtLeast;
  double R = 0.0;
  std::optional<CertificateWitness> witness;
};

inline const char* to_string(CertificateVerdict v) {
  return v == CertificateVerdict::FocalAtLeast ? "FocalAtLeast" : "FocalLessThan";
}

/// Principal and diagonal lattice directions of R^k.
inline std::vector<Offset> scan_offsets(std::size_t k) {
  std::vector<Offset> out;
  for (std::size_t i = 0; i < k; ++i) {
    Offset e(k, 0);
    e[i] = 1;
    out.push_back(e);
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      Offset a(k, 0), b(k, 0);
      a[i] = a[j] = 1;
      b[i] = 1;
      b[j] = -1;
      out.push_back(a);
      out.push_back(b);
    }
  return out;
}

/// Fixed codirection set in R^m: axes and normalized pairwise sums and
/// differences of axes.
inline std::vector<Vec> scan_codirections(std::size_t m) {
  std::vector<Vec> out;
  for (std::size_t i = 0; i < m; ++i) {
    Vec e(m, 0.0);
    e[i] = 1.0;
    out.push_back(e);
  }
  const double s = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      Vec a(m, 0.0), b(m, 0.0);
      a[i] = a[j] = s;
      b[i] = s;
      b[j] = -s;
      out.push_back(a);
      out.push_back(b);
    }
  return out;
}

/// Scans interior nodes, principal and diagonal v and a fixed w set for
/// |f_vv.w| - margin > I/R, where the margin |D(2t) - D(t)|/3 estimates the
/// error of the second difference D(t). The most violating (p, v, w) by
/// ratio R |f_vv.w| / I is returned as witness.
inline CertificateResult focal_certificate(const GraphPatch& p, double R) {
  if (!(R > 0.0)) fail(ErrorKind::InvalidArgument, "R must be > 0");
  CertificateResult res;
  res.R = R;
  const auto offs = scan_offsets(p.k());
  const auto ws = scan_codirections(p.m());
  double best_ratio = 1.0;
  for (std::size_t n = 0; n < p.node_count(); ++n)
    for (const auto& off : offs) {
      const auto d1 = second_difference(p, n, off, 1);
      const auto d2 = second_difference(p, n, off, 2);
      if (!d1 || !d2) continue;
      Vec v(p.k());
      for (std::size_t i = 0; i < p.k(); ++i) v[i] = static_cast<double>(off[i]);
      normalize_in_place(v);
      for (const auto& w : ws) {
        const double a = dot(*d1, w);
        const double margin = std::abs(dot(*d2, w) - a) / 3.0;
        const double lower = std::abs(a) - margin;
        if (!(lower > 0.0)) continue;
        const double I = curvature_weight(p, n, v, w);
        const double ratio = R * lower / I;
        if (ratio <= best_ratio) continue;
        best_ratio = ratio;
        CertificateWitness wit;
        wit.point = p.position(n);
        wit.v = v;
        wit.w = w;
        if (a < 0)
          for (double& x : wit.w) x = -x;
        wit.second_derivative = lower;
        wit.weight = I;
        const auto J = p.jacobian(n);
        Vec nrm(p.k() + p.m());
        for (std::size_t c = 0; c < p.k(); ++c) {
          double s = 0.0;
          for (std::size_t r = 0; r < p.m(); ++r) s += J[r * p.k() + c] * wit.w[r];
          nrm[c] = -s;
        }
        for (std::size_t r = 0; r < p.m(); ++r) nrm[p.k() + r] = wit.w[r];
        normalize_in_place(nrm);
        wit.normal = nrm;
        wit.center.resize(p.k() + p.m());
        for (std::size_t c = 0; c < p.k(); ++c) wit.center[c] = wit.point[c] + R * nrm[c];
        for (std::size_t r = 0; r < p.m(); ++r) wit.center[p.k() + r] = p.value(n)[r] + R * nrm[p.k() + r];
        res.witness = std::move(wit);
      }
    }
  if (res.witness) res.verdict = CertificateVerdict::FocalLessThan;
  return res;
}

/// A period-pi angular profile h for the surface z = r^2 h(theta) / 2.
struct AngularProfile {
  std::string name;
  std::function<double(double)> h;
  std::function<double(double)> dh;
  /// h'(0).
  double slope = 0.0;
};

inline AngularProfile flat_profile() {
  return {"flat", [](double) { return 0.0; }, [](double) { return 0.0; }, 0.0};
}

inline AngularProfile paraboloid_profile() {
  return {"paraboloid", [](double) { return 1.0; }, [](double) { return 0.0; }, 0.0};
}

/// h(theta) = tanh(n sin(theta) cos(theta)) / tanh(n/2): sup |h| = 1 and a
/// steep transition through 0 with h'(0) = n / tanh(n/2) >= n.
inline AngularProfile spike_profile(double n) {
  const double scale = 1.0 / std::tanh(0.5 * n);
  return {"spike",
          [n, scale](double th) { return scale * std::tanh(n * std::sin(th) * std::cos(th)); },
          [n, scale](double th) {
            const double t = std::tanh(n * std::sin(th) * std::cos(th));
            return scale * (1.0 - t * t) * n * std::cos(2.0 * th);
          },
          n * scale};
}

/// z = f(x, y) = r^2 h(theta) / 2 sampled on the square [-extent, extent]^2
/// with `half` nodes on each side of the origin; the Jacobian is the closed
/// form f_x = x h - y h'/2, f_y = y h + x h'/2.
inline GraphPatch angular_surface(const AngularProfile& prof, std::size_t half, double extent = 1.0) {
  auto f = [&](ConstPoint x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    if (r2 == 0.0) return Vec{0.0};
    return Vec{0.5 * r2 * prof.h(std::atan2(x[1], x[0]))};
  };
  auto df = [&](ConstPoint x) {
    if (x[0] == 0.0 && x[1] == 0.0) return Vec{0.0, 0.0};
    const double th = std::atan2(x[1], x[0]);
    const double h = prof.h(th), dh = prof.dh(th);
    return Vec{x[0] * h - 0.5 * x[1] * dh, x[1] * h + 0.5 * x[0] * dh};
  };
  GraphPatch p = centered_patch(2, 1, extent, half, f, df, 0.0);
  p.set_lipschitz_B(measured_lipschitz(p));
  return p;
}

/// f(x) = x^2/2 on |x| <= 1 and |x| - 1/2 outside (A = 1, B = 1) on
/// [-extent, extent] with `half` nodes on each side of 0.
inline GraphPatch smoothed_abs_patch(double extent, std::size_t half) {
  auto f = [](ConstPoint x) { return Vec{std::abs(x[0]) <= 1.0 ? 0.5 * x[0] * x[0] : std::abs(x[0]) - 0.5}; };
  auto df = [](ConstPoint x) { return Vec{std::clamp(x[0], -1.0, 1.0)}; };
  GraphPatch p = centered_patch(1, 1, extent, half, f, df, 1.0);
  p.set_bound_A(1.0);
  return p;
}

/// Random f: R^k -> R^m with Lipschitz gradient: per output a sum of four
/// random plane waves plus a Huber ramp along a random direction, which is
/// C^{1,1} but not C^2. A and B are the analytic Frobenius-norm bounds.
inline GraphPatch random_lipschitz_patch(std::uint64_t seed, std::size_t k, std::size_t m, double extent,
                                         std::size_t half) {
  constexpr std::size_t waves = 4;
  constexpr double tau = 0.25;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> freq(-3.0, 3.0), amp(-0.3, 0.3), phase(0.0, 2.0 * std::numbers::pi),
      unit(-1.0, 1.0);
  std::vector<Vec> omega(waves, Vec(k));
  Vec phi(waves);
  for (std::size_t j = 0; j < waves; ++j) {
    for (double& x : omega[j]) x = freq(rng);
    phi[j] = phase(rng);
  }
  std::vector<Vec> a(m, Vec(waves));
  Vec c(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (double& x : a[i]) x = amp(rng);
    c[i] = unit(rng);
  }
  Vec u(k);
  for (double& x : u) x = unit(rng);
  normalize_in_place(u);
  const double shift = 0.2 * unit(rng);

  auto huber = [](double s) { return std::abs(s) <= tau ? s * s / (2.0 * tau) : std::abs(s) - 0.5 * tau; };
  auto f = [&](ConstPoint x) {
    Vec v(m, 0.0);
    const double s = dot(u, x) - shift;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < waves; ++j) v[i] += a[i][j] * std::cos(dot(omega[j], x) + phi[j]);
      v[i] += c[i] * huber(s);
    }
    return v;
  };
  auto df = [&](ConstPoint x) {
    Vec J(m * k, 0.0);
    const double g = std::clamp((dot(u, x) - shift) / tau, -1.0, 1.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t d = 0; d < k; ++d) {
        double s = c[i] * g * u[d];
        for (std::size_t j = 0; j < waves; ++j) s -= a[i][j] * std::sin(dot(omega[j], x) + phi[j]) * omega[j][d];
        J[i * k + d] = s;
      }
    return J;
  };
  double A2 = 0.0, B2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double ai = std::abs(c[i]), bi = std::abs(c[i]) / tau;
    for (std::size_t j = 0; j < waves; ++j) {
      ai += std::abs(a[i][j]) * norm(omega[j]);
      bi += std::abs(a[i][j]) * norm2(omega[j]);
    }
    A2 += ai * ai;
    B2 += bi * bi;
  }
  GraphPatch p = centered_patch(k, m, extent, half, f, df, std::sqrt(B2));
  p.set_bound_A(std::sqrt(A2));
  return p;
}

}  // namespace nir
