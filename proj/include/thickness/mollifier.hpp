#pragma once

// Localized mollification of a sampled graph: h = (1 - phi) f + phi g with
// g the eta-weighted average of f at scale delta and phi a radial cutoff
// equal to 1 on B(0, rho) and 0 outside B(0, 2 rho).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"
#include "graph_patch.hpp"
#include "linalg.hpp"
#include "parallel.hpp"

namespace nir {

/// Bump profile: eta = 1 on [0, 1/2], 0 on [1, inf), decreasing in between
/// with -eta' a trapezoid of height 2.25 whose edges are cubic smoothsteps
/// of width 1/18. eta is C^2 and piecewise quartic; |eta''| <= 60.75.
struct Eta {
  static constexpr double kSlope = 2.25;
  static constexpr double kRamp = 1.0 / 18.0;

  double operator()(double s) const {
    if (s <= 0.5) return 1.0;
    if (s >= 1.0) return 0.0;
    const double a = s - 0.5;
    if (a <= kRamp) return 1.0 - kSlope * kRamp * step_integral(a / kRamp);
    if (s >= 1.0 - kRamp) return kSlope * kRamp * step_integral((1.0 - s) / kRamp);
    return 1.0 - kSlope * (0.5 * kRamp + (a - kRamp));
  }
  double d1(double s) const {
    if (s <= 0.5 || s >= 1.0) return 0.0;
    const double a = s - 0.5;
    if (a <= kRamp) return -kSlope * step(a / kRamp);
    if (s >= 1.0 - kRamp) return -kSlope * step((1.0 - s) / kRamp);
    return -kSlope;
  }
  double d2(double s) const {
    if (s <= 0.5 || s >= 1.0) return 0.0;
    const double a = s - 0.5;
    if (a <= kRamp) return -kSlope * step_slope(a / kRamp) / kRamp;
    if (s >= 1.0 - kRamp) return kSlope * step_slope((1.0 - s) / kRamp) / kRamp;
    return 0.0;
  }

  /// Polynomial pieces of eta on [0, 1], for exact quadrature.
  static constexpr std::array<double, 5> breaks{0.0, 0.5, 0.5 + kRamp, 1.0 - kRamp, 1.0};

 private:
  static double step(double x) { return x * x * (3.0 - 2.0 * x); }
  static double step_slope(double x) { return 6.0 * x * (1.0 - x); }
  static double step_integral(double x) { return x * x * x * (1.0 - 0.5 * x); }
};

struct EtaBounds {
  double min_value, max_value;
  double min_d1, max_d1;
  double max_abs_d2;
  double plateau_defect;  // max |eta - 1| on [0, 1/2]
  double support_defect;  // max |eta| on [1, 2]
};

/// eta, eta', eta'' at `samples` evenly spaced points of [0, 2].
inline EtaBounds measure_eta(std::size_t samples = 10000) {
  const Eta eta;
  EtaBounds b{1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i <= samples; ++i) {
    const double s = 2.0 * static_cast<double>(i) / static_cast<double>(samples);
    const double v = eta(s), d = eta.d1(s);
    b.min_value = std::min(b.min_value, v);
    b.max_value = std::max(b.max_value, v);
    b.min_d1 = std::min(b.min_d1, d);
    b.max_d1 = std::max(b.max_d1, d);
    b.max_abs_d2 = std::max(b.max_abs_d2, std::abs(eta.d2(s)));
    if (s <= 0.5) b.plateau_defect = std::max(b.plateau_defect, std::abs(v - 1.0));
    if (s >= 1.0) b.support_defect = std::max(b.support_defect, std::abs(v));
  }
  return b;
}

namespace detail {

// 8-point Gauss-Legendre on [a, b]; exact for polynomials of degree <= 15.
template <typename F>
double gauss_legendre8(F&& f, double a, double b) {
  static constexpr double x[] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
  static constexpr double w[] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += w[i] * (f(c - h * x[i]) + f(c + h * x[i]));
  return h * s;
}

}  // namespace detail

/// Surface area of the unit sphere S^{k-1} in R^k.
inline double unit_sphere_area(std::size_t k) {
  const double h = 0.5 * static_cast<double>(k);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

/// int_0^1 eta(s) s^(k-1) ds, exact on each polynomial piece.
inline double eta_radial_moment(std::size_t k) {
  const Eta eta;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < Eta::breaks.size(); ++i)
    total += detail::gauss_legendre8(
        [&](double s) { return eta(s) * std::pow(s, static_cast<double>(k) - 1.0); }, Eta::breaks[i],
        Eta::breaks[i + 1]);
  return total;
}

/// c_delta with c_delta * int_{|u| <= delta} eta(|u|/delta) du = 1 in R^k.
inline double normalization_constant(std::size_t k, double delta) {
  return 1.0 / (unit_sphere_area(k) * std::pow(delta, static_cast<double>(k)) * eta_radial_moment(k));
}

struct MollifierSpec {
  double delta = 0.0;
  double rho = 0.0;
};

/// Constants of the cutoff phi(x) = eta(|x| / (2 rho)) in R^k:
/// a = sup |grad phi| and b = sup |Hess phi| (operator norm).
struct CutoffConstants {
  double a = 0.0;
  double b = 0.0;
};

inline CutoffConstants cutoff_constants(std::size_t k, double rho, std::size_t samples = 10000) {
  const Eta eta;
  CutoffConstants c;
  for (std::size_t i = 0; i <= samples; ++i) {
    const double s = 0.5 + 0.5 * static_cast<double>(i) / static_cast<double>(samples);
    const double r = 2.0 * rho * s;
    const double radial = std::abs(eta.d1(s)) / (2.0 * rho);
    double hess = std::abs(eta.d2(s)) / (4.0 * rho * rho);
    if (k > 1) hess = std::max(hess, radial / r);
    c.a = std::max(c.a, radial);
    c.b = std::max(c.b, hess);
  }
  return c;
}

/// Inputs and measured outputs of one mollify call.
struct MollifyConstants {
  double delta = 0.0, rho = 0.0;
  double A = 0.0, B = 0.0;  // of the input patch
  double a = 0.0, b = 0.0;  // of the cutoff
  double c_delta = 0.0;
  /// |c_delta h^k sum of stencil weights - 1|: error of the grid quadrature.
  double quadrature_defect = 0.0;
  std::size_t stencil_size = 0;
};

struct MollifiedPatch {
  GraphPatch patch;
  /// The pure convolution g and its Jacobian at nodes inside B(0, 2 rho).
  std::vector<double> convolution;
  std::vector<double> convolution_jacobian;
  std::vector<char> in_support;
  MollifyConstants constants;
};

/// Samples of h = (1 - phi) f + phi g and of
/// h' = (1 - phi) f' + phi g' + (g - f) (x) grad phi, with g and g' the
/// normalized eta-weighted grid averages of f and f' over |u| < delta.
/// Nodes outside B(0, 2 rho) are copied unchanged.
inline MollifiedPatch mollify(const GraphPatch& f, const MollifierSpec& spec) {
  if (!(spec.delta > 0.0) || !(spec.rho > 0.0)) fail(ErrorKind::InvalidArgument, "delta and rho must be > 0");
  const std::size_t k = f.k(), m = f.m();
  const double h = f.spacing();
  if (spec.delta < 4.0 * h * (1.0 - 1e-12))
    fail(ErrorKind::InvalidArgument, "delta must be at least 4 grid spacings");
  const Vec zero(k, 0.0);
  if (!f.contains_ball(zero, 2.0 * spec.rho + spec.delta))
    fail(ErrorKind::DomainTooSmall, "grid does not contain B(0, 2 rho + delta)");

  const Eta eta;
  const long reach = static_cast<long>(std::floor(spec.delta / h));
  std::vector<Offset> offs;
  std::vector<double> weights;
  double wsum = 0.0;
  {
    Offset o(k, -reach);
    while (true) {
      double r2 = 0.0;
      for (long x : o) r2 += static_cast<double>(x * x);
      const double s = std::sqrt(r2) * h / spec.delta;
      if (s < 1.0) {
        const double w = eta(s);
        if (w > 0.0) {
          offs.push_back(o);
          weights.push_back(w);
          wsum += w;
        }
      }
      std::size_t d = 0;
      while (d < k && ++o[d] > reach) o[d++] = -reach;
      if (d == k) break;
    }
  }

  MollifiedPatch out;
  out.patch = f;
  out.convolution.assign(f.node_count() * m, 0.0);
  out.convolution_jacobian.assign(f.node_count() * m * k, 0.0);
  out.in_support.assign(f.node_count(), 0);
  auto& C = out.constants;
  C.delta = spec.delta;
  C.rho = spec.rho;
  C.A = f.bound_A();
  C.B = f.lipschitz_B();
  const auto cc = cutoff_constants(k, spec.rho);
  C.a = cc.a;
  C.b = cc.b;
  C.c_delta = normalization_constant(k, spec.delta);
  C.quadrature_defect = std::abs(C.c_delta * std::pow(h, static_cast<double>(k)) * wsum - 1.0);
  C.stencil_size = offs.size();

  for_each_chunk(f.node_count(), 256, [&](std::size_t, std::size_t b, std::size_t e) {
    Vec g(m), dg(m * k);
    for (std::size_t n = b; n < e; ++n) {
      const Vec x = f.position(n);
      const double r = norm(x);
      const double s = r / (2.0 * spec.rho);
      if (s >= 1.0) continue;
      std::fill(g.begin(), g.end(), 0.0);
      std::fill(dg.begin(), dg.end(), 0.0);
      for (std::size_t q = 0; q < offs.size(); ++q) {
        const std::size_t nb = *f.shifted(n, offs[q]);
        const double w = weights[q] / wsum;
        const auto fv = f.value(nb);
        const auto fj = f.jacobian(nb);
        for (std::size_t i = 0; i < m; ++i) g[i] += w * fv[i];
        for (std::size_t i = 0; i < m * k; ++i) dg[i] += w * fj[i];
      }
      const double phi = eta(s);
      const double dphi = r > 0.0 ? eta.d1(s) / (2.0 * spec.rho) : 0.0;
      const auto fv = f.value(n);
      const auto fj = f.jacobian(n);
      auto hv = out.patch.value(n);
      auto hj = out.patch.jacobian(n);
      for (std::size_t i = 0; i < m; ++i) {
        hv[i] = (1.0 - phi) * fv[i] + phi * g[i];
        out.convolution[n * m + i] = g[i];
        for (std::size_t d = 0; d < k; ++d) {
          const double grad = r > 0.0 ? dphi * x[d] / r : 0.0;
          hj[i * k + d] = (1.0 - phi) * fj[i * k + d] + phi * dg[i * k + d] + (g[i] - fv[i]) * grad;
        }
      }
      std::copy(dg.begin(), dg.end(), out.convolution_jacobian.begin() + static_cast<std::ptrdiff_t>(n * m * k));
      out.in_support[n] = 1;
    }
  });
  const double growth = spec.delta * (2.0 * C.a * C.B + C.b * C.A);
  out.patch.set_lipschitz_B(C.B + growth);
  out.patch.set_bound_A(out.patch.measured_A());
  return out;
}

/// One measured inequality: measured <= bound.
struct BoundCheck {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool holds() const { return measured <= bound; }
};

/// sup over nodes of |f_vv . w| for lattice offset v and codirection w,
/// from central differences of the Jacobian samples.
inline double directional_second_sup(const GraphPatch& p, const Offset& off, ConstPoint w) {
  const double len = detail::offset_length(p, off);
  Vec v(p.k());
  for (std::size_t i = 0; i < p.k(); ++i) v[i] = static_cast<double>(off[i]) * p.spacing() / len;
  double best = 0.0;
  for (std::size_t n = 0; n < p.node_count(); ++n) {
    const auto a = p.shifted(n, off), b = p.shifted(n, off, -1);
    if (!a || !b) continue;
    double s = 0.0;
    for (std::size_t i = 0; i < p.m(); ++i) {
      double d = 0.0;
      for (std::size_t c = 0; c < p.k(); ++c)
        d += (p.jacobian(*a)[i * p.k() + c] - p.jacobian(*b)[i * p.k() + c]) * v[c];
      s += w[i] * d / (2.0 * len);
    }
    best = std::max(best, std::abs(s));
  }
  return best;
}

/// The four measured inequalities of the mollifier bounds for f and its
/// mollification: |h - f| <= A delta, |h' - f'| <= (aA + B) delta,
/// Lip(h') <= B + delta (2aB + bA), and for every scanned (v, w)
/// |h_vv . w| <= C + delta (2aB + bA) with C measured on f the same way.
inline std::vector<BoundCheck> mollifier_checks(const GraphPatch& f, const MollifiedPatch& moll) {
  const GraphPatch& h = moll.patch;
  const auto& C = moll.constants;
  const double growth = C.delta * (2.0 * C.a * C.B + C.b * C.A);
  double dv = 0.0, dj = 0.0;
  for (std::size_t n = 0; n < f.node_count(); ++n) {
    dv = std::max(dv, dist(h.value(n), f.value(n)));
    dj = std::max(dj, dist(h.jacobian(n), f.jacobian(n)));
  }
  std::vector<BoundCheck> out;
  out.push_back({"value", dv, C.A * C.delta});
  out.push_back({"gradient", dj, (C.a * C.A + C.B) * C.delta});
  out.push_back({"lipschitz", measured_lipschitz(h), C.B + growth});
  const auto ws = scan_codirections(f.m());
  for (const auto& off : scan_offsets(f.k()))
    for (std::size_t wi = 0; wi < ws.size(); ++wi) {
      const double Cf = directional_second_sup(f, off, ws[wi]);
      std::string name = "directional[v=";
      for (std::size_t i = 0; i < off.size(); ++i) name += (i ? "," : "") + std::to_string(off[i]);
      name += ";w=" + std::to_string(wi) + "]";
      out.push_back({name, directional_second_sup(h, off, ws[wi]), Cf + growth});
    }
  return out;
}

/// Nodes where h differs from f although |x| >= 2 rho (should be none).
inline std::size_t identity_violations(const GraphPatch& f, const MollifiedPatch& moll) {
  std::size_t bad = 0;
  for (std::size_t n = 0; n < f.node_count(); ++n) {
    if (norm(f.position(n)) < 2.0 * moll.constants.rho) continue;
    const auto a = f.value(n), b = moll.patch.value(n);
    const auto ja = f.jacobian(n), jb = moll.patch.jacobian(n);
    if (!std::equal(a.begin(), a.end(), b.begin()) || !std::equal(ja.begin(), ja.end(), jb.begin())) ++bad;
  }
  return bad;
}

/// Nodes with eta(|x|/(2 rho)) = 1 where h differs from the convolution.
inline std::size_t core_violations(const MollifiedPatch& moll) {
  const Eta eta;
  std::size_t bad = 0;
  const std::size_t m = moll.patch.m();
  for (std::size_t n = 0; n < moll.patch.node_count(); ++n) {
    if (eta(norm(moll.patch.position(n)) / (2.0 * moll.constants.rho)) != 1.0) continue;
    for (std::size_t i = 0; i < m; ++i)
      if (moll.patch.value(n)[i] != moll.convolution[n * m + i]) {
        ++bad;
        break;
      }
  }
  return bad;
}

}  // namespace nir
