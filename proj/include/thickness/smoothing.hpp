#pragma once

// Curvature-controlled smoothing of a closed polyline: windows of the curve
// are written as graphs over their tangent lines, mollified, and written
// back one after another while the curvature stays on an interpolating
// ladder from 1/R1 to 1/R2.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "curve.hpp"
#include "errors.hpp"
#include "graph_patch.hpp"
#include "kernel.hpp"
#include "linalg.hpp"
#include "mollifier.hpp"

namespace nir {

/// Upper estimate of the C^1 distance between two curves with the same
/// component count: rings are matched by arclength proportion from vertex
/// 0 and the sup of position distance plus tangent-line angle is taken
/// over the vertices of both. The true distance is an infimum over all
/// diffeomorphisms and can only be smaller.
inline double c1_distance(const DiscreteCurve& K, const DiscreteCurve& L) {
  if (K.component_count() != L.component_count()) fail(ErrorKind::ComponentMismatch, "component counts differ");
  if (K.dim() != L.dim()) fail(ErrorKind::DimensionMismatch, "ambient dimensions differ");
  const TangentField tk = estimate_tangents(K), tl = estimate_tangents(L);
  double worst = 0.0;
  auto one_way = [&](const DiscreteCurve& A, const TangentField& ta, const DiscreteCurve& B, const TangentField& tb) {
    for (std::size_t c = 0; c < A.component_count(); ++c) {
      const Ring& ra = A.ring(c);
      const Ring& rb = B.ring(c);
      for (std::size_t i = 0; i < ra.size(); ++i) {
        const double u = ra.arclength_at(i) / ra.length();
        const ArcCoordinate q = coordinate_at_arclength(B, c, std::min(u * rb.length(), rb.length()));
        const Vec pb = point_at(B, q);
        const Vec tq = interpolated_tangent(tb, c, q.segment, q.t);
        // Unoriented angle, stable near zero: 2 asin(min |t -+ t'| / 2).
        const auto t = ta.at(c, i);
        double minus = 0.0, plus = 0.0;
        for (std::size_t d = 0; d < t.size(); ++d) {
          minus += (t[d] - tq[d]) * (t[d] - tq[d]);
          plus += (t[d] + tq[d]) * (t[d] + tq[d]);
        }
        const double angle = 2.0 * std::asin(std::min(1.0, 0.5 * std::sqrt(std::min(minus, plus))));
        worst = std::max(worst, dist(ra.vertex(i), pb) + angle);
      }
    }
  };
  one_way(K, tk, L, tl);
  one_way(L, tl, K, tk);
  return worst;
}

struct SmoothingOptions {
  /// delta halvings allowed per window before giving up.
  std::size_t max_halvings = 20;
  /// Whole-curve restarts with half the C^1 budget when the measured
  /// distance exceeds sigma.
  std::size_t max_restarts = 6;
};

struct WindowRecord {
  std::size_t component = 0;
  std::size_t center_vertex = 0;
  double delta = 0.0;
  std::size_t halvings = 0;
  /// Ladder values this window had to meet.
  double ladder_curvature = 0.0;
  double ladder_slope = 0.0;
  double sup_curvature = 0.0;
  double max_slope = 0.0;
};

struct SmoothingResult {
  DiscreteCurve curve;
  double sup_curvature = 0.0;
  Extent focal_distance;
  double c1_distance = 0.0;
  /// Width of each graph window (support diameter of the cutoff).
  double window_width = 0.0;
  double rho = 0.0;
  std::size_t restarts = 0;
  std::vector<WindowRecord> windows;
};

namespace detail {

struct HermiteData {
  std::vector<double> x;  // strictly increasing
  std::vector<Vec> y, dy;
};

// Cubic Hermite interpolant at t (clamped to the data range).
inline void hermite_eval(const HermiteData& d, double t, Vec& v, Vec& dv) {
  const std::size_t m = d.y.front().size();
  v.assign(m, 0.0);
  dv.assign(m, 0.0);
  std::size_t j = static_cast<std::size_t>(std::upper_bound(d.x.begin(), d.x.end(), t) - d.x.begin());
  j = std::clamp<std::size_t>(j, 1, d.x.size() - 1) - 1;
  const double h = d.x[j + 1] - d.x[j];
  const double s = std::clamp((t - d.x[j]) / h, 0.0, 1.0);
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  const double g00 = 6 * s * s - 6 * s, g10 = 3 * s * s - 4 * s + 1;
  const double g01 = -g00, g11 = 3 * s * s - 2 * s;
  for (std::size_t i = 0; i < m; ++i) {
    const double y0 = d.y[j][i], y1 = d.y[j + 1][i], m0 = d.dy[j][i], m1 = d.dy[j + 1][i];
    v[i] = h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1;
    dv[i] = (g00 * y0 + g10 * h * m0 + g01 * y1 + g11 * h * m1) / h;
  }
}

inline double ring_sup_curvature(const std::vector<double>& coords, std::size_t dim) {
  const std::size_t n = coords.size() / dim;
  auto v = [&](std::size_t i) { return ConstPoint(coords.data() + (i % n) * dim, dim); };
  double k = 0.0;
  for (std::size_t i = 0; i < n; ++i) k = std::max(k, circumcurvature(v(i + n - 1), v(i), v(i + 1)));
  return k;
}

// One graph window of a ring: frame at the center vertex and the vertex
// run whose tangent coordinates cover [-reach, reach].
struct GraphWindow {
  Vec origin, tangent;
  std::vector<Vec> normals;
  std::vector<std::size_t> vertices;  // in increasing x
  HermiteData data;
};

inline GraphWindow graph_window(const std::vector<double>& coords, std::size_t dim, std::size_t center,
                                double reach) {
  const std::size_t n = coords.size() / dim;
  auto v = [&](std::size_t i) { return ConstPoint(coords.data() + (i % n) * dim, dim); };
  GraphWindow w;
  w.origin.assign(v(center).begin(), v(center).end());
  w.tangent = circumtangent(v(center + n - 1), v(center), v(center + 1));
  w.normals = normal_basis(w.tangent);
  auto coord = [&](std::size_t i) { return dot(sub(v(i), w.origin), w.tangent); };

  std::vector<std::size_t> back, fwd;
  double last = 0.0;
  for (std::size_t step = 1; step < n / 2; ++step) {
    const std::size_t i = (center + n - step) % n;
    const double x = coord(i);
    if (!(x < last)) fail(ErrorKind::LadderExhausted, "window is not a graph over its tangent line");
    back.push_back(i);
    last = x;
    if (x < -reach) break;
  }
  last = 0.0;
  for (std::size_t step = 1; step < n / 2; ++step) {
    const std::size_t i = (center + step) % n;
    const double x = coord(i);
    if (!(x > last)) fail(ErrorKind::LadderExhausted, "window is not a graph over its tangent line");
    fwd.push_back(i);
    last = x;
    if (x > reach) break;
  }
  if (back.empty() || fwd.empty() || coord(back.back()) >= -reach || coord(fwd.back()) <= reach)
    fail(ErrorKind::LadderExhausted, "window is wider than half the ring");
  w.vertices.assign(back.rbegin(), back.rend());
  w.vertices.push_back(center);
  w.vertices.insert(w.vertices.end(), fwd.begin(), fwd.end());

  for (std::size_t i : w.vertices) {
    const Vec d = sub(v(i), w.origin);
    const Vec t = circumtangent(v(i + n - 1), v(i), v(i + 1));
    const double tt = dot(t, w.tangent);
    if (!(tt > 0.0)) fail(ErrorKind::LadderExhausted, "tangent turns through a right angle inside a window");
    Vec y(dim - 1), dy(dim - 1);
    for (std::size_t k = 0; k + 1 < dim; ++k) {
      y[k] = dot(d, w.normals[k]);
      dy[k] = dot(t, w.normals[k]) / tt;
    }
    w.data.x.push_back(dot(d, w.tangent));
    w.data.y.push_back(std::move(y));
    w.data.dy.push_back(std::move(dy));
  }
  return w;
}

}  // namespace detail

/// Smooths `curve` window by window. Each window is a graph over the
/// tangent line at its center vertex covering |x| <= 2 rho + delta with
/// rho = min(R2, MDC/2)/4, mollified with cutoff radius 2 rho; window
/// centers are 2 rho apart in arclength, so consecutive cutoff supports
/// overlap by half. After window j of J the whole curve must satisfy
/// sup curvature <= k_{j+1} and the window slope <= A_{j+1}, where k runs
/// linearly from 1/R1 to 1/R2 and A from 1 to 2; delta is halved until it
/// does. The initial delta of a window spends half of sigma on the
/// estimate |h - f| + |h' - f'| <= (A + aA + B) delta.
inline SmoothingResult smoothing_ladder(const DiscreteCurve& curve, double R1, double R2, double sigma,
                                        const SmoothingOptions& opt = {}) {
  if (!(R1 > R2 && R2 > 0.0)) fail(ErrorKind::InvalidArgument, "need R1 > R2 > 0");
  if (!(sigma > 0.0)) fail(ErrorKind::InvalidArgument, "sigma must be > 0");
  const ThicknessReport rep = thickness(curve);
  if (rep.focal_distance.bounded() && rep.focal_distance.value() < R1 * (1.0 - 1e-9))
    fail(ErrorKind::InvalidArgument, "focal distance of the input is below R1");
  const double half_mdc = rep.mdc.bounded() ? 0.5 * rep.mdc.value() : std::numeric_limits<double>::infinity();
  const std::size_t dim = curve.dim();

  SmoothingResult res;
  res.window_width = std::min(R2, half_mdc);
  res.rho = res.window_width / 4.0;
  const double rho = res.rho;
  const CutoffConstants cut = cutoff_constants(1, rho);

  struct Center {
    std::size_t component, vertex;
  };
  std::vector<Center> centers;
  for (std::size_t c = 0; c < curve.component_count(); ++c) {
    const Ring& r = curve.ring(c);
    const std::size_t J = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(r.length() / (2.0 * rho))));
    for (std::size_t j = 0; j < J; ++j) {
      const auto q = coordinate_at_arclength(curve, c, r.length() * static_cast<double>(j) / static_cast<double>(J));
      centers.push_back({c, (q.segment + (q.t > 0.5 ? 1 : 0)) % r.size()});
    }
  }
  const double J = static_cast<double>(centers.size());
  const double k1 = 1.0 / R1, k2 = 1.0 / R2;

  double budget = 0.5 * sigma;
  std::ostringstream history;
  for (std::size_t restart = 0; restart <= opt.max_restarts; ++restart, budget *= 0.5) {
    std::vector<std::vector<double>> rings;
    for (const Ring& r : curve.rings()) rings.push_back(r.coords());
    std::vector<WindowRecord> records;

    for (std::size_t j = 0; j < centers.size(); ++j) {
      const Center cen = centers[j];
      const double ladder_k = k1 + (k2 - k1) * static_cast<double>(j + 1) / J;
      const double ladder_A = 1.0 + static_cast<double>(j + 1) / J;
      auto& coords = rings[cen.component];

      const auto probe = detail::graph_window(coords, dim, cen.vertex, 2.0 * rho);
      double A = 0.0, B = 0.0, gap = 0.0;
      for (std::size_t i = 0; i < probe.vertices.size(); ++i) {
        A = std::max(A, norm(probe.data.dy[i]));
        if (i == 0) continue;
        const double dx = probe.data.x[i] - probe.data.x[i - 1];
        B = std::max(B, dist(probe.data.dy[i], probe.data.dy[i - 1]) / dx);
        gap = std::max(gap, dx);
      }
      // On the first pass delta is at least a few vertex gaps so that the
      // average actually mixes neighboring vertices; restarts drop that
      // floor if the measured distance overshoots sigma.
      const double floor = restart == 0 ? 4.0 * gap : 0.0;
      double delta = std::min(std::max(budget / (A + cut.a * A + B), floor), 0.25 * rho);

      WindowRecord rec;
      rec.component = cen.component;
      rec.center_vertex = cen.vertex;
      rec.ladder_curvature = ladder_k;
      rec.ladder_slope = ladder_A;
      bool accepted = false;
      for (std::size_t halving = 0; halving <= opt.max_halvings; ++halving, delta *= 0.5) {
        const double reach = 2.0 * rho + delta;
        const auto win = detail::graph_window(coords, dim, cen.vertex, reach);
        // Grid well below the vertex gap keeps the quadrature error of the
        // piecewise-cubic interpolant out of the vertex curvatures.
        const double hg = std::min(delta / 4.0, gap / 8.0);
        if (reach / hg > 1e6) break;
        const std::size_t half = static_cast<std::size_t>(std::ceil(reach / hg));
        Vec val, der;
        GraphPatch f = centered_patch(
            1, dim - 1, hg * static_cast<double>(half), half,
            [&](ConstPoint x) {
              detail::hermite_eval(win.data, x[0], val, der);
              return val;
            },
            [&](ConstPoint x) {
              detail::hermite_eval(win.data, x[0], val, der);
              return der;
            },
            0.0);
        f.set_lipschitz_B(measured_lipschitz(f));
        const MollifiedPatch h = mollify(f, {delta, rho});

        // Vertices are rewritten as (1 - phi) f + phi g with f exact at the
        // vertex and the smooth g interpolated from the grid.
        detail::HermiteData conv;
        for (std::size_t nidx = 0; nidx < f.node_count(); ++nidx) {
          if (!h.in_support[nidx]) continue;
          const auto first = h.convolution.begin() + static_cast<std::ptrdiff_t>(nidx * (dim - 1));
          const auto jfirst = h.convolution_jacobian.begin() + static_cast<std::ptrdiff_t>(nidx * (dim - 1));
          conv.x.push_back(f.position(nidx)[0]);
          conv.y.emplace_back(first, first + static_cast<std::ptrdiff_t>(dim - 1));
          conv.dy.emplace_back(jfirst, jfirst + static_cast<std::ptrdiff_t>(dim - 1));
        }
        const Eta eta;
        std::vector<double> trial = coords;
        double slope = 0.0;
        for (std::size_t i = 0; i < win.vertices.size(); ++i) {
          const double x = win.data.x[i];
          if (std::abs(x) >= 2.0 * rho) continue;
          detail::hermite_eval(conv, x, val, der);
          const double s = std::abs(x) / (2.0 * rho);
          const double phi = eta(s);
          const double dphi = (x < 0 ? -1.0 : 1.0) * eta.d1(s) / (2.0 * rho);
          double* out = trial.data() + win.vertices[i] * dim;
          Vec slope_v(dim - 1);
          for (std::size_t d = 0; d < dim; ++d) out[d] = win.origin[d] + x * win.tangent[d];
          for (std::size_t k = 0; k + 1 < dim; ++k) {
            const double y0 = win.data.y[i][k], dy0 = win.data.dy[i][k];
            const double y = (1.0 - phi) * y0 + phi * val[k];
            slope_v[k] = (1.0 - phi) * dy0 + phi * der[k] + dphi * (val[k] - y0);
            for (std::size_t d = 0; d < dim; ++d) out[d] += y * win.normals[k][d];
          }
          slope = std::max(slope, norm(slope_v));
        }
        double sup_k = 0.0;
        for (std::size_t c = 0; c < rings.size(); ++c)
          sup_k = std::max(sup_k, detail::ring_sup_curvature(c == cen.component ? trial : rings[c], dim));
        rec.delta = delta;
        rec.halvings = halving;
        rec.sup_curvature = sup_k;
        rec.max_slope = slope;
        if (sup_k <= ladder_k && slope <= ladder_A) {
          coords = std::move(trial);
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        std::ostringstream msg;
        msg << "window " << j << " of " << centers.size() << " cannot meet the curvature ladder: sup curvature "
            << rec.sup_curvature << " > " << ladder_k << " at delta " << rec.delta;
        fail(ErrorKind::LadderExhausted, msg.str());
      }
      records.push_back(rec);
    }

    DiscreteCurve out = build_curve_flat(rings, dim);
    const double d1 = c1_distance(curve, out);
    if (d1 <= sigma) {
      res.curve = std::move(out);
      res.sup_curvature = sup_curvature(res.curve);
      res.focal_distance = reciprocal_extent(res.sup_curvature);
      res.c1_distance = d1;
      res.restarts = restart;
      res.windows = std::move(records);
      return res;
    }
    history << (restart ? ", " : "") << d1;
  }
  fail(ErrorKind::LadderExhausted,
       "measured C1 distance stays above sigma = " + std::to_string(sigma) + " (achieved " + history.str() + ")");
}

}  // namespace nir
