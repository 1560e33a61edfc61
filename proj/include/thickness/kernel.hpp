#pragma once

// Thickness of a closed polyline via min{F_g, MDC/2}: the focal term from
// the largest circumcircle curvature of vertex triples, the double-critical
// term from the shortest chord normal to the curve at both ends.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <unordered_map>
#include <vector>

#include "curve.hpp"
#include "errors.hpp"
#include "extent.hpp"
#include "linalg.hpp"
#include "parallel.hpp"

namespace nir {

struct CurvaturePeak {
  double curvature = 0.0;
  std::size_t component = 0;
  std::size_t vertex = 0;
};

/// Largest circumcircle curvature over consecutive vertex triples.
inline CurvaturePeak curvature_peak(const DiscreteCurve& curve) {
  CurvaturePeak peak;
  for (std::size_t c = 0; c < curve.component_count(); ++c) {
    const Ring& r = curve.ring(c);
    const std::size_t n = r.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double k = circumcurvature(r.vertex(i + n - 1), r.vertex(i), r.vertex(i + 1));
      if (k > peak.curvature) peak = {k, c, i};
    }
  }
  return peak;
}

inline double sup_curvature(const DiscreteCurve& curve) { return curvature_peak(curve).curvature; }

/// Per-vertex circumcircle curvatures, one vector per ring.
inline std::vector<std::vector<double>> vertex_curvatures(const DiscreteCurve& curve) {
  std::vector<std::vector<double>> out;
  for (const Ring& r : curve.rings()) {
    auto& k = out.emplace_back(r.size());
    const std::size_t n = r.size();
    for (std::size_t i = 0; i < n; ++i) k[i] = circumcurvature(r.vertex(i + n - 1), r.vertex(i), r.vertex(i + 1));
  }
  return out;
}

inline Extent focal_distance(const DiscreteCurve& curve) { return reciprocal_extent(sup_curvature(curve)); }

/// A chord normal to the curve at both endpoints.
struct DoubleCriticalPair {
  ArcCoordinate p;
  ArcCoordinate q;
  double chord_length = 0.0;
  /// Deviation of the chord from the normal space at p and at q (radians).
  std::array<double, 2> residual_angles{0.0, 0.0};
};

struct CriticalSearchOptions {
  double perp_tol = 1e-3;
  /// Within-component exclusion; default max(4 segments, 0.1 F_g) per ring.
  std::optional<double> adjacency_window;
};

namespace detail {

struct CellSolution {
  double s, t;
  Vec chord;  // p - q
  std::array<double, 2> angles;
};

/// Locates a zero of the criticality residual
///   f = (P(s) - Q(t)) . T_P(s),  g = (P(s) - Q(t)) . T_Q(t)
/// inside the cell [0,1]^2 spanned by segment (a0,a1) with vertex tangents
/// (ta0,ta1) and segment (b0,b1) with (tb0,tb1). Levenberg-Marquardt with a
/// vanishing damping keeps the iteration well defined on the degenerate
/// zero curves of round circles.
inline std::optional<CellSolution> solve_cell(ConstPoint a0, ConstPoint a1, ConstPoint ta0, ConstPoint ta1,
                                              ConstPoint b0, ConstPoint b1, ConstPoint tb0, ConstPoint tb1) {
  const std::size_t n = a0.size();
  Vec P(n), Q(n), dP(n), dQ(n), mA(n), mB(n), dmA(n), dmB(n), TA(n), TB(n), d(n);
  for (std::size_t k = 0; k < n; ++k) {
    dP[k] = a1[k] - a0[k];
    dQ[k] = b1[k] - b0[k];
    dmA[k] = ta1[k] - ta0[k];
    dmB[k] = tb1[k] - tb0[k];
  }
  double s = 0.5, t = 0.5;
  double scale2 = std::max(norm2(dP), norm2(dQ));
  double F0 = 0, F1 = 0;
  auto evaluate = [&](double ss, double tt, double& f, double& g, double J[2][2]) {
    for (std::size_t k = 0; k < n; ++k) {
      P[k] = a0[k] + ss * dP[k];
      Q[k] = b0[k] + tt * dQ[k];
      mA[k] = ta0[k] + ss * dmA[k];
      mB[k] = tb0[k] + tt * dmB[k];
      d[k] = P[k] - Q[k];
    }
    const double nA = norm(mA), nB = norm(mB);
    for (std::size_t k = 0; k < n; ++k) {
      TA[k] = mA[k] / nA;
      TB[k] = mB[k] / nB;
    }
    f = dot(d, TA);
    g = dot(d, TB);
    if (J) {
      // d/ds T_A = (m' - T_A (T_A . m')) / |m|
      const double tAm = dot(TA, dmA), tBm = dot(TB, dmB);
      const double d_dTA = (dot(d, dmA) - f * tAm) / nA;
      const double d_dTB = (dot(d, dmB) - g * tBm) / nB;
      J[0][0] = dot(dP, TA) + d_dTA;
      J[0][1] = -dot(dQ, TA);
      J[1][0] = dot(dP, TB);
      J[1][1] = -dot(dQ, TB) + d_dTB;
    }
  };
  double J[2][2];
  for (int it = 0; it < 40; ++it) {
    evaluate(s, t, F0, F1, J);
    const double a = J[0][0] * J[0][0] + J[1][0] * J[1][0];
    const double b = J[0][0] * J[0][1] + J[1][0] * J[1][1];
    const double c = J[0][1] * J[0][1] + J[1][1] * J[1][1];
    const double mu = 1e-12 * (a + c) + 1e-300;
    const double r0 = -(J[0][0] * F0 + J[1][0] * F1);
    const double r1 = -(J[0][1] * F0 + J[1][1] * F1);
    const double det = (a + mu) * (c + mu) - b * b;
    if (!(det > 0.0)) return std::nullopt;
    const double ds = ((c + mu) * r0 - b * r1) / det;
    const double dt = ((a + mu) * r1 - b * r0) / det;
    s += ds;
    t += dt;
    if (s < -0.25 || s > 1.25 || t < -0.25 || t > 1.25) return std::nullopt;
    if (std::abs(ds) + std::abs(dt) < 1e-13) break;
  }
  constexpr double slack = 1e-9;
  if (s < -slack || s > 1 + slack || t < -slack || t > 1 + slack) return std::nullopt;
  s = std::clamp(s, 0.0, 1.0);
  t = std::clamp(t, 0.0, 1.0);
  evaluate(s, t, F0, F1, nullptr);
  const double len = norm(d);
  if (!(len > 0.0) || len * len < 1e-30 * scale2) return std::nullopt;
  CellSolution out{s, t, d, {std::asin(std::min(1.0, std::abs(F0) / len)), std::asin(std::min(1.0, std::abs(F1) / len))}};
  return out;
}

inline double default_adjacency_window(const Ring& ring, const Extent& focal) {
  return std::max(4.0 * ring.max_segment_length(), 0.1 * focal.value_or(0.0));
}

}  // namespace detail

/// All double-critical chords, up to discretization: for every pair of
/// segment cells whose corner values of both criticality residuals change
/// sign, a zero is solved for and kept when it is perpendicular to the
/// interpolated tangents within perp_tol at both ends.
inline std::vector<DoubleCriticalPair> find_double_critical_pairs(const DiscreteCurve& curve,
                                                                  const TangentField& tangents,
                                                                  const CriticalSearchOptions& opts = {}) {
  if (tangents.empty() || tangents.rings.size() != curve.component_count())
    fail(ErrorKind::NoTangents, "tangent field missing or mismatched");
  const Extent focal = focal_distance(curve);
  const std::size_t dim = curve.dim();

  std::vector<DoubleCriticalPair> found;
  for (std::size_t ca = 0; ca < curve.component_count(); ++ca) {
    for (std::size_t cb = ca; cb < curve.component_count(); ++cb) {
      const Ring& A = curve.ring(ca);
      const Ring& B = curve.ring(cb);
      const bool same = ca == cb;
      const double window = same ? opts.adjacency_window.value_or(detail::default_adjacency_window(A, focal)) : 0.0;
      const std::size_t na = A.size(), nb = B.size();
      const std::size_t grain = 16;
      std::vector<std::vector<DoubleCriticalPair>> per_chunk(chunk_count(na, grain));

      for_each_chunk(na, grain, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        auto& out = per_chunk[chunk];
        std::vector<double> f0(nb + 1), g0(nb + 1), f1(nb + 1), g1(nb + 1);
        auto fill_row = [&](std::size_t i, std::vector<double>& f, std::vector<double>& g) {
          const auto x = A.vertex(i);
          const auto tx = tangents.at(ca, i);
          for (std::size_t j = 0; j <= nb; ++j) {
            const auto y = B.vertex(j);
            const auto ty = tangents.at(cb, j);
            double fv = 0.0, gv = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
              const double dk = x[k] - y[k];
              fv += dk * tx[k];
              gv += dk * ty[k];
            }
            f[j] = fv;
            g[j] = gv;
          }
        };
        for (std::size_t i = begin; i < end; ++i) {
          fill_row(i, f0, g0);
          fill_row(i + 1, f1, g1);
          const double si_mid = A.arclength_at(i) + 0.5 * A.segment_length(i);
          for (std::size_t j = same ? i + 1 : 0; j < nb; ++j) {
            if (same) {
              const double sj_mid = B.arclength_at(j) + 0.5 * B.segment_length(j);
              const double reach = 0.5 * (A.segment_length(i) + B.segment_length(j));
              if (A.arc_separation(si_mid, sj_mid) + reach <= window) continue;
            }
            const double fmin = std::min({f0[j], f0[j + 1], f1[j], f1[j + 1]});
            const double fmax = std::max({f0[j], f0[j + 1], f1[j], f1[j + 1]});
            if (fmin > 0.0 || fmax < 0.0) continue;
            const double gmin = std::min({g0[j], g0[j + 1], g1[j], g1[j + 1]});
            const double gmax = std::max({g0[j], g0[j + 1], g1[j], g1[j + 1]});
            if (gmin > 0.0 || gmax < 0.0) continue;
            auto sol = detail::solve_cell(A.vertex(i), A.vertex(i + 1), tangents.at(ca, i), tangents.at(ca, i + 1),
                                          B.vertex(j), B.vertex(j + 1), tangents.at(cb, j), tangents.at(cb, j + 1));
            if (!sol) continue;
            if (sol->angles[0] > opts.perp_tol || sol->angles[1] > opts.perp_tol) continue;
            DoubleCriticalPair pair;
            pair.p = make_coordinate(curve, ca, i, sol->s);
            pair.q = make_coordinate(curve, cb, j, sol->t);
            if (same && A.arc_separation(pair.p.s, pair.q.s) <= window) continue;
            pair.chord_length = norm(sol->chord);
            pair.residual_angles = sol->angles;
            out.push_back(pair);
          }
        }
      });

      // Deduplicate roots found from neighboring cells: a pair is dropped
      // when a kept pair lies within one segment in both arc coordinates.
      const double hA = A.max_segment_length(), hB = B.max_segment_length();
      std::unordered_map<std::size_t, std::vector<std::size_t>> by_segment;
      const std::size_t first_kept = found.size();
      for (auto& chunk : per_chunk) {
        for (auto& cand : chunk) {
          bool duplicate = false;
          for (std::size_t di = 0; di < 3 && !duplicate; ++di) {
            const std::size_t seg = (cand.p.segment + na - 1 + di) % na;
            auto it = by_segment.find(seg);
            if (it == by_segment.end()) continue;
            for (std::size_t k : it->second) {
              const auto& kept = found[k];
              if (A.arc_separation(kept.p.s, cand.p.s) < hA && B.arc_separation(kept.q.s, cand.q.s) < hB) {
                duplicate = true;
                break;
              }
            }
          }
          if (duplicate) continue;
          by_segment[cand.p.segment].push_back(found.size());
          found.push_back(cand);
        }
      }
      (void)first_kept;
    }
  }
  return found;
}

struct MdcResult {
  Extent length = Extent::unbounded();
  std::optional<DoubleCriticalPair> pair;
  std::size_t pair_count = 0;
};

inline MdcResult minimal_double_critical(const DiscreteCurve& curve, const TangentField& tangents,
                                         const CriticalSearchOptions& opts = {}) {
  MdcResult r;
  const auto pairs = find_double_critical_pairs(curve, tangents, opts);
  r.pair_count = pairs.size();
  for (const auto& p : pairs) {
    if (!r.pair || p.chord_length < r.pair->chord_length) r.pair = p;
  }
  if (r.pair) r.length = Extent::finite(r.pair->chord_length);
  return r;
}

inline Extent mdc(const DiscreteCurve& curve, const TangentField& tangents, const CriticalSearchOptions& opts = {}) {
  return minimal_double_critical(curve, tangents, opts).length;
}

inline Extent mdc(const DiscreteCurve& curve) { return mdc(curve, estimate_tangents(curve)); }

enum class AttainingFeature { Focal, DoublyCritical };

inline const char* to_string(AttainingFeature f) { return f == AttainingFeature::Focal ? "Focal" : "DoublyCritical"; }

struct ThicknessReport {
  Extent focal_distance = Extent::unbounded();
  double sup_curvature = 0.0;
  Extent mdc = Extent::unbounded();
  Extent thickness = Extent::unbounded();
  AttainingFeature attaining_feature = AttainingFeature::DoublyCritical;
  /// Vertex of largest curvature (segment = vertex index, t = 0).
  ArcCoordinate focal_location;
  std::optional<DoubleCriticalPair> critical_pair;
  std::size_t critical_pair_count = 0;
  std::optional<double> oracle_rolling_ball;
  std::optional<double> oracle_cut_value;
  /// Largest |oracle - thickness| over the oracles that were run.
  double max_discrepancy = 0.0;
};

/// Relative slack under which the focal and double-critical terms count as
/// tied; ties are reported as DoublyCritical.
inline constexpr double kTieRelTol = 1e-12;

inline ThicknessReport thickness(const DiscreteCurve& curve, const TangentField& tangents,
                                 const CriticalSearchOptions& opts = {}) {
  ThicknessReport rep;
  const CurvaturePeak peak = curvature_peak(curve);
  rep.sup_curvature = peak.curvature;
  rep.focal_distance = reciprocal_extent(peak.curvature);
  rep.focal_location = make_coordinate(curve, peak.component, peak.vertex, 0.0);
  const MdcResult m = minimal_double_critical(curve, tangents, opts);
  rep.mdc = m.length;
  rep.critical_pair = m.pair;
  rep.critical_pair_count = m.pair_count;
  const Extent half_mdc = m.length.scaled(0.5);
  const bool doubly = half_mdc.bounded() &&
                      (rep.focal_distance.is_unbounded() ||
                       half_mdc.value() <= rep.focal_distance.value() * (1.0 + kTieRelTol));
  rep.attaining_feature = doubly ? AttainingFeature::DoublyCritical : AttainingFeature::Focal;
  rep.thickness = min(rep.focal_distance, half_mdc);
  return rep;
}

inline ThicknessReport thickness(const DiscreteCurve& curve, const CriticalSearchOptions& opts = {}) {
  return thickness(curve, estimate_tangents(curve), opts);
}

}  // namespace nir
