#pragma once

// Isotopy between Hausdorff-close curves through the nearest-point
// projection: each vertex q of L slides to its foot on K along the straight
// fiber, and every intermediate polyline must stay embedded.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "curve.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "parallel.hpp"
#include "proximity.hpp"

namespace nir {

enum class IsotopyVerdict { Isotopic, Inconclusive };

inline const char* to_string(IsotopyVerdict v) { return v == IsotopyVerdict::Isotopic ? "Isotopic" : "Inconclusive"; }

struct VertexProjection {
  ArcCoordinate foot;
  double distance = 0.0;
  /// Distance to K outside the arc neighborhood of the foot.
  double second_distance = std::numeric_limits<double>::infinity();
  bool unique = false;
};

struct IsotopyCheck {
  double rho_used = 0.0;
  IsotopyVerdict verdict = IsotopyVerdict::Inconclusive;
  /// Name of the first failing check; empty when Isotopic.
  std::string failed_check;
  std::string detail;
  /// Per L-ring, per vertex.
  std::vector<std::vector<VertexProjection>> projection;
  /// Signed degree of each L-ring's foot map onto its K-ring (0 if not a
  /// monotone covering).
  std::vector<int> degrees;
  /// Homotopy frames t = j / frames, j = 0..frames.
  std::size_t frames = 0;
  /// max over L-vertices of the distance to K.
  double max_distance = 0.0;
};

/// Arc neighborhood (half-width, in multiples of rho) around a foot point
/// that the fiber-uniqueness test ignores.
inline constexpr double kFiberNeighborhood = 3.0;

/// rho = thickness / 8.
inline double suggested_rho(double thickness_K) {
  if (!(thickness_K > 0.0)) fail(ErrorKind::NonpositiveThickness, "thickness must be > 0");
  return thickness_K / 8.0;
}

/// Intermediate polyline of the fiber homotopy: q -> foot(q) + t (q - foot(q)).
inline std::vector<std::vector<double>> homotopy_frame(const DiscreteCurve& K, const DiscreteCurve& L,
                                                       const std::vector<std::vector<VertexProjection>>& proj,
                                                       double t) {
  std::vector<std::vector<double>> rings;
  for (std::size_t c = 0; c < L.component_count(); ++c) {
    const Ring& r = L.ring(c);
    auto& out = rings.emplace_back(r.coords().size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      const Vec f = point_at(K, proj[c][i].foot);
      const auto q = r.vertex(i);
      for (std::size_t d = 0; d < q.size(); ++d) out[i * q.size() + d] = f[d] + t * (q[d] - f[d]);
    }
  }
  return rings;
}

/// Checks, in order: every L-vertex lies within rho of K; each foot is
/// stable (outside a 3 rho arc neighborhood of it, K is more than twice as
/// far from the vertex as the foot, so every point of the fiber segment
/// keeps the same foot); the feet of each L-ring run monotonically once around a single
/// K-ring, distinct per L-ring; and every frame of the straight fiber
/// homotopy at t = j/frames is embedded. Isotopic only if all pass.
inline IsotopyCheck isotopy_check(const DiscreteCurve& K, const DiscreteCurve& L, double rho,
                                  std::size_t frames = 8) {
  if (K.component_count() != L.component_count()) fail(ErrorKind::ComponentMismatch, "component counts differ");
  if (K.dim() != L.dim()) fail(ErrorKind::DimensionMismatch, "ambient dimensions differ");
  if (!(rho > 0.0)) fail(ErrorKind::InvalidArgument, "rho must be > 0");
  if (frames < 1) fail(ErrorKind::InvalidArgument, "need at least one homotopy frame");

  IsotopyCheck out;
  out.rho_used = rho;
  out.frames = frames;
  const SegmentIndex index(K);
  auto inconclusive = [&](const std::string& check, const std::string& detail) {
    out.verdict = IsotopyVerdict::Inconclusive;
    out.failed_check = check;
    out.detail = detail;
    return out;
  };

  out.projection.resize(L.component_count());
  for (std::size_t c = 0; c < L.component_count(); ++c) {
    const Ring& r = L.ring(c);
    auto& proj = out.projection[c];
    proj.resize(r.size());
    for_each_chunk(r.size(), 64, [&](std::size_t, std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const auto near = index.nearest(r.vertex(i));
        VertexProjection& p = proj[i];
        p.foot = near.coord;
        p.distance = near.distance;
        const ArcExclusion ex{near.coord.component, near.coord.s, kFiberNeighborhood * rho};
        p.second_distance = index.nearest(r.vertex(i), ex).distance;
        p.unique = p.second_distance > 2.0 * p.distance;
      }
    });
    for (const auto& p : proj) out.max_distance = std::max(out.max_distance, p.distance);
  }

  for (std::size_t c = 0; c < L.component_count(); ++c)
    for (std::size_t i = 0; i < out.projection[c].size(); ++i)
      if (!(out.projection[c][i].distance < rho))
        return inconclusive("containment", "L component " + std::to_string(c) + " vertex " + std::to_string(i) +
                                               " is " + std::to_string(out.projection[c][i].distance) +
                                               " from K, not within rho");
  for (std::size_t c = 0; c < L.component_count(); ++c)
    for (std::size_t i = 0; i < out.projection[c].size(); ++i)
      if (!out.projection[c][i].unique)
        return inconclusive("fiber_uniqueness", "L component " + std::to_string(c) + " vertex " + std::to_string(i) +
                                                    " has a second foot candidate at " +
                                                    std::to_string(out.projection[c][i].second_distance));

  out.degrees.assign(L.component_count(), 0);
  std::vector<char> target_used(K.component_count(), 0);
  for (std::size_t c = 0; c < L.component_count(); ++c) {
    const auto& proj = out.projection[c];
    const std::size_t target = proj.front().foot.component;
    for (const auto& p : proj)
      if (p.foot.component != target)
        return inconclusive("degree", "L component " + std::to_string(c) + " projects onto several K components");
    if (target_used[target])
      return inconclusive("degree", "two L components project onto K component " + std::to_string(target));
    target_used[target] = 1;
    const Ring& kr = K.ring(target);
    double total = 0.0;
    int sign = 0;
    for (std::size_t i = 0; i < proj.size(); ++i) {
      const double step = kr.wrapped_offset(proj[i].foot.s, proj[(i + 1) % proj.size()].foot.s);
      const int s = step > 0.0 ? 1 : step < 0.0 ? -1 : 0;
      if (s == 0 || (sign != 0 && s != sign))
        return inconclusive("degree", "foot map of L component " + std::to_string(c) + " is not monotone at vertex " +
                                          std::to_string(i));
      sign = s;
      total += step;
    }
    const double turns = total / kr.length();
    if (std::abs(std::abs(turns) - 1.0) > 1e-6)
      return inconclusive("degree", "foot map of L component " + std::to_string(c) + " winds " +
                                        std::to_string(turns) + " times");
    out.degrees[c] = sign;
  }

  std::vector<std::optional<std::string>> frame_error(frames + 1);
  for_each_chunk(frames + 1, 1, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j) {
      const double t = static_cast<double>(j) / static_cast<double>(frames);
      const DiscreteCurve frame = DiscreteCurve::unchecked(L.dim(), homotopy_frame(K, L, out.projection, t));
      if (auto defect = find_defect(frame)) frame_error[j] = defect->detail;
    }
  });
  for (std::size_t j = 0; j <= frames; ++j)
    if (frame_error[j])
      return inconclusive("embedding", "homotopy frame " + std::to_string(j) + "/" + std::to_string(frames) + ": " +
                                           *frame_error[j]);

  out.verdict = IsotopyVerdict::Isotopic;
  return out;
}

/// Symmetric Hausdorff distance estimated from the vertices of each curve
/// to the segments of the other.
inline double hausdorff_distance(const DiscreteCurve& K, const DiscreteCurve& L) {
  double h = 0.0;
  auto one_way = [&](const DiscreteCurve& A, const DiscreteCurve& B) {
    const SegmentIndex index(B);
    for (const Ring& r : A.rings())
      for (std::size_t i = 0; i < r.size(); ++i) h = std::max(h, index.nearest(r.vertex(i)).distance);
  };
  one_way(K, L);
  one_way(L, K);
  return h;
}

}  // namespace nir
