#pragma once

// Point-to-curve distance queries over the segments of a DiscreteCurve.
// Segments are grouped in runs of consecutive indices, each run bounded by
// a sphere; queries scan the spheres and only open runs that can matter.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "curve.hpp"
#include "linalg.hpp"

namespace nir {

/// Arclength window [s - half_width, s + half_width] on one ring that a
/// query ignores.
struct ArcExclusion {
  std::size_t component = 0;
  double s = 0.0;
  double half_width = 0.0;
};

struct NearestPoint {
  double distance = std::numeric_limits<double>::infinity();
  ArcCoordinate coord;
};

class SegmentIndex {
 public:
  explicit SegmentIndex(const DiscreteCurve& curve, std::size_t run = 16) : curve_(&curve) {
    for (std::size_t c = 0; c < curve.component_count(); ++c) {
      const Ring& r = curve.ring(c);
      for (std::size_t b = 0; b < r.size(); b += run) {
        Chunk ch{c, b, std::min(r.size(), b + run), Vec(curve.dim(), 0.0), 0.0};
        const std::size_t count = ch.end - ch.begin + 1;
        for (std::size_t i = ch.begin; i <= ch.end; ++i) {
          const auto v = r.vertex(i);
          for (std::size_t k = 0; k < v.size(); ++k) ch.center[k] += v[k] / static_cast<double>(count);
        }
        for (std::size_t i = ch.begin; i <= ch.end; ++i) ch.radius = std::max(ch.radius, dist(ch.center, r.vertex(i)));
        chunks_.push_back(std::move(ch));
      }
    }
    slack_.resize(curve.component_count());
    for (std::size_t c = 0; c < curve.component_count(); ++c) slack_[c].assign(curve.ring(c).size(), 0.0);
  }

  /// Per-segment allowance subtracted from the query radius in any_within.
  void set_slack(std::vector<std::vector<double>> slack) { slack_ = std::move(slack); }
  double slack(std::size_t component, std::size_t segment) const { return slack_[component][segment]; }

  /// True when some curve point outside the exclusion lies at distance
  /// < r - slack(segment) from c.
  bool any_within(ConstPoint c, double r, const std::optional<ArcExclusion>& ex = std::nullopt) const {
    for (const Chunk& ch : chunks_) {
      if (dist(c, ch.center) - ch.radius >= r) continue;
      const Ring& ring = curve_->ring(ch.component);
      for (std::size_t i = ch.begin; i < ch.end; ++i) {
        const double reach = r - slack_[ch.component][i];
        if (reach <= 0.0) continue;
        double t0 = 0.0, t1 = 1.0;
        if (ex && ex->component == ch.component && !visible_range(ring, i, *ex, t0, t1)) continue;
        const auto pr = project_to_segment(c, ring.vertex(i), ring.vertex(i + 1), t0, t1);
        if (pr.dist2 < reach * reach) return true;
      }
    }
    return false;
  }

  /// Closest curve point to c outside the exclusion.
  NearestPoint nearest(ConstPoint c, const std::optional<ArcExclusion>& ex = std::nullopt) const {
    NearestPoint best;
    double best2 = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(chunks_.size());
    for (std::size_t k = 0; k < chunks_.size(); ++k)
      order.emplace_back(std::max(0.0, dist(c, chunks_[k].center) - chunks_[k].radius), k);
    std::sort(order.begin(), order.end());
    for (const auto& [lower, k] : order) {
      if (lower * lower >= best2) break;
      const Chunk& ch = chunks_[k];
      const Ring& ring = curve_->ring(ch.component);
      for (std::size_t i = ch.begin; i < ch.end; ++i) {
        double t0 = 0.0, t1 = 1.0;
        if (ex && ex->component == ch.component && !visible_range(ring, i, *ex, t0, t1)) continue;
        const auto pr = project_to_segment(c, ring.vertex(i), ring.vertex(i + 1), t0, t1);
        if (pr.dist2 < best2) {
          best2 = pr.dist2;
          best.coord = make_coordinate(*curve_, ch.component, i, pr.t);
        }
      }
    }
    best.distance = std::sqrt(best2);
    return best;
  }

  const DiscreteCurve& curve() const { return *curve_; }

 private:
  struct Chunk {
    std::size_t component;
    std::size_t begin, end;  // segments [begin, end)
    Vec center;
    double radius;
  };

  // Part of segment i outside the exclusion window, as a parameter range.
  static bool visible_range(const Ring& ring, std::size_t i, const ArcExclusion& ex, double& t0, double& t1) {
    const double len = ring.segment_length(i);
    const double a = ring.wrapped_offset(ex.s, ring.arclength_at(i));
    const double b = a + len;
    const double w = ex.half_width;
    if (a >= w || b <= -w) return true;
    if (a >= -w && b <= w) return false;
    if (a < -w && b > w) {
      // Window strictly inside the segment: keep the longer visible side.
      if (-w - a >= b - w)
        t1 = (-w - a) / len;
      else
        t0 = (w - a) / len;
      return true;
    }
    if (a < -w)
      t1 = (-w - a) / len;
    else
      t0 = (w - a) / len;
    return true;
  }

  const DiscreteCurve* curve_;
  std::vector<Chunk> chunks_;
  std::vector<std::vector<double>> slack_;
};

}  // namespace nir
