#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"

namespace nir {

/// Position on a closed ring: segment i runs from vertex i to vertex i+1
/// (mod n); t is the barycentric parameter on it and s the arclength from
/// vertex 0.
struct ArcCoordinate {
  std::size_t component = 0;
  std::size_t segment = 0;
  double t = 0.0;
  double s = 0.0;

  friend bool operator==(const ArcCoordinate&, const ArcCoordinate&) = default;
};

/// One closed polyline. Vertex i is stored at coords[i*dim, (i+1)*dim).
class Ring {
 public:
  Ring() = default;
  Ring(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) { refresh(); }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ ? coords_.size() / dim_ : 0; }
  ConstPoint vertex(std::size_t i) const { return {coords_.data() + (i % size()) * dim_, dim_}; }
  const std::vector<double>& coords() const { return coords_; }

  double segment_length(std::size_t i) const { return seg_len_[i % size()]; }
  /// Arclength from vertex 0 to vertex i, i in [0, size()].
  double arclength_at(std::size_t i) const { return cum_[i]; }
  double length() const { return cum_.back(); }
  double max_segment_length() const { return max_len_; }
  double min_segment_length() const { return min_len_; }

  /// Signed offset from a to b along the ring, wrapped to [-L/2, L/2).
  double wrapped_offset(double a, double b) const {
    const double L = length();
    double d = std::fmod(b - a, L);
    if (d < -0.5 * L) d += L;
    if (d >= 0.5 * L) d -= L;
    return d;
  }
  double arc_separation(double a, double b) const { return std::abs(wrapped_offset(a, b)); }

 private:
  void refresh() {
    const std::size_t n = size();
    seg_len_.assign(n, 0.0);
    cum_.assign(n + 1, 0.0);
    max_len_ = 0.0;
    min_len_ = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      seg_len_[i] = dist(vertex(i), vertex(i + 1));
      cum_[i + 1] = cum_[i] + seg_len_[i];
      max_len_ = std::max(max_len_, seg_len_[i]);
      min_len_ = std::min(min_len_, seg_len_[i]);
    }
  }

  std::size_t dim_ = 0;
  std::vector<double> coords_;
  std::vector<double> seg_len_;
  std::vector<double> cum_;
  double max_len_ = 0.0;
  double min_len_ = 0.0;
};

/// A closed polyline stand-in for a compact C^{1,1} curve in R^n, possibly
/// with several components. Immutable once built.
class DiscreteCurve {
 public:
  DiscreteCurve() = default;

  /// Assembles rings without validation; see build_curve.
  static DiscreteCurve unchecked(std::size_t dim, std::vector<std::vector<double>> rings) {
    DiscreteCurve c;
    c.dim_ = dim;
    for (auto& r : rings) c.rings_.emplace_back(dim, std::move(r));
    return c;
  }

  std::size_t dim() const { return dim_; }
  std::size_t component_count() const { return rings_.size(); }
  const Ring& ring(std::size_t c) const { return rings_.at(c); }
  const std::vector<Ring>& rings() const { return rings_; }

  std::size_t vertex_count() const {
    std::size_t n = 0;
    for (const auto& r : rings_) n += r.size();
    return n;
  }
  double length() const {
    double L = 0.0;
    for (const auto& r : rings_) L += r.length();
    return L;
  }
  double max_segment_length() const {
    double m = 0.0;
    for (const auto& r : rings_) m = std::max(m, r.max_segment_length());
    return m;
  }
  double bbox_diagonal() const {
    Vec lo(dim_, std::numeric_limits<double>::infinity()), hi(dim_, -std::numeric_limits<double>::infinity());
    for (const auto& r : rings_)
      for (std::size_t i = 0; i < r.size(); ++i) {
        const auto v = r.vertex(i);
        for (std::size_t k = 0; k < dim_; ++k) {
          lo[k] = std::min(lo[k], v[k]);
          hi[k] = std::max(hi[k], v[k]);
        }
      }
    return dist(lo, hi);
  }

  /// Vertex rings as nested coordinate lists (the JSON layout).
  std::vector<std::vector<Vec>> to_nested() const {
    std::vector<std::vector<Vec>> out;
    for (const auto& r : rings_) {
      auto& ring = out.emplace_back();
      for (std::size_t i = 0; i < r.size(); ++i) ring.emplace_back(r.vertex(i).begin(), r.vertex(i).end());
    }
    return out;
  }

  /// Applies f to every vertex; the result is not revalidated.
  DiscreteCurve mapped(const std::function<Vec(ConstPoint)>& f) const {
    std::vector<std::vector<double>> rings;
    std::size_t dim = dim_;
    for (const auto& r : rings_) {
      auto& out = rings.emplace_back();
      for (std::size_t i = 0; i < r.size(); ++i) {
        const Vec p = f(r.vertex(i));
        dim = p.size();
        out.insert(out.end(), p.begin(), p.end());
      }
    }
    return unchecked(dim, std::move(rings));
  }

  DiscreteCurve scaled(double factor) const {
    return mapped([factor](ConstPoint p) {
      Vec q(p.begin(), p.end());
      for (double& x : q) x *= factor;
      return q;
    });
  }

  friend bool operator==(const DiscreteCurve& a, const DiscreteCurve& b) {
    if (a.dim_ != b.dim_ || a.rings_.size() != b.rings_.size()) return false;
    for (std::size_t c = 0; c < a.rings_.size(); ++c)
      if (a.rings_[c].coords() != b.rings_[c].coords()) return false;
    return true;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<Ring> rings_;
};

struct CurveDefect {
  ErrorKind kind;
  std::string detail;
};

/// Relative tolerance for the embeddedness test: nonadjacent segments must
/// stay farther apart than this fraction of the bounding-box diagonal.
inline constexpr double kSelfIntersectionRelTol = 1e-9;

namespace detail {

struct SegmentRef {
  std::size_t ring;
  std::size_t index;
  double lo;  // min first coordinate
  double hi;  // max first coordinate
};

inline bool segments_adjacent(const DiscreteCurve& c, const SegmentRef& a, const SegmentRef& b) {
  if (a.ring != b.ring) return false;
  const std::size_t n = c.ring(a.ring).size();
  const std::size_t d = a.index > b.index ? a.index - b.index : b.index - a.index;
  return d <= 1 || d == n - 1;
}

}  // namespace detail

/// Smallest distance between two nonadjacent segments, found by a sweep
/// over the first coordinate; stops early once a pair closer than
/// `stop_below` is seen.
inline double min_nonadjacent_segment_distance(const DiscreteCurve& curve, double stop_below = 0.0) {
  std::vector<detail::SegmentRef> segs;
  for (std::size_t r = 0; r < curve.component_count(); ++r) {
    const Ring& ring = curve.ring(r);
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const double x0 = ring.vertex(i)[0], x1 = ring.vertex(i + 1)[0];
      segs.push_back({r, i, std::min(x0, x1), std::max(x0, x1)});
    }
  }
  std::sort(segs.begin(), segs.end(), [](const auto& a, const auto& b) {
    return a.lo < b.lo || (a.lo == b.lo && (a.ring < b.ring || (a.ring == b.ring && a.index < b.index)));
  });
  double best2 = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const auto& s = segs[k];
    const double reach = std::sqrt(best2);
    std::erase_if(active, [&](std::size_t a) { return segs[a].hi < s.lo - reach; });
    const Ring& rs = curve.ring(s.ring);
    for (std::size_t a : active) {
      const auto& o = segs[a];
      if (detail::segments_adjacent(curve, s, o)) continue;
      const Ring& ro = curve.ring(o.ring);
      const auto cp = closest_segment_segment(rs.vertex(s.index), rs.vertex(s.index + 1), ro.vertex(o.index),
                                              ro.vertex(o.index + 1));
      best2 = std::min(best2, cp.dist2);
      if (best2 < stop_below * stop_below) return std::sqrt(best2);
    }
    active.push_back(k);
  }
  return std::sqrt(best2);
}

/// First violated DiscreteCurve invariant, if any.
inline std::optional<CurveDefect> find_defect(const DiscreteCurve& curve) {
  if (curve.dim() < 2) return CurveDefect{ErrorKind::InvalidDims, "dimension must be at least 2"};
  if (curve.component_count() == 0) return CurveDefect{ErrorKind::TooFewVertices, "no components"};
  for (std::size_t r = 0; r < curve.component_count(); ++r) {
    const Ring& ring = curve.ring(r);
    if (ring.coords().size() % curve.dim() != 0)
      return CurveDefect{ErrorKind::DimensionMismatch, "component " + std::to_string(r) + " coordinate count"};
    if (ring.size() < 4)
      return CurveDefect{ErrorKind::TooFewVertices,
                         "component " + std::to_string(r) + " has " + std::to_string(ring.size()) + " vertices"};
    for (double x : ring.coords())
      if (!std::isfinite(x)) return CurveDefect{ErrorKind::InvalidArgument, "non-finite coordinate"};
    for (std::size_t i = 0; i < ring.size(); ++i)
      if (!(ring.segment_length(i) > 0.0))
        return CurveDefect{ErrorKind::DegenerateSegment,
                           "component " + std::to_string(r) + " segment " + std::to_string(i) + " has zero length"};
  }
  const double tol = kSelfIntersectionRelTol * curve.bbox_diagonal();
  const double d = min_nonadjacent_segment_distance(curve, tol);
  if (d <= tol)
    return CurveDefect{ErrorKind::SelfIntersection,
                       "nonadjacent segments within " + std::to_string(d) + " (tolerance " + std::to_string(tol) + ")"};
  return std::nullopt;
}

inline bool is_valid(const DiscreteCurve& curve) { return !find_defect(curve).has_value(); }

/// Builds and validates a curve from flat per-ring coordinate arrays.
inline DiscreteCurve build_curve_flat(std::vector<std::vector<double>> rings, std::size_t dim) {
  if (dim < 2) fail(ErrorKind::InvalidDims, "dimension must be at least 2");
  for (std::size_t r = 0; r < rings.size(); ++r)
    if (rings[r].size() % dim != 0)
      fail(ErrorKind::DimensionMismatch, "component " + std::to_string(r) + " is not a multiple of dim");
  DiscreteCurve c = DiscreteCurve::unchecked(dim, std::move(rings));
  if (auto defect = find_defect(c)) fail(defect->kind, defect->detail);
  return c;
}

/// Builds and validates a curve from vertex rings.
inline DiscreteCurve build_curve(const std::vector<std::vector<Vec>>& rings, std::size_t dim) {
  std::vector<std::vector<double>> flat;
  for (std::size_t r = 0; r < rings.size(); ++r) {
    auto& out = flat.emplace_back();
    for (const auto& p : rings[r]) {
      if (p.size() != dim)
        fail(ErrorKind::DimensionMismatch,
             "component " + std::to_string(r) + " has a vertex of dimension " + std::to_string(p.size()));
      out.insert(out.end(), p.begin(), p.end());
    }
  }
  return build_curve_flat(std::move(flat), dim);
}

enum class TangentMethod { Circumcircle };

/// Per-vertex unit tangents, one flat array per ring.
struct TangentField {
  std::size_t dim = 0;
  TangentMethod method = TangentMethod::Circumcircle;
  std::vector<std::vector<double>> rings;
  std::size_t collinear_fallbacks = 0;

  ConstPoint at(std::size_t component, std::size_t i) const {
    const auto& r = rings.at(component);
    const std::size_t n = r.size() / dim;
    return {r.data() + (i % n) * dim, dim};
  }
  bool empty() const { return rings.empty(); }
};

/// A triple is treated as collinear when its circumradius exceeds this
/// multiple of the longer incident edge.
inline constexpr double kCollinearRadiusFactor = 1e12;

inline TangentField estimate_tangents(const DiscreteCurve& curve) {
  TangentField field;
  field.dim = curve.dim();
  for (const Ring& ring : curve.rings()) {
    auto& out = field.rings.emplace_back();
    out.reserve(ring.coords().size());
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto a = ring.vertex(i + n - 1), b = ring.vertex(i), c = ring.vertex(i + 1);
      const double kappa = circumcurvature(a, b, c);
      const double edge = std::max(ring.segment_length(i + n - 1), ring.segment_length(i));
      Vec t;
      if (kappa * kCollinearRadiusFactor * edge < 1.0) {
        t = normalized(sub(c, a));
        ++field.collinear_fallbacks;
      } else {
        t = circumtangent(a, b, c);
      }
      out.insert(out.end(), t.begin(), t.end());
    }
  }
  return field;
}

/// Tangent at a point inside segment `seg`: normalized linear blend of the
/// two vertex tangents.
inline Vec interpolated_tangent(const TangentField& field, std::size_t component, std::size_t seg, double t) {
  Vec m = lerp(field.at(component, seg), field.at(component, seg + 1), t);
  normalize_in_place(m);
  return m;
}

inline ArcCoordinate make_coordinate(const DiscreteCurve& curve, std::size_t component, std::size_t segment,
                                     double t) {
  const Ring& r = curve.ring(component);
  return {component, segment, t, r.arclength_at(segment) + t * r.segment_length(segment)};
}

inline Vec point_at(const DiscreteCurve& curve, const ArcCoordinate& coord) {
  if (coord.component >= curve.component_count())
    fail(ErrorKind::OutOfRange, "component " + std::to_string(coord.component));
  const Ring& r = curve.ring(coord.component);
  if (coord.segment >= r.size()) fail(ErrorKind::OutOfRange, "segment " + std::to_string(coord.segment));
  if (!(coord.t >= 0.0 && coord.t <= 1.0)) fail(ErrorKind::OutOfRange, "t = " + std::to_string(coord.t));
  return lerp(r.vertex(coord.segment), r.vertex(coord.segment + 1), coord.t);
}

/// Coordinate of the point at arclength s in [0, L] on a ring.
inline ArcCoordinate coordinate_at_arclength(const DiscreteCurve& curve, std::size_t component, double s) {
  if (component >= curve.component_count()) fail(ErrorKind::OutOfRange, "component " + std::to_string(component));
  const Ring& r = curve.ring(component);
  if (!(s >= 0.0 && s <= r.length())) fail(ErrorKind::OutOfRange, "arclength " + std::to_string(s));
  const std::size_t n = r.size();
  std::size_t lo = 0, hi = n;  // find segment with cum[seg] <= s < cum[seg+1]
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (r.arclength_at(mid) <= s)
      lo = mid;
    else
      hi = mid;
  }
  const double t = std::clamp((s - r.arclength_at(lo)) / r.segment_length(lo), 0.0, 1.0);
  return {component, lo, t, s};
}

/// Wraps any real arclength onto the ring and returns the point there.
inline Vec point_at_arclength(const DiscreteCurve& curve, std::size_t component, double s) {
  const double L = curve.ring(component).length();
  s = std::fmod(s, L);
  if (s < 0) s += L;
  return point_at(curve, coordinate_at_arclength(curve, component, std::min(s, L)));
}

}  // namespace nir
