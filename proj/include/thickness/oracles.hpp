#pragma once

// Brute-force thickness estimates that do not use the focal/double-critical
// decomposition: the rolling-ball radius (smallest tangent ball that meets
// the curve again) and the infimum of normal cut values over sampled unit
// normals. Both test exact point-to-segment distances.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "curve.hpp"
#include "errors.hpp"
#include "kernel.hpp"
#include "linalg.hpp"
#include "parallel.hpp"
#include "proximity.hpp"

namespace nir {

struct NormalSampleSpec {
  /// Sampled unit normals per vertex; in the plane the normal sphere is
  /// {+n, -n} and this count is ignored.
  std::size_t normal_directions_per_vertex = 32;
  double r_lo = 0.0;
  double r_hi = 0.0;
  double bisection_tolerance = 0.0;

  void validate() const {
    if (normal_directions_per_vertex < 1) fail(ErrorKind::InvalidArgument, "normal direction count must be >= 1");
    if (!(r_lo >= 0.0 && r_lo < r_hi)) fail(ErrorKind::InvalidArgument, "radius bracket needs 0 <= r_lo < r_hi");
    if (!(bisection_tolerance > 0.0)) fail(ErrorKind::InvalidArgument, "bisection tolerance must be > 0");
  }
};

/// Bracket [t/2, 2t] and tolerance 1e-4 t around a thickness estimate t.
inline NormalSampleSpec default_sample_spec(double estimate, std::size_t directions = 32) {
  NormalSampleSpec s;
  s.normal_directions_per_vertex = directions;
  s.r_lo = 0.5 * estimate;
  s.r_hi = 2.0 * estimate;
  s.bisection_tolerance = 1e-4 * estimate;
  return s;
}

struct OracleResult {
  double value = 0.0;
  std::size_t component = 0;
  std::size_t vertex = 0;
  Vec direction;
  std::size_t ball_tests = 0;
};

namespace detail {

// Shared setup for both oracles: the sampled normal rays and a segment
// index whose per-segment slack absorbs the sagitta of inscribed chords.
// Without it a chord just outside the exclusion window dips into tangent
// balls well below the focal radius (by about 4% of it at two segments).
class TangentBallProbe {
 public:
  struct Ray {
    std::size_t component;
    std::size_t vertex;
    Vec w;
  };

  TangentBallProbe(const DiscreteCurve& curve, const NormalSampleSpec& spec)
      : curve_(curve), index_(curve), tangents_(estimate_tangents(curve)) {
    spec.validate();
    const auto kappa = vertex_curvatures(curve);
    double sup_k = 0.0;
    for (const auto& ks : kappa)
      for (double k : ks) sup_k = std::max(sup_k, k);
    std::vector<std::vector<double>> slack(curve.component_count());
    for (std::size_t c = 0; c < curve.component_count(); ++c) {
      const Ring& r = curve.ring(c);
      const std::size_t n = r.size();
      slack[c].resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double len = r.segment_length(i);
        const double k = std::max({kappa[c][(i + n - 1) % n], kappa[c][i], kappa[c][(i + 1) % n], kappa[c][(i + 2) % n]});
        // Chord sagitta len^2 k / 8 with a 25% allowance for curvature
        // varying along the segment.
        slack[c][i] = 1.25 * len * len * k / 8.0;
      }
    }
    index_.set_slack(std::move(slack));
    const double focal_arc = sup_k > 0.0 ? std::numbers::pi / (2.0 * sup_k) : std::numeric_limits<double>::infinity();

    const std::size_t dim = curve.dim();
    std::vector<Vec> sphere;
    if (dim > 2) sphere = sphere_directions(dim - 1, spec.normal_directions_per_vertex);
    for (std::size_t c = 0; c < curve.component_count(); ++c) {
      const Ring& r = curve.ring(c);
      const std::size_t n = r.size();
      for (std::size_t i = 0; i < n; ++i) {
        const auto t = tangents_.at(c, i);
        if (dim == 2) {
          rays_.push_back({c, i, Vec{-t[1], t[0]}});
          rays_.push_back({c, i, Vec{t[1], -t[0]}});
        } else {
          const auto basis = normal_basis(t);
          for (const Vec& d : sphere) {
            Vec w(dim, 0.0);
            for (std::size_t j = 0; j < basis.size(); ++j)
              for (std::size_t k = 0; k < dim; ++k) w[k] += d[j] * basis[j][k];
            normalize_in_place(w);
            rays_.push_back({c, i, std::move(w)});
          }
        }
      }
      window_.emplace_back(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double local = std::max(r.segment_length(i + n - 1), r.segment_length(i));
        window_[c][i] = std::min(focal_arc, 2.0 * local);
      }
    }
    lo_ = spec.r_lo;
    hi_ = spec.r_hi;
    steps_ = 1;
    while ((hi_ - lo_) / static_cast<double>(steps_) > spec.bisection_tolerance) steps_ *= 2;
  }

  const std::vector<Ray>& rays() const { return rays_; }
  std::size_t steps() const { return steps_; }
  double radius(std::size_t k) const { return lo_ + (hi_ - lo_) * static_cast<double>(k) / static_cast<double>(steps_); }

  /// Does the open ball of radius r tangent at the ray's vertex, centered
  /// along the ray, contain a curve point away from the vertex?
  bool hits(const Ray& ray, double r) const {
    const auto p = curve_.ring(ray.component).vertex(ray.vertex);
    Vec c(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) c[k] = p[k] + r * ray.w[k];
    const ArcExclusion ex{ray.component, curve_.ring(ray.component).arclength_at(ray.vertex),
                          window_[ray.component][ray.vertex]};
    return index_.any_within(c, r, ex);
  }

  OracleResult result(std::size_t k, std::size_t ray, std::size_t tests) const {
    return {radius(k), rays_[ray].component, rays_[ray].vertex, rays_[ray].w, tests};
  }

 private:
  const DiscreteCurve& curve_;
  SegmentIndex index_;
  TangentField tangents_;
  std::vector<Ray> rays_;
  std::vector<std::vector<double>> window_;
  double lo_ = 0.0, hi_ = 0.0;
  std::size_t steps_ = 1;
};

}  // namespace detail

/// Rolling-ball radius: the smallest r on the bracket grid at which some
/// sampled tangent ball B(p + r w, r) meets the curve away from p. Found by
/// bisection on the union-over-balls predicate, which is monotone in r
/// because tangent balls along a fixed ray are nested.
inline OracleResult rolling_ball_oracle(const DiscreteCurve& curve, const NormalSampleSpec& spec) {
  const detail::TangentBallProbe probe(curve, spec);
  const auto& rays = probe.rays();
  const std::size_t grain = 64;
  std::atomic<std::size_t> tests{0};
  // The ray that hit most recently is tried first; it usually hits again
  // and settles a positive step with one test.
  std::size_t last_hit = 0;

  auto any_hit = [&](std::size_t k) {
    const double r = probe.radius(k);
    ++tests;
    if (probe.hits(rays[last_hit], r)) return true;
    std::atomic<bool> found{false};
    std::atomic<std::size_t> first{rays.size()};
    for_each_chunk(rays.size(), grain, [&](std::size_t, std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e && !found.load(std::memory_order_relaxed); ++i) {
        ++tests;
        if (probe.hits(rays[i], r)) {
          found = true;
          std::size_t cur = first.load();
          while (i < cur && !first.compare_exchange_weak(cur, i)) {
          }
          return;
        }
      }
    });
    if (found) last_hit = first.load();
    return found.load();
  };

  std::size_t lo = 0, hi = probe.steps();
  if (any_hit(lo)) fail(ErrorKind::BracketMiss, "tangent balls already meet the curve at r_lo");
  if (!any_hit(hi)) fail(ErrorKind::BracketMiss, "no tangent ball meets the curve by r_hi");
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (any_hit(mid))
      hi = mid;
    else
      lo = mid;
  }
  const double r = probe.radius(hi);
  std::size_t witness = 0;
  while (witness < rays.size() && !probe.hits(rays[witness], r)) ++witness;
  return probe.result(hi, std::min(witness, rays.size() - 1), tests.load());
}

/// Normal cut value of one ray: the grid radius at which the point
/// p + r w stops realizing its distance r to the curve (outside the
/// exclusion window around p). Returns r_hi when the ray stays free on the
/// whole bracket.
inline double normal_cut_value(const DiscreteCurve& curve, std::size_t component, std::size_t vertex, ConstPoint w,
                               const NormalSampleSpec& spec) {
  const detail::TangentBallProbe probe(curve, spec);
  const detail::TangentBallProbe::Ray ray{component, vertex, normalized(w)};
  if (probe.hits(ray, probe.radius(0))) fail(ErrorKind::BracketMiss, "ray already cut at r_lo");
  if (!probe.hits(ray, probe.radius(probe.steps()))) return spec.r_hi;
  std::size_t lo = 0, hi = probe.steps();
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (probe.hits(ray, probe.radius(mid)))
      hi = mid;
    else
      lo = mid;
  }
  return probe.radius(hi);
}

/// Infimum over sampled unit normals of the normal cut value, each found by
/// its own bisection on d(p + r w, K) >= r. Rays that are still free at the
/// current best radius cannot lower the minimum and are skipped after one
/// test.
inline OracleResult cut_value_oracle(const DiscreteCurve& curve, const NormalSampleSpec& spec) {
  const detail::TangentBallProbe probe(curve, spec);
  const auto& rays = probe.rays();
  const std::size_t K = probe.steps();
  std::atomic<std::size_t> best{K + 1};
  std::atomic<std::size_t> tests{0};
  std::atomic<bool> below_bracket{false};

  for_each_chunk(rays.size(), 64, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const std::size_t cap = std::min(best.load(), K + 1);
      // Free at grid index cap - 1 means this ray's cut value is >= cap.
      ++tests;
      if (!probe.hits(rays[i], probe.radius(cap - 1))) continue;
      ++tests;
      if (probe.hits(rays[i], probe.radius(0))) {
        below_bracket = true;
        return;
      }
      std::size_t lo = 0, hi = cap - 1;
      while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        ++tests;
        if (probe.hits(rays[i], probe.radius(mid)))
          hi = mid;
        else
          lo = mid;
      }
      std::size_t cur = best.load();
      while (hi < cur && !best.compare_exchange_weak(cur, hi)) {
      }
    }
  });
  if (below_bracket) fail(ErrorKind::BracketMiss, "a normal ray is already cut at r_lo");
  const std::size_t k = best.load();
  if (k > K) fail(ErrorKind::BracketMiss, "every sampled normal ray stays free up to r_hi");
  const double r = probe.radius(k);
  std::size_t witness = 0;
  while (witness < rays.size() && !probe.hits(rays[witness], r)) ++witness;
  return probe.result(k, std::min(witness, rays.size() - 1), tests.load());
}

}  // namespace nir
