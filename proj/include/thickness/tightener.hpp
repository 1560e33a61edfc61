#pragma once

// Thickness maximization at fixed length: a seeded local search on the
// ropelength L / thickness. Each candidate move is a random normal-plane
// displacement of one vertex or, one time in 16, a smooth normal bump: a
// local cos^4 window, a whole-component Fourier mode, or the low-frequency
// field that levels the current curvature. A candidate is kept only if its
// ropelength is strictly lower, it is embedded, and it is isotopic to its
// predecessor through the fiber homotopy. Kept curves are rescaled to the
// starting length.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "curve.hpp"
#include "errors.hpp"
#include "isotopy.hpp"
#include "kernel.hpp"
#include "linalg.hpp"

namespace nir {

struct TightenConfig {
  std::uint64_t seed = 7;
  std::size_t steps = 20000;
  /// Initial curvature change of a vertex move, relative to 1 / thickness.
  double step_scale = 1e-2;
  /// Initial curvature change of a bump move, relative to 1 / thickness.
  double bump_scale = 1e-2;
  /// Step sizes shrink by this factor after a batch of moves of one kind
  /// with low acceptance and grow by its inverse after a batch with high
  /// acceptance.
  double cooling = 0.9;
  std::size_t batch = 32;
  /// One move in `bump_period` is an arc bump.
  std::size_t bump_period = 16;
  std::size_t isotopy_frames = 8;
  /// Fraction of moves centered within two vertices of the curvature peak.
  double peak_bias = 0.5;
  /// Keep every accepted curve in the trace (for replay checks).
  bool keep_curves = false;
};

enum class MoveKind { Vertex, Bump };

inline const char* to_string(MoveKind m) { return m == MoveKind::Vertex ? "vertex" : "bump"; }

/// Why a candidate was turned down.
enum class Rejection { None, CurvatureBound, NotEmbedded, NoImprovement, NotIsotopic };

inline const char* to_string(Rejection r) {
  switch (r) {
    case Rejection::None: return "none";
    case Rejection::CurvatureBound: return "curvature_bound";
    case Rejection::NotEmbedded: return "not_embedded";
    case Rejection::NoImprovement: return "no_improvement";
    case Rejection::NotIsotopic: return "not_isotopic";
  }
  return "unknown";
}

struct TightenRecord {
  std::size_t iteration = 0;
  MoveKind move = MoveKind::Vertex;
  bool accepted = false;
  Rejection rejection = Rejection::None;
  /// State after this iteration.
  double objective = 0.0;
  double thickness = 0.0;
  AttainingFeature attaining_feature = AttainingFeature::Focal;
  /// Candidate ropelength when it was evaluated in full, else 0.
  double candidate_objective = 0.0;
};

struct TightenTrace {
  TightenConfig config;
  double initial_objective = 0.0;
  double initial_thickness = 0.0;
  double length = 0.0;
  std::vector<TightenRecord> records;
  std::size_t accepted = 0;
  /// Start curve followed by every accepted curve, when kept.
  std::vector<DiscreteCurve> curves;
  DiscreteCurve final_curve;
  double final_objective = 0.0;
  double final_thickness = 0.0;
};

inline void validate(const TightenConfig& c) {
  if (c.steps < 1) fail(ErrorKind::InvalidArgument, "steps must be >= 1");
  if (!(c.cooling > 0.0 && c.cooling < 1.0)) fail(ErrorKind::InvalidArgument, "cooling must lie in (0, 1)");
  if (!(c.step_scale > 0.0) || !(c.bump_scale > 0.0)) fail(ErrorKind::InvalidArgument, "step scales must be > 0");
  if (c.batch < 1 || c.bump_period < 1) fail(ErrorKind::InvalidArgument, "batch and bump period must be >= 1");
  if (!(c.peak_bias >= 0.0 && c.peak_bias <= 1.0)) fail(ErrorKind::InvalidArgument, "peak bias must lie in [0, 1]");
}

namespace detail {

/// v minus its component along the unit vector t.
inline Vec normal_part(Vec v, ConstPoint t) {
  const double a = dot(v, t);
  for (std::size_t d = 0; d < v.size(); ++d) v[d] -= a * t[d];
  return v;
}

/// Scales `rings` about their vertex centroid to total length `length`.
inline DiscreteCurve renormalized(std::size_t dim, std::vector<std::vector<double>> rings, double length) {
  DiscreteCurve raw = DiscreteCurve::unchecked(dim, rings);
  const double f = length / raw.length();
  Vec center(dim, 0.0);
  std::size_t count = 0;
  for (const auto& r : rings) {
    for (std::size_t j = 0; j < r.size(); ++j) center[j % dim] += r[j];
    count += r.size() / dim;
  }
  for (double& x : center) x /= static_cast<double>(count);
  for (auto& r : rings)
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = center[j % dim] + f * (r[j] - center[j % dim]);
  return DiscreteCurve::unchecked(dim, std::move(rings));
}

/// C^3 bump profile on [-1, 1]: cos^4(pi x / 2).
inline double bump_profile(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  const double c = std::cos(0.5 * std::numbers::pi * x);
  return c * c * c * c;
}

/// Low-pass leveling displacement for a ring with vertex curvatures k:
/// sum over m = 2..16 of the m-th arclength Fourier mode of (k - mean k)
/// times R^2 / (m^2 - 1), with R = L / 2 pi.
inline std::vector<double> leveling_field(const Ring& ring, const std::vector<double>& k) {
  const std::size_t n = ring.size();
  const double L = ring.length();
  const double R = L / (2.0 * std::numbers::pi);
  std::vector<double> weight(n), theta(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    weight[i] = 0.5 * (ring.segment_length(i) + ring.segment_length(i + n - 1));
    theta[i] = ring.arclength_at(i) / R;
    mean += weight[i] * k[i];
  }
  mean /= L;
  std::vector<double> field(n, 0.0);
  const int top = static_cast<int>(std::min<std::size_t>(16, n / 8));
  for (int m = 2; m <= top; ++m) {
    double c = 0.0, s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      c += weight[i] * (k[i] - mean) * std::cos(m * theta[i]);
      s += weight[i] * (k[i] - mean) * std::sin(m * theta[i]);
    }
    const double f = 2.0 / L * R * R / (m * m - 1.0);
    for (std::size_t i = 0; i < n; ++i) field[i] += f * (c * std::cos(m * theta[i]) + s * std::sin(m * theta[i]));
  }
  return field;
}

}  // namespace detail

inline TightenTrace tighten(const DiscreteCurve& start, const TightenConfig& config = {}) {
  validate(config);
  // A self-intersecting start has zero normal injectivity radius.
  if (auto defect = find_defect(start))
    fail(defect->kind == ErrorKind::SelfIntersection ? ErrorKind::ZeroThicknessStart : defect->kind,
         defect->detail);
  ThicknessReport current = thickness(start);
  if (!current.thickness.bounded() || !(current.thickness.value() > 0.0) ||
      !std::isfinite(current.thickness.value()))
    fail(ErrorKind::ZeroThicknessStart, "start curve has zero thickness");

  TightenTrace trace;
  trace.config = config;
  trace.length = start.length();
  DiscreteCurve curve = start;
  double t = current.thickness.value();
  double objective = trace.length / t;
  trace.initial_objective = objective;
  trace.initial_thickness = t;
  trace.records.reserve(config.steps);
  if (config.keep_curves) trace.curves.push_back(start);

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::size_t total_vertices = 0;
  for (const Ring& r : curve.rings()) total_vertices += r.size();
  const std::size_t dim = curve.dim();

  double scale[2] = {config.step_scale, config.bump_scale};
  std::size_t tried[2] = {0, 0}, taken[2] = {0, 0};

  for (std::size_t it = 0; it < config.steps; ++it) {
    const MoveKind kind = (it % config.bump_period == config.bump_period - 1) ? MoveKind::Bump : MoveKind::Vertex;
    const int k = kind == MoveKind::Bump ? 1 : 0;

    // Half the moves are centered near the curvature peak, the rest at a
    // vertex drawn uniformly over all components.
    const bool at_peak = unit(rng) < config.peak_bias;
    std::size_t pick = std::min(total_vertices - 1, static_cast<std::size_t>(unit(rng) * total_vertices));
    std::size_t comp = 0;
    if (at_peak) {
      const ArcCoordinate peak = current.focal_location;
      comp = peak.component;
      const long n = static_cast<long>(curve.ring(comp).size());
      const long jitter = static_cast<long>(pick % 5) - 2;
      pick = static_cast<std::size_t>(((static_cast<long>(peak.segment) + jitter) % n + n) % n);
    } else {
      while (pick >= curve.ring(comp).size()) pick -= curve.ring(comp++).size();
    }
    Vec dir(dim);
    for (double& x : dir) x = gauss(rng);
    const double shape_draw = unit(rng);
    const double phase_draw = unit(rng);

    const TangentField tf = estimate_tangents(curve);
    std::vector<std::vector<double>> rings;
    for (const Ring& r : curve.rings()) rings.emplace_back(r.coords().begin(), r.coords().end());
    const Ring& ring = curve.ring(comp);
    // Displacement direction at vertex i: in the plane the left normal
    // times the sign of dir[0], otherwise dir projected to the normal space.
    auto direction = [&](std::size_t i) {
      const auto tan = tf.at(comp, i);
      if (dim == 2) return dir[0] < 0.0 ? Vec{tan[1], -tan[0]} : Vec{-tan[1], tan[0]};
      Vec d = detail::normal_part(dir, tan);
      for (double& x : d) x /= std::max(norm(dir), 1e-300);
      return d;
    };
    // Heights are set so that the induced curvature change is about
    // scale / thickness for every move shape.
    if (kind == MoveKind::Vertex) {
      const double h = 0.5 * (ring.segment_length(pick) + ring.segment_length(pick + ring.size() - 1));
      const Vec d = direction(pick);
      const double height = scale[0] * h * h / t * std::abs(gauss(rng));
      for (std::size_t j = 0; j < dim; ++j) rings[comp][pick * dim + j] += height * d[j];
    } else if (shape_draw < 1.0 / 3.0) {
      // Local bump, half-width log-uniform between 1/64 and 1/4 of the
      // component length.
      const double half = ring.length() * std::pow(2.0, -6.0 + 12.0 * shape_draw);
      const double s0 = ring.arclength_at(pick);
      const double height = scale[1] * half * half / t;
      for (std::size_t i = 0; i < ring.size(); ++i) {
        const double w = detail::bump_profile(ring.wrapped_offset(s0, ring.arclength_at(i)) / half);
        if (w == 0.0) continue;
        const Vec d = direction(i);
        for (std::size_t j = 0; j < dim; ++j) rings[comp][i * dim + j] += height * w * d[j];
      }
    } else if (shape_draw < 2.0 / 3.0) {
      // Whole-component mode cos(2 pi m s / L + phase), m in 2..8.
      const int m = 2 + static_cast<int>(std::min(6.0, (shape_draw - 1.0 / 3.0) * 21.0));
      const double wave = ring.length() / (2.0 * std::numbers::pi * m);
      const double height = scale[1] * wave * wave / t;
      const double phase = 2.0 * std::numbers::pi * phase_draw;
      for (std::size_t i = 0; i < ring.size(); ++i) {
        const double w = std::cos(ring.arclength_at(i) / wave + phase);
        const Vec d = direction(i);
        for (std::size_t j = 0; j < dim; ++j) rings[comp][i * dim + j] += height * w * d[j];
      }
    } else {
      // Whole-component leveling field: modes 2..16 of the curvature excess,
      // each divided by (m^2 - 1) / R^2, pushed toward the circumcenter.
      // On a near-round arc this cancels those modes of the excess.
      const auto field = detail::leveling_field(ring, vertex_curvatures(curve)[comp]);
      const double gain = 0.1 + 0.9 * phase_draw;
      for (std::size_t i = 0; i < ring.size(); ++i) {
        const auto a3 = ring.vertex(i + ring.size() - 1), b3 = ring.vertex(i), c3 = ring.vertex(i + 1);
        Vec inward = sub(a3, b3);
        for (std::size_t j = 0; j < dim; ++j) inward[j] += c3[j] - b3[j];
        inward = detail::normal_part(inward, tf.at(comp, i));
        const double len = norm(inward);
        if (len == 0.0) continue;
        for (std::size_t j = 0; j < dim; ++j) rings[comp][i * dim + j] += gain * field[i] * inward[j] / len;
      }
    }
    const DiscreteCurve candidate = detail::renormalized(dim, std::move(rings), trace.length);

    TightenRecord rec;
    rec.iteration = it;
    rec.move = kind;
    // thickness <= 1 / sup curvature, so L sup k bounds the new ropelength below.
    if (candidate.length() * sup_curvature(candidate) >= objective) {
      rec.rejection = Rejection::CurvatureBound;
    } else if (find_defect(candidate)) {
      rec.rejection = Rejection::NotEmbedded;
    } else {
      const ThicknessReport next = thickness(candidate);
      const double nt = next.thickness.value_or(0.0);
      const double nobj = nt > 0.0 ? candidate.length() / nt : std::numeric_limits<double>::infinity();
      rec.candidate_objective = std::isfinite(nobj) ? nobj : 0.0;
      if (!(nobj < objective)) {
        rec.rejection = Rejection::NoImprovement;
      } else if (isotopy_check(curve, candidate, suggested_rho(t), config.isotopy_frames).verdict !=
                 IsotopyVerdict::Isotopic) {
        rec.rejection = Rejection::NotIsotopic;
      } else {
        rec.accepted = true;
        curve = candidate;
        current = next;
        t = nt;
        objective = nobj;
        ++trace.accepted;
        if (config.keep_curves) trace.curves.push_back(curve);
      }
    }
    rec.objective = objective;
    rec.thickness = t;
    rec.attaining_feature = current.attaining_feature;
    trace.records.push_back(rec);

    ++tried[k];
    if (rec.accepted) ++taken[k];
    if (tried[k] == config.batch) {
      const double rate = static_cast<double>(taken[k]) / static_cast<double>(tried[k]);
      if (rate < 0.2) scale[k] *= config.cooling;
      else if (rate > 0.4) scale[k] /= config.cooling;
      tried[k] = taken[k] = 0;
    }
  }

  trace.final_curve = curve;
  trace.final_objective = objective;
  trace.final_thickness = t;
  return trace;
}

/// Ropelength of a curve: total length over thickness.
inline double ropelength(const DiscreteCurve& curve) { return curve.length() / thickness(curve).thickness.value(); }

}  // namespace nir
