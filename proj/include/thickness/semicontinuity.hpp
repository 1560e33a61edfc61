#pragma once

// Shrinking perturbation sequences K_j -> K and the two semicontinuity
// checks along them: thickness is upper semicontinuous (the tail never
// rises above thickness(K) beyond a tolerance band) and MDC is lower
// semicontinuous (the tail never drops below mdc(K) beyond the band).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "curve.hpp"
#include "errors.hpp"
#include "kernel.hpp"
#include "linalg.hpp"
#include "smoothing.hpp"

namespace nir {

enum class PerturbationFamily { RadialBumps, TangentialNoise, Mixed };

inline const char* to_string(PerturbationFamily f) {
  switch (f) {
    case PerturbationFamily::RadialBumps: return "radial";
    case PerturbationFamily::TangentialNoise: return "tangential";
    case PerturbationFamily::Mixed: return "mixed";
  }
  return "unknown";
}

inline PerturbationFamily parse_family(const std::string& name) {
  if (name == "radial") return PerturbationFamily::RadialBumps;
  if (name == "tangential") return PerturbationFamily::TangentialNoise;
  if (name == "mixed") return PerturbationFamily::Mixed;
  fail(ErrorKind::InvalidArgument, "unknown perturbation family '" + name + "'");
}

struct SemicontinuitySpec {
  PerturbationFamily family = PerturbationFamily::RadialBumps;
  /// Amplitude schedule; empty means 1/j for j = 1..count.
  std::vector<double> amplitudes;
  std::size_t count = 32;
  /// Normal bump height at amplitude 1, as a fraction of L / (2 pi).
  double bump_height = 0.05;
  /// Bumps per component.
  int frequency = 8;
  /// Tangential shift at amplitude 1, as a fraction of the local edge length.
  double tangential_shift = 0.4;
  std::uint64_t seed = 1;
  /// Tolerance band, relative to the base value.
  double band = 5e-3;
};

struct SemicontinuityStep {
  std::size_t j = 0;
  double amplitude = 0.0;
  double thickness = 0.0;
  /// Infinite when unbounded.
  double mdc = 0.0;
  double focal_distance = 0.0;
  double c1_distance = 0.0;
};

struct SemicontinuityResult {
  PerturbationFamily family = PerturbationFamily::RadialBumps;
  double base_thickness = 0.0;
  double base_mdc = 0.0;
  std::vector<SemicontinuityStep> steps;
  /// Tail is steps[tail_begin..]: j in [J/2, J].
  std::size_t tail_begin = 0;
  double tail_max_thickness = 0.0;
  double tail_min_mdc = 0.0;
  double thickness_band = 0.0;
  double mdc_band = 0.0;
  /// max over tail of thickness(K_j) <= thickness(K) + band.
  bool upper_semicontinuous = false;
  /// min over tail of mdc(K_j) >= mdc(K) - band.
  bool mdc_lower_semicontinuous = false;
};

inline std::vector<double> default_schedule(std::size_t count) {
  std::vector<double> a(count);
  for (std::size_t j = 0; j < count; ++j) a[j] = 1.0 / static_cast<double>(j + 1);
  return a;
}

namespace detail {

inline double finite_or_inf(const Extent& e) { return e.value_or(std::numeric_limits<double>::infinity()); }

/// Unit normal used for bumps: the left normal in the plane, the direction
/// to the circumcenter in higher dimensions (first normal basis vector on
/// straight stretches).
inline Vec bump_normal(const Ring& r, ConstPoint t, std::size_t i) {
  if (t.size() == 2) return {-t[1], t[0]};
  const auto a = r.vertex(i + r.size() - 1), b = r.vertex(i), c = r.vertex(i + 1);
  Vec n = sub(a, b);
  for (std::size_t d = 0; d < n.size(); ++d) n[d] += c[d] - b[d];
  const double along = dot(n, t);
  for (std::size_t d = 0; d < n.size(); ++d) n[d] -= along * t[d];
  if (norm(n) < 1e-12 * (dist(a, b) + dist(b, c))) return normal_basis(t)[0];
  return normalized(n);
}

/// Point at parameter u in [0, 1] on the cubic Hermite arc between vertices
/// i and i + 1 with the estimated tangents scaled by the edge length.
inline Vec hermite_on_ring(const Ring& r, const TangentField& tf, std::size_t c, std::size_t i, double u) {
  const auto p0 = r.vertex(i), p1 = r.vertex(i + 1);
  if (u == 0.0) return Vec(p0.begin(), p0.end());
  const double len = r.segment_length(i);
  const auto t0 = tf.at(c, i), t1 = tf.at(c, i + 1);
  const double u2 = u * u, u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u, h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
  Vec p(p0.size());
  for (std::size_t d = 0; d < p.size(); ++d)
    p[d] = h00 * p0[d] + h10 * len * t0[d] + h01 * p1[d] + h11 * len * t1[d];
  return p;
}

}  // namespace detail

/// K_j at amplitude a: radial bumps move vertex i by
/// a h (L / 2 pi) cos(2 pi f s_i / L) along the bump normal; tangential
/// noise slides it along a Hermite interpolant of K by the fraction
/// a xi_i tangential_shift of the edge it moves into, xi_i in [-1, 1].
/// The noise draws depend only on the seed, so K_j -> K as a -> 0.
inline DiscreteCurve perturb(const DiscreteCurve& base, const SemicontinuitySpec& spec, double amplitude) {
  const TangentField tf = estimate_tangents(base);
  const bool radial = spec.family != PerturbationFamily::TangentialNoise;
  const bool tangential = spec.family != PerturbationFamily::RadialBumps;
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> xi(-1.0, 1.0);
  std::vector<std::vector<double>> rings;
  for (std::size_t c = 0; c < base.component_count(); ++c) {
    const Ring& r = base.ring(c);
    const double L = r.length();
    auto& out = rings.emplace_back();
    out.reserve(r.coords().size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double shift = xi(rng) * spec.tangential_shift * amplitude;
      Vec p;
      if (tangential && shift > 0.0) {
        p = detail::hermite_on_ring(r, tf, c, i, shift);
      } else if (tangential && shift < 0.0) {
        const std::size_t prev = (i + r.size() - 1) % r.size();
        p = detail::hermite_on_ring(r, tf, c, prev, 1.0 + shift);
      } else {
        p.assign(r.vertex(i).begin(), r.vertex(i).end());
      }
      if (radial) {
        const double h = amplitude * spec.bump_height * L / (2.0 * std::numbers::pi) *
                         std::cos(2.0 * std::numbers::pi * spec.frequency * r.arclength_at(i) / L);
        const Vec n = detail::bump_normal(r, tf.at(c, i), i);
        for (std::size_t d = 0; d < p.size(); ++d) p[d] += h * n[d];
      }
      out.insert(out.end(), p.begin(), p.end());
    }
  }
  return build_curve_flat(rings, base.dim());
}

/// Runs the sequence K_j for the amplitude schedule and evaluates both
/// tail verdicts over j in [J/2, J].
inline SemicontinuityResult semicontinuity_experiment(const DiscreteCurve& base, const SemicontinuitySpec& spec) {
  const std::vector<double> schedule = spec.amplitudes.empty() ? default_schedule(spec.count) : spec.amplitudes;
  if (schedule.size() < 2) fail(ErrorKind::InvalidArgument, "schedule needs at least two amplitudes");
  for (std::size_t j = 0; j < schedule.size(); ++j) {
    if (!(schedule[j] >= 0.0) || !std::isfinite(schedule[j]))
      fail(ErrorKind::InvalidArgument, "amplitude " + std::to_string(j + 1) + " is not a finite nonnegative number");
    if (j > 0 && schedule[j] > schedule[j - 1])
      fail(ErrorKind::InvalidArgument, "schedule violation: amplitude grows at j = " + std::to_string(j + 1));
  }

  SemicontinuityResult out;
  out.family = spec.family;
  const ThicknessReport b = thickness(base);
  const double base_thickness = b.thickness.value();
  out.base_thickness = base_thickness;
  out.base_mdc = detail::finite_or_inf(b.mdc);
  out.thickness_band = spec.band * out.base_thickness;
  out.mdc_band = std::isfinite(out.base_mdc) ? spec.band * out.base_mdc : 0.0;

  for (std::size_t j = 0; j < schedule.size(); ++j) {
    const DiscreteCurve K = perturb(base, spec, schedule[j]);
    const ThicknessReport t = thickness(K);
    SemicontinuityStep step;
    step.j = j + 1;
    step.amplitude = schedule[j];
    step.thickness = t.thickness.value();
    step.mdc = detail::finite_or_inf(t.mdc);
    step.focal_distance = detail::finite_or_inf(t.focal_distance);
    step.c1_distance = c1_distance(base, K);
    out.steps.push_back(step);
  }

  const std::size_t J = schedule.size();
  out.tail_begin = J / 2 - 1;
  out.tail_max_thickness = -1.0;
  out.tail_min_mdc = std::numeric_limits<double>::infinity();
  for (std::size_t j = out.tail_begin; j < J; ++j) {
    out.tail_max_thickness = std::max(out.tail_max_thickness, out.steps[j].thickness);
    out.tail_min_mdc = std::min(out.tail_min_mdc, out.steps[j].mdc);
  }
  out.upper_semicontinuous = out.tail_max_thickness <= out.base_thickness + out.thickness_band;
  out.mdc_lower_semicontinuous =
      std::isfinite(out.base_mdc) ? out.tail_min_mdc >= out.base_mdc - out.mdc_band : std::isinf(out.tail_min_mdc);
  return out;
}

}  // namespace nir
