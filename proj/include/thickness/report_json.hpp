#pragma once

// JSON encodings of the reports. Unbounded extents and values that do not
// fit in a double are written as null. Every encoder has a decoder and
// encode(decode(encode(x))) == encode(x).

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bounds.hpp"
#include "curve_io.hpp"
#include "extent.hpp"
#include "graph_patch.hpp"
#include "isotopy.hpp"
#include "kernel.hpp"
#include "mollifier.hpp"
#include "semicontinuity.hpp"
#include "smoothing.hpp"
#include "tightener.hpp"

namespace nir {

inline constexpr const char* kToolVersion = "1.0.0";

namespace detail {

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
inline json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

/// Null reads back as +infinity (the only non-finite value reports hold).
inline double number_or_inf(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}
inline std::optional<double> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

template <typename F>
auto parse_guard(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, std::string(what) + " JSON: " + e.what());
  }
}

}  // namespace detail

inline json extent_to_json(const Extent& e) { return e.bounded() ? json(e.value()) : json(nullptr); }
inline Extent extent_from_json(const json& j) { return j.is_null() ? Extent::unbounded() : Extent::finite(j.get<double>()); }

inline json arc_to_json(const ArcCoordinate& a) {
  return {{"component", a.component}, {"segment", a.segment}, {"t", a.t}, {"s", a.s}};
}
inline ArcCoordinate arc_from_json(const json& j) {
  return {j.at("component").get<std::size_t>(), j.at("segment").get<std::size_t>(), j.at("t").get<double>(),
          j.at("s").get<double>()};
}

inline AttainingFeature feature_from_string(const std::string& s) {
  if (s == "Focal") return AttainingFeature::Focal;
  if (s == "DoublyCritical") return AttainingFeature::DoublyCritical;
  fail(ErrorKind::Parse, "unknown attaining feature '" + s + "'");
}

// Thickness

inline json thickness_to_json(const ThicknessReport& r) {
  json j{{"thickness", extent_to_json(r.thickness)},
         {"focal_distance", extent_to_json(r.focal_distance)},
         {"sup_curvature", r.sup_curvature},
         {"mdc", extent_to_json(r.mdc)},
         {"attaining_feature", to_string(r.attaining_feature)},
         {"focal_location", arc_to_json(r.focal_location)},
         {"critical_pair_count", r.critical_pair_count},
         {"critical_pair", nullptr},
         {"oracle_rolling_ball", detail::optional_number(r.oracle_rolling_ball)},
         {"oracle_cut_value", detail::optional_number(r.oracle_cut_value)},
         {"max_discrepancy", r.max_discrepancy}};
  if (r.critical_pair) {
    const auto& p = *r.critical_pair;
    j["critical_pair"] = {{"p", arc_to_json(p.p)},
                          {"q", arc_to_json(p.q)},
                          {"chord_length", p.chord_length},
                          {"residual_angles", p.residual_angles}};
  }
  return j;
}

inline ThicknessReport thickness_from_json(const json& j) {
  return detail::parse_guard("thickness report", [&] {
    ThicknessReport r;
    r.thickness = extent_from_json(j.at("thickness"));
    r.focal_distance = extent_from_json(j.at("focal_distance"));
    r.sup_curvature = j.at("sup_curvature").get<double>();
    r.mdc = extent_from_json(j.at("mdc"));
    r.attaining_feature = feature_from_string(j.at("attaining_feature").get<std::string>());
    r.focal_location = arc_from_json(j.at("focal_location"));
    r.critical_pair_count = j.at("critical_pair_count").get<std::size_t>();
    if (!j.at("critical_pair").is_null()) {
      const json& p = j.at("critical_pair");
      r.critical_pair = DoubleCriticalPair{arc_from_json(p.at("p")), arc_from_json(p.at("q")),
                                           p.at("chord_length").get<double>(),
                                           p.at("residual_angles").get<std::array<double, 2>>()};
    }
    r.oracle_rolling_ball = detail::optional_from(j.at("oracle_rolling_ball"));
    r.oracle_cut_value = detail::optional_from(j.at("oracle_cut_value"));
    r.max_discrepancy = j.at("max_discrepancy").get<double>();
    return r;
  });
}

// Bounds

inline json bounds_to_json(const BoundsReport& b) {
  return {{"n", b.n},
          {"k", b.k},
          {"r", b.r},
          {"epsilon", b.epsilon},
          {"R", b.R},
          {"d0", detail::optional_number(b.d0)},
          {"v0", detail::optional_number(b.v0)},
          {"i0", detail::optional_number(b.i0)},
          {"i0_volume", detail::optional_number(b.i0_volume)},
          {"rho", detail::optional_number(b.rho)},
          {"Lambda0", detail::optional_number(b.Lambda0)},
          {"cover", detail::optional_number(b.cover)},
          {"class_bound_exponent", detail::optional_number(b.class_bound_exponent())},
          {"log", {{"d0", b.log_d0},
                   {"v0", b.log_v0},
                   {"i0", b.log_i0},
                   {"i0_volume", detail::number_or_null(b.log_i0_volume)},
                   {"rho", b.log_rho},
                   {"Lambda0", b.log_Lambda0},
                   {"cover", b.log_cover}}}};
}

inline BoundsReport bounds_from_json(const json& j) {
  return detail::parse_guard("bounds report", [&] {
    BoundsReport b;
    b.n = j.at("n").get<int>();
    b.k = j.at("k").get<int>();
    b.r = j.at("r").get<double>();
    b.epsilon = j.at("epsilon").get<double>();
    b.R = j.at("R").get<double>();
    b.d0 = detail::optional_from(j.at("d0"));
    b.v0 = detail::optional_from(j.at("v0"));
    b.i0 = detail::optional_from(j.at("i0"));
    b.i0_volume = detail::optional_from(j.at("i0_volume"));
    b.rho = detail::optional_from(j.at("rho"));
    b.Lambda0 = detail::optional_from(j.at("Lambda0"));
    b.cover = detail::optional_from(j.at("cover"));
    const json& l = j.at("log");
    b.log_d0 = l.at("d0").get<double>();
    b.log_v0 = l.at("v0").get<double>();
    b.log_i0 = l.at("i0").get<double>();
    b.log_i0_volume = l.at("i0_volume").is_null() ? -std::numeric_limits<double>::infinity()
                                                  : l.at("i0_volume").get<double>();
    b.log_rho = l.at("rho").get<double>();
    b.log_Lambda0 = l.at("Lambda0").get<double>();
    b.log_cover = l.at("cover").get<double>();
    return b;
  });
}

// Isotopy

inline json isotopy_to_json(const IsotopyCheck& c, bool with_projection = true) {
  json j{{"rho_used", c.rho_used},
         {"verdict", to_string(c.verdict)},
         {"failed_check", c.failed_check},
         {"detail", c.detail},
         {"frames", c.frames},
         {"max_distance", c.max_distance},
         {"degrees", c.degrees}};
  if (with_projection) {
    json proj = json::array();
    for (const auto& ring : c.projection) {
      json r = json::array();
      for (const auto& p : ring)
        r.push_back({{"foot", arc_to_json(p.foot)},
                     {"distance", p.distance},
                     {"second_distance", detail::number_or_null(p.second_distance)},
                     {"unique", p.unique}});
      proj.push_back(std::move(r));
    }
    j["projection"] = std::move(proj);
  }
  return j;
}

inline IsotopyCheck isotopy_from_json(const json& j) {
  return detail::parse_guard("isotopy check", [&] {
    IsotopyCheck c;
    c.rho_used = j.at("rho_used").get<double>();
    const auto v = j.at("verdict").get<std::string>();
    if (v != "Isotopic" && v != "Inconclusive") fail(ErrorKind::Parse, "unknown verdict '" + v + "'");
    c.verdict = v == "Isotopic" ? IsotopyVerdict::Isotopic : IsotopyVerdict::Inconclusive;
    c.failed_check = j.at("failed_check").get<std::string>();
    c.detail = j.at("detail").get<std::string>();
    c.frames = j.at("frames").get<std::size_t>();
    c.max_distance = j.at("max_distance").get<double>();
    c.degrees = j.at("degrees").get<std::vector<int>>();
    if (j.contains("projection"))
      for (const auto& r : j.at("projection")) {
        auto& ring = c.projection.emplace_back();
        for (const auto& p : r)
          ring.push_back({arc_from_json(p.at("foot")), p.at("distance").get<double>(),
                          detail::number_or_inf(p.at("second_distance")), p.at("unique").get<bool>()});
      }
    return c;
  });
}

// Semicontinuity

inline json semicontinuity_to_json(const SemicontinuityResult& r) {
  json steps = json::array();
  for (const auto& s : r.steps)
    steps.push_back({{"j", s.j},
                     {"amplitude", s.amplitude},
                     {"thickness", s.thickness},
                     {"mdc", detail::number_or_null(s.mdc)},
                     {"focal_distance", detail::number_or_null(s.focal_distance)},
                     {"c1_distance", s.c1_distance}});
  return {{"family", to_string(r.family)},
          {"base_thickness", r.base_thickness},
          {"base_mdc", detail::number_or_null(r.base_mdc)},
          {"steps", std::move(steps)},
          {"tail_begin_j", r.steps.empty() ? 0 : r.steps[r.tail_begin].j},
          {"tail_max_thickness", r.tail_max_thickness},
          {"tail_min_mdc", detail::number_or_null(r.tail_min_mdc)},
          {"thickness_band", r.thickness_band},
          {"mdc_band", r.mdc_band},
          {"upper_semicontinuity", r.upper_semicontinuous ? "PASS" : "FAIL"},
          {"mdc_lower_semicontinuity", r.mdc_lower_semicontinuous ? "PASS" : "FAIL"}};
}

inline SemicontinuityResult semicontinuity_from_json(const json& j) {
  return detail::parse_guard("semicontinuity result", [&] {
    SemicontinuityResult r;
    r.family = parse_family(j.at("family").get<std::string>());
    r.base_thickness = j.at("base_thickness").get<double>();
    r.base_mdc = detail::number_or_inf(j.at("base_mdc"));
    for (const auto& s : j.at("steps"))
      r.steps.push_back({s.at("j").get<std::size_t>(), s.at("amplitude").get<double>(),
                         s.at("thickness").get<double>(), detail::number_or_inf(s.at("mdc")),
                         detail::number_or_inf(s.at("focal_distance")), s.at("c1_distance").get<double>()});
    const auto tail_j = j.at("tail_begin_j").get<std::size_t>();
    r.tail_begin = tail_j > 0 ? tail_j - 1 : 0;
    r.tail_max_thickness = j.at("tail_max_thickness").get<double>();
    r.tail_min_mdc = detail::number_or_inf(j.at("tail_min_mdc"));
    r.thickness_band = j.at("thickness_band").get<double>();
    r.mdc_band = j.at("mdc_band").get<double>();
    r.upper_semicontinuous = j.at("upper_semicontinuity").get<std::string>() == "PASS";
    r.mdc_lower_semicontinuous = j.at("mdc_lower_semicontinuity").get<std::string>() == "PASS";
    return r;
  });
}

// Smoothing

inline json smoothing_to_json(const SmoothingResult& s) {
  json windows = json::array();
  for (const auto& w : s.windows)
    windows.push_back({{"component", w.component},
                       {"center_vertex", w.center_vertex},
                       {"delta", w.delta},
                       {"halvings", w.halvings},
                       {"ladder_curvature", w.ladder_curvature},
                       {"ladder_slope", w.ladder_slope},
                       {"sup_curvature", w.sup_curvature},
                       {"max_slope", w.max_slope}});
  return {{"sup_curvature", s.sup_curvature},
          {"focal_distance", extent_to_json(s.focal_distance)},
          {"c1_distance", s.c1_distance},
          {"window_width", s.window_width},
          {"rho", s.rho},
          {"restarts", s.restarts},
          {"windows", std::move(windows)}};
}

// Tightening

inline json tighten_record_to_json(const TightenRecord& r) {
  return {{"iteration", r.iteration},
          {"move", to_string(r.move)},
          {"accepted", r.accepted},
          {"rejection", to_string(r.rejection)},
          {"objective", r.objective},
          {"thickness", r.thickness},
          {"attaining_feature", to_string(r.attaining_feature)},
          {"candidate_objective", r.candidate_objective}};
}

inline TightenRecord tighten_record_from_json(const json& j) {
  return detail::parse_guard("tighten record", [&] {
    TightenRecord r;
    r.iteration = j.at("iteration").get<std::size_t>();
    r.move = j.at("move").get<std::string>() == "bump" ? MoveKind::Bump : MoveKind::Vertex;
    r.accepted = j.at("accepted").get<bool>();
    const auto why = j.at("rejection").get<std::string>();
    for (auto k : {Rejection::None, Rejection::CurvatureBound, Rejection::NotEmbedded, Rejection::NoImprovement,
                   Rejection::NotIsotopic})
      if (why == to_string(k)) r.rejection = k;
    r.objective = j.at("objective").get<double>();
    r.thickness = j.at("thickness").get<double>();
    r.attaining_feature = feature_from_string(j.at("attaining_feature").get<std::string>());
    r.candidate_objective = j.at("candidate_objective").get<double>();
    return r;
  });
}

inline json tighten_config_to_json(const TightenConfig& c) {
  return {{"seed", c.seed},
          {"steps", c.steps},
          {"step_scale", c.step_scale},
          {"bump_scale", c.bump_scale},
          {"cooling", c.cooling},
          {"batch", c.batch},
          {"bump_period", c.bump_period},
          {"isotopy_frames", c.isotopy_frames},
          {"peak_bias", c.peak_bias},
          {"length_constraint", "RenormalizeEachStep"},
          {"objective", "ropelength"}};
}

inline json tighten_summary_to_json(const TightenTrace& t) {
  return {{"config", tighten_config_to_json(t.config)},
          {"initial_objective", t.initial_objective},
          {"initial_thickness", t.initial_thickness},
          {"length", t.length},
          {"iterations", t.records.size()},
          {"accepted", t.accepted},
          {"final_objective", t.final_objective},
          {"final_thickness", t.final_thickness}};
}

// Graph patches

inline json patch_to_json(const GraphPatch& p) {
  return {{"k", p.k()},
          {"m", p.m()},
          {"origin", p.origin()},
          {"spacing", p.spacing()},
          {"shape", p.shape()},
          {"values", p.values()},
          {"jacobian", p.jacobians()},
          {"lipschitz_B", p.lipschitz_B()},
          {"bound_A", p.bound_A()}};
}

inline GraphPatch patch_from_json(const json& j) {
  return detail::parse_guard("graph patch", [&] {
    GraphPatch p(j.at("k").get<std::size_t>(), j.at("m").get<std::size_t>(), j.at("origin").get<Vec>(),
                 j.at("spacing").get<double>(), j.at("shape").get<std::vector<std::size_t>>());
    auto values = j.at("values").get<std::vector<double>>();
    auto jac = j.at("jacobian").get<std::vector<double>>();
    if (values.size() != p.values().size() || jac.size() != p.jacobians().size())
      fail(ErrorKind::DimensionMismatch, "graph patch data does not match its grid");
    p.values() = std::move(values);
    p.jacobians() = std::move(jac);
    p.set_lipschitz_B(j.value("lipschitz_B", 0.0));
    p.set_bound_A(j.value("bound_A", p.measured_A()));
    return p;
  });
}

// Lemma checks

inline json bound_checks_to_json(const std::vector<BoundCheck>& checks) {
  json out = json::array();
  for (const auto& c : checks)
    out.push_back({{"name", c.name}, {"measured", c.measured}, {"bound", c.bound}, {"holds", c.holds()}});
  return out;
}

}  // namespace nir
