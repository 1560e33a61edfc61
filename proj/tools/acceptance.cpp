// acceptance: runs the ten acceptance checks and prints one PASS/FAIL line
// for each. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "thickness/thickness.hpp"

namespace {

using namespace nir;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

Outcome circle_exactness() {
  const auto c = fixtures::circle(1000);
  const auto t0 = Clock::now();
  const auto r = thickness(c);
  const double dt = seconds_since(t0);
  const double t = r.thickness.value(), f = r.focal_distance.value(), m = 0.5 * r.mdc.value();
  const bool ok = within(t, 1.0, 1e-4) && within(f, 1.0, 1e-4) && within(m, 1.0, 1e-4) && dt < 1.0;
  return {ok, "thickness " + num(t) + ", F_g " + num(f) + ", MDC/2 " + num(m) + ", " + num(dt) + " s"};
}

Outcome ellipse_dichotomy() {
  // Analytic values: least radius of curvature b^2/a, shortest double
  // normal the minor axis 2b.
  const double a = 2.0, b = 1.0;
  const auto r = thickness(fixtures::ellipse(a, b, 4000));
  const double t = r.thickness.value(), m = r.mdc.value();
  const bool ok = within(t, b * b / a, 0.01 * b * b / a) && r.attaining_feature == AttainingFeature::Focal &&
                  within(m, 2.0 * b, 0.01 * 2.0 * b);
  return {ok, "thickness " + num(t) + " (" + to_string(r.attaining_feature) + "), MDC " + num(m)};
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  std::vector<std::pair<std::string, DiscreteCurve>> curves;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    curves.emplace_back("trig" + std::to_string(seed), fixtures::random_trig(seed, 2000, 5));
  curves.emplace_back("circle", fixtures::circle(1000));
  curves.emplace_back("ellipse", fixtures::ellipse(2, 1, 4000));
  curves.emplace_back("stadium", fixtures::stadium(2000));
  curves.emplace_back("rounded_square", fixtures::rounded_square(2000));
  curves.emplace_back("concentric", fixtures::concentric(1000, 3000));
  curves.emplace_back("trefoil", fixtures::trefoil(2000));
  double worst = 0.0;
  std::string worst_name;
  for (const auto& [name, c] : curves) {
    const double t = thickness(c).thickness.value();
    const auto spec = default_sample_spec(t);
    const double ball = rolling_ball_oracle(c, spec).value;
    const double cut = cut_value_oracle(c, spec).value;
    const double rel = std::max(std::abs(ball - t), std::abs(cut - t)) / t;
    if (rel > worst) {
      worst = rel;
      worst_name = name;
    }
  }
  const double dt = seconds_since(t0);
  return {worst <= 1e-2 && dt < 60.0, std::to_string(curves.size()) + " curves, worst relative gap " + num(worst) +
                                           " (" + worst_name + "), " + num(dt) + " s"};
}

Outcome semicontinuity_suite() {
  const auto base = fixtures::circle(1000);
  std::string detail;
  bool ok = true;
  for (auto fam : {PerturbationFamily::RadialBumps, PerturbationFamily::TangentialNoise, PerturbationFamily::Mixed}) {
    SemicontinuitySpec spec;
    spec.family = fam;
    const auto r = semicontinuity_experiment(base, spec);
    ok = ok && r.steps.size() == 32 && r.upper_semicontinuous && r.mdc_lower_semicontinuous;
    detail += std::string(detail.empty() ? "" : "; ") + to_string(fam) + ": sup tail t " +
              num(r.tail_max_thickness) + ", inf tail MDC " + num(r.tail_min_mdc);
  }
  return {ok, detail};
}

Outcome mollifier_bounds() {
  std::vector<std::pair<GraphPatch, MollifierSpec>> cases;
  cases.emplace_back(smoothed_abs_patch(2.0, 800), MollifierSpec{0.01, 0.5});
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    cases.emplace_back(random_lipschitz_patch(seed, 2, 1 + seed % 2, 1.0, 80), MollifierSpec{0.05, 0.3});
  std::size_t checks = 0, failed = 0, identity = 0;
  for (const auto& [f, spec] : cases) {
    const auto h = mollify(f, spec);
    for (const auto& c : mollifier_checks(f, h)) {
      ++checks;
      if (!c.holds()) ++failed;
    }
    identity += identity_violations(f, h);
  }
  return {failed == 0 && identity == 0, std::to_string(cases.size()) + " patches, " + std::to_string(checks) +
                                            " inequalities, " + std::to_string(failed) + " violated, " +
                                            std::to_string(identity) + " nodes changed outside 2 rho"};
}

Outcome smoothing_contract() {
  const auto c = fixtures::stadium(2000);
  const double R1 = 1.0, R2 = 0.9, sigma = 1e-2;
  const auto r = smoothing_ladder(c, R1, R2, sigma);
  const double k = sup_curvature(r.curve);
  const double d = c1_distance(c, r.curve);
  return {k <= 1.0 / R2 + 1e-3 && d <= sigma, "sup curvature " + num(k) + ", d_C1 " + num(d)};
}

Outcome isotopy_stability() {
  const std::vector<std::pair<std::string, DiscreteCurve>> fixtures_list = {
      {"circle", fixtures::circle(600)},
      {"ellipse", fixtures::ellipse(2, 1, 800)},
      {"stadium", fixtures::stadium(800)},
      {"rounded_square", fixtures::rounded_square(800)},
      {"concentric", fixtures::concentric(400, 1200)},
      {"trefoil", fixtures::trefoil(800)}};
  std::size_t runs = 0, isotopic = 0, frames_ok = 0, precondition = 0;
  std::string first_failure;
  for (const auto& [name, K] : fixtures_list) {
    const double rho = thickness(K).thickness.value() / 8.0;
    for (std::uint64_t i = 0; i < 10; ++i) {
      const double amplitude = (0.3 + 0.06 * static_cast<double>(i)) * rho;
      const auto L = fixtures::normal_perturbation(K, amplitude, 100 + i);
      ++runs;
      if (!is_valid(L) || !(hausdorff_distance(K, L) < rho)) continue;
      ++precondition;
      const auto check = isotopy_check(K, L, rho);
      if (check.verdict == IsotopyVerdict::Isotopic) {
        ++isotopic;
      } else if (first_failure.empty()) {
        first_failure = name + " #" + std::to_string(i) + " " + check.failed_check;
      }
      // Independent pass over a finer set of homotopy frames.
      bool embedded = check.verdict == IsotopyVerdict::Isotopic;
      for (std::size_t j = 0; embedded && j <= 32; ++j) {
        const auto rings = homotopy_frame(K, L, check.projection, static_cast<double>(j) / 32.0);
        embedded = !find_defect(DiscreteCurve::unchecked(K.dim(), rings)).has_value();
      }
      if (embedded) ++frames_ok;
    }
  }
  std::string detail = std::to_string(isotopic) + "/" + std::to_string(runs) + " Isotopic, " +
                       std::to_string(frames_ok) + " with all 33 frames embedded, " + std::to_string(precondition) +
                       " inside the tube";
  if (!first_failure.empty()) detail += ", first failure " + first_failure;
  return {precondition == runs && isotopic == runs && frames_ok == runs, detail};
}

Outcome bounds_calculator() {
  const double pi = std::numbers::pi;
  const auto b = class_count_bound(3, 1, 1.0, 1.0);
  const double lambda = std::pow(16.0 / pi, 3);
  bool ok = b.i0 && *b.i0 == pi && b.rho && *b.rho == 0.125 && b.Lambda0 &&
            std::abs(*b.Lambda0 - lambda) <= 1e-9 * lambda;
  for (int n = 2; n <= 16; ++n) {
    const auto bn = class_count_bound(n, 1, 1.0, 1.0);
    ok = ok && bn.i0 && *bn.i0 == pi;
  }
  double prev = -1.0;
  for (int n = 3; n <= 8; ++n) {
    const auto bk = class_count_bound(n, 2, 1.0, 1.0);
    ok = ok && std::isfinite(bk.log_Lambda0) && bk.log_Lambda0 >= prev;
    prev = bk.log_Lambda0;
  }
  return {ok, "i0 " + num(*b.i0) + ", rho " + num(*b.rho) + ", Lambda0 " + num(*b.Lambda0) + " vs " + num(lambda)};
}

Outcome tightener_convergence() {
  const auto t0 = Clock::now();
  const auto start = fixtures::perturbed_circle(400, 0.05, 7);
  TightenConfig config;
  config.seed = 7;
  config.steps = 20000;
  config.keep_curves = true;
  const auto trace = tighten(start, config);
  const double run_time = seconds_since(t0);
  const double target = ropelength(fixtures::circle(400));

  // Re-verify class safety of every accepted step.
  std::size_t unsafe = 0;
  for (std::size_t i = 1; i < trace.curves.size(); ++i) {
    const auto& K = trace.curves[i - 1];
    const auto& L = trace.curves[i];
    const double rho = suggested_rho(thickness(K).thickness.value());
    if (find_defect(L) || isotopy_check(K, L, rho).verdict != IsotopyVerdict::Isotopic) ++unsafe;
  }
  double prev = trace.initial_objective;
  std::size_t rises = 0;
  for (const auto& r : trace.records)
    if (r.accepted) {
      if (r.objective > prev) ++rises;
      prev = r.objective;
    }
  const bool ok = trace.final_objective <= 1.02 * target && unsafe == 0 && rises == 0 &&
                  trace.curves.size() == trace.accepted + 1 && run_time < 300.0;
  return {ok, "ropelength " + num(trace.initial_objective) + " -> " + num(trace.final_objective) + " vs circle " +
                  num(target) + ", " + std::to_string(trace.accepted) + " accepted, " + std::to_string(unsafe) +
                  " unsafe, " + num(run_time) + " s"};
}

Outcome angular_surface_regression() {
  const double n = 40.0;
  const auto prof = spike_profile(n);
  const auto p = angular_surface(prof, 100);
  const std::size_t o = *p.node_near(Vec{0.0, 0.0});
  double directional = 0.0;
  for (const Offset& off : {Offset{1, 0}, Offset{0, 1}, Offset{1, 1}, Offset{1, -1}, Offset{2, 1}, Offset{1, 2},
                            Offset{2, -1}, Offset{1, -2}, Offset{3, 1}, Offset{1, 3}}) {
    const auto d2 = second_difference(p, o, off);
    if (d2) directional = std::max(directional, std::abs((*d2)[0]));
  }
  const double mixed = std::abs(mixed_second_difference(p, o, 0, 1)[0]);
  const bool ok = directional <= 1.0 + 1e-12 && mixed >= 0.5 * n - 1e-9;
  return {ok, "max directional " + num(directional) + ", |f_yx(0,0)| " + num(mixed) + " for slope " + num(n)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"circle exactness", circle_exactness},
      {"ellipse dichotomy", ellipse_dichotomy},
      {"oracle equivalence", oracle_equivalence},
      {"semicontinuity suite", semicontinuity_suite},
      {"mollifier bound suite", mollifier_bounds},
      {"smoothing ladder contract", smoothing_contract},
      {"isotopy stability", isotopy_stability},
      {"bounds calculator", bounds_calculator},
      {"tightener convergence", tightener_convergence},
      {"angular surface regression", angular_surface_regression}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
