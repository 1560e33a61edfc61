// thickness: command-line front end for the thickness kernel.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thickness/thickness.hpp"

namespace {

using namespace nir;

// Every numeric default of the tool. README.md mirrors this table.
namespace defaults {
constexpr std::size_t oracle_directions = 32;
constexpr std::uint64_t semicontinuity_seed = 1;
constexpr std::size_t semicontinuity_count = 32;
constexpr double bump_height = 0.05;
constexpr int bump_frequency = 8;
constexpr double tangential_shift = 0.4;
constexpr double band = 5e-3;
constexpr double smooth_r1 = 1.0;
constexpr double smooth_r2 = 0.9;
constexpr double smooth_sigma = 1e-2;
constexpr std::size_t isotopy_frames = 8;
constexpr int bounds_n = 3;
constexpr int bounds_k = 1;
constexpr double bounds_r = 1.0;
constexpr double bounds_epsilon = 1.0;
constexpr std::uint64_t tighten_seed = 7;
constexpr std::size_t tighten_steps = 20000;
constexpr double tighten_step_scale = 1e-2;
constexpr double tighten_bump_scale = 1e-2;
constexpr double tighten_cooling = 0.9;
constexpr std::size_t tighten_batch = 32;
constexpr std::size_t tighten_bump_period = 16;
constexpr double tighten_peak_bias = 0.5;
constexpr std::uint64_t fixture_seed = 0;
constexpr std::size_t fixture_n = 1000;
constexpr double fixture_radius = 1.0;
constexpr double fixture_a = 2.0;
constexpr double fixture_b = 1.0;
constexpr double fixture_flat = 4.0;
constexpr double fixture_inner = 1.0;
constexpr double fixture_outer = 3.0;
constexpr double fixture_amplitude = 0.05;
constexpr std::size_t fixture_degree = 5;
constexpr double fixture_slope = 40.0;
constexpr double fixture_extent = 1.0;
constexpr std::size_t fixture_patch_k = 2;
constexpr std::size_t fixture_patch_m = 1;
}  // namespace defaults

// Options naming where the report and plot data go; they are left out of the
// recorded argv so that a rerun writes wherever the rerun is told to.
const std::set<std::string> kOutputOptions = {"--out", "-o", "--csv"};

std::vector<std::string> reproducible_args(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (kOutputOptions.count(a)) {
      ++i;
      continue;
    }
    const auto eq = a.find('=');
    if (eq != std::string::npos && kOutputOptions.count(a.substr(0, eq))) continue;
    kept.push_back(a);
  }
  return kept;
}

struct Context {
  std::vector<std::string> args;
  std::string out;
  std::string csv;
  unsigned threads = 0;
  std::chrono::steady_clock::time_point start;
};

json manifest(const Context& ctx, const std::string& command, const std::vector<std::string>& inputs,
              const json& params, std::optional<std::uint64_t> seed) {
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start).count();
  return {{"command", command},
          {"argv", reproducible_args(ctx.args)},
          {"inputs", inputs},
          {"parameters", params},
          {"version", kToolVersion},
          {"seed", seed ? json(*seed) : json(nullptr)},
          {"threads", thread_count()},
          {"wall_time_s", wall}};
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) fail(ErrorKind::Parse, "cannot write " + path);
  f << std::setprecision(17);
  return f;
}

void emit(const Context& ctx, const json& report) {
  if (ctx.out.empty()) {
    std::cout << report.dump(2) << '\n';
  } else {
    auto f = open_output(ctx.out);
    f << report.dump(2) << '\n';
  }
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

// thickness

struct ThicknessArgs {
  std::string curve;
  std::string oracle = "none";
  std::size_t directions = defaults::oracle_directions;
};

void cmd_thickness(const Context& ctx, const ThicknessArgs& a) {
  const DiscreteCurve curve = read_curve_file(a.curve);
  ThicknessReport rep = thickness(curve);
  if (a.oracle != "none") {
    if (!rep.thickness.bounded()) fail(ErrorKind::InvalidArgument, "oracles need a bounded thickness");
    const double t = rep.thickness.value();
    const auto spec = default_sample_spec(t, a.directions);
    if (a.oracle == "ball" || a.oracle == "both") {
      rep.oracle_rolling_ball = rolling_ball_oracle(curve, spec).value;
      rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(*rep.oracle_rolling_ball - t));
    }
    if (a.oracle == "cut" || a.oracle == "both") {
      rep.oracle_cut_value = cut_value_oracle(curve, spec).value;
      rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(*rep.oracle_cut_value - t));
    }
  }
  if (!ctx.csv.empty()) {
    auto f = open_output(ctx.csv);
    f << "component,vertex,arclength,curvature\n";
    const auto k = vertex_curvatures(curve);
    for (std::size_t c = 0; c < curve.component_count(); ++c)
      for (std::size_t i = 0; i < curve.ring(c).size(); ++i)
        f << c << ',' << i << ',' << curve.ring(c).arclength_at(i) << ',' << k[c][i] << '\n';
  }
  const json params{{"oracle", a.oracle}, {"normal_directions_per_vertex", a.directions}};
  json body{{"components", curve.component_count()},
            {"vertices", curve.vertex_count()},
            {"length", curve.length()},
            {"report", thickness_to_json(rep)}};
  body["manifest"] = manifest(ctx, "thickness", {a.curve}, params, std::nullopt);
  emit(ctx, body);
}

// semicontinuity

struct SemicontinuityArgs {
  std::string curve;
  std::string family = "all";
  std::vector<double> amplitudes;
  std::size_t count = defaults::semicontinuity_count;
  double bump_height = defaults::bump_height;
  int frequency = defaults::bump_frequency;
  double shift = defaults::tangential_shift;
  double band = defaults::band;
  std::uint64_t seed = defaults::semicontinuity_seed;
};

void cmd_semicontinuity(const Context& ctx, const SemicontinuityArgs& a) {
  const DiscreteCurve base = read_curve_file(a.curve);
  std::vector<PerturbationFamily> families;
  if (a.family == "all")
    families = {PerturbationFamily::RadialBumps, PerturbationFamily::TangentialNoise, PerturbationFamily::Mixed};
  else
    families = {parse_family(a.family)};
  SemicontinuitySpec spec;
  spec.amplitudes = a.amplitudes;
  spec.count = a.count;
  spec.bump_height = a.bump_height;
  spec.frequency = a.frequency;
  spec.tangential_shift = a.shift;
  spec.band = a.band;
  spec.seed = a.seed;
  const std::vector<double> schedule = a.amplitudes.empty() ? default_schedule(a.count) : a.amplitudes;

  json results = json::array();
  bool all_pass = true;
  std::optional<std::ofstream> csv;
  if (!ctx.csv.empty()) {
    csv = open_output(ctx.csv);
    *csv << "family,j,amplitude,thickness,mdc,focal_distance,c1_distance\n";
  }
  for (auto fam : families) {
    spec.family = fam;
    const auto r = semicontinuity_experiment(base, spec);
    all_pass = all_pass && r.upper_semicontinuous && r.mdc_lower_semicontinuous;
    results.push_back(semicontinuity_to_json(r));
    if (csv)
      for (const auto& s : r.steps)
        *csv << to_string(fam) << ',' << s.j << ',' << s.amplitude << ',' << s.thickness << ',' << s.mdc << ','
             << s.focal_distance << ',' << s.c1_distance << '\n';
  }
  json fam_names = json::array();
  for (auto f : families) fam_names.push_back(to_string(f));
  const json params{{"families", fam_names},     {"amplitudes", schedule},   {"bump_height", a.bump_height},
                    {"frequency", a.frequency},  {"tangential_shift", a.shift}, {"band", a.band}};
  json body{{"experiments", results}, {"all_pass", all_pass}};
  body["manifest"] = manifest(ctx, "semicontinuity", {a.curve}, params, a.seed);
  emit(ctx, body);
}

// smooth

struct SmoothArgs {
  std::string curve;
  double r1 = defaults::smooth_r1;
  double r2 = defaults::smooth_r2;
  double sigma = defaults::smooth_sigma;
  std::string curve_out;
};

void cmd_smooth(const Context& ctx, const SmoothArgs& a) {
  const DiscreteCurve curve = read_curve_file(a.curve);
  const SmoothingResult r = smoothing_ladder(curve, a.r1, a.r2, a.sigma);
  json body{{"smoothing", smoothing_to_json(r)},
            {"checks",
             bound_checks_to_json({{"sup_curvature", r.sup_curvature, 1.0 / a.r2}, {"c1_distance", r.c1_distance, a.sigma}})}};
  if (a.curve_out.empty()) {
    body["curve"] = curve_to_json(r.curve);
  } else {
    write_curve_file(a.curve_out, r.curve);
    body["curve_file"] = a.curve_out;
  }
  if (!ctx.csv.empty()) {
    auto f = open_output(ctx.csv);
    f << "component,center_vertex,delta,halvings,ladder_curvature,sup_curvature,ladder_slope,max_slope\n";
    for (const auto& w : r.windows)
      f << w.component << ',' << w.center_vertex << ',' << w.delta << ',' << w.halvings << ',' << w.ladder_curvature
        << ',' << w.sup_curvature << ',' << w.ladder_slope << ',' << w.max_slope << '\n';
  }
  const json params{{"R1", a.r1}, {"R2", a.r2}, {"sigma", a.sigma}};
  body["manifest"] = manifest(ctx, "smooth", {a.curve}, params, std::nullopt);
  emit(ctx, body);
}

// isotopy

struct IsotopyArgs {
  std::string a, b;
  std::optional<double> rho;
  std::size_t frames = defaults::isotopy_frames;
};

void cmd_isotopy(const Context& ctx, const IsotopyArgs& a) {
  const DiscreteCurve K = read_curve_file(a.a);
  const DiscreteCurve L = read_curve_file(a.b);
  const ThicknessReport tk = thickness(K);
  const double rho = a.rho ? *a.rho : suggested_rho(tk.thickness.value());
  const IsotopyCheck c = isotopy_check(K, L, rho, a.frames);
  if (!ctx.csv.empty()) {
    auto f = open_output(ctx.csv);
    f << "component,vertex,distance,second_distance,unique\n";
    for (std::size_t r = 0; r < c.projection.size(); ++r)
      for (std::size_t i = 0; i < c.projection[r].size(); ++i) {
        const auto& p = c.projection[r][i];
        f << r << ',' << i << ',' << p.distance << ',' << p.second_distance << ',' << (p.unique ? 1 : 0) << '\n';
      }
  }
  json body{{"check", isotopy_to_json(c)},
            {"thickness_a", extent_to_json(tk.thickness)},
            {"hausdorff_distance", hausdorff_distance(K, L)}};
  const json params{{"rho", rho}, {"frames", a.frames}};
  body["manifest"] = manifest(ctx, "isotopy", {a.a, a.b}, params, std::nullopt);
  emit(ctx, body);
}

// bounds

struct BoundsArgs {
  int n = defaults::bounds_n;
  int k = defaults::bounds_k;
  double r = defaults::bounds_r;
  double epsilon = defaults::bounds_epsilon;
  bool table = false;
};

void print_bounds_table(const BoundsReport& b) {
  auto row = [](const std::string& name, double log_value, const std::optional<double>& value) {
    std::cout << std::left << std::setw(12) << name << std::right << std::setw(22) << fmt(log_value) << std::setw(22)
              << (value ? fmt(*value) : std::string("overflow")) << '\n';
  };
  std::cout << "n = " << b.n << ", k = " << b.k << ", r = " << fmt(b.r) << ", epsilon = " << fmt(b.epsilon)
            << ", R = " << fmt(b.R) << '\n';
  std::cout << std::left << std::setw(12) << "quantity" << std::right << std::setw(22) << "log" << std::setw(22)
            << "value" << '\n';
  row("d0", b.log_d0, b.d0);
  row("v0", b.log_v0, b.v0);
  row("i0", b.log_i0, b.i0);
  row("i0_volume", b.log_i0_volume, b.i0_volume);
  row("rho", b.log_rho, b.rho);
  row("Lambda0", b.log_Lambda0, b.Lambda0);
  row("cover", b.log_cover, b.cover);
  std::cout << "classes <= 2^Lambda0\n";
}

void cmd_bounds(const Context& ctx, const BoundsArgs& a) {
  const BoundsReport b = class_count_bound(a.n, a.k, a.r, a.epsilon);
  if (a.table) print_bounds_table(b);
  if (!ctx.csv.empty()) {
    auto f = open_output(ctx.csv);
    f << "quantity,log_value\n";
    f << "d0," << b.log_d0 << "\nv0," << b.log_v0 << "\ni0," << b.log_i0 << "\ni0_volume," << b.log_i0_volume
      << "\nrho," << b.log_rho << "\nLambda0," << b.log_Lambda0 << "\ncover," << b.log_cover << '\n';
  }
  if (a.table && ctx.out.empty()) return;
  json body{{"bounds", bounds_to_json(b)}};
  const json params{{"n", a.n}, {"k", a.k}, {"r", a.r}, {"epsilon", a.epsilon}};
  body["manifest"] = manifest(ctx, "bounds", {}, params, std::nullopt);
  emit(ctx, body);
}

// tighten

struct TightenArgs {
  std::string curve;
  TightenConfig config;
  std::string trace;
  std::string final_curve;
};

void cmd_tighten(const Context& ctx, const TightenArgs& a) {
  const DiscreteCurve start = read_curve_file(a.curve);
  const TightenTrace t = tighten(start, a.config);
  if (!a.trace.empty()) {
    auto f = open_output(a.trace);
    for (const auto& r : t.records) f << tighten_record_to_json(r).dump() << '\n';
  }
  if (!ctx.csv.empty()) {
    auto f = open_output(ctx.csv);
    f << "iteration,move,accepted,rejection,objective,thickness,candidate_objective\n";
    for (const auto& r : t.records)
      f << r.iteration << ',' << to_string(r.move) << ',' << (r.accepted ? 1 : 0) << ',' << to_string(r.rejection)
        << ',' << r.objective << ',' << r.thickness << ',' << r.candidate_objective << '\n';
  }
  json body{{"summary", tighten_summary_to_json(t)}};
  if (a.final_curve.empty()) {
    body["final_curve"] = curve_to_json(t.final_curve);
  } else {
    write_curve_file(a.final_curve, t.final_curve);
    body["final_curve_file"] = a.final_curve;
  }
  body["manifest"] = manifest(ctx, "tighten", {a.curve}, tighten_config_to_json(a.config), a.config.seed);
  emit(ctx, body);
}

// fixtures

struct FixtureArgs {
  std::string name;
  std::size_t n = defaults::fixture_n;
  std::optional<std::size_t> n_outer;
  double radius = defaults::fixture_radius;
  double a = defaults::fixture_a;
  double b = defaults::fixture_b;
  double flat = defaults::fixture_flat;
  double inner = defaults::fixture_inner;
  double outer = defaults::fixture_outer;
  double amplitude = defaults::fixture_amplitude;
  std::size_t degree = defaults::fixture_degree;
  std::size_t dim = 2;
  std::string profile = "spike";
  double slope = defaults::fixture_slope;
  double extent = defaults::fixture_extent;
  std::size_t patch_k = defaults::fixture_patch_k;
  std::size_t patch_m = defaults::fixture_patch_m;
  std::uint64_t seed = defaults::fixture_seed;
};

const std::vector<std::string> kCurveFixtures = {"circle",  "ellipse", "stadium",          "rounded_square",
                                                 "concentric", "trefoil", "perturbed_circle", "random_trig"};
const std::vector<std::string> kPatchFixtures = {"example1", "smoothed_abs", "random_lipschitz"};

AngularProfile profile_by_name(const std::string& name, double slope) {
  if (name == "flat") return flat_profile();
  if (name == "paraboloid") return paraboloid_profile();
  if (name == "spike") return spike_profile(slope);
  fail(ErrorKind::InvalidArgument, "unknown profile '" + name + "'");
}

void cmd_fixtures(const Context& ctx, const FixtureArgs& a) {
  const bool is_curve = std::count(kCurveFixtures.begin(), kCurveFixtures.end(), a.name) > 0;
  const bool is_patch = std::count(kPatchFixtures.begin(), kPatchFixtures.end(), a.name) > 0;
  if (!is_curve && !is_patch) fail(ErrorKind::InvalidArgument, "unknown fixture '" + a.name + "'");
  json params{{"name", a.name}, {"n", a.n}};
  std::optional<std::uint64_t> seed;
  json body;
  if (is_curve) {
    DiscreteCurve c;
    if (a.name == "circle") {
      c = fixtures::circle(a.n, a.radius, a.dim);
      params["radius"] = a.radius;
      params["dim"] = a.dim;
    } else if (a.name == "ellipse") {
      c = fixtures::ellipse(a.a, a.b, a.n);
      params["a"] = a.a;
      params["b"] = a.b;
    } else if (a.name == "stadium") {
      c = fixtures::stadium(a.n, a.radius, a.flat);
      params["radius"] = a.radius;
      params["flat"] = a.flat;
    } else if (a.name == "rounded_square") {
      c = fixtures::rounded_square(a.n, 0.5 * a.radius, a.flat / 4.0);
      params["radius"] = 0.5 * a.radius;
      params["flat"] = a.flat / 4.0;
    } else if (a.name == "concentric") {
      const std::size_t outer = a.n_outer.value_or(3 * a.n);
      c = fixtures::concentric(a.n, outer, a.inner, a.outer);
      params["n_outer"] = outer;
      params["inner"] = a.inner;
      params["outer"] = a.outer;
    } else if (a.name == "trefoil") {
      c = fixtures::trefoil(a.n);
    } else if (a.name == "perturbed_circle") {
      c = fixtures::perturbed_circle(a.n, a.amplitude, a.seed);
      params["amplitude"] = a.amplitude;
      seed = a.seed;
    } else {
      c = fixtures::random_trig(a.seed, a.n, a.degree);
      params["degree"] = a.degree;
      seed = a.seed;
    }
    if (!ctx.out.empty() && has_suffix(ctx.out, ".csv")) {
      write_curve_file(ctx.out, c);
      return;
    }
    body = curve_to_json(c);
  } else {
    const std::size_t half = std::max<std::size_t>(1, a.n / 2);
    params["half"] = half;
    params["extent"] = a.extent;
    if (a.name == "example1") {
      params["profile"] = a.profile;
      params["slope"] = a.slope;
      body = patch_to_json(angular_surface(profile_by_name(a.profile, a.slope), half, a.extent));
    } else if (a.name == "smoothed_abs") {
      body = patch_to_json(smoothed_abs_patch(a.extent, half));
    } else {
      params["k"] = a.patch_k;
      params["m"] = a.patch_m;
      seed = a.seed;
      body = patch_to_json(random_lipschitz_patch(a.seed, a.patch_k, a.patch_m, a.extent, half));
    }
  }
  body["manifest"] = manifest(ctx, "fixtures", {}, params, seed);
  emit(ctx, body);
}

int run(std::vector<std::string> args);

int cmd_rerun(const std::string& report_path, const std::string& out) {
  std::ifstream in(report_path);
  if (!in) fail(ErrorKind::Parse, "cannot open " + report_path);
  json report;
  try {
    in >> report;
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, report_path + ": " + e.what());
  }
  if (!report.contains("manifest") || !report["manifest"].contains("argv"))
    fail(ErrorKind::Parse, report_path + " has no manifest");
  auto args = report["manifest"]["argv"].get<std::vector<std::string>>();
  if (!args.empty() && args.front() == "rerun") fail(ErrorKind::InvalidArgument, "manifest records a rerun");
  if (!out.empty()) {
    args.push_back("--out");
    args.push_back(out);
  }
  return run(std::move(args));
}

int run(std::vector<std::string> args) {
  CLI::App app{"Thickness of curves: kernel, oracles, experiments and fixtures"};
  app.require_subcommand(1);
  app.fallthrough();

  Context ctx;
  ctx.args = args;
  ctx.start = std::chrono::steady_clock::now();
  app.add_option("--threads", ctx.threads, "Worker threads (0 = hardware); THICKNESS_THREADS overrides");
  app.add_option("-o,--out", ctx.out, "Write the JSON report here instead of stdout");
  app.add_option("--csv", ctx.csv, "Write tidy CSV plot data here");

  ThicknessArgs ta;
  auto* th = app.add_subcommand("thickness", "Thickness, focal distance and MDC of a curve file");
  th->add_option("curve", ta.curve, "Curve file (.json or .csv)")->required();
  th->add_option("--oracle", ta.oracle, "Brute-force cross-checks")
      ->check(CLI::IsMember({"none", "ball", "cut", "both"}))
      ->capture_default_str();
  th->add_option("--directions", ta.directions, "Sampled unit normals per vertex")->capture_default_str();

  SemicontinuityArgs sa;
  auto* se = app.add_subcommand("semicontinuity", "Semicontinuity of thickness and MDC along K_j -> K");
  se->add_option("curve", sa.curve, "Base curve file")->required();
  se->add_option("--family", sa.family, "Perturbation family")
      ->check(CLI::IsMember({"all", "radial", "tangential", "mixed"}))
      ->capture_default_str();
  se->add_option("--amplitudes", sa.amplitudes, "Explicit amplitude schedule (default 1/j)");
  se->add_option("--count", sa.count, "Sequence length J for the 1/j schedule")->capture_default_str();
  se->add_option("--bump-height", sa.bump_height, "Bump height at amplitude 1, fraction of L/(2 pi)")
      ->capture_default_str();
  se->add_option("--frequency", sa.frequency, "Bumps per component")->capture_default_str();
  se->add_option("--shift", sa.shift, "Tangential shift at amplitude 1, fraction of an edge")->capture_default_str();
  se->add_option("--band", sa.band, "Relative tolerance band of the verdicts")->capture_default_str();
  se->add_option("--seed", sa.seed, "Noise seed")->capture_default_str();

  SmoothArgs sm;
  auto* so = app.add_subcommand("smooth", "Raise the focal distance from R1 to R2 within C^1 distance sigma");
  so->add_option("curve", sm.curve, "Curve file")->required();
  so->add_option("--r1", sm.r1, "Current focal distance lower bound")->capture_default_str();
  so->add_option("--r2", sm.r2, "Target focal distance")->capture_default_str();
  so->add_option("--sigma", sm.sigma, "C^1 distance budget")->capture_default_str();
  so->add_option("--curve-out", sm.curve_out, "Write the smoothed curve here instead of embedding it");

  IsotopyArgs ia;
  auto* is = app.add_subcommand("isotopy", "Nearest-point isotopy check of curve B against curve A");
  is->add_option("a", ia.a, "Reference curve K")->required();
  is->add_option("b", ia.b, "Candidate curve L")->required();
  is->add_option("--rho", ia.rho, "Tube radius (default thickness(K)/8)");
  is->add_option("--frames", ia.frames, "Homotopy frames checked for embedding")->capture_default_str();

  BoundsArgs ba;
  auto* bo = app.add_subcommand("bounds", "Isotopy class count bound for submanifolds of R^n");
  bo->add_option("--n", ba.n, "Ambient dimension")->capture_default_str();
  bo->add_option("--k", ba.k, "Submanifold dimension")->capture_default_str();
  bo->add_option("--r", ba.r, "Diameter bound")->capture_default_str();
  bo->add_option("--epsilon", ba.epsilon, "Thickness lower bound")->capture_default_str();
  bo->add_flag("--table", ba.table, "Print a human-readable table");

  TightenArgs tg;
  tg.config.seed = defaults::tighten_seed;
  tg.config.steps = defaults::tighten_steps;
  tg.config.step_scale = defaults::tighten_step_scale;
  tg.config.bump_scale = defaults::tighten_bump_scale;
  tg.config.cooling = defaults::tighten_cooling;
  tg.config.batch = defaults::tighten_batch;
  tg.config.bump_period = defaults::tighten_bump_period;
  tg.config.isotopy_frames = defaults::isotopy_frames;
  tg.config.peak_bias = defaults::tighten_peak_bias;
  auto* ti = app.add_subcommand("tighten", "Decrease ropelength within the isotopy class");
  ti->add_option("curve", tg.curve, "Start curve file")->required();
  ti->add_option("--steps", tg.config.steps, "Proposed moves")->capture_default_str();
  ti->add_option("--seed", tg.config.seed, "Move seed")->capture_default_str();
  ti->add_option("--step-scale", tg.config.step_scale, "Initial vertex move height")->capture_default_str();
  ti->add_option("--bump-scale", tg.config.bump_scale, "Initial bump height")->capture_default_str();
  ti->add_option("--cooling", tg.config.cooling, "Step-size adaptation factor in (0, 1)")->capture_default_str();
  ti->add_option("--batch", tg.config.batch, "Moves between step-size adaptations")->capture_default_str();
  ti->add_option("--bump-period", tg.config.bump_period, "Every n-th move is a bump")->capture_default_str();
  ti->add_option("--frames", tg.config.isotopy_frames, "Homotopy frames per isotopy check")->capture_default_str();
  ti->add_option("--peak-bias", tg.config.peak_bias, "Fraction of moves aimed at the curvature peak")
      ->capture_default_str();
  ti->add_option("--trace", tg.trace, "Write the JSON-lines move trace here");
  ti->add_option("--final", tg.final_curve, "Write the final curve here instead of embedding it");

  FixtureArgs fa;
  auto* fx = app.add_subcommand("fixtures", "Generate a curve or graph-patch fixture");
  std::vector<std::string> names = kCurveFixtures;
  names.insert(names.end(), kPatchFixtures.begin(), kPatchFixtures.end());
  fx->add_option("name", fa.name, "Fixture name")->required()->check(CLI::IsMember(names));
  fx->add_option("--n", fa.n, "Vertices (curves) or nodes per side (patches)")->capture_default_str();
  fx->add_option("--n-outer", fa.n_outer, "Outer circle vertices for concentric (default 3n)");
  fx->add_option("--radius", fa.radius, "Circle or cap radius")->capture_default_str();
  fx->add_option("--a", fa.a, "Ellipse semi-axis along x")->capture_default_str();
  fx->add_option("--b", fa.b, "Ellipse semi-axis along y")->capture_default_str();
  fx->add_option("--flat", fa.flat, "Stadium flat length")->capture_default_str();
  fx->add_option("--inner", fa.inner, "Concentric inner radius")->capture_default_str();
  fx->add_option("--outer", fa.outer, "Concentric outer radius")->capture_default_str();
  fx->add_option("--amplitude", fa.amplitude, "Radial noise of perturbed_circle")->capture_default_str();
  fx->add_option("--degree", fa.degree, "Trigonometric degree of random_trig")->capture_default_str();
  fx->add_option("--dim", fa.dim, "Ambient dimension of circle")->capture_default_str();
  fx->add_option("--profile", fa.profile, "Angular profile of example1")
      ->check(CLI::IsMember({"flat", "paraboloid", "spike"}))
      ->capture_default_str();
  fx->add_option("--slope", fa.slope, "Spike profile slope")->capture_default_str();
  fx->add_option("--extent", fa.extent, "Patch half-width")->capture_default_str();
  fx->add_option("--k", fa.patch_k, "Domain dimension of random_lipschitz")->capture_default_str();
  fx->add_option("--m", fa.patch_m, "Codomain dimension of random_lipschitz")->capture_default_str();
  fx->add_option("--seed", fa.seed, "Fixture seed")->capture_default_str();

  std::string rerun_report;
  auto* re = app.add_subcommand("rerun", "Re-execute the command recorded in a report manifest");
  re->add_option("report", rerun_report, "Report JSON with a manifest")->required();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (ctx.threads > 0) set_thread_count(ctx.threads);
    if (*th) cmd_thickness(ctx, ta);
    if (*se) cmd_semicontinuity(ctx, sa);
    if (*so) cmd_smooth(ctx, sm);
    if (*is) cmd_isotopy(ctx, ia);
    if (*bo) cmd_bounds(ctx, ba);
    if (*ti) cmd_tighten(ctx, tg);
    if (*fx) cmd_fixtures(ctx, fa);
    if (*re) return cmd_rerun(rerun_report, ctx.out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_numeric_failure(e.kind()) ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(std::vector<std::string>(argv + 1, argv + argc)); }
