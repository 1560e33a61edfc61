#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "thickness/fixtures.hpp"
#include "thickness/report_json.hpp"

using namespace nir;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("thickness_io_" + name);
}

}  // namespace

TEST(CurveIo, JsonRoundTrip) {
  const auto c = fixtures::trefoil(200);
  const auto back = curve_from_json(json::parse(curve_to_json(c).dump()));
  EXPECT_EQ(back.dim(), 3u);
  EXPECT_EQ(back.ring(0).coords(), c.ring(0).coords());
}

TEST(CurveIo, CsvRoundTripWithTwoComponents) {
  const auto c = fixtures::concentric(40, 60);
  std::stringstream s;
  write_curve_csv(s, c);
  const auto back = curve_from_csv(s);
  ASSERT_EQ(back.component_count(), 2u);
  EXPECT_EQ(back.ring(0).coords(), c.ring(0).coords());
  EXPECT_EQ(back.ring(1).coords(), c.ring(1).coords());
}

TEST(CurveIo, FilesBySuffix) {
  const auto c = fixtures::ellipse(2, 1, 100);
  for (const char* name : {"e.json", "e.csv"}) {
    const auto path = temp_file(name).string();
    write_curve_file(path, c);
    EXPECT_EQ(read_curve_file(path).ring(0).coords(), c.ring(0).coords()) << name;
    std::filesystem::remove(path);
  }
}

TEST(CurveIo, Errors) {
  std::stringstream ragged("0,0\n1,0,0\n");
  try {
    curve_from_csv(ragged);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
  std::stringstream bad("0,0\n1,x\n");
  EXPECT_THROW(curve_from_csv(bad), Error);
  try {
    curve_from_json(json{{"dim", 2}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
  }
  try {
    curve_from_json(json::parse(R"({"dim":2,"components":[[[0,0],[1,1],[1,0],[0,1]]]})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SelfIntersection);
  }
  EXPECT_THROW(read_curve_file(temp_file("missing.json").string()), Error);
}

TEST(ReportJson, ExtentNullMeansUnbounded) {
  EXPECT_TRUE(extent_to_json(Extent::unbounded()).is_null());
  EXPECT_TRUE(extent_from_json(json(nullptr)).is_unbounded());
  EXPECT_EQ(extent_from_json(extent_to_json(Extent::finite(2.5))).value(), 2.5);
}

TEST(ReportJson, ThicknessRoundTrip) {
  for (const auto& c : {fixtures::ellipse(2, 1, 400), fixtures::stadium(400), fixtures::circle(100)}) {
    ThicknessReport r = thickness(c);
    r.oracle_cut_value = 0.25;
    const json j = thickness_to_json(r);
    const json again = thickness_to_json(thickness_from_json(json::parse(j.dump())));
    EXPECT_EQ(j, again);
  }
}

TEST(ReportJson, UnboundedMdcRoundTrip) {
  ThicknessReport r;
  r.thickness = Extent::finite(1.0);
  r.focal_distance = Extent::finite(1.0);
  const json j = thickness_to_json(r);
  EXPECT_TRUE(j["mdc"].is_null());
  EXPECT_TRUE(j["critical_pair"].is_null());
  EXPECT_TRUE(thickness_from_json(j).mdc.is_unbounded());
}

TEST(ReportJson, BoundsRoundTrip) {
  for (auto [n, k] : {std::pair{3, 1}, std::pair{4, 2}, std::pair{7, 3}}) {
    const auto b = class_count_bound(n, k, 1.5, 0.5);
    const json j = bounds_to_json(b);
    EXPECT_EQ(j, bounds_to_json(bounds_from_json(json::parse(j.dump())))) << n << " " << k;
  }
  const json big = bounds_to_json(class_count_bound(4, 2, 1.0, 1.0));
  EXPECT_TRUE(big["Lambda0"].is_null());
  EXPECT_TRUE(big["log"]["Lambda0"].is_number());
}

TEST(ReportJson, IsotopyRoundTrip) {
  const auto K = fixtures::circle(80);
  const auto L = fixtures::normal_perturbation(K, 0.02, 3);
  for (const auto& c : {isotopy_check(K, L, 0.1), isotopy_check(K, fixtures::circle(80, 1.5), 0.1)}) {
    const json j = isotopy_to_json(c);
    EXPECT_EQ(j, isotopy_to_json(isotopy_from_json(json::parse(j.dump()))));
  }
}

TEST(ReportJson, SemicontinuityRoundTrip) {
  SemicontinuitySpec spec;
  spec.count = 6;
  spec.family = PerturbationFamily::Mixed;
  const auto r = semicontinuity_experiment(fixtures::circle(120), spec);
  const json j = semicontinuity_to_json(r);
  EXPECT_EQ(j["tail_begin_j"], 3);
  EXPECT_EQ(j, semicontinuity_to_json(semicontinuity_from_json(json::parse(j.dump()))));
}

TEST(ReportJson, TightenRecordRoundTrip) {
  TightenConfig config;
  config.steps = 40;
  const auto t = tighten(fixtures::perturbed_circle(60, 0.05, 2), config);
  for (const auto& r : t.records) {
    const json j = tighten_record_to_json(r);
    EXPECT_EQ(j, tighten_record_to_json(tighten_record_from_json(json::parse(j.dump()))));
  }
}

TEST(ReportJson, GraphPatchRoundTrip) {
  for (const auto& p : {angular_surface(spike_profile(10.0), 12), random_lipschitz_patch(3, 2, 2, 1.0, 6)}) {
    const json j = patch_to_json(p);
    const GraphPatch back = patch_from_json(json::parse(j.dump()));
    EXPECT_EQ(back.values(), p.values());
    EXPECT_EQ(back.jacobians(), p.jacobians());
    EXPECT_EQ(back.lipschitz_B(), p.lipschitz_B());
    EXPECT_EQ(back.bound_A(), p.bound_A());
    EXPECT_EQ(j, patch_to_json(back));
  }
}

TEST(ReportJson, GraphPatchSizeMismatch) {
  json j = patch_to_json(smoothed_abs_patch(1.0, 4));
  j["values"].push_back(0.0);
  try {
    patch_from_json(j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}
