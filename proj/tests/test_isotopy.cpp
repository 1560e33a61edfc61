#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "thickness/fixtures.hpp"
#include "thickness/isotopy.hpp"
#include "thickness/kernel.hpp"

using namespace nir;

namespace {

DiscreteCurve translated(const DiscreteCurve& c, double dx) {
  return c.mapped([dx](ConstPoint p) {
    Vec q(p.begin(), p.end());
    q[0] += dx;
    return q;
  });
}

DiscreteCurve reversed(const DiscreteCurve& c) {
  std::vector<std::vector<double>> rings;
  for (const Ring& r : c.rings()) {
    auto& out = rings.emplace_back();
    for (std::size_t i = r.size(); i-- > 0;) out.insert(out.end(), r.vertex(i).begin(), r.vertex(i).end());
  }
  return build_curve_flat(rings, c.dim());
}

// Re-runs the embeddedness validator on frames of the fiber homotopy.
void expect_frames_embedded(const DiscreteCurve& K, const DiscreteCurve& L, const IsotopyCheck& chk,
                            std::size_t frames) {
  for (std::size_t j = 0; j <= frames; ++j) {
    const double t = double(j) / double(frames);
    const auto frame = DiscreteCurve::unchecked(L.dim(), homotopy_frame(K, L, chk.projection, t));
    EXPECT_TRUE(is_valid(frame)) << "frame " << j;
  }
}

}  // namespace

TEST(SuggestedRho, Examples) {
  EXPECT_DOUBLE_EQ(suggested_rho(1.0), 0.125);
  EXPECT_DOUBLE_EQ(suggested_rho(2.0), 0.25);
  try {
    suggested_rho(0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonpositiveThickness);
  }
}

TEST(Isotopy, TranslatedCircle) {
  const auto K = fixtures::circle(400);
  const auto L = translated(K, 0.01);
  const auto chk = isotopy_check(K, L, 0.1);
  EXPECT_EQ(chk.verdict, IsotopyVerdict::Isotopic) << chk.failed_check << ": " << chk.detail;
  EXPECT_TRUE(chk.failed_check.empty());
  EXPECT_NEAR(chk.max_distance, 0.01, 1e-3);
  expect_frames_embedded(K, L, chk, 8);
}

TEST(Isotopy, ConcentricCircleProjectsRadially) {
  const auto K = fixtures::circle(400);
  const auto L = fixtures::circle(300, 1.05);
  const auto chk = isotopy_check(K, L, 0.1);
  ASSERT_EQ(chk.verdict, IsotopyVerdict::Isotopic) << chk.failed_check << ": " << chk.detail;
  EXPECT_EQ(chk.degrees[0], 1);
  // The foot of each vertex lies on the chord crossed by its ray, so its
  // angle is within half a chord angle of the vertex angle.
  for (std::size_t i = 0; i < L.ring(0).size(); ++i) {
    const Vec f = point_at(K, chk.projection[0][i].foot);
    const auto q = L.ring(0).vertex(i);
    EXPECT_NEAR(std::atan2(f[1], f[0]), std::atan2(q[1], q[0]), std::numbers::pi / 400.0);
    EXPECT_NEAR(chk.projection[0][i].distance, 0.05, 1.5e-4);
  }
}

TEST(Isotopy, DistantCircleIsInconclusive) {
  const auto K = fixtures::circle(400);
  const auto chk = isotopy_check(K, translated(K, 5.0), 0.1);
  EXPECT_EQ(chk.verdict, IsotopyVerdict::Inconclusive);
  EXPECT_EQ(chk.failed_check, "containment");
}

TEST(Isotopy, ComponentMismatch) {
  try {
    isotopy_check(fixtures::circle(100), fixtures::concentric(100, 100), 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ComponentMismatch);
  }
}

TEST(Isotopy, IdentityIsIsotopicForAnyRho) {
  const std::vector<DiscreteCurve> curves = {fixtures::circle(300), fixtures::stadium(600, 0.15, 4.0),
                                             fixtures::trefoil(600), fixtures::concentric(200, 300),
                                             fixtures::random_trig(3, 500)};
  for (const auto& K : curves)
    for (double rho : {1e-3, 0.35, 10.0}) {
      const auto chk = isotopy_check(K, K, rho);
      EXPECT_EQ(chk.verdict, IsotopyVerdict::Isotopic) << rho << " " << chk.failed_check << ": " << chk.detail;
    }
}

TEST(Isotopy, ReversedOrientationHasDegreeMinusOne) {
  const auto K = fixtures::circle(300);
  const auto chk = isotopy_check(K, reversed(fixtures::circle(250, 1.02)), 0.1);
  ASSERT_EQ(chk.verdict, IsotopyVerdict::Isotopic) << chk.failed_check;
  EXPECT_EQ(chk.degrees[0], -1);
}

TEST(Isotopy, EquidistantStrandsFailFiberUniqueness) {
  const auto K = fixtures::concentric(300, 300, 1.0, 1.2);
  const auto L = fixtures::concentric(300, 300, 1.1, 1.2);
  const auto chk = isotopy_check(K, L, 0.2);
  EXPECT_EQ(chk.verdict, IsotopyVerdict::Inconclusive);
  EXPECT_EQ(chk.failed_check, "fiber_uniqueness");
}

TEST(Isotopy, TwoComponentsOnOneTargetFailDegree) {
  const auto K = fixtures::concentric(300, 300, 1.0, 3.0);
  const auto L = fixtures::concentric(300, 300, 1.02, 1.06);
  const auto chk = isotopy_check(K, L, 0.1);
  EXPECT_EQ(chk.verdict, IsotopyVerdict::Inconclusive);
  EXPECT_EQ(chk.failed_check, "degree");
}

TEST(Isotopy, DoublyWoundFeetFailDegree) {
  // Winds twice around the unit circle inside a tube of radius 0.03.
  const std::size_t n = 800;
  std::vector<double> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = 2.0 * std::numbers::pi * double(i) / double(n);
    const double r = 1.0 + 0.03 * std::cos(u);
    pts.insert(pts.end(), {r * std::cos(2.0 * u), r * std::sin(2.0 * u), 0.03 * std::sin(u)});
  }
  const auto L = build_curve_flat({pts}, 3);
  const auto chk = isotopy_check(fixtures::circle(400, 1.0, 3), L, 0.1);
  EXPECT_EQ(chk.verdict, IsotopyVerdict::Inconclusive);
  EXPECT_EQ(chk.failed_check, "degree");
}

TEST(Isotopy, SymmetricAtSmallHausdorffGap) {
  const std::vector<DiscreteCurve> curves = {fixtures::circle(400), fixtures::stadium(800),
                                             fixtures::trefoil(800), fixtures::concentric(300, 500),
                                             fixtures::random_trig(2, 600), fixtures::random_trig(5, 600)};
  std::uint64_t seed = 11;
  for (const auto& K : curves) {
    const double tK = thickness(K).thickness.value();
    const auto L = fixtures::normal_perturbation(K, 0.4 * suggested_rho(tK), seed++);
    ASSERT_TRUE(is_valid(L));
    const double rho = suggested_rho(std::min(tK, thickness(L).thickness.value()));
    ASSERT_LT(hausdorff_distance(K, L), rho);
    const auto kl = isotopy_check(K, L, rho);
    const auto lk = isotopy_check(L, K, rho);
    EXPECT_EQ(kl.verdict, IsotopyVerdict::Isotopic) << kl.failed_check << ": " << kl.detail;
    EXPECT_EQ(lk.verdict, IsotopyVerdict::Isotopic) << lk.failed_check << ": " << lk.detail;
    expect_frames_embedded(K, L, kl, 32);
  }
}

TEST(Isotopy, HausdorffDistance) {
  EXPECT_NEAR(hausdorff_distance(fixtures::circle(2000), fixtures::circle(2000, 1.1)), 0.1, 1e-5);
  EXPECT_EQ(hausdorff_distance(fixtures::circle(100), fixtures::circle(100)), 0.0);
}

TEST(Isotopy, DeterministicAcrossThreads) {
  const auto K = fixtures::trefoil(600);
  const auto L = fixtures::normal_perturbation(K, 0.01, 4);
  set_thread_count(1);
  const auto a = isotopy_check(K, L, 0.05);
  set_thread_count(4);
  const auto b = isotopy_check(K, L, 0.05);
  set_thread_count(0);
  EXPECT_EQ(a.verdict, b.verdict);
  for (std::size_t i = 0; i < a.projection[0].size(); ++i) {
    EXPECT_EQ(a.projection[0][i].distance, b.projection[0][i].distance);
    EXPECT_EQ(a.projection[0][i].foot.s, b.projection[0][i].foot.s);
  }
}
