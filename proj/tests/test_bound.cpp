#include "drgf/bound.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace drgf;

namespace {

double d(const HighReal& x) { return to_double(x); }

}  // namespace

TEST(Schedule, GeneralDoublingPlusFour) {
  const auto n = n_schedule<double>(5, ScheduleMode::paper_general, 0.1);
  EXPECT_EQ(n, (std::vector<double>{0, 0, 4, 12, 28, 60}));
  const auto s = n_schedule<double>(2, ScheduleMode::sharp_g5, 0.2);
  EXPECT_DOUBLE_EQ(s[2], 2.5);
  EXPECT_THROW(n_schedule<double>(3, ScheduleMode::sharp_g5, 0.1), std::invalid_argument);
}

TEST(Schedule, ModeNames) {
  EXPECT_EQ(parse_schedule_mode("sharp-g5"), ScheduleMode::sharp_g5);
  EXPECT_EQ(to_string(ScheduleMode::paper_general), "paper-general");
  EXPECT_THROW(parse_schedule_mode("sharp"), std::invalid_argument);
}

TEST(FPoly, ValueAtZeroIsOne) {
  for (int t = 1; t <= 8; ++t) EXPECT_DOUBLE_EQ(f_poly(0.37, 0.0, t), 1.0);
}

TEST(FPoly, TwoTermForm) {
  // t = 2: 1 + x y + (x^2 - 2) y^2.
  for (double x : {-1.618, 0.3, 1.9}) {
    for (double y : {-0.9, -0.4, 0.5}) {
      EXPECT_NEAR(f_poly(x, y, 2), 1 + x * y + (x * x - 2) * y * y, 1e-14);
      EXPECT_NEAR(f_poly_dy(x, y, 2), x + 2 * (x * x - 2) * y, 1e-14);
    }
  }
}

TEST(FPoly, ClosedFormAtMinusOne) {
  for (int g : {5, 7, 9, 11, 13, 21}) {
    const int t = (g - 1) / 2;
    for (int j = 0; j < g; ++j) {
      const HighReal eta = 2 * cos(2 * pi<HighReal>() * j / g);
      EXPECT_NEAR(d(f_poly(eta, HighReal(-1), t)), d(f_closed_form_at_minus_one<HighReal>(g, j)), 1e-10)
          << "g=" << g << " j=" << j;
    }
  }
}

TEST(ZetaStar, Values) {
  EXPECT_NEAR(d(zeta_star<HighReal>(5, ScheduleMode::paper_general)), 0.0772542485937369, 1e-15);
  EXPECT_NEAR(d(zeta_star<HighReal>(5, ScheduleMode::sharp_g5)), 0.133830541363598, 1e-15);
  const auto bp7 = bound_parameters<HighReal>(7, HighReal(0), ScheduleMode::paper_general);
  EXPECT_EQ(d(bp7.M1), 32.0);
  EXPECT_NEAR(d(zeta_star<HighReal>(7, ScheduleMode::paper_general)), d(bp7.M2 / 64), 1e-30);
  EXPECT_THROW(zeta_star<double>(7, ScheduleMode::sharp_g5), std::invalid_argument);
}

TEST(ZetaStar, SharpIsFixedPoint) {
  const HighReal z = zeta_star<HighReal>(5, ScheduleMode::sharp_g5);
  const auto bp = bound_parameters<HighReal>(5, z, ScheduleMode::sharp_g5);
  EXPECT_LT(abs(z - bp.M2 / (2 * bp.M1)), HighReal("1e-40"));
}

TEST(Epsilon1, Pentagon) {
  const auto general = epsilon1<HighReal>(5, ScheduleMode::paper_general);
  EXPECT_NEAR(d(*general.root), -0.827090915285202, 1e-14);
  EXPECT_NEAR(d(*general.epsilon1), 0.172909084714798, 1e-14);
  const auto sharp = epsilon1<HighReal>(5, ScheduleMode::sharp_g5);
  EXPECT_NEAR(d(*sharp.epsilon1), 0.172909084714798, 1e-14);
}

TEST(Epsilon1, LargerGirths) {
  EXPECT_NEAR(d(*epsilon1<HighReal>(7).epsilon1), 0.129258418820962, 1e-14);
  EXPECT_NEAR(d(*epsilon1<HighReal>(9).epsilon1), 0.102820598934606, 1e-14);
  EXPECT_NEAR(d(*epsilon1<HighReal>(11).epsilon1), 0.0852586494242104, 1e-14);
  EXPECT_NEAR(d(*epsilon1<HighReal>(101).epsilon1), 0.0097303009746484, 1e-14);
}

TEST(Epsilon1, DoubleMatchesHighPrecision) {
  for (int g = 5; g <= 41; g += 2) {
    EXPECT_NEAR(*epsilon1<double>(g).epsilon1, d(*epsilon1<HighReal>(g).epsilon1), 1e-10) << g;
  }
}

TEST(Epsilon1, DecreasesWithGirth) {
  double prev = 1;
  for (int g = 5; g <= 61; g += 2) {
    const double e = *epsilon1<double>(g).epsilon1;
    EXPECT_GT(e, 0) << g;
    EXPECT_LT(e, prev) << g;
    prev = e;
  }
}

TEST(ThetaBound, SharpAtOneTenth) {
  const auto r = theta_bound_given_zeta<HighReal>(5, HighReal("0.1"), ScheduleMode::sharp_g5);
  ASSERT_TRUE(r);
  EXPECT_NEAR(d(*r), -0.772962153585369, 1e-14);
  EXPECT_EQ(std::floor(d(*r) * 100) / 100, -0.78);
  const auto g = theta_bound_given_zeta<HighReal>(5, HighReal("0.1"), ScheduleMode::paper_general);
  EXPECT_NEAR(d(*g), -0.880901171041153, 1e-14);
  EXPECT_LT(*g, *r);
}

TEST(ThetaBound, ZeroZetaIsPentagonRoot) {
  const auto r = theta_bound_given_zeta<HighReal>(5, HighReal(0), ScheduleMode::paper_general);
  ASSERT_TRUE(r);
  EXPECT_NEAR(d(*r), -0.618033988749895, 1e-14);
}

TEST(ThetaBound, MonotoneInZeta) {
  double prev = 0;
  for (int i = 0; i <= 20; ++i) {
    const double zeta = 0.005 * i;
    const auto r = theta_bound_given_zeta<double>(5, zeta, ScheduleMode::sharp_g5);
    ASSERT_TRUE(r) << zeta;
    EXPECT_LT(*r, prev) << zeta;
    prev = *r;
  }
}

TEST(ThetaBound, NoRootGivesNoInformation) {
  EXPECT_FALSE(theta_bound_given_zeta<double>(5, 0.5, ScheduleMode::paper_general));
}

TEST(PolygonBound, Values) {
  EXPECT_NEAR(polygon_epsilon_upper<double>(5), 0.190983005625053, 1e-14);
  EXPECT_NEAR(polygon_epsilon_upper<double>(3), 0.5, 1e-14);
  EXPECT_NEAR(polygon_epsilon_upper<double>(7), 0.0990311320975809, 1e-14);
  EXPECT_LT(polygon_epsilon_upper<double>(101), 0.01);
  EXPECT_NEAR(polygon_epsilon_upper<double>(101), 0.000483717708011935, 1e-15);
}

// theta_min of the g-gon equals -(1 - polygon bound) * k.
TEST(PolygonBound, MatchesCycleSpectrum) {
  for (int g = 3; g <= 31; g += 2) {
    const auto ev = polygon_eigenvalues<double>(g);
    EXPECT_NEAR(ev.back() / 2, -(1 - polygon_epsilon_upper<double>(g)), 1e-12) << g;
  }
}

TEST(DiameterBound, Values) {
  EXPECT_EQ(diameter_bound(2, 0.5), 32);
  EXPECT_EQ(diameter_bound(2, 0.1), 800);
  EXPECT_EQ(diameter_bound(1, 0.5), 16);
  EXPECT_EQ(diameter_bound(2, zeta_star<HighReal>(5, ScheduleMode::sharp_g5)), 447);
  EXPECT_EQ(diameter_bound(2, zeta_star<HighReal>(5, ScheduleMode::paper_general)), 1341);
  EXPECT_THROW(diameter_bound(2, 0.0), std::invalid_argument);
}

TEST(Validation, RejectsEvenAndSmallGirth) {
  EXPECT_THROW(epsilon1<double>(6), std::invalid_argument);
  EXPECT_THROW(epsilon1<double>(3), std::invalid_argument);
  EXPECT_THROW(zeta_star<double>(8, ScheduleMode::paper_general), std::invalid_argument);
  EXPECT_THROW(bound_parameters<double>(5, 0.6, ScheduleMode::paper_general), std::invalid_argument);
}
