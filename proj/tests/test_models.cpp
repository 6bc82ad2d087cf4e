#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "heatpoly/models.hpp"

using namespace heatpoly;

namespace {
constexpr double kPiD = std::numbers::pi;
}

TEST(Models, SectorFormulaAtStraightAngle) {
  for (double t : {0.02, 0.01, 1e-4}) {
    EXPECT_EQ(remainder_integral({kPiD, 1.0}, t), 0.0);
    EXPECT_NEAR(sector_in_wedge_formula({kPiD, 1.0}, t), kPiD / 2 - 2 * std::sqrt(t / kPiD), 1e-15);
  }
  EXPECT_THROW(sector_in_wedge_formula({0.0, 1.0}, 0.01), InputError);
  EXPECT_THROW(sector_in_wedge_formula({2 * kPiD, 1.0}, 0.01), InputError);
  EXPECT_THROW(sector_in_wedge_formula({1.0, 1.0}, 0.0), InputError);
}

TEST(Models, SectorFormulaTCoefficientAtThreeHalvesPi) {
  // With the remainder removed the formula is linear in t beyond t^{1/2}.
  const WedgeSectorConfig c{1.5 * kPiD, 1.0};
  auto reduced = [&](double t) {
    return sector_in_wedge_formula(c, t) + remainder_integral(c, t) - c.beta / 2 + 2 * std::sqrt(t / kPiD);
  };
  EXPECT_NEAR(reduced(0.01) / 0.01, 1 / kPiD, 1e-12);
}

TEST(Models, RemainderIntegrandIsCubicAtZero) {
  const double R = 1.3;
  for (double x : {1e-2, 5e-3, 2.5e-3}) {
    const double lead = -x * x * x / (3 * R);
    EXPECT_NEAR(remainder_integrand(R, x) / lead, 1.0, 1e-3);
  }
  EXPECT_EQ(remainder_integrand(R, 0.0), 0.0);
}

TEST(Models, RemainderIsOrderThreeHalves) {
  const WedgeSectorConfig c{kPiD / 3, 1.0};
  double prev = 0;
  for (double t : {1e-2, 1e-3, 1e-4}) {
    const double r = remainder_integral(c, t) / std::pow(t, 1.5);
    EXPECT_LT(std::abs(r), 1.0);
    if (prev != 0) EXPECT_NEAR(r, prev, 0.1);
    prev = r;
  }
  // Leading term: -(4 pi t)^{-1/2} int x^3 / 3 e^{-x^2/4t} = -(4/3) t^{3/2} / sqrt(pi).
  EXPECT_NEAR(prev, -4.0 / (3.0 * std::sqrt(kPiD)), 1e-3);
}

TEST(Models, RemainderRangeMatchesDirectQuadrature) {
  const double R = 1.0, t = 0.01;
  auto f = [&](double x) { return remainder_integrand(R, x) * std::exp(-x * x / (4 * t)); };
  const double direct = quad::integrate(f, 0.2, 0.9, 1e-15).value / std::sqrt(4 * kPiD * t);
  EXPECT_NEAR(remainder_integral_range(R, t, 0.2, 0.9), direct, 1e-14);
}

TEST(Models, SectorOracleMatchesFormula) {
  for (double beta : {kPiD / 3, kPiD / 2, 2 * kPiD / 3, 4 * kPiD / 3}) {
    for (double t : {0.02, 0.01, 0.005}) {
      const QuadratureResult num = sector_in_wedge_numeric({beta, 1.0}, t, 1e-10);
      const double f = sector_in_wedge_formula({beta, 1.0}, t);
      const double s2 = std::sin(beta) * std::sin(beta);
      EXPECT_LE(std::abs(num.value - f), 10 * t * std::exp(-s2 / (8 * t)) + num.error_estimate)
          << beta << " " << t;
    }
  }
}

TEST(Models, SectorOracleHalfDisk) {
  // A half disk in a half plane reduces to one dimension.
  const double R = 1.0, t = 0.01;
  auto f = [&](double phi) {
    const double c = std::cos(phi);
    return 2 * R * R * c * c * half_space_temperature(R * std::sin(phi), t);
  };
  const double ref = quad::integrate(f, 0.0, kPiD / 2, 1e-12).value;
  const QuadratureResult num = sector_in_wedge_numeric({kPiD, R}, t, 1e-10);
  EXPECT_NEAR(num.value, ref, 1e-10);
  // The formula's error bound t e^{-R^2 sin^2(beta) / 8t} degenerates at
  // beta = pi; the missing piece is the full-range remainder integral.
  const double gap = num.value - sector_in_wedge_formula({kPiD, R}, t);
  EXPECT_LT(gap, t);
  EXPECT_NEAR(gap, -remainder_integral_range(R, t, 0.0, R), 1e-9);
}

TEST(Models, SectorOracleScalingAndMonotonicity) {
  const double beta = 2 * kPiD / 3, t = 0.01, tol = 1e-10;
  const double a = sector_in_wedge_numeric({beta, 1.0}, t, tol).value;
  const double b = sector_in_wedge_numeric({beta, 2.0}, 4 * t, tol).value;
  EXPECT_NEAR(b, 4 * a, 2 * tol * 4);
  EXPECT_GT(sector_in_wedge_numeric({beta, 1.1}, t, tol).value, a);
}

TEST(Models, TwoWedgeRightAngles) {
  const TwoWedgeConfig c{kPiD / 2, kPiD / 2, kPiD / 2};
  const QuadratureResult r = two_wedge_interaction_numeric(c, 0.01, 1e-10);
  EXPECT_LE(r.error_estimate, 1e-10);
  EXPECT_NEAR(r.value, 0.01 / kPiD, 1e-10);
  const QuadratureResult r2 = two_wedge_interaction_numeric(c, 0.02, 1e-10);
  EXPECT_NEAR(r2.value / r.value, 2.0, 2 * 1e-10 / r.value);
}

TEST(Models, TwoWedgeSymmetricAndReflected) {
  const double t = 0.01, tol = 1e-10;
  const double a = two_wedge_interaction_numeric({0.7, 1.9, 2.2}, t, tol).value;
  const double b = two_wedge_interaction_numeric({1.9, 0.7, 2.2}, t, tol).value;
  const double c = two_wedge_interaction_numeric({0.7, 1.9, 2 * kPiD - 4.8}, t, tol).value;
  EXPECT_NEAR(a, b, 2 * tol);
  EXPECT_NEAR(a, c, 2 * tol);
  EXPECT_THROW(two_wedge_interaction_numeric({3.0, 3.0, 0.5}, t, tol), InputError);
}

TEST(Models, TwoWedgeIsExactlyLinearInT) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const double g1 = 0.2 + 2.0 * u(rng), g2 = 0.2 + 2.0 * u(rng);
    const double room = 2 * kPiD - g1 - g2;
    const double alpha = std::min(kPiD, room * (0.1 + 0.4 * u(rng)));
    const double k = interaction_coefficient(alpha, g1, g2);
    for (double t : {0.005, 0.01, 0.02}) {
      const QuadratureResult r = two_wedge_interaction_numeric({g1, g2, alpha}, t, 1e-10);
      EXPECT_NEAR(r.value, k * t, r.error_estimate) << g1 << " " << g2 << " " << alpha;
    }
  }
}

TEST(Models, ThreeHalvesWedgeLeadingTerms) {
  const double t = 1e-4;
  const double v = pi_sector_in_threehalfpi_wedge(1.0, t);
  EXPECT_LT(std::abs(v - (kPiD / 2 - 0.01 / std::sqrt(kPiD))), 1e-6);
  EXPECT_GT(three_halves_wedge_remainder(1.0, t), 0.0);
}

TEST(Models, ThreeHalvesWedgeScaling) {
  const double a = pi_sector_in_threehalfpi_wedge(1.0, 0.01);
  const double b = pi_sector_in_threehalfpi_wedge(3.0, 0.09);
  EXPECT_NEAR(b / (9 * a), 1.0, 1e-10);
}

TEST(Models, ThreeHalvesWedgeDecomposition) {
  // The pi and pi/2 sectors make up the 3pi/2 sector; their remainders
  // combine into the single remainder integral.
  for (double t : {0.005, 0.002}) {
    const double whole = sector_in_wedge_formula({1.5 * kPiD, 1.0}, t);
    const double parts = pi_sector_in_threehalfpi_wedge(1.0, t) + quarter_sector_in_threehalfpi_wedge(1.0, t);
    EXPECT_NEAR(parts, whole, 1e-10) << t;
    EXPECT_NEAR(2 * three_halves_wedge_remainder(1.0, t), -remainder_integral({1.5 * kPiD, 1.0}, t), 1e-12);
  }
}

TEST(Models, ThreeHalvesWedgeAgainstOracle) {
  for (double t : {0.01, 0.005}) {
    const QuadratureResult a = sector_wedge_numeric(1.5 * kPiD, 0.0, kPiD, 1.0, t, 1e-10);
    const QuadratureResult q = sector_wedge_numeric(1.5 * kPiD, kPiD, 1.5 * kPiD, 1.0, t, 1e-10);
    const double slack = t * std::exp(-1.0 / (8 * t));
    EXPECT_NEAR(a.value, pi_sector_in_threehalfpi_wedge(1.0, t), a.error_estimate + slack);
    EXPECT_NEAR(q.value, quarter_sector_in_threehalfpi_wedge(1.0, t), q.error_estimate + slack);
  }
}

TEST(Models, RectangleMatchesQuadrature) {
  for (double t : {0.02, 0.005, 1e-4}) {
    for (double h : {0.05, 0.3, 1.0}) {
      EXPECT_NEAR(rectangle_contribution(1.7, h, t), rectangle_contribution_numeric(1.7, h, t).value, 1e-12);
    }
  }
  const double t = 1e-3, h = 25 * std::sqrt(t);
  EXPECT_NEAR(rectangle_contribution(1.0, h, t), h - std::sqrt(t / kPiD), 1e-12);
  EXPECT_EQ(rectangle_contribution(2.0, 0.4, t), 2 * rectangle_contribution(1.0, 0.4, t));
  EXPECT_THROW(rectangle_contribution(0.0, 1.0, t), InputError);
}

TEST(Models, CuspArea) {
  const double direct =
      quad::integrate([](double x) { return 1 - std::sqrt(1 - x * x); }, 0.0, 0.5, 1e-15).value;
  EXPECT_NEAR(cusp_area(1.0, 0.5), direct, 1e-15);
  EXPECT_NEAR(cusp_contribution(1.0, kPiD / 2, 1e-12), direct, 1e-14);
}

TEST(Models, CuspApproachesAreaAtRateThreeHalves) {
  const double area = cusp_area(1.0, 0.5);
  for (double t : {1e-3, 1e-4, 1e-5}) {
    const double d = cusp_contribution(1.0, kPiD / 2, t) - area;
    EXPECT_LT(std::abs(d), std::pow(t, 1.5));
    EXPECT_NEAR(d / std::pow(t, 1.5), -2.0 / (3.0 * std::sqrt(kPiD)), 0.05);
  }
}

TEST(Models, CuspAndSectorRemaindersCancel) {
  const double R = 1.0, gamma = kPiD / 2, t = 0.005;
  const double top = R * std::abs(std::sin(gamma));
  const double cusp_term = cusp_contribution(R, gamma, t) - cusp_area(R, 0.5 * top);
  const double sector = remainder_integral({gamma, R}, t);
  const double leftover = 2 * cusp_term - sector;
  EXPECT_NEAR(leftover, -remainder_integral_range(R, t, 0.5 * top, top), 1e-15);
  EXPECT_LT(std::abs(leftover), 1e-3 * std::exp(-R * R / (32 * t)));
  EXPECT_GT(std::abs(sector), 1e-4);
}
