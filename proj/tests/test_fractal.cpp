#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "heatpoly/fractal.hpp"

using namespace heatpoly;

namespace {
constexpr double kPiD = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPiD);

// Steady part, a log-periodic cosine times t^d, and the particular
// solution -(h0 / 4) t^{3/2} belonging to h = h0 t^{3/2}.
RenewalSamples synthetic(double s, double amplitude, double h0, int periods = 4, int per_period = 64) {
  const FractalSpec f = fractal_spec(s);
  RenewalSamples r;
  r.log_times = renewal_grid(s, -14.0, periods, per_period);
  for (double lt : r.log_times) {
    const double t = std::exp(lt);
    r.values.push_back(steady_expansion(s, t) + amplitude * std::cos(2 * kPiD * lt / f.period()) * std::pow(t, f.d) -
                       0.25 * h0 * std::pow(t, 1.5));
  }
  if (h0 != 0.0) r.h_model = [h0](double t) { return h0 * std::pow(t, 1.5); };
  return r;
}
}  // namespace

TEST(Fractal, GeometryAtCriticalScale) {
  const FractalSpec f = fractal_spec(0.2);
  EXPECT_NEAR(f.volume, 21.0 / 20.0, 1e-15);
  EXPECT_NEAR(f.surface, 36.0 / 5.0, 1e-14);
  EXPECT_EQ(f.d, 1.0);
  EXPECT_NEAR(1.5 + std::log(5.0) / (2 * std::log(0.2)), 1.0, 1e-15);
  EXPECT_TRUE(f.critical);
  EXPECT_FALSE(f.edge_finite);
  EXPECT_TRUE(std::isinf(f.edge_length));
  EXPECT_NEAR(f.period(), std::log(25.0), 1e-15);
  EXPECT_EQ(f.n_cubes(1), 6.0);
  EXPECT_EQ(f.n_cubes(3), 150.0);
}

TEST(Fractal, GeometryAtOtherScales) {
  const FractalSpec q = fractal_spec(0.25);
  EXPECT_NEAR(q.volume, 65.0 / 59.0, 1e-15);
  EXPECT_FALSE(q.edge_finite);
  const FractalSpec t = fractal_spec(0.1);
  EXPECT_NEAR(t.d_s, 0.69897000433601886, 1e-15);
  EXPECT_NEAR(t.d, 1.5 - t.d_s / 2, 1e-15);
  EXPECT_TRUE(t.edge_finite);
  EXPECT_NEAR(t.edge_length, 12 * 1.1 / 0.5, 1e-14);
  EXPECT_NEAR(t.lambda, 5e-3, 1e-17);
  EXPECT_NEAR(t.time_ratio, 1e-2, 1e-17);
}

TEST(Fractal, RejectsScaleOutOfRange) {
  EXPECT_THROW(fractal_spec(0.0), InputError);
  EXPECT_THROW(fractal_spec(-0.1), InputError);
  EXPECT_THROW(fractal_spec(std::sqrt(2.0) - 1), InputError);
  EXPECT_THROW(fractal_spec(0.5), InputError);
  EXPECT_NO_THROW(fractal_spec(0.414));
}

TEST(Fractal, ExponentIdentity) {
  for (double s : {0.01, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4}) {
    const FractalSpec f = fractal_spec(s);
    EXPECT_NEAR(5 * std::pow(s, 3 - 2 * f.d), 1.0, 1e-14) << s;
    EXPECT_LT(std::pow(s, 3 - 2 * f.d), 1.0);
  }
  EXPECT_NEAR(fractal_spec(1e-12).d, 1.5, 0.04);
  EXPECT_NEAR(fractal_spec(1e-12).edge_length / kPiD, 12 / kPiD, 1e-10);
}

TEST(Fractal, Q0AndAttachedCube) {
  const double s = 0.2, t = 0.01;
  EXPECT_NEAR(q0_contribution(s, t), 1 - 6 * (24.0 / 25) * 0.1 / kSqrtPi + 0.12 / kPiD, 1e-15);
  EXPECT_NEAR(q0_contribution(0.3, 1e-14), 1.0, 1e-6);
  EXPECT_NEAR(q0_coefficients(0.3).sqrt_t, -6 * (1 - 0.09) / kSqrtPi, 1e-15);
  const double a = attached_cube_contribution(0.25, 1e-4);
  EXPECT_NEAR(a, 1.0 / 64 - 5.0 / 16 * (15.0 / 16) * 0.01 / kSqrtPi + 3e-4 / kPiD, 1e-16);
  EXPECT_EQ(renewal_rhs(0.25, 1e-4), a);
  EXPECT_NEAR(attached_cube_contribution(0.25, 1e-20), 1.0 / 64, 1e-9);
}

TEST(Fractal, SteadySolvesRenewal) {
  for (double s : {0.1, 0.15, 0.2, 0.3}) {
    const double l = 5 * s * s * s;
    for (double t : {1e-2, 1e-4}) {
      const double e = steady_expansion(s, t);
      const double r = e - l * steady_expansion(s, t / (s * s)) - renewal_rhs(s, t);
      EXPECT_LE(std::abs(r), 1e-12 * std::abs(e)) << s << " " << t;
    }
  }
  EXPECT_NEAR(steady_coefficients(0.2).constant, 1.0 / 120, 1e-17);
}

TEST(Fractal, CriticalScaleCoefficients) {
  const Coefficients c = heat_content_coefficients(0.2);
  EXPECT_NEAR(c.constant, 21.0 / 20, 1e-12);
  EXPECT_NEAR(c.sqrt_t, -36.0 / (5 * kSqrtPi), 1e-12);
  EXPECT_NEAR(c.t_log_t, -36.0 / (5 * kPiD * std::log(5.0)), 1e-12);
  EXPECT_NEAR(c.t, 132.0 / (5 * kPiD), 1e-12);
}

TEST(Fractal, GeneralScaleCoefficients) {
  for (double s : {0.1, 0.15, 0.3}) {
    const Coefficients c = heat_content_coefficients(s);
    EXPECT_NEAR(c.constant, (1 + s * s * s) / (1 - 5 * s * s * s), 1e-12);
    EXPECT_NEAR(c.sqrt_t, -6 * (1 - s * s) / ((1 - 5 * s * s) * kSqrtPi), 1e-12);
    EXPECT_EQ(c.t_log_t, 0.0);
    EXPECT_NEAR(c.t, 12 * (1 + s) / (kPiD * (1 - 5 * s)), 1e-12);
    for (double t : {1e-2, 1e-3}) {
      EXPECT_NEAR(assemble_heat_content(s, t), c(t), 1e-14);
      EXPECT_NEAR(assemble_heat_content(s, t), q0_contribution(s, t) + 6 * steady_expansion(s, t), 1e-14);
    }
  }
}

TEST(Fractal, ResidualOfSteadyAndPeriodicIsZero) {
  for (double s : {0.3, 0.2}) {
    for (const RenewalSamples& r : {synthetic(s, 0.0, 0.0), synthetic(s, 1e-3, 0.0)}) {
      const std::vector<double> h = renewal_residual(r, s);
      ASSERT_EQ(h.size(), r.values.size() - 64);
      for (std::size_t i = 0; i < h.size(); ++i) EXPECT_LE(std::abs(h[i]), 1e-12 * std::abs(r.values[i])) << s;
    }
  }
}

TEST(Fractal, ResidualRecoversInjectedH) {
  const double s = 0.3, h0 = 1e-4;
  const RenewalSamples r = synthetic(s, 1e-3, h0);
  const std::vector<double> h = renewal_residual(r, s);
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double t = std::exp(r.log_times[i]);
    EXPECT_NEAR(h[i], h0 * std::pow(t, 1.5), 1e-15);
  }
}

TEST(Fractal, ResidualIsLinearInPerturbation) {
  const double s = 0.3;
  RenewalSamples r = synthetic(s, 0.0, 0.0);
  const std::size_t k = 100, m = 64;
  r.values[k] += 1e-6;
  const std::vector<double> h = renewal_residual(r, s);
  EXPECT_NEAR(h[k], 1e-6, 1e-17);
  EXPECT_NEAR(h[k - m], -5 * s * s * s * 1e-6, 1e-17);
  EXPECT_NEAR(h[k + 1], 0.0, 1e-17);
}

TEST(Fractal, ResidualRejectsMisalignedGrid) {
  RenewalSamples r = synthetic(0.3, 0.0, 0.0);
  for (double& lt : r.log_times) lt *= 1.001;
  EXPECT_THROW(renewal_residual(r, 0.3), InputError);
  RenewalSamples u = synthetic(0.3, 0.0, 0.0);
  u.log_times[5] += 1e-3;
  EXPECT_THROW(renewal_residual(u, 0.3), InputError);
}

TEST(Fractal, ExtractRoundTrip) {
  for (double s : {0.3, 0.2, 0.1}) {
    const FractalSpec f = fractal_spec(s);
    for (double h0 : {0.0, 1e-4}) {
      const PeriodicProfile p = extract_periodic(synthetic(s, 1e-3, h0), s);
      ASSERT_EQ(p.values.size(), 64u);
      EXPECT_NEAR(p.period, f.period(), 1e-15);
      EXPECT_LE(p.periodicity_error, 1e-9);
      double worst = 0;
      for (std::size_t k = 0; k < p.values.size(); ++k) {
        const double expect = 1e-3 * std::cos(2 * kPiD * p.phases[k] / f.period());
        worst = std::max(worst, std::abs(p.values[k] - expect));
      }
      EXPECT_LE(worst, 1e-9) << s << " " << h0;
    }
  }
}

TEST(Fractal, ExtractNeedsThreePeriods) {
  EXPECT_THROW(extract_periodic(synthetic(0.3, 1e-3, 0.0, 2), 0.3), InputError);
  EXPECT_NO_THROW(extract_periodic(synthetic(0.3, 1e-3, 0.0, 3), 0.3));
}

TEST(Fractal, ProfileInterpolatesPeriodically) {
  const double s = 0.3;
  const PeriodicProfile p = extract_periodic(synthetic(s, 1e-3, 0.0), s);
  EXPECT_NEAR(p(p.phases[3]), p.values[3], 1e-15);
  EXPECT_NEAR(p(p.phases[3] + 5 * p.period), p.values[3], 1e-15);
  EXPECT_NEAR(p(p.phases[0] - 1e-9), p.values[0], 1e-11);
  const double mid = 0.5 * (p.phases[10] + p.phases[11]);
  EXPECT_NEAR(p(mid), 0.5 * (p.values[10] + p.values[11]), 1e-15);
}

TEST(Fractal, AssembleWithProfile) {
  const double s = 0.3, t = 1e-3;
  const FractalSpec f = fractal_spec(s);
  PeriodicProfile zero;
  EXPECT_EQ(assemble_heat_content(s, t, &zero), assemble_heat_content(s, t));
  const PeriodicProfile p = extract_periodic(synthetic(s, 1e-3, 0.0), s);
  const double lt = p.phases[7];
  const double with = assemble_heat_content(s, std::exp(lt), &p);
  EXPECT_NEAR(with - assemble_heat_content(s, std::exp(lt)), 6 * p.values[7] * std::pow(std::exp(lt), f.d), 1e-15);
}

TEST(Fractal, SamplesCsvRoundTrip) {
  const RenewalSamples r = synthetic(0.3, 1e-3, 0.0, 3, 8);
  std::stringstream ss;
  write_samples_csv(ss, r);
  EXPECT_EQ(ss.str().substr(0, 8), "log_t,E\n");
  const RenewalSamples back = read_samples_csv(ss);
  ASSERT_EQ(back.values.size(), r.values.size());
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    EXPECT_EQ(back.values[i], r.values[i]);
    EXPECT_EQ(back.log_times[i], r.log_times[i]);
  }
  std::stringstream bad("t,E\n1,2\n");
  EXPECT_THROW(read_samples_csv(bad), InputError);
  std::stringstream junk("log_t,E\n1,x\n");
  EXPECT_THROW(read_samples_csv(junk), InputError);
}

TEST(Fractal, ProfileCsv) {
  PeriodicProfile p;
  p.period = 1.0;
  p.phases = {0.0, 0.5};
  p.values = {0.1, -0.25};
  std::ostringstream os;
  write_profile_csv(os, p);
  EXPECT_EQ(os.str(), "phase,p\n0,0.10000000000000001\n0.5,-0.25\n");
}
