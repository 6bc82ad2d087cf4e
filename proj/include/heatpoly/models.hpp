#pragma once

// Model heat contents on wedges, sectors, rectangles and cusps: closed or
// semi-closed forms next to brute-force quadrature oracles.

#include <algorithm>
#include <cmath>
#include <string>

#include "heatpoly/asymptotics.hpp"
#include "heatpoly/error.hpp"
#include "heatpoly/geometry.hpp"
#include "heatpoly/kernel.hpp"
#include "heatpoly/quadrature.hpp"

namespace heatpoly {

// Sector B_beta(R) inside the wedge W_beta, apex at the origin.
struct WedgeSectorConfig {
  double beta = kPi / 2;
  double radius = 1.0;
};

// Wedges W1 = [0, gamma1] and W2 = [gamma1 + alpha, gamma1 + alpha + gamma2].
struct TwoWedgeConfig {
  double gamma1 = kPi / 2;
  double gamma2 = kPi / 2;
  double alpha = kPi / 2;
};

namespace detail {

inline void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InputError("time must be positive");
}

inline void check_sector(const WedgeSectorConfig& c) {
  if (!(c.beta > 0.0 && c.beta < kTwoPi)) throw InputError("beta must lie in (0, 2pi)");
  if (!(c.radius > 0.0)) throw InputError("radius must be positive");
}

// phi - 2 sin(phi) + sin(2 phi) / 2, which starts at -phi^3 / 3.
inline double remainder_kernel_phi(double phi) {
  if (std::abs(phi) < 1e-2) {
    const double p2 = phi * phi;
    return phi * p2 * (-1.0 / 3.0 + p2 * (7.0 / 60.0 - p2 * 31.0 / 2520.0));
  }
  return phi - 2.0 * std::sin(phi) + 0.5 * std::sin(2.0 * phi);
}

// arcsin(psi) - psi, which starts at psi^3 / 6.
inline double asin_minus(double psi) {
  if (psi < 1e-2) {
    const double p2 = psi * psi;
    return psi * p2 * (1.0 / 6.0 + p2 * (3.0 / 40.0 + p2 * (15.0 / 336.0 + p2 * 105.0 / 3456.0)));
  }
  return std::asin(psi) - psi;
}

}  // namespace detail

// -2 R x + R^2 arcsin(x / R) + x sqrt(R^2 - x^2)
inline double remainder_integrand(double R, double x) {
  return -2.0 * R * x + R * R * std::asin(x / R) + x * std::sqrt(R * R - x * x);
}

// (4 pi t)^{-1/2} int_{x0}^{x1} remainder_integrand(R, x) exp(-x^2 / 4t) dx
// for 0 <= x0 <= x1 <= R, integrated in x = R sin(phi).
inline double remainder_integral_range(double R, double t, double x0, double x1,
                                       double abs_tol = 1e-14) {
  detail::check_time(t);
  if (x1 <= x0) return 0.0;
  const double p0 = std::asin(std::clamp(x0 / R, 0.0, 1.0));
  const double p1 = std::asin(std::clamp(x1 / R, 0.0, 1.0));
  const double pref = 1.0 / std::sqrt(4.0 * kPi * t);
  auto f = [R, t](double phi) {
    const double s = R * std::sin(phi);
    return R * R * R * detail::remainder_kernel_phi(phi) * std::cos(phi) * std::exp(-s * s / (4.0 * t));
  };
  return pref * quad::integrate(f, p0, p1, abs_tol / pref).value;
}

inline double remainder_integral(const WedgeSectorConfig& cfg, double t) {
  detail::check_sector(cfg);
  const double top = cfg.radius * std::abs(std::sin(cfg.beta));
  if (cfg.beta == kPi) return 0.0;
  return remainder_integral_range(cfg.radius, t, 0.0, top);
}

// beta R^2 / 2 - 2 R t^{1/2} / sqrt(pi) + g(beta) t - remainder.
inline double sector_in_wedge_formula(const WedgeSectorConfig& cfg, double t) {
  detail::check_sector(cfg);
  detail::check_time(t);
  const double R = cfg.radius;
  return cfg.beta * R * R / 2.0 - 2.0 * R * std::sqrt(t / kPi) + corner_coefficient(cfg.beta) * t -
         remainder_integral(cfg, t);
}

// int over the sector {r < R, theta_a < theta < theta_b} of the Gaussian
// mass of the wedge [0, gamma], by polar quadrature with exact wedge masses.
inline QuadratureResult sector_wedge_numeric(double gamma, double theta_a, double theta_b, double R,
                                             double t, double tol) {
  detail::check_time(t);
  const double area = 0.5 * (theta_b - theta_a) * R * R;
  const double inner = tol / (4.0 * std::max(area, 1e-300));
  auto f = [&](double r, double th) {
    const Point2 x{r * std::cos(th), r * std::sin(th)};
    return r * wedge_mass(x, {0.0, 0.0}, 0.0, gamma, t, inner).value;
  };
  QuadratureResult out = quad::integrate_rect(f, 0.0, R, theta_a, theta_b, 0.5 * tol);
  out.error_estimate += area * inner;
  return out;
}

inline QuadratureResult sector_in_wedge_numeric(const WedgeSectorConfig& cfg, double t,
                                                double tol = 1e-10) {
  detail::check_sector(cfg);
  return sector_wedge_numeric(cfg.beta, 0.0, cfg.beta, cfg.radius, t, tol);
}

// int_{W1} int_{W2} p(x, y; t) dy dx.
inline QuadratureResult two_wedge_interaction_numeric(const TwoWedgeConfig& cfg, double t,
                                                      double tol = 1e-10) {
  detail::check_time(t);
  const double g1 = cfg.gamma1, g2 = cfg.gamma2;
  const double other = kTwoPi - g1 - g2 - cfg.alpha;
  if (!(g1 > 0 && g2 > 0 && cfg.alpha > 0 && other > 0)) {
    throw InputError("two-wedge configuration needs positive angles and gaps");
  }
  // Normalize to the smaller gap by reflection; the integral is unchanged.
  const double alpha = std::min(cfg.alpha, other);
  const double alpha2 = kTwoPi - g1 - g2 - alpha;
  // Points of W1 at radius r lie at distance >= r s from W2.
  const double s = std::sin(std::min({alpha, alpha2, 0.5 * kPi}));
  // Tail beyond r_max: int r dr dtheta (1/2) exp(-r^2 s^2 / 4t) = g1 t / s^2 exp(-r_max^2 s^2 / 4t).
  const double tail_tol = 0.25 * tol;
  const double rmax = std::sqrt(std::max(0.0, 4.0 * t * std::log(g1 * t / (s * s * tail_tol)))) / s;
  const double tail = g1 * t / (s * s) * std::exp(-rmax * rmax * s * s / (4.0 * t));
  const double area = 0.5 * g1 * rmax * rmax;
  const double inner = tol / (4.0 * area);
  auto f = [&](double r, double th) {
    const Point2 x{r * std::cos(th), r * std::sin(th)};
    return r * wedge_mass(x, {0.0, 0.0}, g1 + alpha, g2, t, inner).value;
  };
  QuadratureResult out = quad::integrate_rect(f, 0.0, rmax, 0.0, g1, 0.25 * tol);
  out.error_estimate += area * inner + tail;
  return out;
}

// (4 pi t)^{-1/2} int_0^1 (arcsin psi - psi) int_R^inf r^2 exp(-r^2 psi^2 / 4t) dr dpsi.
inline double three_halves_wedge_remainder(double R, double t, double abs_tol = 1e-14) {
  detail::check_time(t);
  if (!(R > 0.0)) throw InputError("radius must be positive");
  const double pref = 1.0 / std::sqrt(4.0 * kPi * t);
  // Inner integral in closed form; psi = sin(phi) removes the endpoint
  // singularity of arcsin.
  auto f = [R, t](double phi) {
    const double psi = std::sin(phi);
    if (psi == 0.0) return 0.0;
    const double c = psi * psi / (4.0 * t);
    const double J = R * std::exp(-c * R * R) / (2.0 * c) +
                     std::sqrt(kPi) / (4.0 * c * std::sqrt(c)) * std::erfc(R * std::sqrt(c));
    return detail::asin_minus(psi) * J * std::cos(phi);
  };
  return pref * quad::integrate(f, 0.0, 0.5 * kPi, abs_tol / pref).value;
}

// Half disk of radius R sharing one edge with a wedge of angle 3pi/2.
inline double pi_sector_in_threehalfpi_wedge(double R, double t) {
  return kPi * R * R / 2.0 - R * std::sqrt(t / kPi) + three_halves_wedge_remainder(R, t);
}

// Quarter disk filling the rest of the 3pi/2 sector.
inline double quarter_sector_in_threehalfpi_wedge(double R, double t) {
  return kPi * R * R / 4.0 - R * std::sqrt(t / kPi) + t / kPi + three_halves_wedge_remainder(R, t);
}

// L h - L t^{1/2} / sqrt(pi) plus the exponentially small correction, so that
// the value equals L int_0^h half_space_temperature(z) dz exactly.
inline double rectangle_contribution(double L, double h, double t) {
  detail::check_time(t);
  if (!(L > 0.0 && h > 0.0)) throw InputError("rectangle sides must be positive");
  const double st = std::sqrt(t);
  const double a = h / (2.0 * st);
  const double corr = st * (std::exp(-a * a) / std::sqrt(kPi) - a * std::erfc(a));
  return L * (h - st / std::sqrt(kPi) + corr);
}

inline QuadratureResult rectangle_contribution_numeric(double L, double h, double t,
                                                       double tol = 1e-13) {
  detail::check_time(t);
  return L * quad::integrate([t](double z) { return half_space_temperature(z, t); }, 0.0, h, tol / L);
}

// Area between the chord x = const and the arc of radius R, 0 < x < h.
inline double cusp_area(double R, double h) {
  return R * h - 0.5 * (h * std::sqrt(R * R - h * h) + R * R * std::asin(h / R));
}

// |C| + (4 pi t)^{-1/2} int_0^{(R/2)|sin gamma|} (remainder_integrand / 2) exp(-x^2 / 4t) dx.
inline double cusp_contribution(double R, double gamma_min, double t) {
  detail::check_time(t);
  if (!(R > 0.0)) throw InputError("radius must be positive");
  const double h = 0.5 * R * std::abs(std::sin(gamma_min));
  return cusp_area(R, h) + 0.5 * remainder_integral_range(R, t, 0.0, h);
}

}  // namespace heatpoly
