#pragma once

// Corner and interaction coefficients of the small-time heat content
// expansion, the Dirichlet corner coefficient, and the polygon expansion.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "heatpoly/error.hpp"
#include "heatpoly/geometry.hpp"
#include "heatpoly/quadrature.hpp"

namespace heatpoly {

namespace detail {

// pi - double(pi)
inline constexpr double kPiLow = 1.2246467991473532e-16;

// x - pi, exact to rounding for x near pi.
inline double minus_pi(double x) { return (x - kPi) - kPiLow; }

// (x - pi) cot(x), with its removable singularity at x = pi.
inline double shifted_cot(double x) {
  const double e = minus_pi(x);
  if (std::abs(e) < 1e-8) return 1.0;
  const double e2 = e * e;
  if (std::abs(e) < 1e-4) return 1.0 - e2 * (1.0 / 3.0 + e2 * (1.0 / 45.0 + e2 * 2.0 / 945.0));
  return e / std::tan(e);
}

}  // namespace detail

// g(beta) = 1/pi + (1 - beta/pi) cot(beta), g(pi) = 0.
inline double corner_coefficient(double beta) {
  if (!(beta > 0.0 && beta < kTwoPi)) {
    throw InputError("corner angle must lie in (0, 2pi), got " + std::to_string(beta));
  }
  if (beta == kPi) return 0.0;
  const double e = detail::minus_pi(beta);
  if (std::abs(e) < 1e-6) {
    const double e2 = e * e;
    return e2 * (1.0 / 3.0 + e2 * (1.0 / 45.0 + e2 * 2.0 / 945.0)) / kPi;
  }
  return (1.0 - e / std::tan(e)) / kPi;
}

// k(alpha, theta, sigma) for wedges of openings theta and sigma separated by
// gap alpha; either gap may be passed.
inline double interaction_coefficient(double alpha, double theta, double sigma) {
  if (!(theta > 0.0 && sigma > 0.0 && alpha > 0.0 && theta + sigma + alpha < kTwoPi + 1e-10)) {
    throw InputError("interaction coefficient needs positive angles with theta + sigma + alpha < 2pi");
  }
  const double other = kTwoPi - theta - sigma - alpha;
  if (alpha < 1e-10 || other < 1e-10) {
    throw GeometryError("interaction coefficient diverges for touching wedges (zero gap)");
  }
  const double a = std::min(alpha, other);
  using detail::shifted_cot;
  return (-shifted_cot(sigma + theta + a) - shifted_cot(a) + shifted_cot(sigma + a) +
          shifted_cot(theta + a)) /
         kTwoPi;
}

// Integrand of c(beta): 4 sinh((pi - beta) x) / (sinh(pi x) cosh(beta x)),
// written with decaying exponentials only.
inline double dirichlet_integrand(double beta, double x) {
  const double a = kPi - beta;
  if (a == 0.0) return 0.0;
  if (x == 0.0) return 4.0 * a / kPi;
  const double sa = a > 0 ? 1.0 : -1.0;
  const double num = -std::expm1(-2.0 * std::abs(a) * x);
  const double den = -std::expm1(-2.0 * kPi * x) * (1.0 + std::exp(-2.0 * beta * x));
  return 8.0 * sa * std::exp((std::abs(a) - kPi - beta) * x) * num / den;
}

inline double dirichlet_corner_coefficient(double beta, double tol = 1e-12) {
  if (!(beta > 0.0 && beta < kTwoPi)) {
    throw InputError("corner angle must lie in (0, 2pi), got " + std::to_string(beta));
  }
  if (beta == kPi) return 0.0;
  // |integrand| <= 8 exp(-2 m x) / (1 - exp(-2 pi x)) with m = min(beta, pi).
  const double m = std::min(beta, kPi);
  double X = 1.0;
  auto tail = [&](double x) { return 8.0 * std::exp(-2.0 * m * x) / (2.0 * m * -std::expm1(-2.0 * kPi * x)); };
  while (tail(X) > 0.25 * tol) X *= 1.5;
  const QuadratureResult r =
      quad::integrate([beta](double x) { return dirichlet_integrand(beta, x); }, 0.0, X, 0.5 * tol);
  return r.value;
}

struct ExpansionReport {
  double area_term = 0.0;
  double perimeter_term_coeff = 0.0;  // multiplies t^{1/2}
  double corner_sum = 0.0;
  double interaction_sum = 0.0;
  double remainder_R = 0.0;
  double remainder_sin2 = 0.0;

  double value(double t, bool with_interaction = true) const {
    return area_term + perimeter_term_coeff * std::sqrt(t) +
           (corner_sum + (with_interaction ? interaction_sum : 0.0)) * t;
  }
  // exp(-R^2 sin^2(gamma) / (32 t))
  double envelope(double t) const {
    return std::exp(-remainder_R * remainder_R * remainder_sin2 / (32.0 * t));
  }
  // Decay rate of the envelope in 1/t.
  double envelope_rate() const { return remainder_R * remainder_R * remainder_sin2 / 32.0; }
};

inline ExpansionReport expansion_report(const Polygon& p) {
  ExpansionReport r;
  r.area_term = p.area;
  r.perimeter_term_coeff = -p.perimeter / std::sqrt(kPi);
  for (const CornerGroup& g : corner_groups(p)) {
    for (const Wedge& w : g.wedges) r.corner_sum += corner_coefficient(w.gamma);
    // Ordered pairs (j, l), j != l, at a shared vertex.
    for (std::size_t j = 0; j < g.wedges.size(); ++j) {
      for (std::size_t l = 0; l < g.wedges.size(); ++l) {
        if (j == l) continue;
        r.interaction_sum +=
            interaction_coefficient(pair_gap(g, j, l), g.wedges[j].gamma, g.wedges[l].gamma);
      }
    }
  }
  const RemainderData rd = remainder_data(p);
  r.remainder_R = rd.r_scale;
  r.remainder_sin2 = std::sin(rd.gamma_min) * std::sin(rd.gamma_min);
  return r;
}

inline std::pair<ExpansionReport, double> expansion(const Polygon& p, double t) {
  if (!(t > 0.0)) throw InputError("time must be positive");
  ExpansionReport r = expansion_report(p);
  const double v = r.value(t);
  return {r, v};
}

// Sum of g over the corners of a regular n-gon: n/pi + 2 cot((n - 2) pi / n).
inline double regular_polygon_corner_sum(int n) {
  return n * corner_coefficient((n - 2) * kPi / n);
}

}  // namespace heatpoly
