#pragma once

// Free heat kernel in the plane and its Gaussian masses over triangles,
// wedges and polygons.
//
// Masses are computed through fans: the Gaussian mass of the triangle
// (x, A, B) in polar coordinates about x is
//   (1/2pi) * int (1 - exp(-rho(phi)^2 / 4t)) dphi,
// where rho(phi) = h / cos(phi) follows the line through A and B at distance
// h from x. A polygon's mass is the signed sum of the fans over its edges.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "heatpoly/error.hpp"
#include "heatpoly/geometry.hpp"
#include "heatpoly/quadrature.hpp"

namespace heatpoly {

inline double heat_kernel(Point2 x, Point2 y, double t) {
  const Point2 d = x - y;
  return std::exp(-dot(d, d) / (4.0 * t)) / (4.0 * kPi * t);
}

// Solution in the half-space {z > 0} at signed depth d.
inline double half_space_temperature(double d, double t) {
  return 0.5 * std::erfc(-d / (2.0 * std::sqrt(t)));
}

// Signed Gaussian mass of the triangle (x, P + s0 dir, P + s1 dir), s0 < s1,
// where either parameter may be infinite. dir must be a unit vector.
inline QuadratureResult line_fan_mass(Point2 x, Point2 P, Point2 dir, double s0, double s1,
                                      double t, double tol) {
  const double side = cross(P - x, dir);
  const double h = std::abs(side);
  if (h == 0.0 || s0 >= s1) return {};
  const double foot = dot(x - P, dir);
  auto phi = [&](double s) {
    if (std::isinf(s)) return s > 0 ? 0.5 * kPi : -0.5 * kPi;
    return std::atan2(s - foot, h);
  };
  const double a = phi(s0), b = phi(s1);
  const double sign = side > 0 ? 1.0 : -1.0;
  const double c = h * h / (4.0 * t);
  const double scale = 1.0 / kTwoPi;
  if (c > 45.0) {
    // exp(-c / cos^2) < 3e-20 on the whole range.
    return {sign * scale * (b - a), scale * (b - a) * 3e-20};
  }
  auto f = [c](double p) {
    const double cs = std::cos(p);
    if (cs <= 0.0) return 1.0;
    return -std::expm1(-c / (cs * cs));
  };
  // Tolerances below the rounding floor are raised to it; the error estimate
  // reports what was reached.
  QuadratureResult r;
  try {
    r = quad::integrate(f, a, b, std::max(tol * kTwoPi, 1e-13), 2000);
  } catch (const BudgetExceeded& e) {
    r = e.best();
  }
  return (sign * scale) * r;
}

inline QuadratureResult fan_mass(Point2 x, Point2 A, Point2 B, double t, double tol) {
  const double len = distance(A, B);
  if (len == 0.0) return {};
  return line_fan_mass(x, A, (1.0 / len) * (B - A), 0.0, len, t, tol);
}

inline double distance_to_triangle(Point2 x, const Triangle& T) {
  const double c1 = cross(T.b - T.a, x - T.a);
  const double c2 = cross(T.c - T.b, x - T.b);
  const double c3 = cross(T.a - T.c, x - T.c);
  if ((c1 >= 0 && c2 >= 0 && c3 >= 0) || (c1 <= 0 && c2 <= 0 && c3 <= 0)) return 0.0;
  return std::min({point_segment_distance(x, T.a, T.b), point_segment_distance(x, T.b, T.c),
                   point_segment_distance(x, T.c, T.a)});
}

// int_T p(x, y; t) dy.
inline QuadratureResult gaussian_mass_over_triangle(Point2 x, const Triangle& T, double t,
                                                    double tol) {
  QuadratureResult r = fan_mass(x, T.a, T.b, t, tol / 3.0) + fan_mass(x, T.b, T.c, t, tol / 3.0) +
                       fan_mass(x, T.c, T.a, t, tol / 3.0);
  if (T.signed_area < 0.0) r.value = -r.value;
  r.value = std::clamp(r.value, 0.0, 1.0);
  return r;
}

// Radius beyond which the plane's Gaussian mass is below eps.
inline double tail_radius(double t, double eps) {
  return std::sqrt(4.0 * t * std::log(1.0 / eps));
}

struct MeshedPolygon {
  Polygon polygon;
  std::vector<Triangle> triangles;

  explicit MeshedPolygon(Polygon p) : polygon(std::move(p)), triangles(triangulate(polygon)) {}
};

// u_D(x; t) = int_D p(x, y; t) dy.
inline QuadratureResult u_D(Point2 x, const MeshedPolygon& D, double t, double tol = 1e-10) {
  const double cut = tail_radius(t, tol / 10.0);
  const double per = 0.9 * tol / static_cast<double>(D.triangles.size());
  QuadratureResult total{0.0, 0.0};
  bool skipped = false;
  for (const Triangle& T : D.triangles) {
    if (distance_to_triangle(x, T) > cut) {
      skipped = true;
      continue;
    }
    total = total + gaussian_mass_over_triangle(x, T, t, per);
  }
  if (skipped) total.error_estimate += tol / 10.0;
  total.value = std::clamp(total.value, 0.0, 1.0);
  return total;
}

inline QuadratureResult u_D(Point2 x, const Polygon& p, double t, double tol = 1e-10) {
  return u_D(x, MeshedPolygon(p), t, tol);
}

// Gaussian mass of the infinite wedge {apex + r (cos phi, sin phi) :
// start <= phi <= start + gamma} seen from x.
inline QuadratureResult wedge_mass(Point2 x, Point2 apex, double start, double gamma, double t,
                                   double tol) {
  const double inf = std::numeric_limits<double>::infinity();
  const Point2 e0{std::cos(start), std::sin(start)};
  const Point2 e1{std::cos(start + gamma), std::sin(start + gamma)};
  // Boundary walk with the wedge on the left: in along e1, out along e0,
  // closed by the arc at infinity that every point sees under angle gamma.
  QuadratureResult r = line_fan_mass(x, apex, -1.0 * e1, -inf, 0.0, t, tol / 2.0) +
                       line_fan_mass(x, apex, e0, 0.0, inf, t, tol / 2.0);
  r.value += gamma / kTwoPi;
  return r;
}

}  // namespace heatpoly
