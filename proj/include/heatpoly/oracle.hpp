#pragma once

// Heat content H_D(t) of a polygon by quadrature, a covariogram path for
// convex polygons, a Monte Carlo estimator, and residual curves against the
// small-time expansion.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "heatpoly/asymptotics.hpp"
#include "heatpoly/error.hpp"
#include "heatpoly/format.hpp"
#include "heatpoly/geometry.hpp"
#include "heatpoly/kernel.hpp"
#include "heatpoly/quadrature.hpp"
#include "json.hpp"

namespace heatpoly {

namespace detail {

inline std::vector<std::array<double, 6>> triangle_cells(const std::vector<Triangle>& tris) {
  std::vector<std::array<double, 6>> cells;
  cells.reserve(tris.size());
  for (const Triangle& T : tris) cells.push_back({T.a.x, T.a.y, T.b.x, T.b.y, T.c.x, T.c.y});
  return cells;
}

}  // namespace detail

// int_A u_B(x; t) dx, the heat flowing from B into A.
inline QuadratureResult heat_content_cross(const MeshedPolygon& A, const MeshedPolygon& B, double t,
                                           double tol = 1e-9, std::size_t max_cells = 200000) {
  if (!(t > 0.0)) throw InputError("time must be positive");
  if (!(tol > 0.0)) throw InputError("tolerance must be positive");
  const double inner = tol / (4.0 * A.polygon.area);
  double inner_worst = inner;
  auto f = [&](double x, double y) {
    const QuadratureResult u = u_D({x, y}, B, t, inner);
    inner_worst = std::max(inner_worst, u.error_estimate);
    return u.value;
  };
  QuadratureResult r;
  try {
    r = quad::integrate_triangles(f, detail::triangle_cells(A.triangles), 0.5 * tol, max_cells);
  } catch (const BudgetExceeded& e) {
    QuadratureResult best = e.best();
    best.error_estimate += A.polygon.area * inner_worst;
    throw BudgetExceeded(e.what(), best);
  }
  r.error_estimate += A.polygon.area * inner_worst;
  return r;
}

inline QuadratureResult heat_content_numeric(const MeshedPolygon& D, double t, double tol = 1e-9,
                                             std::size_t max_cells = 200000) {
  return heat_content_cross(D, D, t, tol, max_cells);
}

inline QuadratureResult heat_content_numeric(const Polygon& p, double t, double tol = 1e-9) {
  return heat_content_numeric(MeshedPolygon(p), t, tol);
}

// Mass of the unit interval under its own 1D heat flow:
// int_{-1}^{1} (1 - |u|) (4 pi t)^{-1/2} e^{-u^2 / 4t} du.
inline double unit_interval_heat_content(double t) {
  return std::erf(1.0 / (2.0 * std::sqrt(t))) + 2.0 * std::sqrt(t / kPi) * std::expm1(-1.0 / (4.0 * t));
}

// The kernel factorizes over coordinates, so H of the unit square is F(t)^2.
inline double unit_square_heat_content(double t) {
  const double F = unit_interval_heat_content(t);
  return F * F;
}

// ---------------------------------------------------------------------------
// Convex path

inline bool is_convex(const Polygon& p) {
  if (p.loops.size() != 1) return false;
  const auto& v = p.loops[0].vertices;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (cross(v[(i + 1) % n] - v[i], v[(i + 2) % n] - v[(i + 1) % n]) < -kTauGeom) return false;
  }
  return true;
}

// Sutherland-Hodgman clip of a polygon against a convex CCW polygon.
inline std::vector<Point2> clip_convex(std::vector<Point2> subject, const std::vector<Point2>& clip) {
  const std::size_t m = clip.size();
  for (std::size_t i = 0; i < m && !subject.empty(); ++i) {
    const Point2 a = clip[i], b = clip[(i + 1) % m];
    const Point2 e = b - a;
    std::vector<Point2> out;
    out.reserve(subject.size() + 2);
    const std::size_t n = subject.size();
    for (std::size_t j = 0; j < n; ++j) {
      const Point2 p = subject[j], q = subject[(j + 1) % n];
      const double sp = cross(e, p - a), sq = cross(e, q - a);
      if (sp >= 0) out.push_back(p);
      if ((sp >= 0) != (sq >= 0)) out.push_back(p + (sp / (sp - sq)) * (q - p));
    }
    subject = std::move(out);
  }
  return subject;
}

// C_D(v) = |D n (D + v)|.
inline double covariogram(const Polygon& p, Point2 v) {
  const auto& base = p.loops[0].vertices;
  std::vector<Point2> moved(base);
  for (Point2& q : moved) q = q + v;
  const std::vector<Point2> cut = clip_convex(std::move(moved), base);
  return cut.size() < 3 ? 0.0 : std::max(0.0, signed_area(cut));
}

// H_D(t) = int C_D(v) p(0, v; t) dv in polar coordinates, using C_D(-v) = C_D(v).
inline QuadratureResult heat_content_convex_covariogram(const Polygon& p, double t, double tol = 1e-9) {
  if (!(t > 0.0)) throw InputError("time must be positive");
  if (!is_convex(p)) throw InputError("covariogram path needs a convex polygon without holes");
  const auto& v = p.loops[0].vertices;
  double diam = 0.0;
  for (const Point2& a : v) {
    for (const Point2& b : v) diam = std::max(diam, distance(a, b));
  }
  // Beyond rho_c the remaining mass is below area * e^{-rho_c^2 / 4t}.
  const double tail_eps = 0.1 * tol / p.area;
  const double rho_max = std::min(diam, tail_radius(t, tail_eps));
  const double tail = rho_max < diam ? p.area * tail_eps : 0.0;

  // Kinks in theta sit at the edge directions.
  std::vector<double> breaks{0.0, kPi};
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 e = v[(i + 1) % v.size()] - v[i];
    double a = std::atan2(e.y, e.x);
    if (a < 0) a += kPi;
    if (a >= kPi) a -= kPi;
    breaks.push_back(a);
  }
  std::sort(breaks.begin(), breaks.end());

  const double inner_tol = 0.25 * tol / kPi;
  auto radial = [&](double th) {
    const Point2 e{std::cos(th), std::sin(th)};
    auto g = [&](double rho) {
      return covariogram(p, rho * e) * rho * std::exp(-rho * rho / (4.0 * t)) / (4.0 * kPi * t);
    };
    return quad::integrate(g, 0.0, rho_max, inner_tol).value;
  };
  QuadratureResult total{0.0, 0.0};
  const double outer_tol = 0.25 * tol / static_cast<double>(breaks.size() - 1);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] - breaks[i] < 1e-14) continue;
    total = total + quad::integrate(radial, breaks[i], breaks[i + 1], outer_tol);
  }
  total = 2.0 * total;
  total.error_estimate += 0.5 * tol + tail;
  return total;
}

// ---------------------------------------------------------------------------
// Monte Carlo

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

}  // namespace detail

struct MonteCarloResult {
  double value = 0.0;
  double standard_error = 0.0;
};

// |D| times the mean of u_D over uniform points of D. Samples come in chunks
// of 4096, each chunk drawing from its own stream keyed by (seed, chunk).
inline MonteCarloResult heat_content_monte_carlo(const MeshedPolygon& D, double t, std::size_t n,
                                                 std::uint64_t seed) {
  if (n < 1000) throw InputError("Monte Carlo needs at least 1000 samples");
  if (!(t > 0.0)) throw InputError("time must be positive");
  std::vector<double> cumulative;
  double acc = 0.0;
  for (const Triangle& T : D.triangles) {
    acc += std::abs(T.signed_area);
    cumulative.push_back(acc);
  }
  constexpr std::size_t kChunk = 4096;
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t start = 0, chunk = 0; start < n; start += kChunk, ++chunk) {
    std::uint64_t state = seed;
    state = detail::splitmix64(state) ^ (0xD1B54A32D192ED03ull * (chunk + 1));
    const std::size_t stop = std::min(n, start + kChunk);
    for (std::size_t i = start; i < stop; ++i) {
      const double pick = detail::unit_double(detail::splitmix64(state)) * acc;
      const std::size_t k = std::min<std::size_t>(
          std::upper_bound(cumulative.begin(), cumulative.end(), pick) - cumulative.begin(),
          cumulative.size() - 1);
      double a = detail::unit_double(detail::splitmix64(state));
      double b = detail::unit_double(detail::splitmix64(state));
      if (a + b > 1.0) {
        a = 1.0 - a;
        b = 1.0 - b;
      }
      const Triangle& T = D.triangles[k];
      const Point2 x = T.a + a * (T.b - T.a) + b * (T.c - T.a);
      const double u = u_D(x, D, t, 1e-10).value;
      sum += u;
      sum2 += u * u;
    }
  }
  const double N = static_cast<double>(n);
  const double mean = sum / N;
  const double var = std::max(0.0, (sum2 - N * mean * mean) / (N - 1.0));
  return {D.polygon.area * mean, D.polygon.area * std::sqrt(var / N)};
}

// ---------------------------------------------------------------------------
// Residual curves

struct HeatContentCurve {
  std::vector<double> times;
  std::vector<double> exact;
  std::vector<double> exact_err;
  std::vector<double> asymptotic;
  std::vector<double> residual;
  std::vector<double> envelope;
  // Least-squares slope of log|residual| against 1/t over the points where
  // the residual exceeds ten times its error; NaN with fewer than two.
  double slope = std::numeric_limits<double>::quiet_NaN();
  double envelope_rate = 0.0;
  ExpansionReport report;
  bool partial = false;
};

inline double residual_slope(const HeatContentCurve& c) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < c.times.size(); ++i) {
    if (std::abs(c.residual[i]) > 10.0 * c.exact_err[i]) {
      pts.emplace_back(1.0 / c.times[i], std::log(std::abs(c.residual[i])));
    }
  }
  if (pts.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0, my = 0;
  for (auto [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= pts.size();
  my /= pts.size();
  double sxy = 0, sxx = 0;
  for (auto [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxy / sxx;
}

// Each residual falls faster than t^power toward smaller t, allowing for the
// quadrature error on both sides of the comparison.
inline bool decays_faster_than(const HeatContentCurve& c, double power) {
  for (std::size_t i = 0; i + 1 < c.times.size(); ++i) {
    const double ratio = std::pow(c.times[i] / c.times[i + 1], power);
    const double small = std::abs(c.residual[i]) - c.exact_err[i];
    const double big = std::abs(c.residual[i + 1]) + c.exact_err[i + 1];
    if (small > ratio * big) return false;
  }
  return true;
}

// Exact values for every t; a BudgetExceeded stops the scan and marks the
// curve partial, keeping the rows computed so far plus the best estimate.
inline HeatContentCurve residual_curve(const Polygon& p, const std::vector<double>& times, double tol = 1e-9,
                                       bool with_interaction = true, std::size_t max_cells = 200000) {
  if (times.empty()) throw InputError("empty time grid");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) throw InputError("times must be positive");
    if (i > 0 && !(times[i] > times[i - 1])) throw InputError("times must be ascending");
  }
  const MeshedPolygon D(p);
  HeatContentCurve c;
  c.report = expansion_report(p);
  c.envelope_rate = c.report.envelope_rate();
  for (double t : times) {
    QuadratureResult e;
    try {
      e = heat_content_numeric(D, t, tol, max_cells);
    } catch (const BudgetExceeded& b) {
      e = b.best();
      c.partial = true;
    }
    const double a = c.report.value(t, with_interaction);
    c.times.push_back(t);
    c.exact.push_back(e.value);
    c.exact_err.push_back(e.error_estimate);
    c.asymptotic.push_back(a);
    c.residual.push_back(e.value - a);
    c.envelope.push_back(c.report.envelope(t));
    if (c.partial) break;
  }
  c.slope = residual_slope(c);
  return c;
}

inline void write_curve_csv(std::ostream& os, const HeatContentCurve& c) {
  os << "t,exact,exact_err,asymptotic,residual,envelope\n";
  for (std::size_t i = 0; i < c.times.size(); ++i) {
    os << format_real(c.times[i]) << ',' << format_real(c.exact[i]) << ',' << format_real(c.exact_err[i])
       << ',' << format_real(c.asymptotic[i]) << ',' << format_real(c.residual[i]) << ','
       << format_real(c.envelope[i]) << '\n';
  }
}

inline nlohmann::ordered_json curve_json(const HeatContentCurve& c) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < c.times.size(); ++i) {
    rows.push_back({{"t", format_real(c.times[i])},
                    {"exact", format_real(c.exact[i])},
                    {"exact_err", format_real(c.exact_err[i])},
                    {"asymptotic", format_real(c.asymptotic[i])},
                    {"residual", format_real(c.residual[i])},
                    {"envelope", format_real(c.envelope[i])}});
  }
  return {{"rows", rows},
          {"slope", format_real(c.slope)},
          {"envelope_rate", format_real(c.envelope_rate)},
          {"partial", c.partial}};
}

}  // namespace heatpoly
