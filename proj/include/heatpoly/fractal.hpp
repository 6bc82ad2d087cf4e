#pragma once

// Heat content of the self-similar polyhedron D_s: geometric constants, the
// renewal equation for one branch, its steady solution, and extraction of the
// log-periodic amplitude p_s.
//
// E(t) = 5 s^3 E(t / s^2) + s^3 - 5 s^2 (1 - s^2) t^{1/2} / sqrt(pi) + 12 s t / pi + h(t)

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "heatpoly/error.hpp"
#include "heatpoly/format.hpp"
#include "heatpoly/geometry.hpp"

namespace heatpoly {

inline constexpr double kMaxScale = 0.41421356237309503;  // sqrt(2) - 1

// Coefficients of c0 + c_half t^{1/2} + c_log t log t + c1 t.
struct Coefficients {
  double constant = 0.0;
  double sqrt_t = 0.0;
  double t_log_t = 0.0;
  double t = 0.0;

  double operator()(double time) const {
    return constant + sqrt_t * std::sqrt(time) + t_log_t * time * std::log(time) + t * time;
  }
};

inline Coefficients operator+(const Coefficients& a, const Coefficients& b) {
  return {a.constant + b.constant, a.sqrt_t + b.sqrt_t, a.t_log_t + b.t_log_t, a.t + b.t};
}

inline Coefficients operator*(double k, const Coefficients& a) {
  return {k * a.constant, k * a.sqrt_t, k * a.t_log_t, k * a.t};
}

struct FractalSpec {
  double s = 0.0;
  double volume = 0.0;
  double surface = 0.0;
  double edge_length = 0.0;  // +inf when s >= 1/5
  bool edge_finite = true;
  bool critical = false;     // s = 1/5
  double d = 0.0;
  double d_s = 0.0;
  double lambda = 0.0;      // 5 s^3
  double time_ratio = 0.0;  // s^2

  // Cubes attached at generation j >= 1.
  double n_cubes(int j) const { return 6.0 * std::pow(5.0, j - 1); }
  // log(s^{-2})
  double period() const { return -2.0 * std::log(s); }
};

inline bool is_critical_scale(double s) { return std::abs(s - 0.2) < 1e-15; }

inline FractalSpec fractal_spec(double s) {
  if (!(s > 0.0 && s < kMaxScale)) {
    throw InputError("scale s must lie in (0, sqrt(2) - 1), got " + std::to_string(s));
  }
  FractalSpec f;
  f.s = s;
  const double s2 = s * s, s3 = s2 * s;
  f.volume = (1.0 + s3) / (1.0 - 5.0 * s3);
  f.surface = 6.0 * (1.0 - s2) / (1.0 - 5.0 * s2);
  f.critical = is_critical_scale(s);
  f.edge_finite = s < 0.2 && !f.critical;
  f.edge_length = f.edge_finite ? 12.0 * (1.0 + s) / (1.0 - 5.0 * s) : std::numeric_limits<double>::infinity();
  f.d = f.critical ? 1.0 : 1.5 + std::log(5.0) / (2.0 * std::log(s));
  f.d_s = std::log(5.0) / -std::log(s);
  f.lambda = 5.0 * s3;
  f.time_ratio = s2;
  return f;
}

// Unit cube Q0 with its attachment faces removed from the boundary.
inline Coefficients q0_coefficients(double s) {
  return {1.0, -6.0 * (1.0 - s * s) / std::sqrt(kPi), 0.0, 12.0 / kPi};
}

inline Coefficients attached_cube_coefficients(double s) {
  return {s * s * s, -5.0 * s * s * (1.0 - s * s) / std::sqrt(kPi), 0.0, 12.0 * s / kPi};
}

inline Coefficients steady_coefficients(double s) {
  fractal_spec(s);
  if (is_critical_scale(s)) {
    return {1.0 / 120.0, -6.0 / (25.0 * std::sqrt(kPi)), -6.0 / (5.0 * kPi * std::log(5.0)), 12.0 / (5.0 * kPi)};
  }
  const double s2 = s * s, s3 = s2 * s;
  return {s3 / (1.0 - 5.0 * s3), -5.0 * s2 * (1.0 - s2) / ((1.0 - 5.0 * s2) * std::sqrt(kPi)), 0.0,
          12.0 * s / (kPi * (1.0 - 5.0 * s))};
}

// Closed-form part of H_{D_s}(t): Q0 plus six branches.
inline Coefficients heat_content_coefficients(double s) {
  return q0_coefficients(s) + 6.0 * steady_coefficients(s);
}

inline void check_fractal_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InputError("time must be positive");
}

inline double q0_contribution(double s, double t) {
  fractal_spec(s);
  check_fractal_time(t);
  return q0_coefficients(s)(t);
}

inline double attached_cube_contribution(double s, double t) {
  fractal_spec(s);
  check_fractal_time(t);
  return attached_cube_coefficients(s)(t);
}

// Inhomogeneity of the renewal equation without h.
inline double renewal_rhs(double s, double t) { return attached_cube_contribution(s, t); }

inline double steady_expansion(double s, double t) {
  check_fractal_time(t);
  return steady_coefficients(s)(t);
}

struct RenewalSamples {
  std::vector<double> log_times;
  std::vector<double> values;
  std::function<double(double)> h_model;  // of t; empty means h = 0
};

// Uniform log t grid from log_t0 with `per_period` points per period.
inline std::vector<double> renewal_grid(double s, double log_t0, int periods, int per_period) {
  if (periods < 1 || per_period < 1) throw InputError("grid needs at least one period and one point");
  const double step = fractal_spec(s).period() / per_period;
  std::vector<double> g;
  for (int i = 0; i <= periods * per_period; ++i) g.push_back(log_t0 + i * step);
  return g;
}

namespace detail {

// Points per period for a uniform grid whose spacing divides the period.
inline std::size_t points_per_period(const std::vector<double>& g, double period) {
  if (g.size() < 2) throw InputError("grid needs at least two points");
  const double step = g[1] - g[0];
  if (!(step > 0.0)) throw InputError("log_times must be ascending");
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (std::abs((g[i] - g[0]) - i * step) > 1e-9 * std::max(1.0, std::abs(g[i]))) {
      throw InputError("log_times must be uniformly spaced");
    }
  }
  const double m = period / step;
  const double mr = std::round(m);
  if (mr < 1.0 || std::abs(m - mr) > 1e-9 * m) {
    throw InputError("grid spacing does not divide the period log(s^-2)");
  }
  return static_cast<std::size_t>(mr);
}

}  // namespace detail

// h(t) = E(t) - 5 s^3 E(t / s^2) - renewal_rhs(s, t) at every grid point
// whose partner t / s^2 is on the grid.
inline std::vector<double> renewal_residual(const RenewalSamples& samples, double s) {
  const FractalSpec f = fractal_spec(s);
  if (samples.values.size() != samples.log_times.size()) throw InputError("samples and grid differ in length");
  const std::size_t m = detail::points_per_period(samples.log_times, f.period());
  if (samples.log_times.size() <= m) throw InputError("grid does not cover t and t / s^2");
  std::vector<double> h;
  for (std::size_t i = 0; i + m < samples.values.size(); ++i) {
    const double t = std::exp(samples.log_times[i]);
    h.push_back(samples.values[i] - f.lambda * samples.values[i + m] - renewal_rhs(s, t));
  }
  return h;
}

struct PeriodicProfile {
  double period = 0.0;
  std::vector<double> phases;  // log t over one period
  std::vector<double> values;
  double periodicity_error = 0.0;  // max spread of p over repeated phases

  // Periodic linear interpolation in log t.
  double operator()(double log_t) const {
    const std::size_t m = phases.size();
    if (m == 0) return 0.0;
    const double step = period / static_cast<double>(m);
    double u = std::fmod(log_t - phases[0], period);
    if (u < 0) u += period;
    const double x = u / step;
    const std::size_t k = static_cast<std::size_t>(x) % m;
    const double w = x - std::floor(x);
    return (1.0 - w) * values[k] + w * values[(k + 1) % m];
  }
};

// q_s(t) = (E(t) - steady(t)) / t^d and
// p_s(log t) = q_s(t) + sum_{j >= 1} h(t s^{2j}) (t s^{2j})^{-d}.
inline PeriodicProfile extract_periodic(const RenewalSamples& samples, double s) {
  const FractalSpec f = fractal_spec(s);
  if (samples.values.size() != samples.log_times.size()) throw InputError("samples and grid differ in length");
  const std::size_t m = detail::points_per_period(samples.log_times, f.period());
  if (samples.log_times.size() < 3 * m + 1) throw InputError("samples must span at least three periods");
  const double ratio = std::pow(s, 3.0 - 2.0 * f.d);
  if (!(ratio < 1.0)) throw InputError("correction series does not converge");

  std::vector<double> p(samples.values.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double t = std::exp(samples.log_times[i]);
    double q = (samples.values[i] - steady_expansion(s, t)) * std::pow(t, -f.d);
    if (samples.h_model) {
      double tj = t;
      int j = 0;
      for (;; ++j) {
        if (j > 100000) throw InputError("correction series did not converge");
        tj *= f.time_ratio;
        const double term = samples.h_model(tj) * std::pow(tj, -f.d);
        q += term;
        if (std::abs(term) < 1e-15) break;
      }
    }
    p[i] = q;
  }

  PeriodicProfile prof;
  prof.period = f.period();
  for (std::size_t k = 0; k < m; ++k) {
    double sum = 0.0, lo = p[k], hi = p[k];
    std::size_t count = 0;
    for (std::size_t i = k; i < p.size(); i += m) {
      sum += p[i];
      lo = std::min(lo, p[i]);
      hi = std::max(hi, p[i]);
      ++count;
    }
    prof.phases.push_back(samples.log_times[k]);
    prof.values.push_back(sum / static_cast<double>(count));
    prof.periodicity_error = std::max(prof.periodicity_error, hi - lo);
  }
  return prof;
}

// q0 + 6 (steady + p_s(log t) t^d).
inline double assemble_heat_content(double s, double t, const PeriodicProfile* profile = nullptr) {
  const FractalSpec f = fractal_spec(s);
  check_fractal_time(t);
  double branch = steady_expansion(s, t);
  if (profile != nullptr) branch += (*profile)(std::log(t)) * std::pow(t, f.d);
  return q0_contribution(s, t) + 6.0 * branch;
}

// ---------------------------------------------------------------------------
// CSV

inline RenewalSamples read_samples_csv(std::istream& in) {
  RenewalSamples r;
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty samples file");
  if (line.rfind("log_t,E", 0) != 0) throw InputError("samples header must be log_t,E");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b)) throw InputError("malformed samples row: " + line);
    try {
      r.log_times.push_back(std::stod(a));
      r.values.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw InputError("malformed samples row: " + line);
    }
  }
  return r;
}

inline void write_samples_csv(std::ostream& os, const RenewalSamples& r) {
  os << "log_t,E\n";
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    os << format_real(r.log_times[i]) << ',' << format_real(r.values[i]) << '\n';
  }
}

inline void write_profile_csv(std::ostream& os, const PeriodicProfile& p) {
  os << "phase,p\n";
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    os << format_real(p.phases[i]) << ',' << format_real(p.values[i]) << '\n';
  }
}

}  // namespace heatpoly
