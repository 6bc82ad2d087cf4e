#pragma once

// Adaptive Gauss-Kronrod quadrature in one and two dimensions.
//
// All drivers are globally adaptive: the cell with the largest error estimate
// is split until the summed estimate drops below the absolute tolerance. Cell
// error estimates follow the QUADPACK heuristic applied to the difference
// between the Kronrod result and its embedded Gauss rule. When the cell budget
// runs out a BudgetExceeded carrying the current estimate is thrown.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "heatpoly/error.hpp"

namespace heatpoly::quad {

// Kronrod rule on [-1, 1] with the weights of its embedded Gauss rule
// (zero on Kronrod-only nodes).
struct EmbeddedRule {
  std::vector<double> nodes;
  std::vector<double> kronrod;
  std::vector<double> gauss;
  std::size_t size() const { return nodes.size(); }
};

template <unsigned N>
EmbeddedRule make_embedded_rule() {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, N>;
  using Gauss = boost::math::quadrature::gauss<double, (N - 1) / 2>;
  const auto& x = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  constexpr bool odd_gauss = (((N - 1) / 2) & 1u) != 0;

  EmbeddedRule rule;
  rule.nodes.push_back(0.0);
  rule.kronrod.push_back(wk[0]);
  rule.gauss.push_back(odd_gauss ? wg[0] : 0.0);
  for (std::size_t i = 1; i < x.size(); ++i) {
    const bool is_gauss = odd_gauss ? (i % 2 == 0) : (i % 2 == 1);
    const double g = is_gauss ? wg[i / 2] : 0.0;
    for (double sign : {1.0, -1.0}) {
      rule.nodes.push_back(sign * x[i]);
      rule.kronrod.push_back(wk[i]);
      rule.gauss.push_back(g);
    }
  }
  return rule;
}

inline const EmbeddedRule& gk15() {
  static const EmbeddedRule rule = make_embedded_rule<15>();
  return rule;
}

inline const EmbeddedRule& gk21() {
  static const EmbeddedRule rule = make_embedded_rule<21>();
  return rule;
}

namespace detail {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// QUADPACK error scaling: |K - G| is an estimate for the Gauss rule, the
// Kronrod result is far more accurate on smooth integrands.
inline double scaled_error(double raw, double resasc, double resabs) {
  double err = raw;
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * resabs, err);
  }
  return err;
}

struct Interval {
  double a, b, value, error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

template <class F>
Interval gk_interval(F& f, double a, double b, const EmbeddedRule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  thread_local std::vector<double> fv;
  fv.resize(rule.size());
  double rk = 0.0, rg = 0.0, rabs = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    fv[i] = f(mid + half * rule.nodes[i]);
    rk += rule.kronrod[i] * fv[i];
    rg += rule.gauss[i] * fv[i];
    rabs += rule.kronrod[i] * std::abs(fv[i]);
  }
  const double mean = 0.5 * rk;
  double rasc = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    rasc += rule.kronrod[i] * std::abs(fv[i] - mean);
  }
  const double h = std::abs(half);
  return {a, b, rk * half, scaled_error(std::abs(rk - rg) * h, rasc * h, rabs * h)};
}

}  // namespace detail

// Integrates f over [a, b] to absolute error abs_tol (or rel_tol relative to
// the result, whichever is looser). max_intervals bounds the subdivision.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double abs_tol,
                           std::size_t max_intervals = 4000,
                           double rel_tol = 0.0) {
  if (a == b) return {};
  const EmbeddedRule& rule = gk21();
  std::priority_queue<detail::Interval> heap;
  std::vector<detail::Interval> frozen;
  heap.push(detail::gk_interval(f, a, b, rule));
  double total = heap.top().value;
  double error = heap.top().error;
  const double min_width = 64.0 * detail::kEps * std::max(std::abs(a), std::abs(b));

  auto target = [&] { return std::max(abs_tol, rel_tol * std::abs(total)); };
  std::size_t count = 1;
  while (error > target() && !heap.empty()) {
    if (count >= max_intervals) {
      throw BudgetExceeded("1D quadrature budget exceeded", {total, error});
    }
    detail::Interval worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (std::abs(worst.b - worst.a) < min_width) {
      frozen.push_back(worst);
      continue;
    }
    detail::Interval left = detail::gk_interval(f, worst.a, mid, rule);
    detail::Interval right = detail::gk_interval(f, mid, worst.b, rule);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }

  // Re-sum to drop the drift of the running updates.
  total = 0.0;
  error = 0.0;
  for (const auto& iv : frozen) {
    total += iv.value;
    error += iv.error;
  }
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  if (error > std::max(abs_tol, rel_tol * std::abs(total))) {
    throw BudgetExceeded("1D quadrature could not reach tolerance", {total, error});
  }
  return {total, error};
}

// Two-dimensional rules ---------------------------------------------------

namespace detail {

struct Rect {
  double x0, x1, y0, y1, value, error;
  bool split_x;
  bool operator<(const Rect& o) const { return error < o.error; }
};

// Tensor Kronrod rule on a rectangle. Separate Gauss/Kronrod comparisons in
// each direction decide along which axis to bisect.
template <class F>
Rect gk_rect(F& f, double x0, double x1, double y0, double y1, const EmbeddedRule& rule) {
  const std::size_t n = rule.size();
  const double hx = 0.5 * (x1 - x0), mx = 0.5 * (x0 + x1);
  const double hy = 0.5 * (y1 - y0), my = 0.5 * (y0 + y1);
  thread_local std::vector<double> fv;
  fv.resize(n * n);
  double kk = 0.0, gk = 0.0, kg = 0.0, abs_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = mx + hx * rule.nodes[i];
    for (std::size_t j = 0; j < n; ++j) {
      const double v = f(x, my + hy * rule.nodes[j]);
      fv[i * n + j] = v;
      kk += rule.kronrod[i] * rule.kronrod[j] * v;
      gk += rule.gauss[i] * rule.kronrod[j] * v;
      kg += rule.kronrod[i] * rule.gauss[j] * v;
      abs_sum += rule.kronrod[i] * rule.kronrod[j] * std::abs(v);
    }
  }
  const double mean = 0.25 * kk;
  double asc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      asc += rule.kronrod[i] * rule.kronrod[j] * std::abs(fv[i * n + j] - mean);
    }
  }
  const double jac = std::abs(hx * hy);
  const double ex = scaled_error(std::abs(kk - gk) * jac, asc * jac, abs_sum * jac);
  const double ey = scaled_error(std::abs(kk - kg) * jac, asc * jac, abs_sum * jac);
  return {x0, x1, y0, y1, kk * hx * hy, ex + ey, ex >= ey};
}

}  // namespace detail

// Integrates f(x, y) over [x0, x1] x [y0, y1].
template <class F>
QuadratureResult integrate_rect(F&& f, double x0, double x1, double y0, double y1,
                                double abs_tol, std::size_t max_cells = 20000) {
  const EmbeddedRule& rule = gk15();
  std::priority_queue<detail::Rect> heap;
  heap.push(detail::gk_rect(f, x0, x1, y0, y1, rule));
  double total = heap.top().value;
  double error = heap.top().error;
  std::size_t count = 1;
  while (error > abs_tol) {
    if (count >= max_cells) {
      throw BudgetExceeded("2D quadrature budget exceeded", {total, error});
    }
    detail::Rect worst = heap.top();
    heap.pop();
    detail::Rect a, b;
    if (worst.split_x) {
      const double m = 0.5 * (worst.x0 + worst.x1);
      a = detail::gk_rect(f, worst.x0, m, worst.y0, worst.y1, rule);
      b = detail::gk_rect(f, m, worst.x1, worst.y0, worst.y1, rule);
    } else {
      const double m = 0.5 * (worst.y0 + worst.y1);
      a = detail::gk_rect(f, worst.x0, worst.x1, worst.y0, m, rule);
      b = detail::gk_rect(f, worst.x0, worst.x1, m, worst.y1, rule);
    }
    total += a.value + b.value - worst.value;
    error += a.error + b.error - worst.error;
    heap.push(a);
    heap.push(b);
    ++count;
  }
  total = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {total, error};
}

namespace detail {

struct Tri {
  std::array<double, 6> v;  // (ax, ay, bx, by, cx, cy)
  double value, error;
  bool operator<(const Tri& o) const { return error < o.error; }
};

// Collapsed (Duffy) tensor rule: x = A + u (B - A) + u v (C - B), with
// Jacobian 2 |T| u on the unit square.
template <class F>
Tri gk_triangle(F& f, const std::array<double, 6>& v, const EmbeddedRule& rule) {
  const std::size_t n = rule.size();
  const double ax = v[0], ay = v[1];
  const double abx = v[2] - v[0], aby = v[3] - v[1];
  const double bcx = v[4] - v[2], bcy = v[5] - v[3];
  const double twice_area = std::abs(abx * (v[5] - v[1]) - aby * (v[4] - v[0]));
  thread_local std::vector<double> fv;
  fv.resize(n * n);
  double kk = 0.0, gg = 0.0, abs_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = 0.5 * (1.0 + rule.nodes[i]);
    for (std::size_t j = 0; j < n; ++j) {
      const double w = 0.5 * (1.0 + rule.nodes[j]);
      const double x = ax + u * abx + u * w * bcx;
      const double y = ay + u * aby + u * w * bcy;
      const double val = f(x, y) * u;
      fv[i * n + j] = val;
      kk += rule.kronrod[i] * rule.kronrod[j] * val;
      gg += rule.gauss[i] * rule.gauss[j] * val;
      abs_sum += rule.kronrod[i] * rule.kronrod[j] * std::abs(val);
    }
  }
  const double mean = 0.25 * kk;
  double asc = 0.0;
  for (std::size_t i = 0; i < n * n; ++i) {
    asc += rule.kronrod[i / n] * rule.kronrod[i % n] * std::abs(fv[i] - mean);
  }
  const double jac = 0.25 * twice_area;
  return {v, kk * jac, scaled_error(std::abs(kk - gg) * jac, asc * jac, abs_sum * jac)};
}

}  // namespace detail

// Integrates f over a set of triangles, each given as (ax, ay, bx, by, cx, cy).
template <class F>
QuadratureResult integrate_triangles(F&& f, const std::vector<std::array<double, 6>>& tris,
                                     double abs_tol, std::size_t max_cells = 200000) {
  const EmbeddedRule& rule = gk15();
  std::priority_queue<detail::Tri> heap;
  double total = 0.0, error = 0.0;
  for (const auto& t : tris) {
    detail::Tri c = detail::gk_triangle(f, t, rule);
    total += c.value;
    error += c.error;
    heap.push(c);
  }
  std::size_t count = tris.size();
  while (error > abs_tol && !heap.empty()) {
    if (count >= max_cells) {
      throw BudgetExceeded("triangle quadrature budget exceeded", {total, error});
    }
    detail::Tri worst = heap.top();
    heap.pop();
    const auto& p = worst.v;
    const double abx = 0.5 * (p[0] + p[2]), aby = 0.5 * (p[1] + p[3]);
    const double bcx = 0.5 * (p[2] + p[4]), bcy = 0.5 * (p[3] + p[5]);
    const double cax = 0.5 * (p[4] + p[0]), cay = 0.5 * (p[5] + p[1]);
    const std::array<std::array<double, 6>, 4> kids = {{
        {p[0], p[1], abx, aby, cax, cay},
        {abx, aby, p[2], p[3], bcx, bcy},
        {cax, cay, bcx, bcy, p[4], p[5]},
        {bcx, bcy, cax, cay, abx, aby},
    }};
    total -= worst.value;
    error -= worst.error;
    for (const auto& k : kids) {
      detail::Tri c = detail::gk_triangle(f, k, rule);
      total += c.value;
      error += c.error;
      heap.push(c);
    }
    count += 3;
  }
  total = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {total, error};
}

}  // namespace heatpoly::quad
