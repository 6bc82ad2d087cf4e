#pragma once

#include <stdexcept>
#include <string>

namespace heatpoly {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

inline QuadratureResult operator+(QuadratureResult a, QuadratureResult b) {
  return {a.value + b.value, a.error_estimate + b.error_estimate};
}

inline QuadratureResult operator*(double s, QuadratureResult a) {
  return {s * a.value, (s < 0 ? -s : s) * a.error_estimate};
}

// Malformed input: unreadable document, schema violation, invalid loop.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Valid input whose geometry the expansion does not cover (slits, touching
// wedges with zero gap).
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An adaptive quadrature ran out of its subdivision budget before reaching
// the requested tolerance. Carries the best available estimate.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, QuadratureResult best)
      : std::runtime_error(what), best_(best) {}

  QuadratureResult best() const { return best_; }

 private:
  QuadratureResult best_;
};

}  // namespace heatpoly
