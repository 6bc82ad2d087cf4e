#pragma once

#include <cstdio>
#include <string>

namespace heatpoly {

// 17 significant digits, enough to round-trip any double.
inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace heatpoly
