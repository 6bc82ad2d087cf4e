#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "heatpoly/geometry.hpp"

inline std::string fixture_path(const std::string& name) {
  return std::string(HEATPOLY_FIXTURES) + "/" + name + ".json";
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline heatpoly::Polygon fixture(const std::string& name) {
  return heatpoly::load_polygon(read_text(fixture_path(name)));
}
