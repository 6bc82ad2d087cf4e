#pragma once

// Polygon model: loading, validation, corner extraction, remainder geometry
// and ear-clipping triangulation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "heatpoly/error.hpp"

namespace heatpoly {

inline constexpr double kTauGeom = 1e-9;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline bool coincident(Point2 a, Point2 b, double tau = kTauGeom) { return distance(a, b) <= tau; }
inline Point2 unit(Point2 a) { return (1.0 / norm(a)) * a; }
inline Point2 rotate(Point2 a, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}

// Counterclockwise angle from u to v in [0, 2pi).
inline double ccw_angle(Point2 u, Point2 v) {
  double a = std::atan2(cross(u, v), dot(u, v));
  if (a < 0.0) a += kTwoPi;
  return a;
}

inline double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

inline double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double s = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + s * ab);
}

inline double segment_segment_distance(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double o1 = cross(b - a, c - a), o2 = cross(b - a, d - a);
  const double o3 = cross(d - c, a - c), o4 = cross(d - c, b - c);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) {
    return 0.0;
  }
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

// True when segments ab and cd are disjoint or meet only at a common
// endpoint without overlapping.
inline bool segments_compatible(Point2 a, Point2 b, Point2 c, Point2 d, double tau = kTauGeom) {
  if (segment_segment_distance(a, b, c, d) > tau) return true;
  std::optional<std::pair<Point2, Point2>> shared;  // (far end of ab, far end of cd)
  int shared_count = 0;
  for (auto [p, pf] : {std::pair{a, b}, std::pair{b, a}}) {
    for (auto [q, qf] : {std::pair{c, d}, std::pair{d, c}}) {
      if (coincident(p, q, tau)) {
        shared = {pf, qf};
        ++shared_count;
      }
    }
  }
  if (shared_count != 1) return false;
  return point_segment_distance(shared->first, c, d) > tau &&
         point_segment_distance(shared->second, a, b) > tau;
}

struct BoundaryLoop {
  std::vector<Point2> vertices;
  bool hole = false;  // holes are stored clockwise, the outer loop counterclockwise
};

struct Polygon {
  std::vector<BoundaryLoop> loops;
  double area = 0.0;
  double perimeter = 0.0;
};

struct Triangle {
  Point2 a, b, c;
  double signed_area = 0.0;
};

struct Wedge {
  double gamma = 0.0;
  Point2 edge_dir_start;  // along the outgoing edge
  Point2 edge_dir_end;    // along the incoming edge, reversed
  double start_angle = 0.0;
  std::size_t loop = 0;
  std::size_t index = 0;
};

struct CornerGroup {
  Point2 location;
  std::vector<Wedge> wedges;  // sorted by start_angle
  std::vector<double> gaps;   // gaps[i] separates wedges[i] from wedges[i + 1] (cyclic)
};

struct RemainderData {
  double gamma_min = 0.0;
  double r_scale = 0.0;
};

inline double signed_area(const std::vector<Point2>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    s += cross(v[i], v[(i + 1) % v.size()]);
  }
  return 0.5 * s;
}

// Crossing-number test; points on the boundary may go either way.
inline bool point_in_loop(Point2 p, const std::vector<Point2>& v) {
  bool inside = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y > p.y) != (v[j].y > p.y)) {
      const double x = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

inline double distance_to_loop(Point2 p, const std::vector<Point2>& v) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    d = std::min(d, point_segment_distance(p, v[i], v[(i + 1) % v.size()]));
  }
  return d;
}

// Interior angle at vertex i of a loop whose interior lies to the left.
inline Wedge wedge_at(const std::vector<Point2>& v, std::size_t i) {
  const std::size_t n = v.size();
  const Point2 e0 = unit(v[(i + 1) % n] - v[i]);
  const Point2 e1 = unit(v[(i + n - 1) % n] - v[i]);
  Wedge w;
  w.edge_dir_start = e0;
  w.edge_dir_end = e1;
  w.gamma = ccw_angle(e0, e1);
  w.start_angle = wrap_angle(std::atan2(e0.y, e0.x));
  w.index = i;
  return w;
}

namespace detail {

inline void check_spike(const std::vector<Point2>& v, std::size_t loop, std::size_t i) {
  const std::size_t n = v.size();
  const Point2 e0 = unit(v[(i + 1) % n] - v[i]);
  const Point2 e1 = unit(v[(i + n - 1) % n] - v[i]);
  if (std::abs(cross(e0, e1)) > kTauGeom || dot(e0, e1) < 0.0) return;
  const std::string where = " at loop " + std::to_string(loop) + " vertex " + std::to_string(i);
  // Coinciding edge directions: a slit if the tip points into the region.
  const double h = 1e-6 * std::min(distance(v[i], v[(i + 1) % n]), distance(v[i], v[(i + n - 1) % n]));
  const bool hole = signed_area(v) < 0.0;
  if (point_in_loop(v[i] - h * e0, v) != hole) {
    throw GeometryError("interior angle 2pi (slit)" + where +
                        "; slits do not change the heat content, remove the segment");
  }
  throw InputError("interior angle 0 (collinear overlapping edges)" + where);
}

}  // namespace detail

inline std::vector<Triangle> triangulate(const Polygon& p);

// Builds a validated polygon; the first loop is the outer boundary.
inline Polygon make_polygon(std::vector<std::vector<Point2>> raw) {
  if (raw.empty()) throw InputError("polygon has no loops");
  Polygon p;
  for (std::size_t l = 0; l < raw.size(); ++l) {
    auto& v = raw[l];
    if (v.size() < 3) throw InputError("loop " + std::to_string(l) + " has fewer than 3 vertices");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!std::isfinite(v[i].x) || !std::isfinite(v[i].y)) {
        throw InputError("non-finite coordinate in loop " + std::to_string(l));
      }
      if (coincident(v[i], v[(i + 1) % v.size()])) {
        throw InputError("degenerate edge at loop " + std::to_string(l) + " vertex " +
                         std::to_string(i));
      }
    }
    const double a = signed_area(v);
    if (std::abs(a) <= kTauGeom) throw InputError("loop " + std::to_string(l) + " has zero area");
    const bool hole = l > 0;
    if ((a < 0.0) != hole) std::reverse(v.begin(), v.end());
    p.loops.push_back({v, hole});
  }

  for (std::size_t l = 0; l < p.loops.size(); ++l) {
    for (std::size_t i = 0; i < p.loops[l].vertices.size(); ++i) {
      detail::check_spike(p.loops[l].vertices, l, i);
    }
  }

  // Pairwise edge test; adjacent edges of one loop were covered by the spike test.
  struct Edge { Point2 a, b; std::size_t loop, i, n; };
  std::vector<Edge> edges;
  for (std::size_t l = 0; l < p.loops.size(); ++l) {
    const auto& v = p.loops[l].vertices;
    for (std::size_t i = 0; i < v.size(); ++i) edges.push_back({v[i], v[(i + 1) % v.size()], l, i, v.size()});
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    for (std::size_t f = e + 1; f < edges.size(); ++f) {
      const Edge& A = edges[e];
      const Edge& B = edges[f];
      if (A.loop == B.loop && ((A.i + 1) % A.n == B.i || (B.i + 1) % B.n == A.i)) continue;
      if (!segments_compatible(A.a, A.b, B.a, B.b)) {
        const bool shared_vertex = coincident(A.a, B.a) || coincident(A.a, B.b) ||
                                   coincident(A.b, B.a) || coincident(A.b, B.b);
        if (shared_vertex) {
          throw GeometryError("overlapping edges at a shared vertex (wedges touching with zero gap) "
                              "between loop " + std::to_string(A.loop) + " edge " +
                              std::to_string(A.i) + " and loop " + std::to_string(B.loop) +
                              " edge " + std::to_string(B.i));
        }
        throw InputError("self-intersection between loop " + std::to_string(A.loop) + " edge " +
                         std::to_string(A.i) + " and loop " + std::to_string(B.loop) + " edge " +
                         std::to_string(B.i));
      }
    }
  }

  const auto& outer = p.loops[0].vertices;
  for (std::size_t h = 1; h < p.loops.size(); ++h) {
    const auto& hv = p.loops[h].vertices;
    for (const Point2& q : hv) {
      if (distance_to_loop(q, outer) > kTauGeom && !point_in_loop(q, outer)) {
        throw InputError("hole " + std::to_string(h) + " lies outside the outer loop");
      }
      for (std::size_t o = 1; o < p.loops.size(); ++o) {
        if (o == h) continue;
        const auto& ov = p.loops[o].vertices;
        if (distance_to_loop(q, ov) > kTauGeom && point_in_loop(q, ov)) {
          throw InputError("hole " + std::to_string(h) + " lies inside hole " + std::to_string(o));
        }
      }
    }
  }

  for (const auto& loop : p.loops) {
    p.area += signed_area(loop.vertices);
    const auto& v = loop.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) p.perimeter += distance(v[i], v[(i + 1) % v.size()]);
  }
  if (p.area <= kTauGeom) throw InputError("polygon has non-positive area");

  // Connectivity through shared triangle edges.
  const auto tris = triangulate(p);
  std::vector<int> seen(tris.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  auto shares_edge = [](const Triangle& s, const Triangle& t) {
    int common = 0;
    for (Point2 u : {s.a, s.b, s.c}) {
      for (Point2 w : {t.a, t.b, t.c}) {
        if (coincident(u, w)) ++common;
      }
    }
    return common >= 2;
  };
  while (!stack.empty()) {
    const std::size_t k = stack.back();
    stack.pop_back();
    for (std::size_t m = 0; m < tris.size(); ++m) {
      if (!seen[m] && shares_edge(tris[k], tris[m])) {
        seen[m] = 1;
        stack.push_back(m);
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw InputError("polygon interior is disconnected");
  }
  return p;
}

// Parses {"loops": [[[x, y], ...], ...]}.
inline Polygon load_polygon(const std::string& doc) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(doc);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed polygon document: ") + e.what());
  }
  if (!j.is_object() || !j.contains("loops") || !j["loops"].is_array()) {
    throw InputError("polygon document needs a \"loops\" array");
  }
  std::vector<std::vector<Point2>> raw;
  for (const auto& loop : j["loops"]) {
    if (!loop.is_array()) throw InputError("each loop must be an array of [x, y] pairs");
    std::vector<Point2> pts;
    for (const auto& q : loop) {
      if (!q.is_array() || q.size() != 2 || !q[0].is_number() || !q[1].is_number()) {
        throw InputError("each vertex must be a pair of numbers");
      }
      pts.push_back({q[0].get<double>(), q[1].get<double>()});
    }
    raw.push_back(std::move(pts));
  }
  return make_polygon(std::move(raw));
}

// Rigid motion and dilation helpers, mostly for tests.
inline Polygon transform(const Polygon& p, double scale, double phi, Point2 shift) {
  std::vector<std::vector<Point2>> raw;
  for (const auto& loop : p.loops) {
    std::vector<Point2> v;
    for (Point2 q : loop.vertices) v.push_back(rotate(scale * q, phi) + shift);
    raw.push_back(v);
  }
  return make_polygon(raw);
}

inline std::vector<CornerGroup> corner_groups(const Polygon& p) {
  std::vector<CornerGroup> groups;
  for (std::size_t l = 0; l < p.loops.size(); ++l) {
    const auto& v = p.loops[l].vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
      Wedge w = wedge_at(v, i);
      w.loop = l;
      if (w.gamma >= kTwoPi - kTauGeom || w.gamma <= kTauGeom) {
        throw GeometryError("interior angle 2pi (slit) at loop " + std::to_string(l) + " vertex " +
                            std::to_string(i));
      }
      auto it = std::find_if(groups.begin(), groups.end(),
                             [&](const CornerGroup& g) { return coincident(g.location, v[i]); });
      if (it == groups.end()) {
        groups.push_back({v[i], {w}, {}});
      } else {
        it->wedges.push_back(w);
      }
    }
  }
  for (auto& g : groups) {
    if (g.wedges.size() < 2) continue;
    // Several loops pass through this point: each wedge runs from an outgoing
    // edge counterclockwise to the nearest incoming edge, whichever loop owns it.
    const std::size_t m = g.wedges.size();
    std::vector<Point2> ends;
    for (const Wedge& w : g.wedges) ends.push_back(w.edge_dir_end);
    std::vector<int> used(m, 0);
    for (Wedge& w : g.wedges) {
      std::size_t best = m;
      double best_angle = kTwoPi;
      for (std::size_t e = 0; e < m; ++e) {
        const double a = ccw_angle(w.edge_dir_start, ends[e]);
        if (a > kTauGeom && a < best_angle) {
          best_angle = a;
          best = e;
        }
      }
      if (best == m || used[best]++) {
        throw GeometryError("inconsistent boundary loops meeting at (" + std::to_string(g.location.x) +
                            ", " + std::to_string(g.location.y) + ")");
      }
      w.gamma = best_angle;
      w.edge_dir_end = ends[best];
    }
    std::sort(g.wedges.begin(), g.wedges.end(),
              [](const Wedge& a, const Wedge& b) { return a.start_angle < b.start_angle; });
    for (std::size_t i = 0; i < m; ++i) {
      const Wedge& a = g.wedges[i];
      const Wedge& b = g.wedges[(i + 1) % m];
      double gap = wrap_angle(b.start_angle - (a.start_angle + a.gamma));
      if (gap > kTwoPi - kTauGeom) gap -= kTwoPi;
      if (gap <= kTauGeom) {
        throw GeometryError("wedges touching with zero gap at (" + std::to_string(g.location.x) +
                            ", " + std::to_string(g.location.y) +
                            "); the interaction coefficient diverges there");
      }
      g.gaps.push_back(gap);
    }
  }
  return groups;
}

// Gap between wedges i and j of a group, normalized to the smaller side.
inline double pair_gap(const CornerGroup& g, std::size_t i, std::size_t j) {
  const Wedge& a = g.wedges[i];
  const Wedge& b = g.wedges[j];
  const double alpha = wrap_angle(b.start_angle - (a.start_angle + a.gamma));
  return std::min(alpha, kTwoPi - a.gamma - b.gamma - alpha);
}

inline bool is_straight(const Wedge& w) { return std::abs(w.gamma - kPi) <= kTauGeom; }

namespace detail {

// Portion of segment ab inside the convex cone {apex + s u + r w : s, r >= 0}
// (opening angle at most pi); returns false when empty.
inline bool clip_to_cone(Point2 apex, Point2 u, Point2 w, Point2& a, Point2& b) {
  double lo = 0.0, hi = 1.0;
  const Point2 d = b - a;
  // Half-planes: cross(u, x - apex) >= 0 and cross(x - apex, w) >= 0.
  auto clip = [&](double f0, double df) {
    if (std::abs(df) < 1e-300) return f0 >= -kTauGeom;
    const double s = -f0 / df;
    if (df > 0) lo = std::max(lo, s);
    else hi = std::min(hi, s);
    return true;
  };
  if (!clip(cross(u, a - apex), cross(u, d))) return false;
  if (!clip(cross(a - apex, w), cross(d, w))) return false;
  if (lo > hi) return false;
  const Point2 a0 = a;
  a = a0 + lo * d;
  b = a0 + hi * d;
  return true;
}

inline double distance_within_wedge(Point2 apex, const Wedge& w, Point2 a, Point2 b) {
  std::vector<std::pair<Point2, Point2>> cones;
  if (w.gamma > kPi - 1e-12) {
    const Point2 mid = rotate(w.edge_dir_start, 0.5 * w.gamma);
    cones = {{w.edge_dir_start, mid}, {mid, w.edge_dir_end}};
  } else {
    cones = {{w.edge_dir_start, w.edge_dir_end}};
  }
  double best = std::numeric_limits<double>::infinity();
  for (auto [u, v] : cones) {
    Point2 p = a, q = b;
    if (clip_to_cone(apex, u, v, p, q)) best = std::min(best, point_segment_distance(apex, p, q));
  }
  return best;
}

}  // namespace detail

// Largest r for which every corner sector of radius r is contained in D and
// sectors at distinct locations are disjoint (conservatively: apexes at
// least 2r apart).
inline bool sectors_admissible(const Polygon& p, const std::vector<CornerGroup>& groups, double r) {
  std::vector<const CornerGroup*> corners;
  for (const auto& g : groups) {
    if (std::any_of(g.wedges.begin(), g.wedges.end(), [](const Wedge& w) { return !is_straight(w); })) {
      corners.push_back(&g);
    }
  }
  for (std::size_t i = 0; i < corners.size(); ++i) {
    for (std::size_t j = i + 1; j < corners.size(); ++j) {
      if (distance(corners[i]->location, corners[j]->location) < 2.0 * r) return false;
    }
  }
  for (const CornerGroup* g : corners) {
    for (const Wedge& w : g->wedges) {
      if (is_straight(w)) continue;
      for (const auto& loop : p.loops) {
        const auto& v = loop.vertices;
        for (std::size_t i = 0; i < v.size(); ++i) {
          const Point2 a = v[i], b = v[(i + 1) % v.size()];
          if (coincident(a, g->location) || coincident(b, g->location)) continue;
          if (detail::distance_within_wedge(g->location, w, a, b) < r) return false;
        }
      }
    }
  }
  return true;
}

inline RemainderData remainder_data(const Polygon& p) {
  const auto groups = corner_groups(p);
  RemainderData out;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& g : groups) {
    for (const Wedge& w : g.wedges) {
      if (is_straight(w)) continue;
      const double s2 = std::sin(w.gamma) * std::sin(w.gamma);
      if (s2 < best) {
        best = s2;
        out.gamma_min = w.gamma;
      }
    }
  }
  double lo = 0.0;
  double hi = 0.0;
  for (const auto& loop : p.loops) {
    for (Point2 q : loop.vertices) hi = std::max(hi, distance(q, p.loops[0].vertices[0]));
  }
  hi *= 2.0;
  while (hi - lo > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    (sectors_admissible(p, groups, mid) ? lo : hi) = mid;
  }
  out.r_scale = 0.5 * lo;
  return out;
}

// Ear clipping ----------------------------------------------------------

namespace detail {

struct ClipVertex {
  Point2 p;
  std::size_t id;  // running index over all input loops
};

inline double wedge_angle(Point2 prev, Point2 cur, Point2 next) {
  return ccw_angle(next - cur, prev - cur);
}

// Direction d lies in the closed interior wedge at cur.
inline bool inside_wedge(Point2 prev, Point2 cur, Point2 next, Point2 d) {
  const double gamma = wedge_angle(prev, cur, next);
  const double a = ccw_angle(next - cur, d);
  return a <= gamma + 1e-12 || a >= kTwoPi - 1e-12;
}

inline bool segment_clear(Point2 a, Point2 b, const std::vector<ClipVertex>& ring,
                          const std::vector<std::vector<ClipVertex>>& others) {
  auto check = [&](const std::vector<ClipVertex>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      const Point2 c = r[i].p, d = r[(i + 1) % r.size()].p;
      if ((coincident(a, c) && coincident(b, d)) || (coincident(a, d) && coincident(b, c))) continue;
      if (!segments_compatible(a, b, c, d)) return false;
    }
    return true;
  };
  if (!check(ring)) return false;
  for (const auto& o : others) {
    if (!check(o)) return false;
  }
  return true;
}

inline void drop_straight(std::vector<ClipVertex>& r) {
  bool changed = true;
  while (changed && r.size() > 3) {
    changed = false;
    for (std::size_t i = 0; i < r.size() && r.size() > 3; ++i) {
      const Point2 a = r[(i + r.size() - 1) % r.size()].p, b = r[i].p, c = r[(i + 1) % r.size()].p;
      // Straight vertices and zero-area antennas carry no area.
      if (coincident(a, b) || coincident(a, c) ||
          std::abs(cross(b - a, c - b)) <= kTauGeom * (distance(a, b) + distance(b, c))) {
        r.erase(r.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
}

}  // namespace detail

inline std::vector<Triangle> triangulate(const Polygon& p) {
  using detail::ClipVertex;
  std::size_t id = 0;
  std::vector<std::vector<ClipVertex>> loops;
  for (const auto& loop : p.loops) {
    std::vector<ClipVertex> r;
    for (Point2 q : loop.vertices) r.push_back({q, id++});
    detail::drop_straight(r);
    loops.push_back(std::move(r));
  }
  std::vector<ClipVertex> ring = loops[0];
  std::vector<std::vector<ClipVertex>> holes(loops.begin() + 1, loops.end());

  // Bridge holes one at a time along the shortest admissible segment.
  while (!holes.empty()) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bh = 0, bm = 0, bp = 0;
    for (std::size_t h = 0; h < holes.size(); ++h) {
      const auto& hv = holes[h];
      for (std::size_t m = 0; m < hv.size(); ++m) {
        const Point2 M = hv[m].p;
        const Point2 Mprev = hv[(m + hv.size() - 1) % hv.size()].p, Mnext = hv[(m + 1) % hv.size()].p;
        for (std::size_t k = 0; k < ring.size(); ++k) {
          const Point2 P = ring[k].p;
          const double len = distance(M, P);
          if (len <= kTauGeom || len >= best) continue;
          const Point2 Pprev = ring[(k + ring.size() - 1) % ring.size()].p;
          const Point2 Pnext = ring[(k + 1) % ring.size()].p;
          if (!detail::inside_wedge(Mprev, M, Mnext, P - M)) continue;
          if (!detail::inside_wedge(Pprev, P, Pnext, M - P)) continue;
          if (!detail::segment_clear(M, P, ring, holes)) continue;
          best = len;
          bh = h;
          bm = m;
          bp = k;
        }
      }
    }
    if (!std::isfinite(best)) {
      throw InputError("triangulation failed: no bridge for hole starting at vertex " +
                       std::to_string(holes.front().front().id));
    }
    const auto& hv = holes[bh];
    std::vector<ClipVertex> merged(ring.begin(), ring.begin() + static_cast<std::ptrdiff_t>(bp) + 1);
    for (std::size_t s = 0; s <= hv.size(); ++s) merged.push_back(hv[(bm + s) % hv.size()]);
    merged.push_back(ring[bp]);
    merged.insert(merged.end(), ring.begin() + static_cast<std::ptrdiff_t>(bp) + 1, ring.end());
    ring = std::move(merged);
    holes.erase(holes.begin() + static_cast<std::ptrdiff_t>(bh));
  }

  std::vector<Triangle> out;
  while (ring.size() > 3) {
    detail::drop_straight(ring);
    if (ring.size() <= 3) break;
    const std::size_t n = ring.size();
    double best_quality = -1.0;
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t ia = (i + n - 1) % n, ic = (i + 1) % n;
      const Point2 a = ring[ia].p, b = ring[i].p, c = ring[ic].p;
      const double area2 = cross(b - a, c - b);
      if (area2 <= kTauGeom * std::max(distance(a, b), distance(b, c))) continue;
      bool empty = true;
      for (std::size_t k = 0; k < n && empty; ++k) {
        if (k == ia || k == i || k == ic) continue;
        const Point2 q = ring[k].p;
        if (coincident(q, a) || coincident(q, b) || coincident(q, c)) continue;
        if (cross(b - a, q - a) >= -kTauGeom && cross(c - b, q - b) >= -kTauGeom &&
            cross(a - c, q - c) >= -kTauGeom) {
          empty = false;
        }
      }
      if (!empty) continue;
      const Point2 pa = ring[(ia + n - 1) % n].p, nc = ring[(ic + 1) % n].p;
      if (!detail::inside_wedge(pa, a, b, c - a) || !detail::inside_wedge(b, c, nc, a - c)) continue;
      if (!detail::segment_clear(a, c, ring, {})) continue;
      // Prefer well-shaped ears: smallest angle of the candidate triangle.
      const double la = distance(b, c), lb = distance(a, c), lc = distance(a, b);
      const double q = area2 / std::max({la * lb, lb * lc, lc * la});
      if (q > best_quality) {
        best_quality = q;
        best = i;
      }
    }
    if (best == n) {
      throw InputError("triangulation failed near vertex " + std::to_string(ring.front().id));
    }
    const Point2 a = ring[(best + n - 1) % n].p, b = ring[best].p, c = ring[(best + 1) % n].p;
    out.push_back({a, b, c, 0.5 * cross(b - a, c - a)});
    ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(best));
  }
  if (ring.size() == 3) {
    const Point2 a = ring[0].p, b = ring[1].p, c = ring[2].p;
    const double s = 0.5 * cross(b - a, c - a);
    if (s <= 0.0) throw InputError("triangulation failed near vertex " + std::to_string(ring[0].id));
    out.push_back({a, b, c, s});
  }
  return out;
}

}  // namespace heatpoly
