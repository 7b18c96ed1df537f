#pragma once

// Test-side reference implementations, kept independent of the library code
// they check. Everything here is written from the definitions, not by calling
// the production path.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "georank/geo.hpp"
#include "georank/ranking.hpp"

namespace oracles {

inline double haversine(double lon1, double lat1, double lon2, double lat2) {
  constexpr double R = 6371.0088;
  constexpr double d2r = 3.14159265358979323846 / 180.0;
  double a = std::pow(std::sin((lat2 - lat1) * d2r / 2), 2) +
             std::cos(lat1 * d2r) * std::cos(lat2 * d2r) *
                 std::pow(std::sin((lon2 - lon1) * d2r / 2), 2);
  return 2 * R * std::atan2(std::sqrt(a), std::sqrt(1 - a));
}

// --- independent planar predicates (parametric formulation) ----------------

struct Seg {
  double ax, ay, bx, by;
};

inline bool seg_intersect(const Seg& s, const Seg& t) {
  double rpx = s.bx - s.ax, rpy = s.by - s.ay;
  double spx = t.bx - t.ax, spy = t.by - t.ay;
  double denom = rpx * spy - rpy * spx;
  double qpx = t.ax - s.ax, qpy = t.ay - s.ay;
  if (denom == 0.0) {
    if (qpx * rpy - qpy * rpx != 0.0) return false;  // parallel, not collinear
    // Collinear: project onto the dominant axis and compare intervals.
    auto lo = [&](double u, double v) { return std::min(u, v); };
    auto hi = [&](double u, double v) { return std::max(u, v); };
    if (std::abs(rpx) >= std::abs(rpy))
      return hi(s.ax, s.bx) >= lo(t.ax, t.bx) && hi(t.ax, t.bx) >= lo(s.ax, s.bx);
    return hi(s.ay, s.by) >= lo(t.ay, t.by) && hi(t.ay, t.by) >= lo(s.ay, s.by);
  }
  double u = (qpx * spy - qpy * spx) / denom;
  double v = (qpx * rpy - qpy * rpx) / denom;
  return u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0;
}

// Winding-number point-in-ring (boundary handled separately by callers).
inline bool point_in_ring_winding(double x, double y, const std::vector<georank::geo::Coord>& ring) {
  int wn = 0;
  for (size_t i = 0; i + 1 < ring.size(); ++i) {
    double x1 = ring[i].lon, y1 = ring[i].lat;
    double x2 = ring[i + 1].lon, y2 = ring[i + 1].lat;
    if (y1 <= y) {
      if (y2 > y && (x2 - x1) * (y - y1) - (x - x1) * (y2 - y1) > 0) ++wn;
    } else {
      if (y2 <= y && (x2 - x1) * (y - y1) - (x - x1) * (y2 - y1) < 0) --wn;
    }
  }
  return wn != 0;
}

inline bool point_on_seg(double x, double y, const Seg& s) {
  double cross = (s.bx - s.ax) * (y - s.ay) - (s.by - s.ay) * (x - s.ax);
  if (cross != 0.0) return false;
  return x >= std::min(s.ax, s.bx) && x <= std::max(s.ax, s.bx) && y >= std::min(s.ay, s.by) &&
         y <= std::max(s.ay, s.by);
}

// Decompose a geometry into loose points, segments, and polygon rings.
struct Decomposed {
  std::vector<georank::geo::Coord> points;
  std::vector<Seg> segments;
  std::vector<const georank::geo::Polygon*> polygons;
};

inline Decomposed decompose(const georank::geo::Geometry& g) {
  using namespace georank::geo;
  Decomposed d;
  auto chain = [&](const std::vector<Coord>& v) {
    for (size_t i = 0; i + 1 < v.size(); ++i)
      d.segments.push_back({v[i].lon, v[i].lat, v[i + 1].lon, v[i + 1].lat});
  };
  switch (g.kind()) {
    case GeometryKind::Point: d.points.push_back(g.as<Point>().at); break;
    case GeometryKind::MultiPoint: d.points = g.as<MultiPoint>().points; break;
    case GeometryKind::Polyline: chain(g.as<Polyline>().vertices); break;
    case GeometryKind::MultiPolyline:
      for (const auto& l : g.as<MultiPolyline>().lines) chain(l.vertices);
      break;
    case GeometryKind::Polygon: {
      const auto& pg = g.as<Polygon>();
      d.polygons.push_back(&pg);
      chain(pg.outer.vertices);
      for (const auto& h : pg.holes) chain(h.vertices);
      break;
    }
    case GeometryKind::MultiPolygon:
      for (const auto& pg : g.as<MultiPolygon>().polygons) {
        d.polygons.push_back(&pg);
        chain(pg.outer.vertices);
        for (const auto& h : pg.holes) chain(h.vertices);
      }
      break;
  }
  return d;
}

inline bool point_in_polygon_closed(double x, double y, const georank::geo::Polygon& pg) {
  auto on_ring = [&](const georank::geo::Ring& r) {
    for (size_t i = 0; i + 1 < r.vertices.size(); ++i)
      if (point_on_seg(x, y,
                       {r.vertices[i].lon, r.vertices[i].lat, r.vertices[i + 1].lon,
                        r.vertices[i + 1].lat}))
        return true;
    return false;
  };
  if (on_ring(pg.outer)) return true;
  for (const auto& h : pg.holes)
    if (on_ring(h)) return true;
  if (!point_in_ring_winding(x, y, pg.outer.vertices)) return false;
  for (const auto& h : pg.holes)
    if (point_in_ring_winding(x, y, h.vertices)) return false;
  return true;
}

/// O(n^2) intersection oracle over all primitive part pairs.
inline bool intersects(const georank::geo::Geometry& a, const georank::geo::Geometry& b) {
  Decomposed da = decompose(a), db = decompose(b);
  for (const auto& p : da.points)
    for (const auto& q : db.points)
      if (p.lon == q.lon && p.lat == q.lat) return true;
  for (const auto& p : da.points)
    for (const auto& s : db.segments)
      if (point_on_seg(p.lon, p.lat, s)) return true;
  for (const auto& q : db.points)
    for (const auto& s : da.segments)
      if (point_on_seg(q.lon, q.lat, s)) return true;
  for (const auto& s : da.segments)
    for (const auto& t : db.segments)
      if (seg_intersect(s, t)) return true;
  auto any_vertex_inside = [](const Decomposed& verts_of, const Decomposed& polys_of) {
    auto check = [&](double x, double y) {
      for (const auto* pg : polys_of.polygons)
        if (point_in_polygon_closed(x, y, *pg)) return true;
      return false;
    };
    for (const auto& p : verts_of.points)
      if (check(p.lon, p.lat)) return true;
    for (const auto& s : verts_of.segments)
      if (check(s.ax, s.ay) || check(s.bx, s.by)) return true;
    return false;
  };
  if (!db.polygons.empty() && any_vertex_inside(da, db)) return true;
  if (!da.polygons.empty() && any_vertex_inside(db, da)) return true;
  return false;
}

// --- dominance oracle -------------------------------------------------------

inline std::vector<georank::ParetoPoint> frontier(const std::vector<georank::ParetoPoint>& pts) {
  std::vector<georank::ParetoPoint> out;
  for (const auto& p : pts) {
    bool dominated = false;
    for (const auto& q : pts) {
      if (q.f_s >= p.f_s && q.f_k >= p.f_k && (q.f_s > p.f_s || q.f_k > p.f_k)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(p);
  }
  std::sort(out.begin(), out.end(),
            [](const georank::ParetoPoint& a, const georank::ParetoPoint& b) {
              if (a.f_s != b.f_s) return a.f_s > b.f_s;
              if (a.f_k != b.f_k) return a.f_k > b.f_k;
              return a.poi_id < b.poi_id;
            });
  return out;
}

// --- independent hash-embedder mirror ---------------------------------------

inline uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::vector<double> hash_embed(const std::string& text, int dim = 256) {
  std::vector<double> v(static_cast<size_t>(dim), 0.0);
  std::string tok;
  auto flush = [&] {
    if (tok.empty()) return;
    uint64_t h = fnv1a(tok);
    v[h % static_cast<uint64_t>(dim)] += ((h >> 32) & 1ull) ? 1.0 : -1.0;
    tok.clear();
  };
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      tok.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    else
      flush();
  }
  flush();
  double n2 = 0.0;
  for (double x : v) n2 += x * x;
  if (n2 > 0.0)
    for (double& x : v) x /= std::sqrt(n2);
  return v;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// --- random geometry generators ---------------------------------------------

inline georank::geo::Coord random_coord(std::mt19937_64& rng, georank::geo::Coord center,
                                        double spread_deg) {
  std::uniform_real_distribution<double> d(-spread_deg, spread_deg);
  return {center.lon + d(rng), center.lat + d(rng)};
}

inline georank::geo::Geometry random_polygon(std::mt19937_64& rng, georank::geo::Coord center,
                                             double radius_deg, bool with_hole = false) {
  std::uniform_int_distribution<int> nverts(3, 7);
  std::uniform_real_distribution<double> rscale(0.5, 1.0);
  int n = nverts(rng);
  std::vector<double> angles;
  std::uniform_real_distribution<double> ang(0.0, 2 * 3.14159265358979323846);
  for (int i = 0; i < n; ++i) angles.push_back(ang(rng));
  std::sort(angles.begin(), angles.end());
  // Drop near-duplicate angles so edges stay non-degenerate.
  angles.erase(std::unique(angles.begin(), angles.end(),
                           [](double a, double b) { return std::abs(a - b) < 0.15; }),
               angles.end());
  while (angles.size() < 3) angles.push_back(angles.back() + 0.7);
  std::vector<georank::geo::Coord> ring;
  for (double a : angles) {
    double r = radius_deg * rscale(rng);
    ring.push_back({center.lon + r * std::cos(a), center.lat + r * std::sin(a)});
  }
  ring.push_back(ring.front());
  std::vector<std::vector<georank::geo::Coord>> holes;
  if (with_hole) {
    double hr = radius_deg * 0.15;
    holes.push_back({{center.lon - hr, center.lat - hr},
                     {center.lon + hr, center.lat - hr},
                     {center.lon + hr, center.lat + hr},
                     {center.lon - hr, center.lat + hr},
                     {center.lon - hr, center.lat - hr}});
  }
  return georank::geo::Geometry::polygon(ring, holes);
}

inline georank::geo::Geometry random_geometry(std::mt19937_64& rng, georank::geo::Coord center,
                                              double spread_deg) {
  std::uniform_int_distribution<int> kind(0, 3);
  switch (kind(rng)) {
    case 0:
      return georank::geo::Geometry(georank::geo::Point{random_coord(rng, center, spread_deg)});
    case 1: {
      std::uniform_int_distribution<int> n(2, 4);
      std::vector<georank::geo::Coord> pts;
      int count = n(rng);
      for (int i = 0; i < count; ++i) pts.push_back(random_coord(rng, center, spread_deg));
      return georank::geo::Geometry(georank::geo::MultiPoint{pts});
    }
    case 2: {
      std::uniform_int_distribution<int> n(2, 5);
      std::vector<georank::geo::Coord> pts;
      int count = n(rng);
      for (int i = 0; i < count; ++i) pts.push_back(random_coord(rng, center, spread_deg));
      return georank::geo::Geometry(georank::geo::Polyline{pts});
    }
    default:
      return random_polygon(rng, random_coord(rng, center, spread_deg / 2), spread_deg / 2);
  }
}

}  // namespace oracles
