#include "georank/geo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace georank::geo {

namespace {

constexpr double kPi = 3.14159265358979323846;

double deg2rad(double d) { return d * kPi / 180.0; }

void check_coord(const Coord& c) {
  if (!std::isfinite(c.lon) || !std::isfinite(c.lat))
    throw ValidationError("coordinate is not finite");
  if (c.lon < -180.0 || c.lon > 180.0)
    throw ValidationError("longitude out of [-180, 180]: " + std::to_string(c.lon));
  if (c.lat < -90.0 || c.lat > 90.0)
    throw ValidationError("latitude out of [-90, 90]: " + std::to_string(c.lat));
}

std::vector<Coord> dedup_consecutive(std::vector<Coord> pts) {
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Planar primitives over raw lon/lat (affine-equivalent to the projected plane,
// so predicate results agree between the two spaces).

double cross(const Coord& o, const Coord& a, const Coord& b) {
  return (a.lon - o.lon) * (b.lat - o.lat) - (a.lat - o.lat) * (b.lon - o.lon);
}

bool on_segment_box(const Coord& a, const Coord& b, const Coord& q) {
  return q.lon <= std::max(a.lon, b.lon) && q.lon >= std::min(a.lon, b.lon) &&
         q.lat <= std::max(a.lat, b.lat) && q.lat >= std::min(a.lat, b.lat);
}

bool point_on_segment(const Coord& q, const Coord& a, const Coord& b) {
  return cross(a, b, q) == 0.0 && on_segment_box(a, b, q);
}

int orientation(const Coord& a, const Coord& b, const Coord& c) {
  double v = cross(a, b, c);
  if (v > 0) return 1;
  if (v < 0) return -1;
  return 0;
}

/// Inclusive segment intersection: touching endpoints and collinear overlap count.
bool segments_intersect(const Coord& a, const Coord& b, const Coord& c, const Coord& d) {
  int o1 = orientation(a, b, c);
  int o2 = orientation(a, b, d);
  int o3 = orientation(c, d, a);
  int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment_box(a, b, c)) return true;
  if (o2 == 0 && on_segment_box(a, b, d)) return true;
  if (o3 == 0 && on_segment_box(c, d, a)) return true;
  if (o4 == 0 && on_segment_box(c, d, b)) return true;
  return false;
}

/// Strict crossing at a single interior point of both segments.
bool segments_cross_properly(const Coord& a, const Coord& b, const Coord& c, const Coord& d) {
  int o1 = orientation(a, b, c);
  int o2 = orientation(a, b, d);
  int o3 = orientation(c, d, a);
  int o4 = orientation(c, d, b);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

bool point_on_ring_boundary(const Coord& q, const Ring& ring) {
  for (size_t i = 0; i + 1 < ring.vertices.size(); ++i)
    if (point_on_segment(q, ring.vertices[i], ring.vertices[i + 1])) return true;
  return false;
}

/// Even-odd test against the open interior of a ring (boundary not included).
bool point_in_ring_interior(const Coord& q, const Ring& ring) {
  if (point_on_ring_boundary(q, ring)) return false;
  bool inside = false;
  const auto& v = ring.vertices;
  for (size_t i = 0, j = v.size() - 2; i + 1 < v.size(); j = i++) {
    bool straddles = (v[i].lat > q.lat) != (v[j].lat > q.lat);
    if (straddles) {
      double x_at = v[i].lon + (q.lat - v[i].lat) / (v[j].lat - v[i].lat) * (v[j].lon - v[i].lon);
      if (q.lon < x_at) inside = !inside;
    }
  }
  return inside;
}

/// Membership in the closed footprint of a polygon: on any boundary, or in the
/// outer interior and not strictly inside any hole.
bool point_in_polygon(const Coord& q, const Polygon& pg) {
  if (point_on_ring_boundary(q, pg.outer)) return true;
  for (const auto& h : pg.holes)
    if (point_on_ring_boundary(q, h)) return true;
  if (!point_in_ring_interior(q, pg.outer)) return false;
  for (const auto& h : pg.holes)
    if (point_in_ring_interior(q, h)) return false;
  return true;
}

/// Strict interior: not on boundary, inside outer, outside all holes.
bool point_in_polygon_interior(const Coord& q, const Polygon& pg) {
  if (point_on_ring_boundary(q, pg.outer)) return false;
  for (const auto& h : pg.holes)
    if (point_on_ring_boundary(q, h)) return false;
  if (!point_in_ring_interior(q, pg.outer)) return false;
  for (const auto& h : pg.holes)
    if (point_in_ring_interior(q, h)) return false;
  return true;
}

void check_ring(Ring& ring) {
  ring.vertices = dedup_consecutive(std::move(ring.vertices));
  for (const auto& c : ring.vertices) check_coord(c);
  if (ring.vertices.size() < 4) throw ValidationError("polygon ring has fewer than 4 vertices");
  if (!(ring.vertices.front() == ring.vertices.back()))
    throw ValidationError("polygon ring is not closed (first vertex != last)");
  size_t n = ring.vertices.size() - 1;  // distinct edges
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(ring.vertices[i], ring.vertices[i + 1], ring.vertices[j],
                             ring.vertices[j + 1]))
        throw ValidationError("polygon ring is self-intersecting");
    }
  }
}

void check_polygon(Polygon& pg) {
  check_ring(pg.outer);
  for (auto& h : pg.holes) check_ring(h);
}

// Decomposition into primitive parts for pairwise predicates.

struct Parts {
  std::vector<Coord> points;
  std::vector<std::pair<Coord, Coord>> segments;   // polyline edges and ring edges
  std::vector<const Polygon*> polygons;
  bool point_like = false;
};

Parts decompose(const Geometry& g) {
  Parts parts;
  auto add_chain = [&](const std::vector<Coord>& v) {
    for (size_t i = 0; i + 1 < v.size(); ++i) parts.segments.emplace_back(v[i], v[i + 1]);
  };
  std::visit(
      [&](const auto& shape) {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Point>) {
          parts.points.push_back(shape.at);
          parts.point_like = true;
        } else if constexpr (std::is_same_v<T, MultiPoint>) {
          parts.points = shape.points;
          parts.point_like = true;
        } else if constexpr (std::is_same_v<T, Polyline>) {
          add_chain(shape.vertices);
        } else if constexpr (std::is_same_v<T, MultiPolyline>) {
          for (const auto& l : shape.lines) add_chain(l.vertices);
        } else if constexpr (std::is_same_v<T, Polygon>) {
          parts.polygons.push_back(&shape);
          add_chain(shape.outer.vertices);
          for (const auto& h : shape.holes) add_chain(h.vertices);
        } else if constexpr (std::is_same_v<T, MultiPolygon>) {
          for (const auto& pg : shape.polygons) {
            parts.polygons.push_back(&pg);
            add_chain(pg.outer.vertices);
            for (const auto& h : pg.holes) add_chain(h.vertices);
          }
        }
      },
      g.value());
  return parts;
}

std::vector<Coord> all_vertices(const Geometry& g) {
  std::vector<Coord> out;
  std::visit(
      [&](const auto& shape) {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Point>) {
          out.push_back(shape.at);
        } else if constexpr (std::is_same_v<T, MultiPoint>) {
          out = shape.points;
        } else if constexpr (std::is_same_v<T, Polyline>) {
          out = shape.vertices;
        } else if constexpr (std::is_same_v<T, MultiPolyline>) {
          for (const auto& l : shape.lines) out.insert(out.end(), l.vertices.begin(), l.vertices.end());
        } else if constexpr (std::is_same_v<T, Polygon>) {
          out = shape.outer.vertices;
          for (const auto& h : shape.holes) out.insert(out.end(), h.vertices.begin(), h.vertices.end());
        } else if constexpr (std::is_same_v<T, MultiPolygon>) {
          for (const auto& pg : shape.polygons) {
            out.insert(out.end(), pg.outer.vertices.begin(), pg.outer.vertices.end());
            for (const auto& h : pg.holes) out.insert(out.end(), h.vertices.begin(), h.vertices.end());
          }
        }
      },
      g.value());
  return out;
}

// Local equirectangular projection for metric computations.

struct Projector {
  double cos_lat0;
  std::pair<double, double> operator()(const Coord& c) const {
    return {deg2rad(c.lon) * kEarthRadiusKm * cos_lat0, deg2rad(c.lat) * kEarthRadiusKm};
  }
};

double planar_dist(std::pair<double, double> a, std::pair<double, double> b) {
  return std::hypot(a.first - b.first, a.second - b.second);
}

double planar_point_segment(std::pair<double, double> q, std::pair<double, double> a,
                            std::pair<double, double> b) {
  double dx = b.first - a.first;
  double dy = b.second - a.second;
  double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) return planar_dist(q, a);
  double t = ((q.first - a.first) * dx + (q.second - a.second) * dy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return planar_dist(q, {a.first + t * dx, a.second + t * dy});
}

double planar_segment_segment(std::pair<double, double> a, std::pair<double, double> b,
                              std::pair<double, double> c, std::pair<double, double> d) {
  return std::min(std::min(planar_point_segment(a, c, d), planar_point_segment(b, c, d)),
                  std::min(planar_point_segment(c, a, b), planar_point_segment(d, a, b)));
}

}  // namespace

const char* to_string(GeometryKind k) {
  switch (k) {
    case GeometryKind::Point: return "Point";
    case GeometryKind::MultiPoint: return "MultiPoint";
    case GeometryKind::Polyline: return "Polyline";
    case GeometryKind::MultiPolyline: return "MultiPolyline";
    case GeometryKind::Polygon: return "Polygon";
    case GeometryKind::MultiPolygon: return "MultiPolygon";
  }
  return "?";
}

Geometry::Geometry(Point p) : value_(p) { check_coord(p.at); }

Geometry::Geometry(MultiPoint mp) : value_(std::move(mp)) {
  const auto& m = std::get<MultiPoint>(value_);
  if (m.points.empty()) throw ValidationError("MultiPoint has no points");
  for (const auto& c : m.points) check_coord(c);
}

Geometry::Geometry(Polyline pl) : value_(Polyline{dedup_consecutive(std::move(pl.vertices))}) {
  const auto& l = std::get<Polyline>(value_);
  for (const auto& c : l.vertices) check_coord(c);
  if (l.vertices.size() < 2)
    throw ValidationError("polyline has fewer than 2 distinct vertices");
}

Geometry::Geometry(MultiPolyline mpl) : value_(std::move(mpl)) {
  auto& m = std::get<MultiPolyline>(value_);
  if (m.lines.empty()) throw ValidationError("MultiPolyline has no lines");
  for (auto& l : m.lines) {
    l.vertices = dedup_consecutive(std::move(l.vertices));
    for (const auto& c : l.vertices) check_coord(c);
    if (l.vertices.size() < 2)
      throw ValidationError("polyline has fewer than 2 distinct vertices");
  }
}

Geometry::Geometry(Polygon pg) : value_(std::move(pg)) {
  check_polygon(std::get<Polygon>(value_));
}

Geometry::Geometry(MultiPolygon mpg) : value_(std::move(mpg)) {
  auto& m = std::get<MultiPolygon>(value_);
  if (m.polygons.empty()) throw ValidationError("MultiPolygon has no polygons");
  for (auto& p : m.polygons) check_polygon(p);
}

Geometry Geometry::polygon(std::vector<Coord> outer_ring, std::vector<std::vector<Coord>> holes) {
  Polygon pg;
  pg.outer.vertices = std::move(outer_ring);
  for (auto& h : holes) pg.holes.push_back(Ring{std::move(h)});
  return Geometry(std::move(pg));
}

GeometryKind Geometry::kind() const {
  return static_cast<GeometryKind>(value_.index());
}

int Geometry::dim() const {
  switch (kind()) {
    case GeometryKind::Point:
    case GeometryKind::MultiPoint: return 0;
    case GeometryKind::Polyline:
    case GeometryKind::MultiPolyline: return 1;
    case GeometryKind::Polygon:
    case GeometryKind::MultiPolygon: return 2;
  }
  return 0;
}

bool operator==(const Geometry& a, const Geometry& b) {
  if (a.kind() != b.kind()) return false;
  auto verts_equal = [](const std::vector<Coord>& x, const std::vector<Coord>& y) {
    return x == y;
  };
  switch (a.kind()) {
    case GeometryKind::Point: return a.as<Point>().at == b.as<Point>().at;
    case GeometryKind::MultiPoint: return verts_equal(a.as<MultiPoint>().points, b.as<MultiPoint>().points);
    case GeometryKind::Polyline: return verts_equal(a.as<Polyline>().vertices, b.as<Polyline>().vertices);
    case GeometryKind::MultiPolyline: {
      const auto& x = a.as<MultiPolyline>().lines;
      const auto& y = b.as<MultiPolyline>().lines;
      if (x.size() != y.size()) return false;
      for (size_t i = 0; i < x.size(); ++i)
        if (!verts_equal(x[i].vertices, y[i].vertices)) return false;
      return true;
    }
    case GeometryKind::Polygon:
    case GeometryKind::MultiPolygon: {
      auto rings = [](const Geometry& g) {
        std::vector<std::vector<Coord>> out;
        auto add = [&](const Polygon& p) {
          out.push_back(p.outer.vertices);
          for (const auto& h : p.holes) out.push_back(h.vertices);
        };
        if (g.kind() == GeometryKind::Polygon) add(g.as<Polygon>());
        else
          for (const auto& p : g.as<MultiPolygon>().polygons) add(p);
        return out;
      };
      return rings(a) == rings(b);
    }
  }
  return false;
}

double haversine_km(const Coord& a, const Coord& b) {
  double phi1 = deg2rad(a.lat);
  double phi2 = deg2rad(b.lat);
  double dphi = deg2rad(b.lat - a.lat);
  double dlam = deg2rad(b.lon - a.lon);
  double s = std::sin(dphi / 2.0);
  double t = std::sin(dlam / 2.0);
  double h = s * s + std::cos(phi1) * std::cos(phi2) * t * t;
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

BBox bounds(const Geometry& g) {
  auto verts = all_vertices(g);
  BBox box{verts.front().lon, verts.front().lat, verts.front().lon, verts.front().lat};
  for (const auto& c : verts) box.extend(c);
  return box;
}

bool intersects(const Geometry& a, const Geometry& b) {
  Parts pa = decompose(a);
  Parts pb = decompose(b);

  for (const auto& p : pa.points)
    for (const auto& q : pb.points)
      if (p == q) return true;

  for (const auto& p : pa.points)
    for (const auto& [c, d] : pb.segments)
      if (point_on_segment(p, c, d)) return true;
  for (const auto& q : pb.points)
    for (const auto& [c, d] : pa.segments)
      if (point_on_segment(q, c, d)) return true;

  for (const auto& [a1, a2] : pa.segments)
    for (const auto& [b1, b2] : pb.segments)
      if (segments_intersect(a1, a2, b1, b2)) return true;

  // Remaining case: one footprint strictly inside the other's area.
  if (!pa.polygons.empty()) {
    for (const auto& q : all_vertices(b))
      for (const Polygon* pg : pa.polygons)
        if (point_in_polygon(q, *pg)) return true;
  }
  if (!pb.polygons.empty()) {
    for (const auto& p : all_vertices(a))
      for (const Polygon* pg : pb.polygons)
        if (point_in_polygon(p, *pg)) return true;
  }
  return false;
}

double distance_km(const Geometry& a, const Geometry& b) {
  if (intersects(a, b)) return 0.0;

  Parts pa = decompose(a);
  Parts pb = decompose(b);

  if (pa.point_like && pb.point_like) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pa.points)
      for (const auto& q : pb.points) best = std::min(best, haversine_km(p, q));
    return best;
  }

  double lat0 = deg2rad((bounds(a).center().lat + bounds(b).center().lat) / 2.0);
  Projector proj{std::cos(lat0)};

  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pa.points) {
    auto pp = proj(p);
    for (const auto& q : pb.points) best = std::min(best, planar_dist(pp, proj(q)));
    for (const auto& [c, d] : pb.segments)
      best = std::min(best, planar_point_segment(pp, proj(c), proj(d)));
  }
  for (const auto& q : pb.points) {
    auto qq = proj(q);
    for (const auto& [c, d] : pa.segments)
      best = std::min(best, planar_point_segment(qq, proj(c), proj(d)));
  }
  for (const auto& [a1, a2] : pa.segments) {
    auto s1 = proj(a1);
    auto s2 = proj(a2);
    for (const auto& [b1, b2] : pb.segments)
      best = std::min(best, planar_segment_segment(s1, s2, proj(b1), proj(b2)));
  }
  return best;
}

bool within_buffer(const Geometry& target, const Geometry& reference, double eps_km) {
  if (eps_km < 0.0) throw ValidationError("buffer distance must be non-negative");
  return distance_km(target, reference) <= eps_km;
}

bool contains(const Geometry& areal, const Geometry& target) {
  if (!areal.areal())
    throw ValidationError(std::string("contains() needs an areal first argument, got ") +
                          to_string(areal.kind()));

  Parts pa = decompose(areal);

  // Every vertex of the target must lie in some member polygon's closed footprint.
  for (const auto& v : all_vertices(target)) {
    bool in_any = false;
    for (const Polygon* pg : pa.polygons)
      if (point_in_polygon(v, *pg)) {
        in_any = true;
        break;
      }
    if (!in_any) return false;
  }

  if (target.dim() == 0) return true;

  // Edges may not properly cross the areal boundary (touching is fine; the
  // footprint is closed).
  Parts pt = decompose(target);
  for (const auto& [t1, t2] : pt.segments)
    for (const auto& [r1, r2] : pa.segments)
      if (segments_cross_properly(t1, t2, r1, r2)) return false;

  // An areal target must not swallow a hole (or a gap between members).
  if (target.dim() == 2) {
    for (const Polygon* tp : pt.polygons) {
      for (const Polygon* ap : pa.polygons) {
        for (const auto& h : ap->holes)
          for (const auto& hv : h.vertices)
            if (point_in_polygon_interior(hv, *tp)) return false;
      }
    }
  }
  return true;
}

}  // namespace georank::geo
