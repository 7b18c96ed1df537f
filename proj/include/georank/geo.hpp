#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "georank/errors.hpp"

namespace georank::geo {

/// Mean Earth radius, kilometers.
inline constexpr double kEarthRadiusKm = 6371.0088;

/// Kilometers per degree of latitude (and of longitude at the equator).
inline constexpr double kKmPerDegree = kEarthRadiusKm * 3.14159265358979323846 / 180.0;

/// Geographic coordinate in lon/lat degrees.
struct Coord {
  double lon = 0.0;
  double lat = 0.0;

  friend bool operator==(const Coord& a, const Coord& b) {
    return a.lon == b.lon && a.lat == b.lat;
  }
};

struct BBox {
  double min_lon = 0.0;
  double min_lat = 0.0;
  double max_lon = 0.0;
  double max_lat = 0.0;

  bool overlaps(const BBox& o) const {
    return min_lon <= o.max_lon && o.min_lon <= max_lon && min_lat <= o.max_lat &&
           o.min_lat <= max_lat;
  }

  bool contains(const Coord& c) const {
    return c.lon >= min_lon && c.lon <= max_lon && c.lat >= min_lat && c.lat <= max_lat;
  }

  void extend(const Coord& c) {
    if (c.lon < min_lon) min_lon = c.lon;
    if (c.lon > max_lon) max_lon = c.lon;
    if (c.lat < min_lat) min_lat = c.lat;
    if (c.lat > max_lat) max_lat = c.lat;
  }

  void extend(const BBox& o) {
    if (o.min_lon < min_lon) min_lon = o.min_lon;
    if (o.max_lon > max_lon) max_lon = o.max_lon;
    if (o.min_lat < min_lat) min_lat = o.min_lat;
    if (o.max_lat > max_lat) max_lat = o.max_lat;
  }

  /// Box grown by dlon/dlat degrees on each side.
  BBox padded(double dlon, double dlat) const {
    return {min_lon - dlon, min_lat - dlat, max_lon + dlon, max_lat + dlat};
  }

  Coord center() const { return {(min_lon + max_lon) / 2.0, (min_lat + max_lat) / 2.0}; }
};

struct Point {
  Coord at;
};

struct MultiPoint {
  std::vector<Coord> points;
};

/// Open chain of >= 2 vertices. Consecutive duplicate vertices are dropped
/// during construction.
struct Polyline {
  std::vector<Coord> vertices;
};

struct MultiPolyline {
  std::vector<Polyline> lines;
};

/// Closed ring: first vertex == last vertex, >= 4 vertices, no self-intersection.
struct Ring {
  std::vector<Coord> vertices;
};

struct Polygon {
  Ring outer;
  std::vector<Ring> holes;
};

struct MultiPolygon {
  std::vector<Polygon> polygons;
};

enum class GeometryKind { Point, MultiPoint, Polyline, MultiPolyline, Polygon, MultiPolygon };

const char* to_string(GeometryKind k);

/// Spatial footprint of an object: a validated tagged union of the three
/// fundamental shapes (and their Multi variants). Immutable after construction.
class Geometry {
 public:
  using Variant =
      std::variant<Point, MultiPoint, Polyline, MultiPolyline, Polygon, MultiPolygon>;

  explicit Geometry(Point p);
  explicit Geometry(MultiPoint mp);
  explicit Geometry(Polyline pl);
  explicit Geometry(MultiPolyline mpl);
  explicit Geometry(Polygon pg);
  explicit Geometry(MultiPolygon mpg);

  static Geometry point(double lon, double lat) { return Geometry(Point{{lon, lat}}); }
  static Geometry multi_point(std::vector<Coord> pts) { return Geometry(MultiPoint{std::move(pts)}); }
  static Geometry polyline(std::vector<Coord> pts) { return Geometry(Polyline{std::move(pts)}); }
  static Geometry polygon(std::vector<Coord> outer_ring, std::vector<std::vector<Coord>> holes = {});

  GeometryKind kind() const;

  /// Topological dimension: 0 for points, 1 for polylines, 2 for polygons.
  int dim() const;

  bool point_like() const { return dim() == 0; }
  bool areal() const { return dim() == 2; }

  const Variant& value() const { return value_; }

  template <typename T>
  const T& as() const {
    return std::get<T>(value_);
  }

  friend bool operator==(const Geometry& a, const Geometry& b);

 private:
  Variant value_;
};

/// Great-circle distance between two coordinates, km.
double haversine_km(const Coord& a, const Coord& b);

/// Tight axis-aligned bounds of a geometry.
BBox bounds(const Geometry& g);

/// Shortest distance between two geometries, km. Zero exactly when the
/// footprints intersect. Point pairs use the great-circle metric; anything
/// involving segments is measured under a local equirectangular projection
/// centered between the operands.
double distance_km(const Geometry& a, const Geometry& b);

/// True iff the two footprints share at least one point.
bool intersects(const Geometry& a, const Geometry& b);

/// True iff distance(target, reference) <= eps_km. Boundary inclusive.
bool within_buffer(const Geometry& target, const Geometry& reference, double eps_km);

/// True iff target lies entirely within the areal geometry (hole interiors
/// excluded, boundaries inclusive). Throws unless `areal` is Polygon/MultiPolygon.
bool contains(const Geometry& areal, const Geometry& target);

}  // namespace georank::geo
