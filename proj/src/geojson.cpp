#include "georank/geojson.hpp"

#include <cmath>

namespace georank::geojson {

namespace {

using nlohmann::json;

geo::Coord coord_from(const json& j) {
  if (!j.is_array() || j.size() < 2 || !j[0].is_number() || !j[1].is_number())
    throw ValidationError("GeoJSON position must be [lon, lat]");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<geo::Coord> coords_from(const json& j) {
  if (!j.is_array()) throw ValidationError("GeoJSON coordinate list expected");
  std::vector<geo::Coord> out;
  out.reserve(j.size());
  for (const auto& p : j) out.push_back(coord_from(p));
  return out;
}

geo::Polygon polygon_from(const json& rings) {
  if (!rings.is_array() || rings.empty())
    throw ValidationError("GeoJSON Polygon needs at least an outer ring");
  geo::Polygon pg;
  pg.outer.vertices = coords_from(rings[0]);
  for (size_t i = 1; i < rings.size(); ++i) pg.holes.push_back(geo::Ring{coords_from(rings[i])});
  return pg;
}

json coords_to(const std::vector<geo::Coord>& v) {
  json out = json::array();
  for (const auto& c : v) out.push_back(json::array({c.lon, c.lat}));
  return out;
}

json polygon_to(const geo::Polygon& pg) {
  json rings = json::array();
  rings.push_back(coords_to(pg.outer.vertices));
  for (const auto& h : pg.holes) rings.push_back(coords_to(h.vertices));
  return rings;
}

}  // namespace

geo::Geometry parse_geometry(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || !j.contains("coordinates"))
    throw ValidationError("GeoJSON geometry needs 'type' and 'coordinates'");
  const std::string type = j["type"].get<std::string>();
  const auto& c = j["coordinates"];
  if (type == "Point") return geo::Geometry(geo::Point{coord_from(c)});
  if (type == "MultiPoint") return geo::Geometry(geo::MultiPoint{coords_from(c)});
  if (type == "LineString") return geo::Geometry(geo::Polyline{coords_from(c)});
  if (type == "MultiLineString") {
    geo::MultiPolyline m;
    for (const auto& line : c) m.lines.push_back(geo::Polyline{coords_from(line)});
    return geo::Geometry(std::move(m));
  }
  if (type == "Polygon") return geo::Geometry(polygon_from(c));
  if (type == "MultiPolygon") {
    geo::MultiPolygon m;
    for (const auto& pg : c) m.polygons.push_back(polygon_from(pg));
    return geo::Geometry(std::move(m));
  }
  throw ValidationError("unsupported GeoJSON geometry type: " + type);
}

nlohmann::json write_geometry(const geo::Geometry& g) {
  using geo::GeometryKind;
  json out;
  switch (g.kind()) {
    case GeometryKind::Point: {
      const auto& p = g.as<geo::Point>().at;
      out = {{"type", "Point"}, {"coordinates", json::array({p.lon, p.lat})}};
      break;
    }
    case GeometryKind::MultiPoint:
      out = {{"type", "MultiPoint"}, {"coordinates", coords_to(g.as<geo::MultiPoint>().points)}};
      break;
    case GeometryKind::Polyline:
      out = {{"type", "LineString"}, {"coordinates", coords_to(g.as<geo::Polyline>().vertices)}};
      break;
    case GeometryKind::MultiPolyline: {
      json lines = json::array();
      for (const auto& l : g.as<geo::MultiPolyline>().lines) lines.push_back(coords_to(l.vertices));
      out = {{"type", "MultiLineString"}, {"coordinates", lines}};
      break;
    }
    case GeometryKind::Polygon:
      out = {{"type", "Polygon"}, {"coordinates", polygon_to(g.as<geo::Polygon>())}};
      break;
    case GeometryKind::MultiPolygon: {
      json polys = json::array();
      for (const auto& pg : g.as<geo::MultiPolygon>().polygons) polys.push_back(polygon_to(pg));
      out = {{"type", "MultiPolygon"}, {"coordinates", polys}};
      break;
    }
  }
  return out;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

// Degree offsets for a km offset at a given latitude.
geo::Coord offset_deg(const geo::Coord& base, double dx_km, double dy_km) {
  double dlat = dy_km / geo::kKmPerDegree;
  double dlon = dx_km / (geo::kKmPerDegree * std::cos(base.lat * kPi / 180.0));
  return {base.lon + dlon, base.lat + dlat};
}

std::vector<geo::Coord> circle_ring(const geo::Coord& center, double r_km, int steps) {
  std::vector<geo::Coord> ring;
  ring.reserve(static_cast<size_t>(steps) + 1);
  for (int i = 0; i < steps; ++i) {
    double a = 2.0 * kPi * i / steps;
    ring.push_back(offset_deg(center, r_km * std::cos(a), r_km * std::sin(a)));
  }
  ring.push_back(ring.front());
  return ring;
}

// Stadium outline around segment ab: two straight sides plus semicircle caps.
std::vector<geo::Coord> stadium_ring(const geo::Coord& a, const geo::Coord& b, double r_km,
                                     int steps) {
  double lat0 = (a.lat + b.lat) / 2.0 * kPi / 180.0;
  double ax = a.lon * geo::kKmPerDegree * std::cos(lat0), ay = a.lat * geo::kKmPerDegree;
  double bx = b.lon * geo::kKmPerDegree * std::cos(lat0), by = b.lat * geo::kKmPerDegree;
  double len = std::hypot(bx - ax, by - ay);
  double ux = (bx - ax) / len, uy = (by - ay) / len;  // along
  double theta = std::atan2(uy, ux);

  std::vector<geo::Coord> ring;
  auto push_km = [&](double x, double y) {
    ring.push_back({x / (geo::kKmPerDegree * std::cos(lat0)), y / geo::kKmPerDegree});
  };
  int half = std::max(4, steps / 2);
  // Cap around b, sweeping from theta-90 to theta+90.
  for (int i = 0; i <= half; ++i) {
    double ang = theta - kPi / 2 + kPi * i / half;
    push_km(bx + r_km * std::cos(ang), by + r_km * std::sin(ang));
  }
  // Cap around a, sweeping from theta+90 to theta+270.
  for (int i = 0; i <= half; ++i) {
    double ang = theta + kPi / 2 + kPi * i / half;
    push_km(ax + r_km * std::cos(ang), ay + r_km * std::sin(ang));
  }
  ring.push_back(ring.front());
  return ring;
}

}  // namespace

geo::Geometry buffer_outline(const geo::Geometry& reference, double eps_km, int arc_steps) {
  using geo::GeometryKind;
  if (reference.areal()) return reference;
  switch (reference.kind()) {
    case GeometryKind::Point:
      return geo::Geometry::polygon(circle_ring(reference.as<geo::Point>().at, eps_km, arc_steps));
    case GeometryKind::MultiPoint: {
      geo::MultiPolygon m;
      for (const auto& c : reference.as<geo::MultiPoint>().points)
        m.polygons.push_back(geo::Polygon{geo::Ring{circle_ring(c, eps_km, arc_steps)}, {}});
      return geo::Geometry(std::move(m));
    }
    case GeometryKind::Polyline: {
      const auto& v = reference.as<geo::Polyline>().vertices;
      geo::MultiPolygon m;
      for (size_t i = 0; i + 1 < v.size(); ++i)
        m.polygons.push_back(
            geo::Polygon{geo::Ring{stadium_ring(v[i], v[i + 1], eps_km, arc_steps)}, {}});
      return geo::Geometry(std::move(m));
    }
    default:
      // MultiPolyline: one stadium per segment of each member.
      {
        geo::MultiPolygon m;
        for (const auto& l : reference.as<geo::MultiPolyline>().lines)
          for (size_t i = 0; i + 1 < l.vertices.size(); ++i)
            m.polygons.push_back(geo::Polygon{
                geo::Ring{stadium_ring(l.vertices[i], l.vertices[i + 1], eps_km, arc_steps)}, {}});
        return geo::Geometry(std::move(m));
      }
  }
}

}  // namespace georank::geojson
