#pragma once

#include <string>

#include <json.hpp>

#include "georank/geo.hpp"

namespace georank::geojson {

/// GeoJSON geometry object -> Geometry. Throws ValidationError on unsupported
/// or malformed geometry.
geo::Geometry parse_geometry(const nlohmann::json& j);

/// Geometry -> GeoJSON geometry object.
nlohmann::json write_geometry(const geo::Geometry& g);

/// Polygonal outline of the eps_km buffer around a reference geometry, for
/// map inspection: a circle per point, a stadium per segment, the region
/// itself for areal references.
geo::Geometry buffer_outline(const geo::Geometry& reference, double eps_km, int arc_steps = 32);

}  // namespace georank::geojson
