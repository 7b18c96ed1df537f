#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "georank/gazetteer.hpp"
#include "georank/geo.hpp"

namespace georank {

enum class QueryKind { PointRadius, RouteBuffer, RegionContain };

const char* to_string(QueryKind k);

/// Structured spatial query: kind, reference geometries, target-category
/// selector, and the numeric buffer/radius parameter.
struct SpatialQuery {
  QueryKind kind = QueryKind::PointRadius;
  std::vector<geo::Geometry> references;
  std::string target_category;      // empty = no category restriction
  std::optional<double> eps_km;     // present for PointRadius/RouteBuffer
  std::string raw_question;

  /// Throws ValidationError unless the kind's shape invariants hold.
  void validate() const;
};

/// Textual split of a question into its spatial and semantic requirements.
struct QueryIntent {
  std::string spatial_requirement;   // may be empty, never missing
  std::string semantic_requirement;
  std::string target_category;
};

struct ParsedQuery {
  SpatialQuery query;
  QueryIntent intent;
};

/// Execution plan against the spatial index.
struct CandidateQuery {
  enum class Mode { WithinDistance, Contained };
  Mode mode = Mode::WithinDistance;
  geo::Geometry reference = geo::Geometry::point(0, 0);
  double eps_km = 0.0;
  std::optional<std::string> category;
};

/// Radius/buffer length in km for the phrase cues of the question, with
/// per-kind defaults (PointRadius 1 km, RouteBuffer 2 km).
double estimate_epsilon(const std::string& question, QueryKind kind);

/// Target category from question keywords: restaurant beats hotel beats
/// attraction; anything else is "amenity".
std::string categorize(const std::string& question);

/// Sentence-level split of the question into spatial/semantic requirements
/// plus the target category.
QueryIntent split_intent(const std::string& question);

/// Deterministic rule-based parser. Kind selection: exactly two points with a
/// route cue -> RouteBuffer; a gazetteer region mention -> RegionContain;
/// otherwise PointRadius over the resolved points.
/// Throws UnresolvedReference when no reference geometry can be formed.
ParsedQuery parse_rule_based(const std::string& question,
                             const std::vector<geo::Coord>& resolved_points,
                             const Gazetteer& gazetteer);

using PoiLookup = std::function<std::optional<geo::Geometry>(const std::string&)>;

/// Resolve a name or literal coordinate token to a geometry. Lookup order:
/// corpus POI by name, gazetteer region, literal "lon,lat" pair (a temporary
/// point, never persisted). Throws NotFoundError when all fail.
geo::Geometry resolve_geometry(const std::string& name_or_coords, const Gazetteer& gazetteer,
                               const PoiLookup& poi_lookup);

/// Translate a SpatialQuery into an index query plan.
CandidateQuery to_candidate_query(const SpatialQuery& sq);

/// Parse one expression of the textual query DSL:
///   point(lon,lat ; ...) radius <n>km|m [category <tag>]
///   route(lon,lat ; lon,lat) buffer <n>m|km [category <tag>]
///   region("<name>") [category <tag>]
/// Throws ParseError with line/column on malformed input; NotFoundError for
/// an unknown region name.
ParsedQuery parse_dsl(const std::string& expression, const Gazetteer& gazetteer);

}  // namespace georank
