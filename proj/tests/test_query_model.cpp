#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "georank/query.hpp"

using namespace georank;
using geo::Coord;
using geo::Geometry;

namespace {

Gazetteer test_gazetteer() {
  std::vector<GazetteerEntry> entries;
  entries.push_back(GazetteerEntry{
      "manhattan",
      {"new york county"},
      Geometry::polygon({{-74.02, 40.70}, {-73.93, 40.70}, {-73.93, 40.88}, {-74.02, 40.88},
                         {-74.02, 40.70}})});
  entries.push_back(GazetteerEntry{
      "old town",
      {},
      Geometry::polygon({{10.0, 45.0}, {10.1, 45.0}, {10.1, 45.1}, {10.0, 45.1}, {10.0, 45.0}})});
  return Gazetteer(std::move(entries));
}

const std::vector<Coord> kOnePoint = {{-73.9855, 40.7580}};
const std::vector<Coord> kTwoPoints = {{-73.9855, 40.7580}, {-73.9772, 40.7527}};
const std::vector<Coord> kThreePoints = {{-73.98, 40.75}, {-73.97, 40.75}, {-73.96, 40.76}};

}  // namespace

TEST_CASE("parser: spec examples") {
  Gazetteer gaz = test_gazetteer();

  auto near = parse_rule_based("restaurants near Times Square", kOnePoint, gaz);
  CHECK(near.query.kind == QueryKind::PointRadius);
  CHECK(near.query.eps_km == doctest::Approx(1.0));
  CHECK(near.query.references.size() == 1);
  CHECK(near.intent.target_category == "restaurant");

  auto route = parse_rule_based("walk from A to B and find a cafe along the way", kTwoPoints, gaz);
  CHECK(route.query.kind == QueryKind::RouteBuffer);
  CHECK(route.query.eps_km == doctest::Approx(1.0));  // 1000 m walking buffer
  CHECK(route.query.references.size() == 2);

  auto region = parse_rule_based("good restaurant in Manhattan", {}, gaz);
  CHECK(region.query.kind == QueryKind::RegionContain);
  CHECK(region.query.references.size() == 1);
  CHECK(region.query.references.front().areal());
  CHECK_FALSE(region.query.eps_km.has_value());
}

TEST_CASE("parser: full decision table") {
  Gazetteer gaz = test_gazetteer();
  // question variants: region mention x route lexicon
  auto question = [](bool region, bool route) {
    std::string q = "find a restaurant";
    if (route) q += " on the route from the station to the pier";
    if (region) q += " in old town";
    return q;
  };
  struct Case {
    int points;
    bool region;
    bool route;
    QueryKind want;
  };
  const Case table[] = {
      {1, false, false, QueryKind::PointRadius},
      {1, false, true, QueryKind::PointRadius},
      {1, true, false, QueryKind::RegionContain},
      {1, true, true, QueryKind::RegionContain},
      {2, false, false, QueryKind::PointRadius},
      {2, false, true, QueryKind::RouteBuffer},
      {2, true, false, QueryKind::RegionContain},
      {2, true, true, QueryKind::RouteBuffer},  // route wins with exactly two points
      {3, false, false, QueryKind::PointRadius},
      {3, false, true, QueryKind::PointRadius},
      {3, true, false, QueryKind::RegionContain},
      {3, true, true, QueryKind::RegionContain},
  };
  for (const auto& c : table) {
    const auto& pts = c.points == 1 ? kOnePoint : (c.points == 2 ? kTwoPoints : kThreePoints);
    auto parsed = parse_rule_based(question(c.region, c.route), pts, gaz);
    CAPTURE(c.points);
    CAPTURE(c.region);
    CAPTURE(c.route);
    CHECK(parsed.query.kind == c.want);
  }
}

TEST_CASE("parser: determinism and unresolved reference") {
  Gazetteer gaz = test_gazetteer();
  auto a = parse_rule_based("cafe near the library", kOnePoint, gaz);
  auto b = parse_rule_based("cafe near the library", kOnePoint, gaz);
  CHECK(a.query.kind == b.query.kind);
  CHECK(a.query.eps_km == b.query.eps_km);
  CHECK(a.intent.spatial_requirement == b.intent.spatial_requirement);
  CHECK(a.intent.semantic_requirement == b.intent.semantic_requirement);
  CHECK_THROWS_AS(parse_rule_based("anything good around here", {}, gaz), UnresolvedReference);
  CHECK_THROWS_AS(parse_rule_based("", kOnePoint, gaz), ValidationError);
}

TEST_CASE("epsilon estimation: prompt defaults") {
  CHECK(estimate_epsilon("somewhere nearby please", QueryKind::PointRadius) == 1.0);
  CHECK(estimate_epsilon("close to the hotel", QueryKind::PointRadius) == 1.0);
  CHECK(estimate_epsilon("within walking distance", QueryKind::PointRadius) == 2.0);
  CHECK(estimate_epsilon("not too far from the museum", QueryKind::PointRadius) == 3.0);
  CHECK(estimate_epsilon("a place for lunch", QueryKind::PointRadius) == 1.0);  // default
  CHECK(estimate_epsilon("within an 8-10 block radius", QueryKind::PointRadius) == 1.5);

  CHECK(estimate_epsilon("walking route to the park", QueryKind::RouteBuffer) == 1.0);  // 1000 m
  CHECK(estimate_epsilon("driving between the two stops", QueryKind::RouteBuffer) == 2.0);
  CHECK(estimate_epsilon("a scenic route along the river", QueryKind::RouteBuffer) == 3.0);
  CHECK(estimate_epsilon("from the hotel to the stadium", QueryKind::RouteBuffer) == 2.0);
}

TEST_CASE("epsilon is total and positive") {
  const char* questions[] = {"", "x", "just food", "go!", "a b c d e f"};
  for (const char* q : questions) {
    CHECK(estimate_epsilon(q, QueryKind::PointRadius) > 0.0);
    CHECK(estimate_epsilon(q, QueryKind::RouteBuffer) > 0.0);
  }
}

TEST_CASE("intent split uses the spatial cue lexicon") {
  auto intent = split_intent(
      "We are staying near Times Square. I would like Italian cuisine for my birthday.");
  CHECK(intent.spatial_requirement.find("near Times Square") != std::string::npos);
  CHECK(intent.semantic_requirement.find("Italian cuisine") != std::string::npos);
  CHECK(intent.target_category == "restaurant");
  // Both texts always present, possibly empty.
  auto empty_side = split_intent("Great food required");
  CHECK(empty_side.spatial_requirement.empty());
  CHECK(!empty_side.semantic_requirement.empty());
}

TEST_CASE("categorize follows the R/H/A precedence rules") {
  CHECK(categorize("staying at a hotel but where should we eat dinner?") == "restaurant");
  CHECK(categorize("need a room for two nights, hotel suggestions?") == "hotel");
  CHECK(categorize("which museum should we visit?") == "attraction");
  CHECK(categorize("what is around the corner?") == "amenity");
}

TEST_CASE("resolve_geometry lookup order") {
  Gazetteer gaz = test_gazetteer();
  Geometry poi_point = Geometry::point(-73.99, 40.75);
  PoiLookup lookup = [&](const std::string& name) -> std::optional<Geometry> {
    if (name == "Joe's Diner") return poi_point;
    return std::nullopt;
  };
  CHECK(resolve_geometry("Joe's Diner", gaz, lookup) == poi_point);
  CHECK(resolve_geometry("Manhattan", gaz, lookup).areal());
  Geometry lit = resolve_geometry("(-73.99, 40.75)", gaz, lookup);
  CHECK(lit == poi_point);
  CHECK_THROWS_AS(resolve_geometry("atlantis", gaz, lookup), NotFoundError);
}

TEST_CASE("to_candidate_query plans") {
  Gazetteer gaz = test_gazetteer();

  SpatialQuery pr;
  pr.kind = QueryKind::PointRadius;
  pr.references = {Geometry::point(10, 45)};
  pr.eps_km = 1.0;
  auto plan = to_candidate_query(pr);
  CHECK(plan.mode == CandidateQuery::Mode::WithinDistance);
  CHECK(plan.eps_km == 1.0);
  CHECK(plan.reference.kind() == geo::GeometryKind::Point);

  SpatialQuery rb;
  rb.kind = QueryKind::RouteBuffer;
  rb.references = {Geometry::point(10, 45), Geometry::point(10.01, 45)};
  rb.eps_km = 0.5;  // 500 m buffer
  auto route_plan = to_candidate_query(rb);
  CHECK(route_plan.mode == CandidateQuery::Mode::WithinDistance);
  CHECK(route_plan.reference.kind() == geo::GeometryKind::Polyline);
  CHECK(route_plan.eps_km == 0.5);

  SpatialQuery rc;
  rc.kind = QueryKind::RegionContain;
  rc.references = {*gaz.lookup("manhattan")};
  auto region_plan = to_candidate_query(rc);
  CHECK(region_plan.mode == CandidateQuery::Mode::Contained);
  CHECK(region_plan.reference.areal());

  // Invariants enforced.
  SpatialQuery bad = pr;
  bad.eps_km = std::nullopt;
  CHECK_THROWS_AS(to_candidate_query(bad), ValidationError);
  SpatialQuery bad2 = rb;
  bad2.references.pop_back();
  CHECK_THROWS_AS(to_candidate_query(bad2), ValidationError);
}

TEST_CASE("DSL: the three expression forms") {
  Gazetteer gaz = test_gazetteer();

  auto p = parse_dsl("point(10.0,45.0) radius 1.0km category restaurant", gaz);
  CHECK(p.query.kind == QueryKind::PointRadius);
  CHECK(*p.query.eps_km == doctest::Approx(1.0));
  CHECK(p.query.target_category == "restaurant");

  auto r = parse_dsl("route(10.0,45.0 ; 10.02,45.0) buffer 1000m category cafe", gaz);
  CHECK(r.query.kind == QueryKind::RouteBuffer);
  CHECK(*r.query.eps_km == doctest::Approx(1.0));
  CHECK(r.query.target_category == "cafe");

  auto g = parse_dsl("region(\"manhattan\") category restaurant", gaz);
  CHECK(g.query.kind == QueryKind::RegionContain);
  CHECK(g.query.references.front().areal());

  auto multi = parse_dsl("point(10,45 ; 10.1,45.1) radius 500m", gaz);
  CHECK(multi.query.references.size() == 2);
  CHECK(*multi.query.eps_km == doctest::Approx(0.5));
}

TEST_CASE("DSL: parse errors carry line and column") {
  Gazetteer gaz = test_gazetteer();
  try {
    parse_dsl("point(10.0 45.0) radius 1km", gaz);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() > 1);
  }
  try {
    parse_dsl("point(10,45)\nradius 1parsec", gaz);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_dsl("circle(10,45) radius 1km", gaz), ParseError);
  CHECK_THROWS_AS(parse_dsl("region(\"nowhere\")", gaz), NotFoundError);
  CHECK_THROWS_AS(parse_dsl("point(10,45) radius 1km extra", gaz), ParseError);
  CHECK_THROWS_AS(parse_dsl("point(10,45) radius -1km", gaz), ParseError);
}
