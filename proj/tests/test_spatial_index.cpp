#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "georank/spatial_index.hpp"
#include "oracles.hpp"

using namespace georank;
using geo::Coord;
using geo::Geometry;

namespace {

std::vector<std::string> linear_scan_within(const std::vector<IndexEntry>& entries,
                                            const Geometry& ref, double eps,
                                            const std::optional<std::string>& category) {
  std::vector<std::string> out;
  for (const auto& e : entries) {
    if (category && !(e.category == *category ||
                      (*category == "restaurant" && e.category == "cafe")))
      continue;
    if (geo::within_buffer(e.geometry, ref, eps)) out.push_back(e.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> linear_scan_contained(const std::vector<IndexEntry>& entries,
                                               const Geometry& region,
                                               const std::optional<std::string>& category) {
  std::vector<std::string> out;
  for (const auto& e : entries) {
    if (category && !(e.category == *category ||
                      (*category == "restaurant" && e.category == "cafe")))
      continue;
    if (geo::contains(region, e.geometry)) out.push_back(e.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<IndexEntry> random_point_entries(std::mt19937_64& rng, int n, Coord center,
                                             double spread) {
  std::vector<IndexEntry> entries;
  static const char* cats[] = {"restaurant", "hotel", "attraction", "cafe"};
  for (int i = 0; i < n; ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "p%05d", i);
    entries.push_back(IndexEntry{id,
                                 Geometry(geo::Point{oracles::random_coord(rng, center, spread)}),
                                 cats[static_cast<size_t>(i) % 4]});
  }
  return entries;
}

}  // namespace

TEST_CASE("empty index answers nothing") {
  SpatialIndex idx = SpatialIndex::build({});
  CHECK(idx.empty());
  CHECK(idx.query_within_distance(Geometry::point(0, 0), 100.0).empty());
  CHECK(idx.query_contained(
               Geometry::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}, {-1, -1}}))
            .empty());
}

TEST_CASE("single entry round trip") {
  SpatialIndex idx =
      SpatialIndex::build({IndexEntry{"only", Geometry::point(10, 45), "restaurant"}});
  auto got = idx.query_within_distance(Geometry::point(10.001, 45.0), 1.0);
  CHECK(got == std::vector<std::string>{"only"});
  CHECK(idx.query_within_distance(Geometry::point(11, 45), 1.0).empty());
}

TEST_CASE("duplicate id rejected") {
  std::vector<IndexEntry> entries{{"a", Geometry::point(0, 0), "cafe"},
                                  {"a", Geometry::point(1, 1), "cafe"}};
  CHECK_THROWS_AS(SpatialIndex::build(std::move(entries)), ValidationError);
}

TEST_CASE("eps 0 over disjoint points is empty") {
  std::mt19937_64 rng(3);
  auto entries = random_point_entries(rng, 50, {10, 45}, 0.2);
  SpatialIndex idx = SpatialIndex::build(entries);
  CHECK(idx.query_within_distance(Geometry::point(10.5, 45.5), 0.0).empty());
}

TEST_CASE("region query with eps 0 equals intersection semantics") {
  std::mt19937_64 rng(5);
  auto entries = random_point_entries(rng, 400, {10, 45}, 0.1);
  SpatialIndex idx = SpatialIndex::build(entries);
  Geometry region = oracles::random_polygon(rng, {10, 45}, 0.06);
  auto via_distance = idx.query_within_distance(region, 0.0);
  auto expected = linear_scan_within(entries, region, 0.0, std::nullopt);
  CHECK(via_distance == expected);
  // For point targets, containment and zero-distance agree.
  CHECK(idx.query_contained(region) == linear_scan_contained(entries, region, std::nullopt));
  CHECK(idx.query_contained(region) == via_distance);
}

TEST_CASE("1000 random points equal linear scan over 100 random queries") {
  std::mt19937_64 rng(9);
  auto entries = random_point_entries(rng, 1000, {10, 45}, 0.15);
  SpatialIndex idx = SpatialIndex::build(entries);
  std::uniform_real_distribution<double> eps_d(0.1, 8.0);
  for (int i = 0; i < 100; ++i) {
    Geometry ref = oracles::random_geometry(rng, {10, 45}, 0.1);
    double eps = eps_d(rng);
    std::optional<std::string> cat;
    if (i % 3 == 1) cat = "restaurant";
    if (i % 3 == 2) cat = "hotel";
    CHECK(idx.query_within_distance(ref, eps, cat) == linear_scan_within(entries, ref, eps, cat));
  }
}

TEST_CASE("route buffer over a planted grid city") {
  // Grid of points every 0.01 deg; plant a horizontal route and check the
  // 2 km buffer membership against the oracle.
  std::vector<IndexEntry> entries;
  int n = 0;
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j) {
      char id[16];
      std::snprintf(id, sizeof(id), "g%04d", n++);
      entries.push_back(
          IndexEntry{id, Geometry::point(10.0 + i * 0.01, 45.0 + j * 0.01), "restaurant"});
    }
  SpatialIndex idx = SpatialIndex::build(entries);
  Geometry route = Geometry::polyline({{10.05, 45.15}, {10.25, 45.15}});
  auto got = idx.query_within_distance(route, 2.0);
  auto expected = linear_scan_within(entries, route, 2.0, std::nullopt);
  CHECK(got == expected);
  CHECK(!got.empty());
  for (const auto& id : got) {
    auto it = std::find_if(entries.begin(), entries.end(),
                           [&](const IndexEntry& e) { return e.id == id; });
    CHECK(geo::distance_km(it->geometry, route) <= 2.0);
  }
}

TEST_CASE("containment query requires an areal region") {
  SpatialIndex idx = SpatialIndex::build({{"a", Geometry::point(0, 0), "cafe"}});
  CHECK_THROWS_AS(idx.query_contained(Geometry::point(0, 0)), ValidationError);
}

TEST_CASE("oracle equivalence on mixed-size random corpora") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    std::uniform_int_distribution<int> size_d(50, 800);
    auto entries = random_point_entries(rng, size_d(rng), {12, 40}, 0.2);
    SpatialIndex idx = SpatialIndex::build(entries);
    for (int q = 0; q < 10; ++q) {
      Geometry region = oracles::random_polygon(rng, {12, 40}, 0.08, q % 2 == 1);
      CHECK(idx.query_contained(region) == linear_scan_contained(entries, region, std::nullopt));
      std::uniform_real_distribution<double> eps_d(0.0, 5.0);
      double eps = eps_d(rng);
      CHECK(idx.query_within_distance(region, eps) ==
            linear_scan_within(entries, region, eps, std::nullopt));
    }
  }
}
