#include "synthetic_city.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include <json.hpp>

namespace citygen {

namespace {

using nlohmann::json;

constexpr double kKmPerDeg = 6371.0088 * 3.14159265358979323846 / 180.0;

struct Poi {
  std::string id;
  std::string name;
  std::string category;
  double lon, lat;
  std::vector<std::string> reviews;
};

double dlat(double km) { return km / kKmPerDeg; }

std::string syllable_word(std::mt19937_64& rng) {
  static const char* cons[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"};
  static const char* vow[] = {"a", "e", "i", "o", "u"};
  std::uniform_int_distribution<size_t> c(0, std::size(cons) - 1);
  std::uniform_int_distribution<size_t> v(0, std::size(vow) - 1);
  std::string w;
  for (int i = 0; i < 3; ++i) {
    w += cons[c(rng)];
    w += vow[v(rng)];
  }
  return w;
}

double km_between(double lon1, double lat1, double lon2, double lat2, double cos_lat) {
  double dx = (lon2 - lon1) * kKmPerDeg * cos_lat;
  double dy = (lat2 - lat1) * kKmPerDeg;
  return std::hypot(dx, dy);
}

}  // namespace

CityFiles generate_city(const std::filesystem::path& dir, const CityOptions& opt) {
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);

  std::mt19937_64 rng(opt.seed);
  double cos_lat = std::cos(opt.center_lat * 3.14159265358979323846 / 180.0);
  double dx_deg = opt.spacing_km / (kKmPerDeg * cos_lat);
  double dy_deg = opt.spacing_km / kKmPerDeg;

  static const char* kAdjectives[] = {"Blue",  "Golden", "Rusty", "Silver", "Green",
                                      "Amber", "Velvet", "Iron",  "Copper", "Ivory"};
  static const char* kNouns[] = {"Fern",  "Anchor", "Lantern", "Harbor", "Garden",
                                 "Acorn", "Beacon", "Willow",  "Summit", "Meadow"};
  static const char* kKindNames[] = {"Kitchen", "House", "Rooms", "Hall", "Stand"};
  static const char* kGenericReviews[] = {
      "Friendly staff and fair prices",
      "Cozy atmosphere with quick service",
      "A classic neighborhood spot",
      "Portions are generous and the menu is short",
      "Gets busy at peak hours but the line moves",
      "Simple decor and reliable quality",
  };
  static const char* kCategories[] = {"restaurant", "restaurant", "cafe",
                                      "restaurant", "hotel",      "attraction"};

  int grid = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(opt.poi_count))));
  int bait_budget = opt.qa_count;
  int city_pois = opt.poi_count - bait_budget;

  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  std::uniform_int_distribution<size_t> adj(0, std::size(kAdjectives) - 1);
  std::uniform_int_distribution<size_t> noun(0, std::size(kNouns) - 1);
  std::uniform_int_distribution<size_t> kindn(0, std::size(kKindNames) - 1);
  std::uniform_int_distribution<size_t> grev(0, std::size(kGenericReviews) - 1);

  std::vector<Poi> pois;
  pois.reserve(static_cast<size_t>(opt.poi_count));
  for (int i = 0; i < city_pois; ++i) {
    int gx = i % grid;
    int gy = i / grid;
    Poi p;
    char idbuf[16];
    std::snprintf(idbuf, sizeof(idbuf), "poi-%04d", i);
    p.id = idbuf;
    p.category = kCategories[static_cast<size_t>(i) % std::size(kCategories)];
    p.name = std::string(kAdjectives[adj(rng)]) + " " + kNouns[noun(rng)] + " " +
             kKindNames[kindn(rng)] + " " + std::to_string(i);
    p.lon = opt.center_lon + (gx - grid / 2) * dx_deg + jitter(rng) * dx_deg * 0.3;
    p.lat = opt.center_lat + (gy - grid / 2) * dy_deg + jitter(rng) * dy_deg * 0.3;
    p.reviews.push_back("Located near the corner of " + std::to_string(gx) + "th Street and " +
                        std::to_string(gy) + "th Avenue");
    p.reviews.push_back(kGenericReviews[grev(rng)]);
    pois.push_back(std::move(p));
  }

  // District polygons: a 3x2 partition of the grid, pentagon-shaped (one cut
  // corner) so containment exercises non-rectangular rings.
  struct District {
    std::string name;
    double min_lon, min_lat, max_lon, max_lat;
  };
  static const char* kDistrictNames[] = {"old town",  "north loop", "river west",
                                         "south gate", "mill yard", "east field"};
  double west = opt.center_lon - (grid / 2) * dx_deg;
  double south = opt.center_lat - (grid / 2) * dy_deg;
  double span_lon = grid * dx_deg;
  double span_lat = grid * dy_deg;
  std::vector<District> districts;
  for (int i = 0; i < 6; ++i) {
    int col = i % 3, row = i / 3;
    districts.push_back(District{kDistrictNames[i], west + col * span_lon / 3,
                                 south + row * span_lat / 2, west + (col + 1) * span_lon / 3,
                                 south + (row + 1) * span_lat / 2});
  }

  auto district_ring = [](const District& d) {
    double cut = (d.max_lon - d.min_lon) * 0.15;
    return json::array({json::array({d.min_lon + cut, d.min_lat}),
                        json::array({d.max_lon, d.min_lat}),
                        json::array({d.max_lon, d.max_lat}),
                        json::array({d.min_lon, d.max_lat}),
                        json::array({d.min_lon, d.min_lat + cut}),
                        json::array({d.min_lon + cut, d.min_lat})});
  };
  auto in_district = [](const District& d, const Poi& p) {
    double cut_lon = (d.max_lon - d.min_lon) * 0.15;
    if (p.lon <= d.min_lon || p.lon >= d.max_lon || p.lat <= d.min_lat || p.lat >= d.max_lat)
      return false;
    // Stay out of the cut corner.
    return (p.lon - d.min_lon) / cut_lon + (p.lat - d.min_lat) / cut_lon > 1.1;
  };

  // QA pairs. The keyword bigram <dish> <style> is unique per pair and shares
  // no tokens with the question template, so a POI planted for one query never
  // scores on another. Relevant POIs are used at most once and keep only their
  // spatial sentence plus the injected keyword review.
  std::set<std::string> used_words;
  std::set<std::string> used_relevant;
  json qa_lines = json::array();
  std::uniform_int_distribution<size_t> pick(0, pois.size() - 1);

  auto is_food = [](const Poi& p) { return p.category == "restaurant" || p.category == "cafe"; };

  for (int q = 0; q < opt.qa_count; ++q) {
    std::string dish, style;
    do {
      dish = syllable_word(rng);
    } while (!used_words.insert(dish).second);
    do {
      style = syllable_word(rng);
    } while (!used_words.insert(style).second);

    int kind = q % 3;
    std::string question;
    Poi* relevant = nullptr;
    std::string semantic_sentence = "We want " + dish + " " + style + " for dinner.";

    if (kind == 0) {
      // PointRadius: reference placed on the segment between the relevant POI
      // and a same-category distractor, closer to the distractor.
      Poi* distractor = nullptr;
      while (!relevant) {
        Poi& r = pois[pick(rng)];
        if (!is_food(r) || used_relevant.count(r.id)) continue;
        for (auto& d : pois) {
          if (&d == &r || !is_food(d)) continue;
          double dist = km_between(r.lon, r.lat, d.lon, d.lat, cos_lat);
          if (dist > 0.3 && dist < 0.6) {
            relevant = &r;
            distractor = &d;
            break;
          }
        }
      }
      double ref_lon = relevant->lon + 0.6 * (distractor->lon - relevant->lon);
      double ref_lat = relevant->lat + 0.6 * (distractor->lat - relevant->lat);
      char coords[64];
      std::snprintf(coords, sizeof(coords), "(%.6f, %.6f)", ref_lon, ref_lat);
      question = "Find a restaurant near " + std::string(coords) + ". " + semantic_sentence;
    } else if (kind == 1) {
      // RouteBuffer: the segment passes through a distractor; the relevant POI
      // sits within the 1 km walking buffer.
      Poi* distractor = nullptr;
      while (!relevant) {
        Poi& d = pois[pick(rng)];
        if (!is_food(d)) continue;
        for (auto& r : pois) {
          if (&r == &d || !is_food(r) || used_relevant.count(r.id)) continue;
          double dist = km_between(r.lon, r.lat, d.lon, d.lat, cos_lat);
          if (dist > 0.1 && dist < 0.7) {
            relevant = &r;
            distractor = &d;
            break;
          }
        }
      }
      double a_lon = distractor->lon - 0.6 / (kKmPerDeg * cos_lat);
      double b_lon = distractor->lon + 0.6 / (kKmPerDeg * cos_lat);
      char a[64], b[64];
      std::snprintf(a, sizeof(a), "(%.6f, %.6f)", a_lon, distractor->lat);
      std::snprintf(b, sizeof(b), "(%.6f, %.6f)", b_lon, distractor->lat);
      question =
          "We will walk from " + std::string(a) + " to " + std::string(b) + ". " + semantic_sentence;
    } else {
      // RegionContain: mention a district; the relevant POI must not be the
      // lexicographically first food POI inside (distance ties break by id,
      // so the distance-only ranking picks that one instead).
      const District* dist_ptr = nullptr;
      while (!relevant) {
        const District& d = districts[static_cast<size_t>(rng() % districts.size())];
        std::vector<Poi*> inside;
        for (auto& p : pois)
          if (is_food(p) && in_district(d, p)) inside.push_back(&p);
        if (inside.size() < 3) continue;
        std::sort(inside.begin(), inside.end(), [](Poi* a, Poi* b) { return a->id < b->id; });
        size_t idx = 1 + static_cast<size_t>(rng() % (inside.size() - 1));
        if (used_relevant.count(inside[idx]->id)) continue;
        relevant = inside[idx];
        dist_ptr = &d;
      }
      question = "Looking for a restaurant in " + dist_ptr->name + ". " + semantic_sentence;
    }

    used_relevant.insert(relevant->id);
    std::string relevant_id = relevant->id;
    relevant->reviews = {relevant->reviews.front(), dish + " " + style + " house special"};

    // Bait: strong text match, far outside every spatial predicate.
    Poi bait;
    char idbuf[16];
    std::snprintf(idbuf, sizeof(idbuf), "poi-%04d", city_pois + q);
    bait.id = idbuf;
    bait.category = "restaurant";
    bait.name = "Depot " + std::to_string(city_pois + q);
    bait.lon = opt.center_lon + (20.0 + (q % 10)) / (kKmPerDeg * cos_lat);
    bait.lat = opt.center_lat + dlat(static_cast<double>(q % 7));
    bait.reviews.push_back(question);
    pois.push_back(std::move(bait));  // may reallocate; relevant_id captured above

    qa_lines.push_back(json{{"question", question}, {"relevant_ids", json::array({relevant_id})}});
  }

  CityFiles files;
  files.dir = dir;
  files.poi = dir / "pois.geojson";
  files.gazetteer = dir / "gazetteer.geojson";
  files.qa = dir / "qa.jsonl";

  json features = json::array();
  for (const auto& p : pois) {
    features.push_back(json{
        {"type", "Feature"},
        {"geometry", {{"type", "Point"}, {"coordinates", json::array({p.lon, p.lat})}}},
        {"properties",
         {{"id", p.id}, {"name", p.name}, {"category", p.category}, {"reviews", p.reviews}}}});
  }
  std::ofstream(files.poi) << json{{"type", "FeatureCollection"}, {"features", features}}.dump(1)
                           << "\n";

  json gaz_features = json::array();
  for (const auto& d : districts) {
    gaz_features.push_back(
        json{{"type", "Feature"},
             {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({district_ring(d)})}}},
             {"properties", {{"name", d.name}, {"aliases", json::array()}}}});
  }
  std::ofstream(files.gazetteer)
      << json{{"type", "FeatureCollection"}, {"features", gaz_features}}.dump(1) << "\n";

  std::ofstream qa_out(files.qa);
  for (const auto& line : qa_lines) qa_out << line.dump() << "\n";

  return files;
}

}  // namespace citygen
