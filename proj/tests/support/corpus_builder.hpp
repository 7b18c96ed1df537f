#pragma once

// Builds a loaded Corpus from in-memory specs by writing GeoJSON fixtures to a
// scratch directory and running the real ingest.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "georank/corpus.hpp"

namespace testutil {

struct PoiSpec {
  std::string id;
  std::string name;
  std::string category;
  double lon;
  double lat;
  std::vector<std::string> reviews;
};

struct RegionSpec {
  std::string name;
  std::vector<std::string> aliases;
  std::vector<std::array<double, 2>> ring;  // closed automatically
};

inline std::filesystem::path write_fixture_files(const std::filesystem::path& dir,
                                                 const std::vector<PoiSpec>& pois,
                                                 const std::vector<RegionSpec>& regions) {
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  nlohmann::json features = nlohmann::json::array();
  for (const auto& p : pois) {
    features.push_back(
        {{"type", "Feature"},
         {"geometry", {{"type", "Point"}, {"coordinates", {p.lon, p.lat}}}},
         {"properties",
          {{"id", p.id}, {"name", p.name}, {"category", p.category}, {"reviews", p.reviews}}}});
  }
  std::ofstream(dir / "pois.geojson")
      << nlohmann::json{{"type", "FeatureCollection"}, {"features", features}}.dump(1);

  nlohmann::json rfeatures = nlohmann::json::array();
  for (const auto& r : regions) {
    nlohmann::json ring = nlohmann::json::array();
    for (const auto& c : r.ring) ring.push_back({c[0], c[1]});
    ring.push_back({r.ring.front()[0], r.ring.front()[1]});
    rfeatures.push_back(
        {{"type", "Feature"},
         {"geometry", {{"type", "Polygon"}, {"coordinates", nlohmann::json::array({ring})}}},
         {"properties", {{"name", r.name}, {"aliases", r.aliases}}}});
  }
  std::ofstream(dir / "regions.geojson")
      << nlohmann::json{{"type", "FeatureCollection"}, {"features", rfeatures}}.dump(1);
  return dir;
}

inline georank::Corpus build_corpus(const std::filesystem::path& scratch,
                                    const std::vector<PoiSpec>& pois,
                                    const std::vector<RegionSpec>& regions = {}, int dim = 256) {
  write_fixture_files(scratch, pois, regions);
  georank::IngestOptions opt;
  opt.poi_path = scratch / "pois.geojson";
  opt.gazetteer_path = scratch / "regions.geojson";
  opt.store_dir = scratch / "store";
  georank::HashEmbedder embedder(dim);
  georank::text::LexiconMasker masker;
  georank::ingest(opt, embedder, masker);
  return georank::Corpus::load(opt.store_dir);
}

}  // namespace testutil
