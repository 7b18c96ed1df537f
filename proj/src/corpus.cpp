#include "georank/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "georank/geojson.hpp"
#include "georank/hash.hpp"

namespace georank {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw StoreError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw StoreError("cannot write " + p.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string file_checksum(const std::filesystem::path& p) { return to_hex(fnv1a64(read_file(p))); }

json parse_json_file(const std::filesystem::path& p) {
  auto j = json::parse(read_file(p), nullptr, false);
  if (j.is_discarded()) throw ValidationError("malformed JSON in " + p.string());
  return j;
}

struct LockGuard {
  std::filesystem::path lock;
  explicit LockGuard(const std::filesystem::path& dir) : lock(dir / ".lock") {
    std::FILE* f = std::fopen(lock.string().c_str(), "wx");
    if (!f) throw StoreError("store is locked by another ingest: " + lock.string());
    std::fclose(f);
  }
  ~LockGuard() {
    std::error_code ec;
    std::filesystem::remove(lock, ec);
  }
};

std::string document_text(const std::string& name, const std::string& category,
                          const std::vector<std::string>& reviews) {
  std::string doc;
  for (const auto& r : reviews) {
    if (!doc.empty()) doc += ' ';
    doc += r;
  }
  if (doc.empty()) doc = name + ". " + category + ".";
  return doc;
}

std::string vec_bytes(const EmbeddingVector& v) {
  std::string out(v.size() * sizeof(float), '\0');
  std::memcpy(out.data(), v.data(), out.size());
  return out;
}

}  // namespace

IngestStats ingest(const IngestOptions& options, const Embedder& embedder,
                   const text::MaskingView& masker) {
  std::filesystem::create_directories(options.store_dir);
  LockGuard lock(options.store_dir);

  std::set<std::string> known(options.categories.begin(), options.categories.end());

  // POIs.
  json poi_doc = parse_json_file(options.poi_path);
  if (!poi_doc.contains("features") || !poi_doc["features"].is_array())
    throw ValidationError(options.poi_path.string() + ": expected a FeatureCollection");

  std::vector<PoiRecord> records;
  std::set<std::string> ids;
  size_t feature_index = 0;
  for (const auto& feature : poi_doc["features"]) {
    std::string locator =
        options.poi_path.filename().string() + " feature #" + std::to_string(feature_index++);
    try {
      if (!feature.contains("properties") || !feature["properties"].is_object())
        throw ValidationError("feature has no properties");
      const auto& props = feature["properties"];
      PoiRecord rec;
      rec.id = props.value("id", "");
      if (rec.id.empty()) throw ValidationError("missing property 'id'");
      if (!ids.insert(rec.id).second) throw ValidationError("duplicate id '" + rec.id + "'");
      rec.name = props.value("name", rec.id);
      rec.category = lowercase(props.value("category", ""));
      if (!known.count(rec.category))
        throw ValidationError("unknown category '" + rec.category + "'");
      if (!feature.contains("geometry"))
        throw ValidationError("feature has no geometry");
      rec.geometry = geojson::parse_geometry(feature["geometry"]);
      if (props.contains("reviews")) {
        if (!props["reviews"].is_array()) throw ValidationError("'reviews' must be an array");
        for (const auto& r : props["reviews"]) rec.reviews.push_back(r.get<std::string>());
      }
      std::string doc = document_text(rec.name, rec.category, rec.reviews);
      rec.spatial_summary = masker.spatial_view(doc);
      rec.semantic_summary = masker.semantic_view(doc);
      rec.spatial_vec = embedder.embed(rec.spatial_summary);
      rec.semantic_vec = embedder.embed(rec.semantic_summary);
      records.push_back(std::move(rec));
    } catch (const Error& e) {
      throw ValidationError(locator + ": " + e.what());
    }
  }
  std::sort(records.begin(), records.end(),
            [](const PoiRecord& a, const PoiRecord& b) { return a.id < b.id; });

  // Gazetteer.
  std::vector<GazetteerEntry> regions;
  if (!options.gazetteer_path.empty()) {
    json gaz_doc = parse_json_file(options.gazetteer_path);
    if (!gaz_doc.contains("features") || !gaz_doc["features"].is_array())
      throw ValidationError(options.gazetteer_path.string() + ": expected a FeatureCollection");
    size_t gi = 0;
    for (const auto& feature : gaz_doc["features"]) {
      std::string locator =
          options.gazetteer_path.filename().string() + " feature #" + std::to_string(gi++);
      try {
        const auto& props = feature.at("properties");
        GazetteerEntry entry{lowercase(props.value("name", "")), {},
                             geojson::parse_geometry(feature.at("geometry"))};
        if (entry.name.empty()) throw ValidationError("missing property 'name'");
        if (props.contains("aliases"))
          for (const auto& a : props["aliases"]) entry.aliases.push_back(lowercase(a.get<std::string>()));
        regions.push_back(std::move(entry));
      } catch (const json::exception& e) {
        throw ValidationError(locator + ": " + e.what());
      } catch (const Error& e) {
        throw ValidationError(locator + ": " + e.what());
      }
    }
    std::sort(regions.begin(), regions.end(),
              [](const GazetteerEntry& a, const GazetteerEntry& b) { return a.name < b.name; });
    Gazetteer validate_only(regions);  // alias uniqueness, areal polygons
  }

  // Persist: records.json, vectors.bin, gazetteer.json, manifest.json.
  json records_json = json::array();
  std::string vectors;
  for (const auto& r : records) {
    records_json.push_back({{"id", r.id},
                            {"name", r.name},
                            {"category", r.category},
                            {"geometry", geojson::write_geometry(r.geometry)},
                            {"reviews", r.reviews},
                            {"spatial_summary", r.spatial_summary},
                            {"semantic_summary", r.semantic_summary}});
    vectors += vec_bytes(r.spatial_vec);
    vectors += vec_bytes(r.semantic_vec);
  }
  json gaz_json = json::array();
  for (const auto& g : regions)
    gaz_json.push_back({{"name", g.name},
                        {"aliases", g.aliases},
                        {"polygon", geojson::write_geometry(g.polygon)}});

  write_file(options.store_dir / "records.json", records_json.dump(2) + "\n");
  write_file(options.store_dir / "vectors.bin", vectors);
  write_file(options.store_dir / "gazetteer.json", gaz_json.dump(2) + "\n");

  json manifest = {
      {"format_version", kFormatVersion},
      {"embedder_id", embedder.id()},
      {"dimension", embedder.dim()},
      {"poi_count", records.size()},
      {"region_count", regions.size()},
      {"categories", options.categories},
      {"vector_layout", "float32 little-endian row-major; per record: spatial row, semantic row"},
      {"checksums",
       {{"records.json", file_checksum(options.store_dir / "records.json")},
        {"vectors.bin", file_checksum(options.store_dir / "vectors.bin")},
        {"gazetteer.json", file_checksum(options.store_dir / "gazetteer.json")}}}};
  write_file(options.store_dir / "manifest.json", manifest.dump(2) + "\n");

  IngestStats stats;
  stats.poi_count = records.size();
  stats.region_count = regions.size();
  stats.store_checksum = to_hex(fnv1a64(manifest["checksums"].dump()));
  return stats;
}

Corpus Corpus::load(const std::filesystem::path& store_dir) {
  auto manifest_path = store_dir / "manifest.json";
  if (!std::filesystem::exists(manifest_path))
    throw StoreError("no store at " + store_dir.string() + " (missing manifest.json)");
  json manifest = parse_json_file(manifest_path);

  int version = manifest.value("format_version", -1);
  if (version != kFormatVersion)
    throw StoreError("store format version " + std::to_string(version) + " is not supported (want " +
                     std::to_string(kFormatVersion) + ")");

  for (const auto& [file, expected] : manifest.at("checksums").items()) {
    std::string actual = file_checksum(store_dir / file);
    if (actual != expected.get<std::string>())
      throw StoreError("checksum mismatch for " + file + ": store is corrupt");
  }

  Corpus corpus;
  corpus.embedder_id_ = manifest.value("embedder_id", "");
  corpus.dim_ = manifest.value("dimension", 0);
  if (corpus.dim_ <= 0) throw StoreError("manifest has no valid embedding dimension");

  json records_json = parse_json_file(store_dir / "records.json");
  std::string vectors = read_file(store_dir / "vectors.bin");
  size_t row_bytes = static_cast<size_t>(corpus.dim_) * sizeof(float);
  if (vectors.size() != records_json.size() * 2 * row_bytes)
    throw StoreError("vectors.bin size does not match record count and dimension");

  size_t i = 0;
  for (const auto& rj : records_json) {
    PoiRecord rec;
    rec.id = rj.at("id").get<std::string>();
    rec.name = rj.at("name").get<std::string>();
    rec.category = rj.at("category").get<std::string>();
    rec.geometry = geojson::parse_geometry(rj.at("geometry"));
    rec.reviews = rj.at("reviews").get<std::vector<std::string>>();
    rec.spatial_summary = rj.at("spatial_summary").get<std::string>();
    rec.semantic_summary = rj.at("semantic_summary").get<std::string>();
    rec.spatial_vec.resize(static_cast<size_t>(corpus.dim_));
    rec.semantic_vec.resize(static_cast<size_t>(corpus.dim_));
    std::memcpy(rec.spatial_vec.data(), vectors.data() + 2 * i * row_bytes, row_bytes);
    std::memcpy(rec.semantic_vec.data(), vectors.data() + (2 * i + 1) * row_bytes, row_bytes);
    corpus.records_.push_back(std::move(rec));
    ++i;
  }
  for (size_t r = 0; r < corpus.records_.size(); ++r) {
    corpus.by_id_.emplace(corpus.records_[r].id, r);
    corpus.by_name_.emplace(lowercase(corpus.records_[r].name), r);
  }

  json gaz_json = parse_json_file(store_dir / "gazetteer.json");
  std::vector<GazetteerEntry> regions;
  for (const auto& gj : gaz_json)
    regions.push_back(GazetteerEntry{gj.at("name").get<std::string>(),
                                     gj.at("aliases").get<std::vector<std::string>>(),
                                     geojson::parse_geometry(gj.at("polygon"))});
  corpus.gazetteer_ = Gazetteer(std::move(regions));

  std::vector<IndexEntry> entries;
  entries.reserve(corpus.records_.size());
  for (const auto& r : corpus.records_)
    entries.push_back(IndexEntry{r.id, r.geometry, r.category});
  corpus.index_ = std::make_shared<SpatialIndex>(SpatialIndex::build(std::move(entries)));
  return corpus;
}

const PoiRecord* Corpus::find_by_id(const std::string& id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &records_[it->second];
}

const PoiRecord* Corpus::find_by_name(const std::string& name) const {
  auto it = by_name_.find(lowercase(name));
  return it == by_name_.end() ? nullptr : &records_[it->second];
}

std::string Corpus::full_text(const PoiRecord& r) {
  std::string out = r.name + ". " + r.category + ".";
  for (const auto& rev : r.reviews) {
    out += ' ';
    out += rev;
  }
  return out;
}

std::vector<QaPair> load_qa_pairs(const std::filesystem::path& path, const Corpus& corpus) {
  std::ifstream in(path);
  if (!in) throw StoreError("cannot open QA file " + path.string());
  std::vector<QaPair> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": malformed JSON");
    QaPair qa;
    qa.question = j.value("question", "");
    if (qa.question.empty())
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": missing question");
    if (j.contains("reference") && !j["reference"].is_null()) {
      const auto& ref = j["reference"];
      if (ref.is_string()) {
        qa.reference_name = ref.get<std::string>();
      } else if (ref.is_array() && !ref.empty() && ref[0].is_number()) {
        qa.reference_points.push_back({ref[0].get<double>(), ref[1].get<double>()});
      } else if (ref.is_array()) {
        for (const auto& p : ref) qa.reference_points.push_back({p[0].get<double>(), p[1].get<double>()});
      }
    }
    if (!j.contains("relevant_ids") || !j["relevant_ids"].is_array() || j["relevant_ids"].empty())
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": relevant_ids must be a non-empty array");
    for (const auto& id : j["relevant_ids"]) {
      std::string s = id.get<std::string>();
      if (!corpus.find_by_id(s))
        throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                              ": relevant id '" + s + "' is not in the corpus");
      qa.relevant_ids.push_back(s);
    }
    out.push_back(std::move(qa));
  }
  return out;
}

}  // namespace georank
