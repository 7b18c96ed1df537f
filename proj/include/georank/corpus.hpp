#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "georank/categories.hpp"
#include "georank/embedding.hpp"
#include "georank/gazetteer.hpp"
#include "georank/geo.hpp"
#include "georank/spatial_index.hpp"
#include "georank/text.hpp"

namespace georank {

/// A target spatial object with its precomputed masked views and vectors.
struct PoiRecord {
  std::string id;
  std::string name;
  std::string category;
  geo::Geometry geometry = geo::Geometry::point(0, 0);
  std::vector<std::string> reviews;
  std::string spatial_summary;
  std::string semantic_summary;
  EmbeddingVector spatial_vec;
  EmbeddingVector semantic_vec;
};

/// Evaluation record: a question, an optional explicit reference, and the
/// ground-truth relevant ids.
struct QaPair {
  std::string question;
  std::optional<std::string> reference_name;
  std::vector<geo::Coord> reference_points;
  std::vector<std::string> relevant_ids;
};

struct IngestOptions {
  std::filesystem::path poi_path;
  std::filesystem::path gazetteer_path;  // empty = no gazetteer
  std::filesystem::path store_dir;
  std::vector<std::string> categories = kDefaultCategories;
};

struct IngestStats {
  size_t poi_count = 0;
  size_t region_count = 0;
  std::string store_checksum;  // checksum over the manifest's checksum table
};

/// Parse, normalize, summarize, embed, and persist a POI corpus plus
/// gazetteer. Re-ingesting identical inputs with a deterministic embedder
/// yields a byte-identical store. Exclusive: refuses to run while another
/// ingest holds the store lock.
IngestStats ingest(const IngestOptions& options, const Embedder& embedder,
                   const text::MaskingView& masker);

/// Read-only corpus handle. The spatial index is rebuilt in memory on load.
class Corpus {
 public:
  static Corpus load(const std::filesystem::path& store_dir);

  const std::vector<PoiRecord>& records() const { return records_; }
  const PoiRecord* find_by_id(const std::string& id) const;
  /// Case-insensitive name lookup; first record in id order on duplicates.
  const PoiRecord* find_by_name(const std::string& name) const;
  const Gazetteer& gazetteer() const { return gazetteer_; }
  const SpatialIndex& index() const { return *index_; }
  const std::string& embedder_id() const { return embedder_id_; }
  int dim() const { return dim_; }

  /// Unmasked description: name, category, and raw reviews.
  static std::string full_text(const PoiRecord& r);

 private:
  std::vector<PoiRecord> records_;
  std::map<std::string, size_t> by_id_;
  std::map<std::string, size_t> by_name_;
  Gazetteer gazetteer_;
  std::shared_ptr<SpatialIndex> index_;
  std::string embedder_id_;
  int dim_ = 0;
};

/// Load QA pairs from a JSON-lines file and check referential integrity
/// against the corpus. Throws ValidationError on an empty or unresolvable
/// relevant set.
std::vector<QaPair> load_qa_pairs(const std::filesystem::path& path, const Corpus& corpus);

}  // namespace georank
