#pragma once

#include <optional>
#include <string>
#include <vector>

#include "georank/geo.hpp"

namespace georank {

struct IndexEntry {
  std::string id;
  geo::Geometry geometry;
  std::string category;
};

/// Static bbox hierarchy over POI footprints, bulk-loaded along a Hilbert
/// curve. Semantically transparent: query results equal a linear scan with
/// the same geometry predicates. Immutable once built.
class SpatialIndex {
 public:
  static SpatialIndex build(std::vector<IndexEntry> entries, int leaf_capacity = 16);

  /// Ids whose geometry lies within eps_km of the reference (boundary
  /// inclusive), optionally restricted to one category. Sorted ascending.
  std::vector<std::string> query_within_distance(
      const geo::Geometry& reference, double eps_km,
      const std::optional<std::string>& category = std::nullopt) const;

  /// Ids whose geometry is entirely contained in the areal region.
  std::vector<std::string> query_contained(
      const geo::Geometry& region,
      const std::optional<std::string>& category = std::nullopt) const;

  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  struct Node {
    geo::BBox box;
    int first = 0;   // child node index, or entry index for leaves
    int count = 0;
    bool leaf = false;
  };

  template <typename Predicate>
  void scan(const geo::BBox& query_box, const std::optional<std::string>& category,
            Predicate&& keep, std::vector<std::string>& out) const;

  std::vector<IndexEntry> entries_;  // Hilbert order
  std::vector<geo::BBox> entry_boxes_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace georank
