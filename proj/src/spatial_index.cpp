#include "georank/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_set>

#include "georank/categories.hpp"

namespace georank {

namespace {

// Hilbert d2xy-free xy2d on a 2^16 grid, for a deterministic bulk-load order.
uint32_t hilbert_index(uint32_t x, uint32_t y) {
  uint32_t rx, ry, d = 0;
  for (uint32_t s = 1u << 15; s > 0; s /= 2) {
    rx = (x & s) > 0 ? 1 : 0;
    ry = (y & s) > 0 ? 1 : 0;
    d += s * s * ((3 * rx) ^ ry);
    if (ry == 0) {
      if (rx == 1) {
        x = s - 1 - x;
        y = s - 1 - y;
      }
      std::swap(x, y);
    }
  }
  return d;
}

uint32_t quantize(double v, double lo, double hi) {
  double t = (v - lo) / (hi - lo);
  t = std::clamp(t, 0.0, 1.0);
  return static_cast<uint32_t>(t * 65535.0);
}

}  // namespace

SpatialIndex SpatialIndex::build(std::vector<IndexEntry> entries, int leaf_capacity) {
  if (leaf_capacity < 1) throw ValidationError("leaf capacity must be >= 1");

  SpatialIndex idx;
  {
    std::unordered_set<std::string> seen;
    for (const auto& e : entries)
      if (!seen.insert(e.id).second)
        throw ValidationError("duplicate id in index build: " + e.id);
  }

  struct Keyed {
    uint32_t key;
    size_t src;
  };
  std::vector<Keyed> order(entries.size());
  std::vector<geo::BBox> boxes(entries.size());
  for (size_t i = 0; i < entries.size(); ++i) {
    boxes[i] = geo::bounds(entries[i].geometry);
    auto c = boxes[i].center();
    order[i] = {hilbert_index(quantize(c.lon, -180.0, 180.0), quantize(c.lat, -90.0, 90.0)), i};
  }
  std::sort(order.begin(), order.end(), [&](const Keyed& a, const Keyed& b) {
    if (a.key != b.key) return a.key < b.key;
    return entries[a.src].id < entries[b.src].id;
  });

  idx.entries_.reserve(entries.size());
  idx.entry_boxes_.reserve(entries.size());
  for (const auto& k : order) {
    idx.entries_.push_back(std::move(entries[k.src]));
    idx.entry_boxes_.push_back(boxes[k.src]);
  }

  if (idx.entries_.empty()) return idx;

  // Leaves over entry ranges, then parent levels over node ranges.
  std::vector<int> level;
  for (int first = 0; first < static_cast<int>(idx.entries_.size()); first += leaf_capacity) {
    int count = std::min(leaf_capacity, static_cast<int>(idx.entries_.size()) - first);
    Node n;
    n.leaf = true;
    n.first = first;
    n.count = count;
    n.box = idx.entry_boxes_[static_cast<size_t>(first)];
    for (int i = 1; i < count; ++i) n.box.extend(idx.entry_boxes_[static_cast<size_t>(first + i)]);
    level.push_back(static_cast<int>(idx.nodes_.size()));
    idx.nodes_.push_back(n);
  }
  while (level.size() > 1) {
    std::vector<int> next;
    for (size_t first = 0; first < level.size(); first += static_cast<size_t>(leaf_capacity)) {
      size_t count = std::min<size_t>(static_cast<size_t>(leaf_capacity), level.size() - first);
      Node n;
      n.leaf = false;
      n.first = level[first];
      n.count = static_cast<int>(count);
      n.box = idx.nodes_[static_cast<size_t>(level[first])].box;
      for (size_t i = 1; i < count; ++i)
        n.box.extend(idx.nodes_[static_cast<size_t>(level[first + i])].box);
      next.push_back(static_cast<int>(idx.nodes_.size()));
      idx.nodes_.push_back(n);
    }
    level = std::move(next);
  }
  idx.root_ = level.front();
  return idx;
}

template <typename Predicate>
void SpatialIndex::scan(const geo::BBox& query_box, const std::optional<std::string>& category,
                        Predicate&& keep, std::vector<std::string>& out) const {
  if (root_ < 0) return;
  std::vector<int> stack{root_};
  while (!stack.empty()) {
    const Node& n = nodes_[static_cast<size_t>(stack.back())];
    stack.pop_back();
    if (!n.box.overlaps(query_box)) continue;
    if (n.leaf) {
      for (int i = 0; i < n.count; ++i) {
        size_t e = static_cast<size_t>(n.first + i);
        if (!entry_boxes_[e].overlaps(query_box)) continue;
        if (category && !category_matches(*category, entries_[e].category)) continue;
        if (keep(entries_[e])) out.push_back(entries_[e].id);
      }
    } else {
      // Child nodes are laid out contiguously per level; n.first is the index
      // of the first child and siblings follow in build order.
      for (int i = 0; i < n.count; ++i) stack.push_back(n.first + i);
    }
  }
}

std::vector<std::string> SpatialIndex::query_within_distance(
    const geo::Geometry& reference, double eps_km,
    const std::optional<std::string>& category) const {
  if (eps_km < 0.0) throw ValidationError("query distance must be non-negative");

  geo::BBox ref_box = geo::bounds(reference);
  double dlat = eps_km / geo::kKmPerDegree;
  double worst_lat =
      std::min(89.5, std::max(std::abs(ref_box.min_lat), std::abs(ref_box.max_lat)) + dlat);
  double dlon = eps_km / (geo::kKmPerDegree * std::cos(worst_lat * 3.14159265358979323846 / 180.0));
  // Slack absorbs the equirectangular-vs-spherical discrepancy; the exact
  // predicate pass restores precision.
  geo::BBox query_box = ref_box.padded(dlon * 1.05 + 1e-9, dlat * 1.05 + 1e-9);

  std::vector<std::string> out;
  scan(
      query_box, category,
      [&](const IndexEntry& e) { return geo::within_buffer(e.geometry, reference, eps_km); }, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> SpatialIndex::query_contained(
    const geo::Geometry& region, const std::optional<std::string>& category) const {
  if (!region.areal())
    throw ValidationError("containment query needs an areal region, got " +
                          std::string(geo::to_string(region.kind())));
  geo::BBox query_box = geo::bounds(region);
  std::vector<std::string> out;
  scan(
      query_box, category, [&](const IndexEntry& e) { return geo::contains(region, e.geometry); },
      out);
  std::sort(out.begin(), out.end());
  return out;
}

// Explicit instantiation not needed; scan is used only in this TU.

}  // namespace georank
