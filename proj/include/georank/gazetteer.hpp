#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "georank/geo.hpp"

namespace georank {

struct GazetteerEntry {
  std::string name;                  // canonical, lowercase
  std::vector<std::string> aliases;  // lowercase
  geo::Geometry polygon;
};

/// Region name -> polygon lookup. Names and aliases are lowercase-normalized;
/// each alias maps to exactly one entry.
class Gazetteer {
 public:
  Gazetteer() = default;
  explicit Gazetteer(std::vector<GazetteerEntry> entries);

  std::optional<geo::Geometry> lookup(const std::string& name) const;

  /// Canonical name of the first region mentioned in the text (longest alias
  /// wins, then lexicographic), or nullopt.
  std::optional<std::string> find_mention(const std::string& question) const;

  const std::vector<GazetteerEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  /// All lookup keys (canonical names and aliases), sorted.
  std::vector<std::string> names() const;

 private:
  std::vector<GazetteerEntry> entries_;
  std::map<std::string, size_t> by_name_;  // canonical + aliases
};

/// Lowercase a UTF-8-agnostic ASCII string (bytes >= 0x80 pass through).
std::string lowercase(std::string_view s);

}  // namespace georank
