#pragma once

#include <string>
#include <vector>

namespace georank {

inline const std::vector<std::string> kDefaultCategories = {"restaurant", "hotel", "attraction",
                                                            "amenity", "cafe"};

/// Category filter rule: exact match, except that a restaurant query accepts
/// cafe objects (cafes are food places in the R/H/A taxonomy).
inline bool category_matches(const std::string& query_category, const std::string& poi_category) {
  if (query_category == poi_category) return true;
  return query_category == "restaurant" && poi_category == "cafe";
}

}  // namespace georank
