#include "georank/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace georank::text {

namespace {

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

// Exact-match spatial cues (short words whose prefixes would over-match).
constexpr std::array<std::string_view, 5> kSpatialExact = {"in", "along", "within", "around",
                                                           "radius"};
// Prefix-match spatial cues (cover nearby/closest/walking/blocks/exits/routes).
constexpr std::array<std::string_view, 6> kSpatialPrefix = {"near", "close", "walk",
                                                            "block", "exit", "route"};

constexpr std::array<std::string_view, 40> kSemanticExact = {
    "restaurant", "food",    "eat",      "dining",      "meal",        "cuisine",  "breakfast",
    "lunch",      "dinner",  "brunch",   "menu",        "dish",        "dishes",   "chef",
    "hotel",      "stay",    "room",     "accommodation", "visit",     "tour",     "explore",
    "museum",     "gallery", "theater",  "show",        "performance", "price",    "priced",
    "cheap",      "affordable", "good",  "nice",        "best",        "family",   "friendly",
    "cozy",       "atmosphere", "authentic", "quiet",   "want"};

}  // namespace

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (word_char(c)) {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<std::string> split_sentences(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    size_t b = cur.find_first_not_of(" \t\r");
    size_t e = cur.find_last_not_of(" \t\r");
    if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
    cur.clear();
  };
  for (char c : s) {
    if (c == '.' || c == '?' || c == '!' || c == '\n') {
      flush();
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return out;
}

bool is_spatial_cue(std::string_view token) {
  for (auto w : kSpatialExact)
    if (token == w) return true;
  for (auto p : kSpatialPrefix)
    if (starts_with(token, p)) return true;
  return false;
}

bool is_semantic_cue(std::string_view token) {
  return std::find(kSemanticExact.begin(), kSemanticExact.end(), token) != kSemanticExact.end();
}

int count_spatial_cues(std::string_view s) {
  int n = 0;
  for (const auto& t : tokenize(s))
    if (is_spatial_cue(t)) ++n;
  return n;
}

int count_semantic_cues(std::string_view s) {
  int n = 0;
  for (const auto& t : tokenize(s))
    if (is_semantic_cue(t)) ++n;
  return n;
}

namespace {

std::string join_sentences(const std::vector<std::string>& sentences, bool spatial) {
  std::string out;
  for (const auto& sent : sentences) {
    bool has_cue = false;
    for (const auto& t : tokenize(sent))
      if (is_spatial_cue(t)) {
        has_cue = true;
        break;
      }
    if (has_cue != spatial) continue;
    if (!out.empty()) out += ' ';
    out += sent;
    out += '.';
  }
  return out;
}

}  // namespace

std::string LexiconMasker::spatial_view(const std::string& s) const {
  return join_sentences(split_sentences(s), true);
}

std::string LexiconMasker::semantic_view(const std::string& s) const {
  return join_sentences(split_sentences(s), false);
}

}  // namespace georank::text
