#include "georank/gazetteer.hpp"

#include <algorithm>
#include <cctype>

namespace georank {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
  });
  return out;
}

Gazetteer::Gazetteer(std::vector<GazetteerEntry> entries) : entries_(std::move(entries)) {
  for (size_t i = 0; i < entries_.size(); ++i) {
    auto& e = entries_[i];
    e.name = lowercase(e.name);
    if (e.name.empty()) throw ValidationError("gazetteer entry with empty name");
    if (!e.polygon.areal())
      throw ValidationError("gazetteer region '" + e.name + "' is not areal");
    if (!by_name_.emplace(e.name, i).second)
      throw ValidationError("gazetteer name maps to more than one region: " + e.name);
    for (auto& a : e.aliases) {
      a = lowercase(a);
      if (a == e.name) continue;
      if (!by_name_.emplace(a, i).second)
        throw ValidationError("gazetteer alias maps to more than one region: " + a);
    }
  }
}

std::optional<geo::Geometry> Gazetteer::lookup(const std::string& name) const {
  auto it = by_name_.find(lowercase(name));
  if (it == by_name_.end()) return std::nullopt;
  return entries_[it->second].polygon;
}

namespace {

bool word_boundary(const std::string& text, size_t pos, size_t len) {
  auto is_word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
  if (pos > 0 && is_word(text[pos - 1])) return false;
  if (pos + len < text.size() && is_word(text[pos + len])) return false;
  return true;
}

}  // namespace

std::optional<std::string> Gazetteer::find_mention(const std::string& question) const {
  std::string q = lowercase(question);
  // Longest key first so "battery park city" beats "battery park".
  std::vector<const std::string*> keys;
  keys.reserve(by_name_.size());
  for (const auto& [k, _] : by_name_) keys.push_back(&k);
  std::sort(keys.begin(), keys.end(), [](const std::string* a, const std::string* b) {
    if (a->size() != b->size()) return a->size() > b->size();
    return *a < *b;
  });
  for (const std::string* k : keys) {
    size_t pos = q.find(*k);
    while (pos != std::string::npos) {
      if (word_boundary(q, pos, k->size())) return entries_[by_name_.at(*k)].name;
      pos = q.find(*k, pos + 1);
    }
  }
  return std::nullopt;
}

std::vector<std::string> Gazetteer::names() const {
  std::vector<std::string> out;
  out.reserve(by_name_.size());
  for (const auto& [k, _] : by_name_) out.push_back(k);
  return out;
}

}  // namespace georank
