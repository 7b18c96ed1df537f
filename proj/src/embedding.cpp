#include "georank/embedding.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>

#include <json.hpp>

#include "georank/hash.hpp"
#include "georank/text.hpp"

// httplib is pulled in by the .cpp only; keep it out of public headers.
#include <httplib.h>

namespace georank {

std::string to_hex(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.size() != b.size())
    throw ValidationError("embedding dimension mismatch: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

HashEmbedder::HashEmbedder(int dim) : dim_(dim) {
  if (dim <= 0) throw ValidationError("embedder dimension must be positive");
}

std::string HashEmbedder::id() const { return "hash-fnv1a-" + std::to_string(dim_); }

EmbeddingVector HashEmbedder::embed(const std::string& text) const {
  std::vector<double> acc(static_cast<size_t>(dim_), 0.0);
  for (const auto& tok : text::tokenize(text)) {
    uint64_t h = fnv1a64(tok);
    size_t bucket = static_cast<size_t>(h % static_cast<uint64_t>(dim_));
    double sign = ((h >> 32) & 1ull) ? 1.0 : -1.0;
    acc[bucket] += sign;
  }
  double norm2 = 0.0;
  for (double v : acc) norm2 += v * v;
  EmbeddingVector out(static_cast<size_t>(dim_), 0.0f);
  if (norm2 > 0.0) {
    double inv = 1.0 / std::sqrt(norm2);
    for (size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<float>(acc[i] * inv);
  }
  return out;
}

struct ServiceEmbedder::Impl {
  ServiceEmbedderConfig cfg;
  std::string api_key;
  mutable std::mutex mu;
  mutable int seen_dim = 0;

  std::filesystem::path cache_path(const std::string& text) const {
    uint64_t h = fnv1a64(cfg.model + "\x1f" + text);
    return std::filesystem::path(cfg.cache_dir) / (to_hex(h) + ".json");
  }
};

ServiceEmbedder::ServiceEmbedder(ServiceEmbedderConfig cfg) : impl_(new Impl) {
  if (cfg.endpoint.empty()) throw ValidationError("embedding service endpoint not configured");
  impl_->cfg = std::move(cfg);
  impl_->seen_dim = impl_->cfg.dim;
  if (const char* key = std::getenv(impl_->cfg.api_key_env.c_str())) impl_->api_key = key;
  if (!impl_->cfg.cache_dir.empty()) std::filesystem::create_directories(impl_->cfg.cache_dir);
}

ServiceEmbedder::~ServiceEmbedder() = default;

int ServiceEmbedder::dim() const {
  std::lock_guard lock(impl_->mu);
  return impl_->seen_dim;
}

std::string ServiceEmbedder::id() const { return "service-" + impl_->cfg.model; }

EmbeddingVector ServiceEmbedder::embed(const std::string& text) const {
  const auto& cfg = impl_->cfg;

  if (!cfg.cache_dir.empty()) {
    std::ifstream in(impl_->cache_path(text));
    if (in) {
      auto j = nlohmann::json::parse(in, nullptr, false);
      if (j.is_array()) {
        EmbeddingVector v = j.get<EmbeddingVector>();
        std::lock_guard lock(impl_->mu);
        if (impl_->seen_dim == 0) impl_->seen_dim = static_cast<int>(v.size());
        return v;
      }
    }
  }

  nlohmann::json body = {{"model", cfg.model}, {"input", nlohmann::json::array({text})}};

  httplib::Client client(cfg.endpoint.substr(0, cfg.endpoint.find('/', 8)));
  std::string path = "/";
  if (auto pos = cfg.endpoint.find('/', 8); pos != std::string::npos)
    path = cfg.endpoint.substr(pos);
  httplib::Headers headers;
  if (!impl_->api_key.empty()) headers.emplace("Authorization", "Bearer " + impl_->api_key);

  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) throw TransportError("embedding service unreachable: " + cfg.endpoint);
  if (res->status != 200)
    throw TransportError("embedding service returned HTTP " + std::to_string(res->status));

  auto j = nlohmann::json::parse(res->body, nullptr, false);
  if (j.is_discarded() || !j.contains("data") || !j["data"].is_array() || j["data"].empty() ||
      !j["data"][0].contains("embedding"))
    throw SchemaError("embedding service response missing data[0].embedding");

  EmbeddingVector v = j["data"][0]["embedding"].get<EmbeddingVector>();
  {
    std::lock_guard lock(impl_->mu);
    if (impl_->seen_dim == 0) impl_->seen_dim = static_cast<int>(v.size());
    if (static_cast<int>(v.size()) != impl_->seen_dim)
      throw SchemaError("embedding service changed dimension mid-run");
  }
  if (!cfg.cache_dir.empty()) {
    std::ofstream out(impl_->cache_path(text));
    out << nlohmann::json(v).dump();
  }
  return v;
}

}  // namespace georank
