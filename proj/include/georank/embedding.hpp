#pragma once

#include <memory>
#include <string>
#include <vector>

#include "georank/errors.hpp"

namespace georank {

using EmbeddingVector = std::vector<float>;

/// Text encoder interface. Deterministic implementations must return
/// bit-identical vectors for identical text.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual EmbeddingVector embed(const std::string& text) const = 0;
  virtual int dim() const = 0;
  virtual bool deterministic() const = 0;
  /// Stable identifier recorded in store manifests.
  virtual std::string id() const = 0;
};

/// Cosine similarity in [-1, 1]. Zero vectors score 0 by convention.
/// Throws ValidationError on dimension mismatch.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

/// Deterministic signed feature-hashing embedder over lowercased word
/// unigrams, L2-normalized. The test and offline default.
class HashEmbedder : public Embedder {
 public:
  explicit HashEmbedder(int dim = 256);
  EmbeddingVector embed(const std::string& text) const override;
  int dim() const override { return dim_; }
  bool deterministic() const override { return true; }
  std::string id() const override;

 private:
  int dim_;
};

struct ServiceEmbedderConfig {
  std::string endpoint;        // e.g. http://host:port/v1/embeddings
  std::string model;
  std::string api_key_env = "GEORANK_API_KEY";
  std::string cache_dir;       // empty disables the on-disk cache
  int dim = 0;                 // expected dimension; 0 = accept first response's
};

/// Client for an external embedding service: POST {model, input} -> vectors.
/// Responses are cached on disk keyed by (model, text hash).
class ServiceEmbedder : public Embedder {
 public:
  explicit ServiceEmbedder(ServiceEmbedderConfig cfg);
  ~ServiceEmbedder() override;
  EmbeddingVector embed(const std::string& text) const override;
  int dim() const override;
  bool deterministic() const override { return false; }
  std::string id() const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace georank
