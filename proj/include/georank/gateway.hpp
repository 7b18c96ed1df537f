#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "georank/gazetteer.hpp"
#include "georank/query.hpp"

namespace georank {

/// One of the three chat prompts, loaded verbatim from the assets directory.
/// Placeholders are `{key}` occurrences whose key is in the template's
/// declared set; other brace pairs (the JSON examples) are left untouched.
struct PromptTemplate {
  std::string name;  // spatial_extract | intent_extract | rerank
  std::string body;
  std::vector<std::string> placeholders;
};

class PromptLibrary {
 public:
  /// Load spatial_extract.txt, intent_extract.txt, rerank.txt from dir and
  /// verify each declares exactly its expected placeholders.
  static PromptLibrary load(const std::filesystem::path& dir);

  const PromptTemplate& get(const std::string& name) const;

 private:
  std::map<std::string, PromptTemplate> templates_;
};

/// Substitute bindings into the template. Throws ValidationError if any
/// declared placeholder is unbound.
std::string render(const PromptTemplate& tpl, const std::map<std::string, std::string>& bindings);

/// Transport for chat completion: prompt in, raw model text out.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual std::string complete(const std::string& prompt) = 0;
  virtual std::string id() const = 0;
};

/// Deterministic in-memory backend for tests: answers from a FIFO queue.
class StubChatBackend : public ChatBackend {
 public:
  void push_response(std::string response);
  std::string complete(const std::string& prompt) override;
  std::string id() const override { return "stub"; }
  const std::vector<std::string>& prompts() const { return prompts_; }

 private:
  std::vector<std::string> queue_;
  std::vector<std::string> prompts_;
};

/// Replays recorded responses keyed by prompt hash, byte-identically.
class ReplayBackend : public ChatBackend {
 public:
  static ReplayBackend from_file(const std::filesystem::path& fixture);
  std::string complete(const std::string& prompt) override;
  std::string id() const override { return "replay"; }

  /// Key under which a prompt's response is stored in the fixture file.
  static std::string key_for(const std::string& prompt);

 private:
  std::map<std::string, std::string> responses_;
};

struct HttpChatConfig {
  std::string base_url;  // e.g. http://host:port
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string api_key_env = "GEORANK_API_KEY";
  double temperature = 0.0;
  int timeout_seconds = 60;
};

/// Client for an OpenAI-style chat completion endpoint.
class HttpChatBackend : public ChatBackend {
 public:
  explicit HttpChatBackend(HttpChatConfig cfg);
  ~HttpChatBackend() override;
  std::string complete(const std::string& prompt) override;
  std::string id() const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct GatewayResponse {
  std::string raw;
  nlohmann::json parsed;  // schema-validated before returning
};

struct GatewayOptions {
  int max_retries = 2;        // malformed-output retries after the first attempt
  int max_concurrency = 4;    // per-client in-flight request cap
  bool cache_responses = true;
};

/// Round-trip wrapper: render prompt, call the backend (bounded concurrency),
/// schema-validate the reply, retry malformed output with a repair suffix,
/// and cache validated responses keyed by (template, bindings).
class Gateway {
 public:
  Gateway(std::shared_ptr<ChatBackend> backend, PromptLibrary library,
          GatewayOptions options = {});
  ~Gateway();

  GatewayResponse complete(const std::string& template_name,
                           const std::map<std::string, std::string>& bindings);

  ChatBackend& backend();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Redact bearer tokens and api-key fields from a log line.
std::string redact_secrets(const std::string& s);

/// Parse a question via the spatial-extraction and intent-extraction prompts.
/// distance_km / buffer_distance are honored when present, otherwise the
/// rule-based epsilon defaults apply. Throws SchemaError when the gateway
/// cannot produce valid output (callers fall back to parse_rule_based).
ParsedQuery parse_with_llm(const std::string& question,
                           const std::vector<geo::Coord>& resolved_points,
                           const Gazetteer& gazetteer, Gateway& gateway);

}  // namespace georank
