#include "georank/gateway.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <regex>
#include <semaphore>
#include <sstream>

#include <httplib.h>

#include "georank/hash.hpp"

namespace georank {

namespace {

using nlohmann::json;

const std::map<std::string, std::vector<std::string>>& expected_placeholders() {
  static const std::map<std::string, std::vector<std::string>> map = {
      {"spatial_extract",
       {"user_query", "location_count", "is_multi_point", "location_count == 1",
        "location_count == 2", "location_count > 2", "', '.join(region_names['nta_names'])",
        "', '.join(region_names['boro_names'])"}},
      {"intent_extract", {"user_query"}},
      {"rerank",
       {"query_constraints['spatial_constraints']", "query_constraints['user_constraints']",
        "json.dumps(places, ensure_ascii=False, indent=2)", "len(places)"}},
  };
  return map;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw NotFoundError("cannot open prompt asset " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Extract the first JSON value (object or array) from model text, tolerating
/// markdown fences and prose around it.
json extract_json(const std::string& text) {
  auto direct = json::parse(text, nullptr, false);
  if (!direct.is_discarded()) return direct;
  for (size_t i = 0; i < text.size(); ++i) {
    char open = text[i];
    if (open != '{' && open != '[') continue;
    char close = open == '{' ? '}' : ']';
    int depth = 0;
    bool in_string = false;
    for (size_t j = i; j < text.size(); ++j) {
      char c = text[j];
      if (in_string) {
        if (c == '\\') ++j;
        else if (c == '"') in_string = false;
        continue;
      }
      if (c == '"') in_string = true;
      else if (c == open) ++depth;
      else if (c == close && --depth == 0) {
        auto j2 = json::parse(text.substr(i, j - i + 1), nullptr, false);
        if (!j2.is_discarded()) return j2;
        break;
      }
    }
  }
  return json::value_t::discarded;
}

bool is_string_or_null(const json& j, const char* key) {
  return j.contains(key) && (j[key].is_string() || j[key].is_null());
}

bool is_number_or_null(const json& j, const char* key) {
  return j.contains(key) && (j[key].is_number() || j[key].is_null());
}

void validate_schema(const std::string& template_name, const json& j) {
  if (j.is_discarded()) throw SchemaError("response is not JSON");
  if (template_name == "spatial_extract") {
    if (!j.is_object()) throw SchemaError("spatial_extract response must be a JSON object");
    std::string qt = j.value("query_type", "");
    if (qt != "point" && qt != "route" && qt != "region")
      throw SchemaError("query_type must be point|route|region, got '" + qt + "'");
    if (!is_string_or_null(j, "region")) throw SchemaError("region must be string or null");
    if (!is_number_or_null(j, "distance_km")) throw SchemaError("distance_km must be number or null");
    if (!is_number_or_null(j, "buffer_distance"))
      throw SchemaError("buffer_distance must be number or null");
  } else if (template_name == "intent_extract") {
    if (!j.is_object()) throw SchemaError("intent_extract response must be a JSON object");
    std::string type = j.value("type", "");
    if (type != "R" && type != "H" && type != "A")
      throw SchemaError("type must be R|H|A, got '" + type + "'");
    if (!is_string_or_null(j, "spatial_constraints"))
      throw SchemaError("spatial_constraints must be string or null");
    if (!is_string_or_null(j, "user_constraints"))
      throw SchemaError("user_constraints must be string or null");
  } else if (template_name == "rerank") {
    if (!j.is_array()) throw SchemaError("rerank response must be a JSON array");
    for (const auto& v : j)
      if (!v.is_number_integer()) throw SchemaError("rerank indices must be integers");
  } else {
    throw ValidationError("unknown template: " + template_name);
  }
}

}  // namespace

PromptLibrary PromptLibrary::load(const std::filesystem::path& dir) {
  PromptLibrary lib;
  for (const auto& [name, keys] : expected_placeholders()) {
    PromptTemplate tpl;
    tpl.name = name;
    tpl.body = read_file(dir / (name + ".txt"));
    tpl.placeholders = keys;
    for (const auto& key : keys)
      if (tpl.body.find("{" + key + "}") == std::string::npos)
        throw ValidationError("prompt template '" + name + "' is missing placeholder {" + key + "}");
    lib.templates_.emplace(name, std::move(tpl));
  }
  return lib;
}

const PromptTemplate& PromptLibrary::get(const std::string& name) const {
  auto it = templates_.find(name);
  if (it == templates_.end()) throw NotFoundError("unknown prompt template: " + name);
  return it->second;
}

std::string render(const PromptTemplate& tpl, const std::map<std::string, std::string>& bindings) {
  for (const auto& key : tpl.placeholders)
    if (!bindings.count(key))
      throw ValidationError("placeholder {" + key + "} of template '" + tpl.name + "' is unbound");
  std::string out = tpl.body;
  for (const auto& key : tpl.placeholders) {
    std::string needle = "{" + key + "}";
    const std::string& value = bindings.at(key);
    size_t pos = 0;
    while ((pos = out.find(needle, pos)) != std::string::npos) {
      out.replace(pos, needle.size(), value);
      pos += value.size();
    }
  }
  return out;
}

void StubChatBackend::push_response(std::string response) {
  queue_.push_back(std::move(response));
}

std::string StubChatBackend::complete(const std::string& prompt) {
  prompts_.push_back(prompt);
  if (queue_.empty()) throw TransportError("stub backend has no queued response");
  std::string r = std::move(queue_.front());
  queue_.erase(queue_.begin());
  return r;
}

std::string ReplayBackend::key_for(const std::string& prompt) { return to_hex(fnv1a64(prompt)); }

ReplayBackend ReplayBackend::from_file(const std::filesystem::path& fixture) {
  ReplayBackend b;
  auto j = json::parse(read_file(fixture), nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw ValidationError("replay fixture must be a JSON object: " + fixture.string());
  for (const auto& [k, v] : j.items()) b.responses_.emplace(k, v.get<std::string>());
  return b;
}

std::string ReplayBackend::complete(const std::string& prompt) {
  auto it = responses_.find(key_for(prompt));
  if (it == responses_.end())
    throw TransportError("replay fixture has no response for prompt key " + key_for(prompt));
  return it->second;
}

struct HttpChatBackend::Impl {
  HttpChatConfig cfg;
  std::string api_key;
};

HttpChatBackend::HttpChatBackend(HttpChatConfig cfg) : impl_(new Impl) {
  if (cfg.base_url.empty()) throw ValidationError("chat backend base_url not configured");
  impl_->cfg = std::move(cfg);
  if (const char* key = std::getenv(impl_->cfg.api_key_env.c_str())) impl_->api_key = key;
}

HttpChatBackend::~HttpChatBackend() = default;

std::string HttpChatBackend::id() const { return "http-" + impl_->cfg.model; }

std::string HttpChatBackend::complete(const std::string& prompt) {
  const auto& cfg = impl_->cfg;
  httplib::Client client(cfg.base_url);
  client.set_read_timeout(cfg.timeout_seconds, 0);
  httplib::Headers headers;
  if (!impl_->api_key.empty()) headers.emplace("Authorization", "Bearer " + impl_->api_key);

  json body = {{"model", cfg.model},
               {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
               {"temperature", cfg.temperature}};
  auto res = client.Post(cfg.path, headers, body.dump(), "application/json");
  if (!res) throw TransportError("chat service unreachable: " + cfg.base_url);
  if (res->status != 200)
    throw TransportError("chat service returned HTTP " + std::to_string(res->status));
  auto j = json::parse(res->body, nullptr, false);
  if (j.is_discarded() || !j.contains("choices") || j["choices"].empty() ||
      !j["choices"][0].contains("message"))
    throw TransportError("chat service response missing choices[0].message");
  return j["choices"][0]["message"].value("content", "");
}

std::string redact_secrets(const std::string& s) {
  static const std::regex bearer("(Bearer\\s+)[A-Za-z0-9._\\-]+");
  static const std::regex key_field("(\"api_key\"\\s*:\\s*\")[^\"]*(\")");
  std::string out = std::regex_replace(s, bearer, "$1[redacted]");
  return std::regex_replace(out, key_field, "$1[redacted]$2");
}

struct Gateway::Impl {
  std::shared_ptr<ChatBackend> backend;
  PromptLibrary library;
  GatewayOptions options;
  std::counting_semaphore<256> slots;
  std::mutex cache_mu;
  std::map<std::string, GatewayResponse> cache;
  bool debug_log = false;

  Impl(std::shared_ptr<ChatBackend> b, PromptLibrary lib, GatewayOptions opt)
      : backend(std::move(b)),
        library(std::move(lib)),
        options(opt),
        slots(std::max(1, opt.max_concurrency)) {
    if (const char* env = std::getenv("GEORANK_DEBUG")) debug_log = env[0] != '\0' && env[0] != '0';
  }
};

Gateway::Gateway(std::shared_ptr<ChatBackend> backend, PromptLibrary library,
                 GatewayOptions options)
    : impl_(new Impl(std::move(backend), std::move(library), options)) {}

Gateway::~Gateway() = default;

ChatBackend& Gateway::backend() { return *impl_->backend; }

GatewayResponse Gateway::complete(const std::string& template_name,
                                  const std::map<std::string, std::string>& bindings) {
  const PromptTemplate& tpl = impl_->library.get(template_name);
  std::string prompt = render(tpl, bindings);

  std::string cache_key;
  if (impl_->options.cache_responses) {
    std::string blob = template_name;
    for (const auto& [k, v] : bindings) blob += "\x1f" + k + "\x1e" + v;
    cache_key = to_hex(fnv1a64(blob));
    std::lock_guard lock(impl_->cache_mu);
    auto it = impl_->cache.find(cache_key);
    if (it != impl_->cache.end()) return it->second;
  }

  std::string attempt_prompt = prompt;
  std::string last_error;
  for (int attempt = 0; attempt <= impl_->options.max_retries; ++attempt) {
    impl_->slots.acquire();
    std::string raw;
    try {
      if (impl_->debug_log)
        std::fprintf(stderr, "[gateway] request %s: %s\n", template_name.c_str(),
                     redact_secrets(attempt_prompt).c_str());
      raw = impl_->backend->complete(attempt_prompt);
      if (impl_->debug_log)
        std::fprintf(stderr, "[gateway] response %s: %s\n", template_name.c_str(),
                     redact_secrets(raw).c_str());
    } catch (...) {
      impl_->slots.release();
      throw;
    }
    impl_->slots.release();

    json parsed = extract_json(raw);
    try {
      validate_schema(template_name, parsed);
      GatewayResponse res{raw, parsed};
      if (impl_->options.cache_responses) {
        std::lock_guard lock(impl_->cache_mu);
        impl_->cache.emplace(cache_key, res);
      }
      return res;
    } catch (const SchemaError& e) {
      last_error = e.what();
      attempt_prompt = prompt +
                       "\n\nThe previous reply was not valid. Respond with only the strict JSON "
                       "described above, no prose.";
    }
  }
  throw SchemaError("gateway '" + template_name + "' produced no schema-valid response after " +
                    std::to_string(impl_->options.max_retries + 1) + " attempts: " + last_error);
}

ParsedQuery parse_with_llm(const std::string& question,
                           const std::vector<geo::Coord>& resolved_points,
                           const Gazetteer& gazetteer, Gateway& gateway) {
  size_t n = resolved_points.size();
  auto bool_str = [](bool b) { return b ? std::string("True") : std::string("False"); };

  std::string region_list;
  for (const auto& name : gazetteer.names()) {
    if (!region_list.empty()) region_list += ", ";
    region_list += name;
  }

  std::map<std::string, std::string> bindings = {
      {"user_query", question},
      {"location_count", std::to_string(n)},
      {"is_multi_point", bool_str(n > 1)},
      {"location_count == 1", bool_str(n == 1)},
      {"location_count == 2", bool_str(n == 2)},
      {"location_count > 2", bool_str(n > 2)},
      {"', '.join(region_names['nta_names'])", region_list},
      {"', '.join(region_names['boro_names'])", ""},
  };

  GatewayResponse spatial = gateway.complete("spatial_extract", bindings);

  ParsedQuery out;
  out.query.raw_question = question;

  std::string query_type = spatial.parsed.value("query_type", "point");
  std::optional<std::string> region;
  if (spatial.parsed["region"].is_string()) region = spatial.parsed["region"].get<std::string>();
  std::optional<double> distance_km;
  if (spatial.parsed["distance_km"].is_number())
    distance_km = spatial.parsed["distance_km"].get<double>();
  std::optional<double> buffer_m;
  if (spatial.parsed["buffer_distance"].is_number())
    buffer_m = spatial.parsed["buffer_distance"].get<double>();

  auto as_point_radius = [&]() {
    if (resolved_points.empty())
      throw UnresolvedReference("LLM chose a point query but no points are resolved");
    out.query.kind = QueryKind::PointRadius;
    for (const auto& c : resolved_points) out.query.references.emplace_back(geo::Point{c});
    out.query.eps_km =
        distance_km && *distance_km > 0 ? *distance_km
                                        : estimate_epsilon(question, QueryKind::PointRadius);
  };

  if (query_type == "region" && region) {
    if (auto poly = gazetteer.lookup(*region)) {
      out.query.kind = QueryKind::RegionContain;
      out.query.references.push_back(*poly);
    } else {
      as_point_radius();  // unknown region name: degrade to point rules
    }
  } else if (query_type == "route" && n == 2) {
    out.query.kind = QueryKind::RouteBuffer;
    out.query.references.emplace_back(geo::Point{resolved_points[0]});
    out.query.references.emplace_back(geo::Point{resolved_points[1]});
    out.query.eps_km = buffer_m && *buffer_m > 0
                           ? *buffer_m / 1000.0
                           : estimate_epsilon(question, QueryKind::RouteBuffer);
  } else {
    as_point_radius();
  }

  GatewayResponse intent = gateway.complete("intent_extract", {{"user_query", question}});
  std::string type = intent.parsed.value("type", "R");
  out.intent.target_category =
      type == "R" ? "restaurant" : (type == "H" ? "hotel" : "attraction");
  if (intent.parsed["spatial_constraints"].is_string())
    out.intent.spatial_requirement = intent.parsed["spatial_constraints"].get<std::string>();
  if (intent.parsed["user_constraints"].is_string())
    out.intent.semantic_requirement = intent.parsed["user_constraints"].get<std::string>();

  out.query.target_category = out.intent.target_category;
  out.query.validate();
  return out;
}

}  // namespace georank
