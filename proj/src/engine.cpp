#include "georank/engine.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "georank/hash.hpp"

namespace georank {

void EngineConfig::validate() const {
  if (lambda_p < 0.0 || lambda_d < 0.0)
    throw ValidationError("fusion weights must be non-negative");
  if (lambda_p == 0.0 && lambda_d == 0.0)
    throw ValidationError("at least one fusion weight must be positive");
  if (weight_policy == WeightPolicy::Fixed) fixed_weights.validate();
  if (top_k < 1) throw ValidationError("top_k must be >= 1");
}

std::string EngineConfig::fingerprint() const {
  std::string blob = "lp=" + std::to_string(lambda_p) + ";ld=" + std::to_string(lambda_d) +
                     ";wp=" + std::to_string(static_cast<int>(weight_policy)) +
                     ";ws=" + std::to_string(fixed_weights.lambda_s) +
                     ";wk=" + std::to_string(fixed_weights.lambda_k) +
                     ";parser=" + std::to_string(static_cast<int>(parser)) +
                     ";topk=" + std::to_string(top_k);
  return to_hex(fnv1a64(blob));
}

Engine::Engine(const Corpus& corpus, const Embedder& embedder, const text::MaskingView& masker,
               EngineConfig config)
    : corpus_(corpus), embedder_(embedder), masker_(masker), config_(config) {
  config_.validate();
}

void Engine::set_gateway(std::shared_ptr<Gateway> gateway) { gateway_ = std::move(gateway); }

std::vector<geo::Coord> Engine::resolve_reference_points(const std::string& question) const {
  std::vector<geo::Coord> points;

  // Literal "(lon, lat)" pairs, in text order.
  static const std::regex pair_re(
      R"(\(\s*(-?\d+(?:\.\d+)?)\s*,\s*(-?\d+(?:\.\d+)?)\s*\))");
  for (auto it = std::sregex_iterator(question.begin(), question.end(), pair_re);
       it != std::sregex_iterator(); ++it) {
    double lon = std::stod((*it)[1].str());
    double lat = std::stod((*it)[2].str());
    if (lon >= -180.0 && lon <= 180.0 && lat >= -90.0 && lat <= 90.0) points.push_back({lon, lat});
  }

  // POI name mentions, by text position, longest name wins on overlap.
  std::string q = lowercase(question);
  struct Mention {
    size_t pos;
    size_t len;
    const PoiRecord* rec;
  };
  std::vector<Mention> mentions;
  for (const auto& rec : corpus_.records()) {
    std::string name = lowercase(rec.name);
    if (name.size() < 4) continue;
    size_t pos = q.find(name);
    while (pos != std::string::npos) {
      auto is_word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
      bool left_ok = pos == 0 || !is_word(q[pos - 1]);
      bool right_ok = pos + name.size() >= q.size() || !is_word(q[pos + name.size()]);
      if (left_ok && right_ok) mentions.push_back({pos, name.size(), &rec});
      pos = q.find(name, pos + 1);
    }
  }
  std::sort(mentions.begin(), mentions.end(), [](const Mention& a, const Mention& b) {
    if (a.pos != b.pos) return a.pos < b.pos;
    if (a.len != b.len) return a.len > b.len;
    return a.rec->id < b.rec->id;
  });
  size_t covered_until = 0;
  for (const auto& m : mentions) {
    if (m.pos < covered_until) continue;
    covered_until = m.pos + m.len;
    geo::BBox box = geo::bounds(m.rec->geometry);
    points.push_back(box.center());
    if (points.size() >= 5) break;
  }
  return points;
}

QueryResult Engine::run(const std::string& input, const std::vector<geo::Coord>& extra_points) const {
  if (config_.parser == ParserMode::Dsl) {
    return run_parsed(parse_dsl(input, corpus_.gazetteer()), "dsl");
  }

  std::vector<geo::Coord> points = extra_points;
  for (const auto& c : resolve_reference_points(input)) points.push_back(c);

  if (config_.parser == ParserMode::Llm) {
    if (!gateway_) throw ValidationError("LLM parser requested but no gateway configured");
    try {
      return run_parsed(parse_with_llm(input, points, corpus_.gazetteer(), *gateway_), "llm");
    } catch (const SchemaError&) {
      return run_parsed(parse_rule_based(input, points, corpus_.gazetteer()), "llm->rule");
    } catch (const TransportError&) {
      return run_parsed(parse_rule_based(input, points, corpus_.gazetteer()), "llm->rule");
    }
  }
  return run_parsed(parse_rule_based(input, points, corpus_.gazetteer()), "rule");
}

QueryResult Engine::run_parsed(ParsedQuery parsed, const std::string& parser_used) const {
  QueryResult result;
  result.parser_used = parser_used;

  auto sparse = retrieve_sparse(parsed.query, corpus_.index(), corpus_);
  result.sparse_candidate_count = sparse.size();

  const std::string& question = parsed.query.raw_question;
  score_dense_spatial(question, sparse, corpus_, embedder_, masker_);
  result.candidates =
      score_semantic(question, std::move(sparse), parsed.intent, corpus_, embedder_, masker_);

  result.pool.reserve(result.candidates.size());
  for (const auto& cs : result.candidates)
    result.pool.push_back(ParetoPoint{
        cs.poi_id, fuse_spatial(cs.f_sparse, cs.f_dense_spatial, config_.lambda_p, config_.lambda_d),
        cs.f_semantic});

  result.parsed = std::move(parsed);
  if (result.pool.empty()) return result;  // NoAnswer: empty ranking is a valid outcome

  result.frontier = pareto_frontier(result.pool);

  if (config_.weight_policy == WeightPolicy::Llm && gateway_) {
    TradeoffWeights fallback_w = heuristic_weights(result.parsed.intent);
    auto fallback = select(result.frontier, result.pool, fallback_w, config_.top_k);

    std::vector<RerankCandidate> payload;
    for (const auto& p : result.frontier) {
      const PoiRecord* rec = corpus_.find_by_id(p.poi_id);
      const CandidateScores* cs = nullptr;
      for (const auto& c : result.candidates)
        if (c.poi_id == p.poi_id) {
          cs = &c;
          break;
        }
      payload.push_back(RerankCandidate{p.poi_id, rec->name, rec->category, rec->semantic_summary,
                                        cs ? cs->f_sparse : 0.0, cs ? cs->distance_km : 0.0});
    }
    auto ranked = llm_rerank(payload, question, result.parsed.intent, *gateway_, fallback);
    result.llm_reranked = true;
    // Fill overflow slots exactly as select() would.
    if (static_cast<int>(ranked.size()) < config_.top_k) {
      for (const auto& id : fallback) {
        if (static_cast<int>(ranked.size()) >= config_.top_k) break;
        if (std::find(ranked.begin(), ranked.end(), id) == ranked.end()) ranked.push_back(id);
      }
    }
    if (static_cast<int>(ranked.size()) > config_.top_k)
      ranked.resize(static_cast<size_t>(config_.top_k));
    result.ranking = std::move(ranked);
    return result;
  }

  TradeoffWeights w = config_.weight_policy == WeightPolicy::Fixed
                          ? config_.fixed_weights
                          : heuristic_weights(result.parsed.intent);
  result.weights = w;

  if (w.lambda_k == 0.0 || w.lambda_s == 0.0) {
    // Single-objective degenerate case: the scalarized problem orders the
    // whole pool by the active objective, so the frontier restriction is
    // vacuous and the ranking must follow that order end to end.
    std::vector<ParetoPoint> ordered = result.pool;
    bool by_fs = w.lambda_k == 0.0;
    std::sort(ordered.begin(), ordered.end(), [&](const ParetoPoint& a, const ParetoPoint& b) {
      double va = by_fs ? a.f_s : a.f_k;
      double vb = by_fs ? b.f_s : b.f_k;
      if (va != vb) return va > vb;
      return a.poi_id < b.poi_id;
    });
    for (const auto& p : ordered) {
      if (static_cast<int>(result.ranking.size()) >= config_.top_k) break;
      result.ranking.push_back(p.poi_id);
    }
    return result;
  }

  result.ranking = select(result.frontier, result.pool, w, config_.top_k);
  return result;
}

}  // namespace georank
