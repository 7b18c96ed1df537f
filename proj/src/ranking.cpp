#include "georank/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "georank/text.hpp"

namespace georank {

void TradeoffWeights::validate() const {
  if (lambda_s < 0.0 || lambda_k < 0.0)
    throw ValidationError("trade-off weights must be non-negative");
  if (std::abs(lambda_s + lambda_k - 1.0) > 1e-9)
    throw ValidationError("trade-off weights must sum to 1");
}

namespace {

bool frontier_order(const ParetoPoint& a, const ParetoPoint& b) {
  if (a.f_s != b.f_s) return a.f_s > b.f_s;
  if (a.f_k != b.f_k) return a.f_k > b.f_k;
  return a.poi_id < b.poi_id;
}

}  // namespace

std::vector<ParetoPoint> pareto_frontier(const std::vector<ParetoPoint>& candidates) {
  for (const auto& p : candidates)
    if (!std::isfinite(p.f_s) || !std::isfinite(p.f_k))
      throw ValidationError("objective values must be finite");

  std::vector<ParetoPoint> sorted = candidates;
  std::sort(sorted.begin(), sorted.end(), frontier_order);

  // Sweep groups of equal f_s in descending order. Within a group only the
  // max-f_k members survive, and only if that max strictly beats everything
  // already seen at higher f_s.
  std::vector<ParetoPoint> frontier;
  double best_fk = -std::numeric_limits<double>::infinity();
  size_t i = 0;
  while (i < sorted.size()) {
    size_t j = i;
    while (j < sorted.size() && sorted[j].f_s == sorted[i].f_s) ++j;
    double group_max = sorted[i].f_k;  // group is sorted by f_k descending
    if (group_max > best_fk) {
      for (size_t k = i; k < j && sorted[k].f_k == group_max; ++k) frontier.push_back(sorted[k]);
      best_fk = group_max;
    }
    i = j;
  }
  return frontier;
}

TradeoffWeights heuristic_weights(const QueryIntent& intent) {
  int s = text::count_spatial_cues(intent.spatial_requirement);
  int k = text::count_semantic_cues(intent.semantic_requirement);
  TradeoffWeights w;
  w.lambda_s = (1.0 + s) / (2.0 + s + k);
  w.lambda_k = 1.0 - w.lambda_s;
  return w;
}

std::vector<std::string> select(const std::vector<ParetoPoint>& frontier,
                                const std::vector<ParetoPoint>& pool, TradeoffWeights weights,
                                int top_k) {
  weights.validate();
  if (top_k < 1) throw ValidationError("top_k must be >= 1");
  if (pool.empty()) throw NoAnswerError("no candidates satisfy the query constraints");

  auto score = [&](const ParetoPoint& p) { return weights.lambda_s * p.f_s + weights.lambda_k * p.f_k; };
  auto by_score = [&](const ParetoPoint& a, const ParetoPoint& b) {
    double sa = score(a), sb = score(b);
    if (sa != sb) return sa > sb;
    return a.poi_id < b.poi_id;
  };

  std::vector<ParetoPoint> head = frontier;
  std::sort(head.begin(), head.end(), by_score);

  std::set<std::string> on_frontier;
  for (const auto& p : frontier) on_frontier.insert(p.poi_id);
  std::vector<ParetoPoint> tail;
  for (const auto& p : pool)
    if (!on_frontier.count(p.poi_id)) tail.push_back(p);
  std::sort(tail.begin(), tail.end(), by_score);

  std::vector<std::string> out;
  for (const auto& p : head) {
    if (static_cast<int>(out.size()) >= top_k) break;
    out.push_back(p.poi_id);
  }
  for (const auto& p : tail) {
    if (static_cast<int>(out.size()) >= top_k) break;
    out.push_back(p.poi_id);
  }
  return out;
}

std::vector<std::string> llm_rerank(const std::vector<RerankCandidate>& candidates,
                                    const std::string& question, const QueryIntent& intent,
                                    Gateway& gateway,
                                    const std::vector<std::string>& fallback_ranking) {
  (void)question;  // the rerank prompt carries the constraints, not the raw text
  if (candidates.empty()) return fallback_ranking;

  nlohmann::json places = nlohmann::json::array();
  for (size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    places.push_back({{"index", i},
                      {"name", c.name},
                      {"category", c.category},
                      {"description", c.description},
                      {"sparse_score", c.f_sparse},
                      {"distance_km", c.distance_km}});
  }

  std::map<std::string, std::string> bindings = {
      {"query_constraints['spatial_constraints']",
       intent.spatial_requirement.empty() ? "null" : intent.spatial_requirement},
      {"query_constraints['user_constraints']",
       intent.semantic_requirement.empty() ? "null" : intent.semantic_requirement},
      {"json.dumps(places, ensure_ascii=False, indent=2)", places.dump(2)},
      {"len(places)", std::to_string(candidates.size())},
  };

  try {
    GatewayResponse res = gateway.complete("rerank", bindings);
    const auto& arr = res.parsed;
    if (arr.size() != candidates.size()) throw SchemaError("rerank array length mismatch");
    std::vector<bool> seen(candidates.size(), false);
    std::vector<std::string> ranked;
    ranked.reserve(candidates.size());
    for (const auto& v : arr) {
      long idx = v.get<long>();
      if (idx < 0 || idx >= static_cast<long>(candidates.size()) || seen[static_cast<size_t>(idx)])
        throw SchemaError("rerank indices are not a permutation of the input");
      seen[static_cast<size_t>(idx)] = true;
      ranked.push_back(candidates[static_cast<size_t>(idx)].poi_id);
    }
    return ranked;
  } catch (const Error& e) {
    std::fprintf(stderr, "[warn] llm rerank failed (%s); using trade-off selection\n", e.what());
    return fallback_ranking;
  }
}

}  // namespace georank
