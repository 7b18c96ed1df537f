#pragma once

#include <string>
#include <vector>

#include "georank/gateway.hpp"
#include "georank/query.hpp"

namespace georank {

/// Candidate projected onto the two ranking objectives.
struct ParetoPoint {
  std::string poi_id;
  double f_s = 0.0;  // fused spatial relevance
  double f_k = 0.0;  // semantic relevance

  friend bool operator==(const ParetoPoint& a, const ParetoPoint& b) {
    return a.poi_id == b.poi_id && a.f_s == b.f_s && a.f_k == b.f_k;
  }
};

/// Convex weights scalarizing the two objectives.
struct TradeoffWeights {
  double lambda_s = 0.5;
  double lambda_k = 0.5;

  /// Throws ValidationError unless both are non-negative and sum to 1.
  void validate() const;
};

/// Non-dominated subset: no other candidate is >= in both objectives with at
/// least one strict inequality. Duplicated objective pairs are all retained.
/// Output sorted by descending f_s, then descending f_k, then poi_id.
std::vector<ParetoPoint> pareto_frontier(const std::vector<ParetoPoint>& candidates);

/// Deterministic trade-off heuristic: lambda_s = (1 + s) / (2 + s + k) where
/// s and k count spatial/semantic cue tokens in the intent texts.
TradeoffWeights heuristic_weights(const QueryIntent& intent);

/// Rank frontier members by the weighted sum; when top_k exceeds the frontier
/// size, fill remaining slots with non-frontier pool members by the same
/// score. Ties break by ascending poi_id. Throws NoAnswerError on an empty
/// pool.
std::vector<std::string> select(const std::vector<ParetoPoint>& frontier,
                                const std::vector<ParetoPoint>& pool, TradeoffWeights weights,
                                int top_k);

/// Candidate payload for the rerank prompt.
struct RerankCandidate {
  std::string poi_id;
  std::string name;
  std::string category;
  std::string description;
  double f_sparse = 0.0;
  double distance_km = 0.0;
};

/// Ask the gateway to permute the candidates. The reply must be a bijection
/// over input indices of the right length; otherwise (or on transport
/// failure) the fallback ranking is returned and a warning is logged.
std::vector<std::string> llm_rerank(const std::vector<RerankCandidate>& candidates,
                                    const std::string& question, const QueryIntent& intent,
                                    Gateway& gateway,
                                    const std::vector<std::string>& fallback_ranking);

}  // namespace georank
