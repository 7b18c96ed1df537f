#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "georank/corpus.hpp"
#include "georank/gateway.hpp"
#include "georank/ranking.hpp"
#include "georank/retrieval.hpp"

namespace georank {

enum class ParserMode { Rule, Llm, Dsl };
enum class WeightPolicy { Heuristic, Fixed, Llm };

struct EngineConfig {
  double lambda_p = 0.5;                  // sparse spatial fusion weight
  double lambda_d = 0.5;                  // dense spatial fusion weight
  WeightPolicy weight_policy = WeightPolicy::Heuristic;
  TradeoffWeights fixed_weights{0.5, 0.5};
  ParserMode parser = ParserMode::Rule;
  int top_k = 10;

  void validate() const;
  /// Stable fingerprint of all ranking-relevant settings.
  std::string fingerprint() const;
};

/// Full trace of one query through the pipeline.
struct QueryResult {
  ParsedQuery parsed;
  std::string parser_used;                      // rule | llm | llm->rule | dsl
  size_t sparse_candidate_count = 0;            // |C_s|
  std::vector<CandidateScores> candidates;      // C_s ∩ C_k with all scores
  std::vector<ParetoPoint> pool;                // scalarized objectives
  std::vector<ParetoPoint> frontier;
  std::optional<TradeoffWeights> weights;       // absent on the llm-rerank path
  bool llm_reranked = false;
  std::vector<std::string> ranking;             // final ids, best first
};

/// Query pipeline: parse -> sparse retrieval -> dense scoring -> fusion ->
/// Pareto frontier -> trade-off selection (or LLM rerank).
class Engine {
 public:
  Engine(const Corpus& corpus, const Embedder& embedder, const text::MaskingView& masker,
         EngineConfig config);

  /// Optional: enables ParserMode::Llm and WeightPolicy::Llm paths.
  void set_gateway(std::shared_ptr<Gateway> gateway);

  /// Run a natural-language question (parser per config) or, with
  /// ParserMode::Dsl, a DSL expression. extra_points are prepended to the
  /// references resolved from the text.
  QueryResult run(const std::string& input, const std::vector<geo::Coord>& extra_points = {}) const;

  /// Run with an externally produced parse (used by evaluation).
  QueryResult run_parsed(ParsedQuery parsed, const std::string& parser_used) const;

  /// Reference points recoverable from the question text: literal
  /// "(lon, lat)" pairs first, then corpus POI name mentions.
  std::vector<geo::Coord> resolve_reference_points(const std::string& question) const;

  const Corpus& corpus() const { return corpus_; }
  const EngineConfig& config() const { return config_; }
  const Embedder& embedder() const { return embedder_; }
  const text::MaskingView& masker() const { return masker_; }

 private:
  const Corpus& corpus_;
  const Embedder& embedder_;
  const text::MaskingView& masker_;
  EngineConfig config_;
  std::shared_ptr<Gateway> gateway_;
};

}  // namespace georank
