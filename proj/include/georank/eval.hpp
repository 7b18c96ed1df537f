#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "georank/corpus.hpp"
#include "georank/query.hpp"

namespace georank {

/// Proportion of the top-k returned items that are relevant. The denominator
/// is min(k, returned) so a short result list is not penalized twice.
double precision_at_k(const std::vector<std::string>& ranked,
                      const std::set<std::string>& relevant, int k);

/// Proportion of all relevant items that appear within the top-k results.
double recall_at_k(const std::vector<std::string>& ranked, const std::set<std::string>& relevant,
                   int k);

/// Harmonic mean of precision and recall; 0 when both are 0.
double f1_at_k(const std::vector<std::string>& ranked, const std::set<std::string>& relevant,
               int k);

/// Normalized discounted cumulative gain with binary gains.
double ndcg_at_k(const std::vector<std::string>& ranked, const std::set<std::string>& relevant,
                 int k);

enum class BaselineKind { SD, TE, ST };

/// Parse a baseline name (case-insensitive); throws ValidationError.
BaselineKind baseline_from_string(const std::string& name);

/// Reference ranking methods:
///  SD ranks the spatial candidate set by ascending distance;
///  TE ranks the whole corpus by descending cosine between the question
///     embedding and each object's full-description embedding;
///  ST ranks the whole corpus by the mean of the distance score 1/(1+d) and
///     the TE cosine.
std::vector<std::string> run_baseline(BaselineKind kind, const ParsedQuery& parsed,
                                      const Corpus& corpus, const Embedder& embedder);

struct MetricReport {
  static constexpr int kSchemaVersion = 1;

  std::vector<int> k_list;
  // metric name -> k -> macro-averaged value
  std::map<std::string, std::map<int, double>> macro;

  struct PerQuery {
    std::string question;
    size_t returned = 0;
    std::map<std::string, std::map<int, double>> values;
  };
  std::vector<PerQuery> per_query;
  std::string config_fingerprint;

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

using Ranker = std::function<std::vector<std::string>(const QaPair&)>;

/// Run the ranker over every QA pair and macro-average the metrics.
/// Throws ValidationError on an empty QA list.
MetricReport evaluate(const Ranker& ranker, const std::vector<QaPair>& qa_pairs,
                      const std::vector<int>& k_list, const std::string& config_fingerprint);

}  // namespace georank
