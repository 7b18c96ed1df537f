#include "georank/eval.hpp"

#include <algorithm>
#include <cmath>

#include "georank/retrieval.hpp"

namespace georank {

namespace {

int hits_in_top_k(const std::vector<std::string>& ranked, const std::set<std::string>& relevant,
                  int k) {
  int hits = 0;
  int n = std::min<int>(k, static_cast<int>(ranked.size()));
  for (int i = 0; i < n; ++i)
    if (relevant.count(ranked[static_cast<size_t>(i)])) ++hits;
  return hits;
}

}  // namespace

double precision_at_k(const std::vector<std::string>& ranked,
                      const std::set<std::string>& relevant, int k) {
  if (k < 1) throw ValidationError("k must be >= 1");
  int denom = std::min<int>(k, static_cast<int>(ranked.size()));
  if (denom == 0) return 0.0;
  return static_cast<double>(hits_in_top_k(ranked, relevant, k)) / denom;
}

double recall_at_k(const std::vector<std::string>& ranked, const std::set<std::string>& relevant,
                   int k) {
  if (k < 1) throw ValidationError("k must be >= 1");
  if (relevant.empty()) throw ValidationError("relevant set is empty");
  return static_cast<double>(hits_in_top_k(ranked, relevant, k)) /
         static_cast<double>(relevant.size());
}

double f1_at_k(const std::vector<std::string>& ranked, const std::set<std::string>& relevant,
               int k) {
  double p = precision_at_k(ranked, relevant, k);
  double r = recall_at_k(ranked, relevant, k);
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

double ndcg_at_k(const std::vector<std::string>& ranked, const std::set<std::string>& relevant,
                 int k) {
  if (k < 1) throw ValidationError("k must be >= 1");
  if (relevant.empty()) throw ValidationError("relevant set is empty");
  double dcg = 0.0;
  int n = std::min<int>(k, static_cast<int>(ranked.size()));
  for (int i = 0; i < n; ++i)
    if (relevant.count(ranked[static_cast<size_t>(i)])) dcg += 1.0 / std::log2(i + 2.0);
  double idcg = 0.0;
  int ideal = std::min<int>(k, static_cast<int>(relevant.size()));
  for (int i = 0; i < ideal; ++i) idcg += 1.0 / std::log2(i + 2.0);
  return idcg == 0.0 ? 0.0 : dcg / idcg;
}

BaselineKind baseline_from_string(const std::string& name) {
  std::string n = lowercase(name);
  if (n == "sd") return BaselineKind::SD;
  if (n == "te") return BaselineKind::TE;
  if (n == "st") return BaselineKind::ST;
  throw ValidationError("unknown baseline '" + name + "' (expected SD, TE, or ST)");
}

std::vector<std::string> run_baseline(BaselineKind kind, const ParsedQuery& parsed,
                                      const Corpus& corpus, const Embedder& embedder) {
  if (kind == BaselineKind::SD) {
    auto candidates = retrieve_sparse(parsed.query, corpus.index(), corpus);
    std::vector<std::string> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) out.push_back(c.poi_id);  // already distance-ordered
    return out;
  }

  EmbeddingVector vq = embedder.embed(parsed.query.raw_question);
  struct Scored {
    const PoiRecord* rec;
    double score;
  };
  std::vector<Scored> scored;
  scored.reserve(corpus.records().size());

  std::optional<CandidateQuery> plan;
  if (kind == BaselineKind::ST) plan = to_candidate_query(parsed.query);

  for (const auto& rec : corpus.records()) {
    double cos_score = cosine(vq, embedder.embed(Corpus::full_text(rec)));
    if (kind == BaselineKind::TE) {
      scored.push_back({&rec, cos_score});
    } else {
      double d = geo::distance_km(rec.geometry, plan->reference);
      double dist_score = 1.0 / (1.0 + d);
      scored.push_back({&rec, (dist_score + cos_score) / 2.0});
    }
  }
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.rec->id < b.rec->id;
  });
  std::vector<std::string> out;
  out.reserve(scored.size());
  for (const auto& s : scored) out.push_back(s.rec->id);
  return out;
}

MetricReport evaluate(const Ranker& ranker, const std::vector<QaPair>& qa_pairs,
                      const std::vector<int>& k_list, const std::string& config_fingerprint) {
  if (qa_pairs.empty()) throw ValidationError("QA set is empty");
  if (k_list.empty()) throw ValidationError("k list is empty");

  MetricReport report;
  report.k_list = k_list;
  report.config_fingerprint = config_fingerprint;

  static const char* kMetrics[] = {"precision", "recall", "f1", "ndcg"};
  for (const char* m : kMetrics)
    for (int k : k_list) report.macro[m][k] = 0.0;

  for (const auto& qa : qa_pairs) {
    std::vector<std::string> ranked = ranker(qa);
    std::set<std::string> relevant(qa.relevant_ids.begin(), qa.relevant_ids.end());

    MetricReport::PerQuery pq;
    pq.question = qa.question;
    pq.returned = ranked.size();
    for (int k : k_list) {
      pq.values["precision"][k] = precision_at_k(ranked, relevant, k);
      pq.values["recall"][k] = recall_at_k(ranked, relevant, k);
      pq.values["f1"][k] = f1_at_k(ranked, relevant, k);
      pq.values["ndcg"][k] = ndcg_at_k(ranked, relevant, k);
    }
    for (const char* m : kMetrics)
      for (int k : k_list) report.macro[m][k] += pq.values[m][k];
    report.per_query.push_back(std::move(pq));
  }
  for (const char* m : kMetrics)
    for (int k : k_list) report.macro[m][k] /= static_cast<double>(qa_pairs.size());
  return report;
}

nlohmann::json MetricReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["config_fingerprint"] = config_fingerprint;
  j["k"] = k_list;
  for (const auto& [metric, by_k] : macro)
    for (const auto& [k, v] : by_k) j["macro"][metric]["@" + std::to_string(k)] = v;
  nlohmann::json per = nlohmann::json::array();
  for (const auto& pq : per_query) {
    nlohmann::json q;
    q["question"] = pq.question;
    q["returned"] = pq.returned;
    for (const auto& [metric, by_k] : pq.values)
      for (const auto& [k, v] : by_k) q[metric]["@" + std::to_string(k)] = v;
    per.push_back(std::move(q));
  }
  j["per_query"] = std::move(per);
  return j;
}

std::string MetricReport::to_csv() const {
  std::string out = "metric,k,value\n";
  for (const auto& [metric, by_k] : macro)
    for (const auto& [k, v] : by_k)
      out += metric + "," + std::to_string(k) + "," + std::to_string(v) + "\n";
  return out;
}

}  // namespace georank
