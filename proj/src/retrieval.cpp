#include "georank/retrieval.hpp"

#include <algorithm>

#include "georank/categories.hpp"

namespace georank {

std::vector<CandidateScores> retrieve_sparse(const SpatialQuery& sq, const SpatialIndex& index,
                                             const Corpus& corpus) {
  CandidateQuery plan = to_candidate_query(sq);

  std::vector<std::string> ids;
  if (plan.mode == CandidateQuery::Mode::Contained) {
    ids = index.query_contained(plan.reference, plan.category);
  } else {
    ids = index.query_within_distance(plan.reference, plan.eps_km, plan.category);
  }

  std::vector<CandidateScores> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    const PoiRecord* rec = corpus.find_by_id(id);
    if (!rec) throw NotFoundError("index returned id not present in corpus: " + id);
    CandidateScores cs;
    cs.poi_id = id;
    if (plan.mode == CandidateQuery::Mode::Contained) {
      // Containment implies intersection with the region.
      cs.distance_km = 0.0;
    } else {
      cs.distance_km = geo::distance_km(rec->geometry, plan.reference);
    }
    cs.intersects_reference = cs.distance_km == 0.0;
    cs.f_sparse = cs.intersects_reference ? 1.0 : 1.0 / (1.0 + cs.distance_km);
    out.push_back(std::move(cs));
  }
  std::sort(out.begin(), out.end(), [](const CandidateScores& a, const CandidateScores& b) {
    if (a.distance_km != b.distance_km) return a.distance_km < b.distance_km;
    return a.poi_id < b.poi_id;
  });
  return out;
}

void score_dense_spatial(const std::string& question, std::vector<CandidateScores>& candidates,
                         const Corpus& corpus, const Embedder& embedder,
                         const text::MaskingView& masker) {
  EmbeddingVector vq = embedder.embed(masker.spatial_view(question));
  for (auto& cs : candidates) {
    const PoiRecord* rec = corpus.find_by_id(cs.poi_id);
    if (!rec) throw NotFoundError("candidate id not present in corpus: " + cs.poi_id);
    cs.f_dense_spatial = cosine(vq, rec->spatial_vec);
  }
}

std::vector<CandidateScores> score_semantic(const std::string& question,
                                            std::vector<CandidateScores> candidates,
                                            const QueryIntent& intent, const Corpus& corpus,
                                            const Embedder& embedder,
                                            const text::MaskingView& masker) {
  EmbeddingVector vq = embedder.embed(masker.semantic_view(question));
  std::vector<CandidateScores> kept;
  kept.reserve(candidates.size());
  for (auto& cs : candidates) {
    const PoiRecord* rec = corpus.find_by_id(cs.poi_id);
    if (!rec) throw NotFoundError("candidate id not present in corpus: " + cs.poi_id);
    if (!intent.target_category.empty() &&
        !category_matches(intent.target_category, rec->category))
      continue;
    cs.f_semantic = cosine(vq, rec->semantic_vec);
    kept.push_back(std::move(cs));
  }
  return kept;
}

double fuse_spatial(double f_sparse, double f_dense, double lambda_p, double lambda_d) {
  if (lambda_p < 0.0 || lambda_d < 0.0)
    throw ValidationError("fusion weights must be non-negative");
  if (lambda_p == 0.0 && lambda_d == 0.0)
    throw ValidationError("at least one fusion weight must be positive");
  return lambda_p * f_sparse + lambda_d * f_dense;
}

}  // namespace georank
