#pragma once

#include <string>
#include <vector>

#include "georank/corpus.hpp"
#include "georank/embedding.hpp"
#include "georank/query.hpp"

namespace georank {

/// Per-candidate score record. f_sparse follows the piecewise law
/// (1 on intersection, 1/(1+d_km) otherwise); the dense scores are cosine
/// similarities of masked-view embeddings.
struct CandidateScores {
  std::string poi_id;
  double f_sparse = 0.0;
  double f_dense_spatial = 0.0;
  double f_semantic = 0.0;
  double distance_km = 0.0;
  bool intersects_reference = false;  // which branch produced f_sparse
};

/// Execute the spatial candidate query and fill f_sparse + distance for every
/// member of the candidate set. Result sorted by ascending distance, then id.
std::vector<CandidateScores> retrieve_sparse(const SpatialQuery& sq, const SpatialIndex& index,
                                             const Corpus& corpus);

/// Fill f_dense_spatial = cos(embed(spatial view of question), stored spatial
/// vector) for each candidate.
void score_dense_spatial(const std::string& question, std::vector<CandidateScores>& candidates,
                         const Corpus& corpus, const Embedder& embedder,
                         const text::MaskingView& masker);

/// Apply the semantic candidate filter (category must match the intent when
/// one is set) and fill f_semantic = cos(embed(semantic view of question),
/// stored semantic vector). Returns the filtered list.
std::vector<CandidateScores> score_semantic(const std::string& question,
                                            std::vector<CandidateScores> candidates,
                                            const QueryIntent& intent, const Corpus& corpus,
                                            const Embedder& embedder,
                                            const text::MaskingView& masker);

/// Hybrid spatial score: lambda_p * f_sparse + lambda_d * f_dense.
/// Throws ValidationError on negative weights or when both are zero.
double fuse_spatial(double f_sparse, double f_dense, double lambda_p, double lambda_d);

}  // namespace georank
