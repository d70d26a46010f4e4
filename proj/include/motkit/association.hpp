#pragma once

#include <vector>

#include "motkit/types.hpp"

namespace motkit {

// Pairwise similarity between detections (rows) and candidates (columns).
struct SimilarityMatrix {
  Matrix scores;
};

struct MatchedPair {
  int det = -1;
  int candidate = -1;
  Real score = 0;
};

struct Assignment {
  std::vector<MatchedPair> matches;        // ascending det index
  std::vector<int> unmatched_dets;         // ascending
  std::vector<int> unmatched_candidates;   // ascending
};

// Row-wise / column-wise stable softmax of a logit matrix.
Matrix softmax_rows(const Matrix& logits);
Matrix softmax_cols(const Matrix& logits);

// Mean of the row-wise and column-wise softmax: each entry is the average of
// "how strongly detection i picks candidate j" and "how strongly candidate j
// picks detection i".
Matrix bisoftmax_from_logits(const Matrix& logits);

// Embeddings are passed one per column (dim x count). Logits are plain dot
// products; the bi-directional softmax above turns them into match scores.
SimilarityMatrix bisoftmax(const Matrix& det_embeddings, const Matrix& cand_embeddings);

// Cosine similarity baseline on the same layout. All embeddings must be
// nonzero.
SimilarityMatrix cosine_matrix(const Matrix& det_embeddings, const Matrix& cand_embeddings);

// Detections in descending-score order each claim the still-free candidate of
// the same category with the highest similarity, provided it exceeds
// match_threshold. Ties prefer the lower index on both sides.
Assignment greedy_assign(const SimilarityMatrix& sim, const std::vector<Real>& det_scores,
                         const std::vector<int>& det_categories,
                         const std::vector<int>& cand_categories, Real match_threshold);

// Globally optimal alternative: maximise the number of matches, then the
// total similarity, over pairs that share a category and exceed
// match_threshold. Similarities must lie in [-1, 1].
Assignment hungarian_assign(const SimilarityMatrix& sim, const std::vector<Real>& det_scores,
                            const std::vector<int>& det_categories,
                            const std::vector<int>& cand_categories, Real match_threshold);

}  // namespace motkit
