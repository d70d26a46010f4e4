#include "motkit/association.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "motkit/assignment.hpp"

namespace motkit {

Matrix softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (int i = 0; i < logits.rows(); ++i) {
    const Real m = logits.row(i).maxCoeff();
    const auto e = (logits.row(i).array() - m).exp();
    out.row(i) = e / e.sum();
  }
  return out;
}

Matrix softmax_cols(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (int j = 0; j < logits.cols(); ++j) {
    const Real m = logits.col(j).maxCoeff();
    const auto e = (logits.col(j).array() - m).exp();
    out.col(j) = e / e.sum();
  }
  return out;
}

Matrix bisoftmax_from_logits(const Matrix& logits) {
  if (logits.rows() == 0 || logits.cols() == 0) return Matrix(logits.rows(), logits.cols());
  return 0.5 * (softmax_rows(logits) + softmax_cols(logits));
}

namespace {

void check_embedding_shapes(const Matrix& dets, const Matrix& cands) {
  if (dets.cols() > 0 && cands.cols() > 0 && dets.rows() != cands.rows())
    throw std::invalid_argument("association: embedding dimension mismatch");
}

}  // namespace

SimilarityMatrix bisoftmax(const Matrix& det_embeddings, const Matrix& cand_embeddings) {
  check_embedding_shapes(det_embeddings, cand_embeddings);
  if (det_embeddings.cols() == 0 || cand_embeddings.cols() == 0)
    return {Matrix(det_embeddings.cols(), cand_embeddings.cols())};
  return {bisoftmax_from_logits(det_embeddings.transpose() * cand_embeddings)};
}

SimilarityMatrix cosine_matrix(const Matrix& det_embeddings, const Matrix& cand_embeddings) {
  check_embedding_shapes(det_embeddings, cand_embeddings);
  if (det_embeddings.cols() == 0 || cand_embeddings.cols() == 0)
    return {Matrix(det_embeddings.cols(), cand_embeddings.cols())};
  auto normalized = [](const Matrix& e) {
    Matrix n = e;
    for (int j = 0; j < n.cols(); ++j) {
      const Real norm = n.col(j).norm();
      if (norm == 0) throw std::invalid_argument("cosine_matrix: zero embedding");
      n.col(j) /= norm;
    }
    return n;
  };
  return {normalized(det_embeddings).transpose() * normalized(cand_embeddings)};
}

namespace {

void check_assign_inputs(const SimilarityMatrix& sim, const std::vector<Real>& det_scores,
                         const std::vector<int>& det_categories,
                         const std::vector<int>& cand_categories) {
  const auto n = static_cast<std::size_t>(sim.scores.rows());
  const auto m = static_cast<std::size_t>(sim.scores.cols());
  if (det_scores.size() != n || det_categories.size() != n || cand_categories.size() != m)
    throw std::invalid_argument("assign: similarity shape does not match labels");
}

Assignment finalize(const SimilarityMatrix& sim, std::vector<int>& det_to_cand) {
  Assignment out;
  const int m = static_cast<int>(sim.scores.cols());
  std::vector<bool> cand_taken(m, false);
  for (int i = 0; i < static_cast<int>(det_to_cand.size()); ++i) {
    const int j = det_to_cand[i];
    if (j >= 0) {
      out.matches.push_back({i, j, sim.scores(i, j)});
      cand_taken[j] = true;
    } else {
      out.unmatched_dets.push_back(i);
    }
  }
  for (int j = 0; j < m; ++j)
    if (!cand_taken[j]) out.unmatched_candidates.push_back(j);
  return out;
}

}  // namespace

Assignment greedy_assign(const SimilarityMatrix& sim, const std::vector<Real>& det_scores,
                         const std::vector<int>& det_categories,
                         const std::vector<int>& cand_categories, Real match_threshold) {
  check_assign_inputs(sim, det_scores, det_categories, cand_categories);
  const int n = static_cast<int>(sim.scores.rows());
  const int m = static_cast<int>(sim.scores.cols());

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return det_scores[a] > det_scores[b]; });

  std::vector<int> det_to_cand(n, -1);
  std::vector<bool> taken(m, false);
  for (int i : order) {
    int best = -1;
    Real best_score = match_threshold;
    for (int j = 0; j < m; ++j) {
      if (taken[j] || cand_categories[j] != det_categories[i]) continue;
      if (sim.scores(i, j) > best_score) {
        best_score = sim.scores(i, j);
        best = j;
      }
    }
    if (best >= 0) {
      det_to_cand[i] = best;
      taken[best] = true;
    }
  }
  return finalize(sim, det_to_cand);
}

Assignment hungarian_assign(const SimilarityMatrix& sim, const std::vector<Real>& det_scores,
                            const std::vector<int>& det_categories,
                            const std::vector<int>& cand_categories, Real match_threshold) {
  check_assign_inputs(sim, det_scores, det_categories, cand_categories);
  const int n = static_cast<int>(sim.scores.rows());
  const int m = static_cast<int>(sim.scores.cols());

  Matrix utility = Matrix::Constant(n, m, kForbiddenPair);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const Real s = sim.scores(i, j);
      if (cand_categories[j] != det_categories[i] || !(s > match_threshold)) continue;
      if (s < -1.000001 || s > 1.000001)
        throw std::invalid_argument("hungarian_assign: similarity outside [-1, 1]");
      // Map [-1, 1] onto [0, 1]; monotone, so the optimum is unchanged.
      utility(i, j) = std::clamp((s + 1) / 2, Real(0), Real(1));
    }
  }
  std::vector<int> det_to_cand = solve_max_cardinality_assignment(utility);
  return finalize(sim, det_to_cand);
}

}  // namespace motkit
