#pragma once

#include <vector>

#include "motkit/types.hpp"

namespace motkit {

// One anchor embedding together with its positive and negative targets.
struct ContrastiveInstance {
  Vector anchor;
  std::vector<Vector> positives;
  std::vector<Vector> negatives;
};

struct LossResult {
  Real value = 0;
  Vector grad_anchor;
  std::vector<Vector> grad_positives;
  std::vector<Vector> grad_negatives;
};

struct AuxLossResult {
  Real value = 0;
  Vector grad_a;
  Vector grad_b;
};

enum class ContrastiveKind { kSinglePositive, kMultiNaive, kMultiPositive };

// Cross-entropy of a non-parametric softmax over {one positive, all
// negatives}, equivalently log(1 + sum_i exp(v.n_i - v.k)). Requires exactly
// one positive. With no negatives the loss and all gradients are exactly 0.
LossResult loss_single_positive(const ContrastiveInstance& inst);

// Sum of the single-positive loss over each positive in turn, i.e. every
// positive is contrasted against all negatives independently.
LossResult loss_multi_naive(const ContrastiveInstance& inst);

// Joint multi-positive form log(1 + sum_p sum_i exp(v.n_i - v.k_p)), which
// couples all positives inside one log instead of summing separate terms.
LossResult loss_multi_positive(const ContrastiveInstance& inst);

// Squared error between the cosine similarity of the two embeddings and a
// 0/1 match target. Both vectors must be nonzero.
AuxLossResult aux_loss(const Vector& a, const Vector& b, int match_target);

// Index-based views into a shared embedding table (one column per slot).
struct InstanceRefs {
  int anchor = -1;
  std::vector<int> positives;
  std::vector<int> negatives;
};

struct AuxPairRef {
  int a = -1;
  int b = -1;
  int target = 0;  // 1 = same identity, 0 = different
};

struct BatchObjective {
  Real value = 0;
  Matrix grad;  // same shape as the table, one gradient column per slot
};

// gamma_embed * mean(contrastive over instances) + gamma_aux * mean(aux over
// pairs), with gradients accumulated per table column. kSinglePositive keeps
// only the first listed positive of each instance.
BatchObjective batch_embedding_objective(const Matrix& embeddings,
                                         const std::vector<InstanceRefs>& instances,
                                         const std::vector<AuxPairRef>& aux_pairs,
                                         Real gamma_embed = 0.25, Real gamma_aux = 1.0,
                                         ContrastiveKind kind = ContrastiveKind::kMultiPositive);

}  // namespace motkit
