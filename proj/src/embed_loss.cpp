#include "motkit/embed_loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace motkit {

namespace {

void check_instance(const ContrastiveInstance& inst) {
  const auto dim = inst.anchor.size();
  if (dim == 0) throw std::invalid_argument("contrastive: empty anchor");
  for (const auto& p : inst.positives)
    if (p.size() != dim) throw std::invalid_argument("contrastive: positive dimension mismatch");
  for (const auto& n : inst.negatives)
    if (n.size() != dim) throw std::invalid_argument("contrastive: negative dimension mismatch");
}

LossResult zero_result(const ContrastiveInstance& inst) {
  LossResult res;
  res.grad_anchor = Vector::Zero(inst.anchor.size());
  res.grad_positives.assign(inst.positives.size(), Vector::Zero(inst.anchor.size()));
  res.grad_negatives.assign(inst.negatives.size(), Vector::Zero(inst.anchor.size()));
  return res;
}

}  // namespace

LossResult loss_single_positive(const ContrastiveInstance& inst) {
  check_instance(inst);
  if (inst.positives.size() != 1)
    throw std::invalid_argument("loss_single_positive: exactly one positive required");

  LossResult res = zero_result(inst);
  const Vector& v = inst.anchor;
  const Vector& pos = inst.positives[0];
  const int nn = static_cast<int>(inst.negatives.size());
  if (nn == 0) return res;  // softmax over {positive} alone is exact

  const Real zp = v.dot(pos);
  Vector zn(nn);
  for (int i = 0; i < nn; ++i) zn[i] = v.dot(inst.negatives[i]);

  // Stable softmax over {zp, zn...}: subtract the running maximum.
  const Real m = std::max(zp, zn.maxCoeff());
  const Real ep = std::exp(zp - m);
  const Vector en = (zn.array() - m).exp();
  const Real total = ep + en.sum();
  res.value = std::log(total) + m - zp;

  const Real pp = ep / total;
  res.grad_anchor = (pp - 1) * pos;
  for (int i = 0; i < nn; ++i) {
    const Real pi = en[i] / total;
    res.grad_anchor += pi * inst.negatives[i];
    res.grad_negatives[i] = pi * v;
  }
  res.grad_positives[0] = (pp - 1) * v;
  return res;
}

LossResult loss_multi_naive(const ContrastiveInstance& inst) {
  check_instance(inst);
  if (inst.positives.empty())
    throw std::invalid_argument("loss_multi_naive: at least one positive required");

  LossResult res = zero_result(inst);
  for (std::size_t p = 0; p < inst.positives.size(); ++p) {
    ContrastiveInstance one{inst.anchor, {inst.positives[p]}, inst.negatives};
    const LossResult term = loss_single_positive(one);
    res.value += term.value;
    res.grad_anchor += term.grad_anchor;
    res.grad_positives[p] = term.grad_positives[0];
    for (std::size_t i = 0; i < inst.negatives.size(); ++i)
      res.grad_negatives[i] += term.grad_negatives[i];
  }
  return res;
}

LossResult loss_multi_positive(const ContrastiveInstance& inst) {
  check_instance(inst);
  if (inst.positives.empty())
    throw std::invalid_argument("loss_multi_positive: at least one positive required");

  LossResult res = zero_result(inst);
  const Vector& v = inst.anchor;
  const int np = static_cast<int>(inst.positives.size());
  const int nn = static_cast<int>(inst.negatives.size());
  if (nn == 0) return res;  // log(1 + empty sum) = 0 exactly

  Vector zp(np), zn(nn);
  for (int p = 0; p < np; ++p) zp[p] = v.dot(inst.positives[p]);
  for (int i = 0; i < nn; ++i) zn[i] = v.dot(inst.negatives[i]);

  // L = log(1 + sum_{p,i} exp(zn_i - zp_p)); the implicit exp(0) of the
  // leading 1 joins the max-subtraction so huge logits cannot overflow.
  const Real d_max = zn.maxCoeff() - zp.minCoeff();
  const Real m = std::max(Real(0), d_max);
  Real total = std::exp(-m);
  Matrix w(np, nn);
  for (int p = 0; p < np; ++p)
    for (int i = 0; i < nn; ++i) {
      w(p, i) = std::exp(zn[i] - zp[p] - m);
      total += w(p, i);
    }
  res.value = std::log(total) + m;

  w /= total;  // w(p,i) = softmax weight of the (p,i) difference term
  const Vector w_pos = w.rowwise().sum();
  const Vector w_neg = w.colwise().sum().transpose();
  for (int p = 0; p < np; ++p) {
    res.grad_anchor -= w_pos[p] * inst.positives[p];
    res.grad_positives[p] = -w_pos[p] * v;
  }
  for (int i = 0; i < nn; ++i) {
    res.grad_anchor += w_neg[i] * inst.negatives[i];
    res.grad_negatives[i] = w_neg[i] * v;
  }
  return res;
}

AuxLossResult aux_loss(const Vector& a, const Vector& b, int match_target) {
  if (a.size() == 0 || a.size() != b.size())
    throw std::invalid_argument("aux_loss: dimension mismatch");
  if (match_target != 0 && match_target != 1)
    throw std::invalid_argument("aux_loss: target must be 0 or 1");
  const Real na = a.norm();
  const Real nb = b.norm();
  if (na == 0 || nb == 0) throw std::invalid_argument("aux_loss: zero vector");

  const Real cos = a.dot(b) / (na * nb);
  const Real err = cos - match_target;
  AuxLossResult res;
  res.value = err * err;
  res.grad_a = 2 * err * (b / (na * nb) - (cos / (na * na)) * a);
  res.grad_b = 2 * err * (a / (na * nb) - (cos / (nb * nb)) * b);
  return res;
}

BatchObjective batch_embedding_objective(const Matrix& embeddings,
                                         const std::vector<InstanceRefs>& instances,
                                         const std::vector<AuxPairRef>& aux_pairs,
                                         Real gamma_embed, Real gamma_aux,
                                         ContrastiveKind kind) {
  if (instances.empty())
    throw std::invalid_argument("batch_embedding_objective: no instances");
  const int slots = static_cast<int>(embeddings.cols());
  auto checked = [&](int idx) -> int {
    if (idx < 0 || idx >= slots)
      throw std::out_of_range("batch_embedding_objective: slot index out of range");
    return idx;
  };

  BatchObjective out;
  out.grad = Matrix::Zero(embeddings.rows(), embeddings.cols());

  const Real inst_w = gamma_embed / static_cast<Real>(instances.size());
  for (const InstanceRefs& refs : instances) {
    ContrastiveInstance inst;
    inst.anchor = embeddings.col(checked(refs.anchor));
    if (refs.positives.empty())
      throw std::invalid_argument("batch_embedding_objective: instance without positives");
    const std::size_t npos =
        kind == ContrastiveKind::kSinglePositive ? 1 : refs.positives.size();
    for (std::size_t p = 0; p < npos; ++p)
      inst.positives.push_back(embeddings.col(checked(refs.positives[p])));
    for (int idx : refs.negatives) inst.negatives.push_back(embeddings.col(checked(idx)));

    const LossResult res = kind == ContrastiveKind::kMultiNaive ? loss_multi_naive(inst)
                           : kind == ContrastiveKind::kMultiPositive
                               ? loss_multi_positive(inst)
                               : loss_single_positive(inst);
    out.value += inst_w * res.value;
    out.grad.col(refs.anchor) += inst_w * res.grad_anchor;
    for (std::size_t p = 0; p < npos; ++p)
      out.grad.col(refs.positives[p]) += inst_w * res.grad_positives[p];
    for (std::size_t i = 0; i < refs.negatives.size(); ++i)
      out.grad.col(refs.negatives[i]) += inst_w * res.grad_negatives[i];
  }

  if (!aux_pairs.empty()) {
    const Real aux_w = gamma_aux / static_cast<Real>(aux_pairs.size());
    for (const AuxPairRef& pair : aux_pairs) {
      const AuxLossResult res =
          aux_loss(embeddings.col(checked(pair.a)), embeddings.col(checked(pair.b)), pair.target);
      out.value += aux_w * res.value;
      out.grad.col(pair.a) += aux_w * res.grad_a;
      out.grad.col(pair.b) += aux_w * res.grad_b;
    }
  }
  return out;
}

}  // namespace motkit
