#include "motkit/gradcheck.hpp"

#include <cmath>
#include <stdexcept>

namespace motkit {

void GradCheckReport::absorb(const GradCheckReport& other) {
  checks += other.checks;
  failures += other.failures;
  max_rel_error = std::max(max_rel_error, other.max_rel_error);
}

GradCheckReport check_gradient(const std::function<Real(const Matrix&)>& f, const Matrix& at,
                               const Matrix& analytic, Real step, Real rel_tol, Real abs_floor) {
  if (at.rows() != analytic.rows() || at.cols() != analytic.cols())
    throw std::invalid_argument("check_gradient: gradient shape mismatch");
  if (step <= 0 || rel_tol <= 0 || abs_floor <= 0)
    throw std::invalid_argument("check_gradient: step and tolerances must be positive");

  GradCheckReport report;
  Matrix x = at;
  for (int j = 0; j < at.cols(); ++j) {
    for (int i = 0; i < at.rows(); ++i) {
      const Real base = at(i, j);
      x(i, j) = base + step;
      const Real f_plus = f(x);
      x(i, j) = base - step;
      const Real f_minus = f(x);
      x(i, j) = base;

      const Real fd = (f_plus - f_minus) / (2 * step);
      const Real g = analytic(i, j);
      const Real err = std::abs(fd - g);
      const Real scale = std::max({std::abs(fd), std::abs(g), abs_floor / rel_tol});
      const Real rel = err / scale;
      report.checks += 1;
      report.max_rel_error = std::max(report.max_rel_error, rel);
      if (!(rel < rel_tol)) report.failures += 1;
    }
  }
  return report;
}

Real contrastive_value(ContrastiveKind kind, const ContrastiveInstance& inst) {
  switch (kind) {
    case ContrastiveKind::kSinglePositive:
      return loss_single_positive(inst).value;
    case ContrastiveKind::kMultiNaive:
      return loss_multi_naive(inst).value;
    case ContrastiveKind::kMultiPositive:
      return loss_multi_positive(inst).value;
  }
  throw std::invalid_argument("contrastive_value: unknown kind");
}

Matrix pack_instance(const ContrastiveInstance& inst) {
  const auto dim = inst.anchor.size();
  Matrix table(dim, 1 + inst.positives.size() + inst.negatives.size());
  table.col(0) = inst.anchor;
  int c = 1;
  for (const auto& p : inst.positives) table.col(c++) = p;
  for (const auto& n : inst.negatives) table.col(c++) = n;
  return table;
}

ContrastiveInstance unpack_instance(const Matrix& table, int num_positives) {
  if (table.cols() < 1 + num_positives)
    throw std::invalid_argument("unpack_instance: too few columns");
  ContrastiveInstance inst;
  inst.anchor = table.col(0);
  for (int p = 0; p < num_positives; ++p) inst.positives.push_back(table.col(1 + p));
  for (int i = 1 + num_positives; i < table.cols(); ++i) inst.negatives.push_back(table.col(i));
  return inst;
}

Matrix pack_gradients(const LossResult& res) {
  Matrix table(res.grad_anchor.size(),
               1 + res.grad_positives.size() + res.grad_negatives.size());
  table.col(0) = res.grad_anchor;
  int c = 1;
  for (const auto& p : res.grad_positives) table.col(c++) = p;
  for (const auto& n : res.grad_negatives) table.col(c++) = n;
  return table;
}

GradCheckReport check_contrastive_gradients(ContrastiveKind kind, const ContrastiveInstance& inst,
                                            Real step, Real rel_tol, Real abs_floor) {
  const int np = static_cast<int>(inst.positives.size());
  LossResult res;
  switch (kind) {
    case ContrastiveKind::kSinglePositive:
      res = loss_single_positive(inst);
      break;
    case ContrastiveKind::kMultiNaive:
      res = loss_multi_naive(inst);
      break;
    case ContrastiveKind::kMultiPositive:
      res = loss_multi_positive(inst);
      break;
  }
  const auto value = [kind, np](const Matrix& table) {
    return contrastive_value(kind, unpack_instance(table, np));
  };
  return check_gradient(value, pack_instance(inst), pack_gradients(res), step, rel_tol, abs_floor);
}

GradCheckReport check_aux_gradients(const Vector& a, const Vector& b, int target, Real step,
                                    Real rel_tol, Real abs_floor) {
  const AuxLossResult res = aux_loss(a, b, target);
  Matrix at(a.size(), 2);
  at.col(0) = a;
  at.col(1) = b;
  Matrix grad(a.size(), 2);
  grad.col(0) = res.grad_a;
  grad.col(1) = res.grad_b;
  const auto value = [target](const Matrix& table) {
    return aux_loss(table.col(0), table.col(1), target).value;
  };
  return check_gradient(value, at, grad, step, rel_tol, abs_floor);
}

ContrastiveInstance random_instance(std::mt19937_64& rng, int min_dim, int max_dim, int min_pos,
                                    int max_pos, int min_neg, int max_neg, Real scale) {
  if (min_dim < 1 || max_dim < min_dim || min_pos < 0 || max_pos < min_pos || min_neg < 0 ||
      max_neg < min_neg)
    throw std::invalid_argument("random_instance: bad bounds");
  std::uniform_int_distribution<int> dim_d(min_dim, max_dim);
  std::uniform_int_distribution<int> pos_d(min_pos, max_pos);
  std::uniform_int_distribution<int> neg_d(min_neg, max_neg);
  std::uniform_real_distribution<Real> comp(-scale, scale);

  const int dim = dim_d(rng);
  const int np = pos_d(rng);
  const int nn = neg_d(rng);
  const auto draw = [&]() {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = comp(rng);
    return v;
  };
  ContrastiveInstance inst;
  inst.anchor = draw();
  for (int p = 0; p < np; ++p) inst.positives.push_back(draw());
  for (int i = 0; i < nn; ++i) inst.negatives.push_back(draw());
  return inst;
}

}  // namespace motkit
