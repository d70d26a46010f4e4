#pragma once

#include <functional>
#include <random>

#include "motkit/embed_loss.hpp"
#include "motkit/types.hpp"

namespace motkit {

struct GradCheckReport {
  long checks = 0;
  long failures = 0;
  Real max_rel_error = 0;

  bool ok() const { return failures == 0; }
  void absorb(const GradCheckReport& other);
};

// Central finite differences over every entry of `at`, compared against the
// analytic gradient. An entry passes when
//   |fd - g| <= max(rel_tol * max(|fd|, |g|), abs_floor);
// max_rel_error reports |fd - g| / max(|fd|, |g|, abs_floor / rel_tol), so
// max_rel_error < rel_tol is exactly "no failures".
GradCheckReport check_gradient(const std::function<Real(const Matrix&)>& f, const Matrix& at,
                               const Matrix& analytic, Real step = 1e-5, Real rel_tol = 1e-5,
                               Real abs_floor = 1e-8);

// Loss value without gradients, dispatched on kind.
Real contrastive_value(ContrastiveKind kind, const ContrastiveInstance& inst);

// Table layout used to expose an instance to check_gradient: column 0 is the
// anchor, then positives, then negatives.
Matrix pack_instance(const ContrastiveInstance& inst);
ContrastiveInstance unpack_instance(const Matrix& table, int num_positives);
Matrix pack_gradients(const LossResult& res);

// End-to-end checks for one instance / one pair.
GradCheckReport check_contrastive_gradients(ContrastiveKind kind, const ContrastiveInstance& inst,
                                            Real step = 1e-5, Real rel_tol = 1e-5,
                                            Real abs_floor = 1e-8);
GradCheckReport check_aux_gradients(const Vector& a, const Vector& b, int target,
                                    Real step = 1e-5, Real rel_tol = 1e-5, Real abs_floor = 1e-8);

// Random instance with i.i.d. components uniform in [-scale, scale] and
// uniformly drawn dimension / positive / negative counts (inclusive bounds).
ContrastiveInstance random_instance(std::mt19937_64& rng, int min_dim, int max_dim, int min_pos,
                                    int max_pos, int min_neg, int max_neg, Real scale = 1.0);

}  // namespace motkit
