#include <cmath>
#include <cstdio>
#include <random>

#include "commands.hpp"
#include "motkit/association.hpp"
#include "motkit/gradcheck.hpp"

namespace motkit::cli {

namespace {

bool report_line(const char* name, bool pass, const char* detail_fmt, double a, double b) {
  std::printf("[%s] %s: ", pass ? "PASS" : "FAIL", name);
  std::printf(detail_fmt, a, b);
  std::printf("\n");
  return pass;
}

}  // namespace

int cmd_losscheck(const LosscheckArgs& args) {
  std::mt19937_64 rng(args.seed);
  bool all_pass = true;

  // 1. Finite-difference checks of every analytic gradient.
  GradCheckReport multi, naive, single, aux;
  for (int t = 0; t < args.trials; ++t) {
    const ContrastiveInstance inst = random_instance(rng, 2, 8, 1, 4, 0, 12);
    multi.absorb(check_contrastive_gradients(ContrastiveKind::kMultiPositive, inst));
    naive.absorb(check_contrastive_gradients(ContrastiveKind::kMultiNaive, inst));

    ContrastiveInstance one = inst;
    one.positives.resize(1);
    single.absorb(check_contrastive_gradients(ContrastiveKind::kSinglePositive, one));

    const int target = static_cast<int>(rng() & 1);
    aux.absorb(check_aux_gradients(inst.anchor, inst.positives[0], target));
  }
  all_pass &= report_line("multi-positive gradients", multi.ok(),
                          "%.0f entries, max rel err %.2e", static_cast<double>(multi.checks),
                          multi.max_rel_error);
  all_pass &= report_line("summed-positive gradients", naive.ok(),
                          "%.0f entries, max rel err %.2e", static_cast<double>(naive.checks),
                          naive.max_rel_error);
  all_pass &= report_line("single-positive gradients", single.ok(),
                          "%.0f entries, max rel err %.2e", static_cast<double>(single.checks),
                          single.max_rel_error);
  all_pass &= report_line("match-target gradients", aux.ok(), "%.0f entries, max rel err %.2e",
                          static_cast<double>(aux.checks), aux.max_rel_error);

  // 2. The summed form with one positive must equal the single-positive form.
  double max_diff = 0;
  for (int t = 0; t < args.trials; ++t) {
    const ContrastiveInstance inst = random_instance(rng, 2, 8, 1, 1, 0, 12);
    const LossResult a = loss_single_positive(inst);
    const LossResult b = loss_multi_naive(inst);
    max_diff = std::max(max_diff, std::abs(a.value - b.value));
  }
  all_pass &= report_line("one-positive equivalence", max_diff < 1e-12,
                          "max value diff %.2e over %.0f instances", max_diff,
                          static_cast<double>(args.trials));

  // 3. Extreme logits must stay finite (values and gradients).
  {
    ContrastiveInstance hot;
    hot.anchor = Vector::Constant(4, 50.0);
    hot.positives = {Vector::Constant(4, -50.0)};
    hot.negatives = {Vector::Constant(4, 50.0), Vector::Constant(4, -50.0)};
    const LossResult lm = loss_multi_positive(hot);
    const LossResult ls = loss_single_positive(hot);
    bool finite = std::isfinite(lm.value) && std::isfinite(ls.value) &&
                  lm.grad_anchor.allFinite() && ls.grad_anchor.allFinite();
    Matrix logits(2, 2);
    logits << 1e4, -1e4, -1e4, 1e4;
    const Matrix f = bisoftmax_from_logits(logits);
    finite = finite && f.allFinite() && std::abs(f.row(0).sum() - 1.0) < 1e-9;
    all_pass &= report_line("extreme-logit stability", finite, "peak |logit| %.0f, scores ok %.0f",
                            2e4, finite ? 1.0 : 0.0);
  }

  // 4. Optional self-test: a deliberately wrong gradient must be rejected.
  if (args.inject_bug) {
    const ContrastiveInstance inst = random_instance(rng, 4, 4, 2, 2, 6, 6);
    LossResult res = loss_multi_positive(inst);
    res.grad_anchor[0] += 1e-3;
    const auto value = [](const Matrix& table) {
      return contrastive_value(ContrastiveKind::kMultiPositive, unpack_instance(table, 2));
    };
    const GradCheckReport rep =
        check_gradient(value, pack_instance(inst), pack_gradients(res));
    all_pass &= report_line("fault injection", !rep.ok(),
                            "checker flagged %.0f of %.0f entries",
                            static_cast<double>(rep.failures), static_cast<double>(rep.checks));
  }

  return all_pass ? 0 : 3;
}

}  // namespace motkit::cli
