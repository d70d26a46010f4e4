#include <cstdio>
#include <iostream>

#include "commands.hpp"
#include "motkit/io.hpp"
#include "motkit/metrics.hpp"

namespace motkit::cli {

int cmd_eval(const EvalArgs& args) {
  const MotSequence gt_seq = read_mot(args.gt_path);
  const MotSequence pred_seq = read_mot(args.pred_path);
  if (pred_seq.num_frames > gt_seq.num_frames)
    throw std::runtime_error(args.pred_path + ": predictions extend past the ground truth");

  const auto gt = mot_to_frames(gt_seq);
  const auto pred = mot_to_frames(pred_seq, gt_seq.num_frames);
  const EvalReport r = evaluate(gt, pred, args.iou_gate);

  std::printf("num_frames=%d\n", gt_seq.num_frames);
  std::printf("num_gt=%ld\n", r.num_gt);
  std::printf("num_pred=%ld\n", r.num_pred);
  std::printf("mota=%.6f\n", r.mota);
  std::printf("motp=%.6f\n", r.motp);
  std::printf("idf1=%.6f\n", r.idf1);
  std::printf("mmota=%.6f\n", r.mmota);
  std::printf("midf1=%.6f\n", r.midf1);
  std::printf("fp=%ld\n", r.fp);
  std::printf("fn=%ld\n", r.fn);
  std::printf("idsw=%ld\n", r.idsw);
  std::printf("mt=%d\n", r.mt);
  std::printf("ml=%d\n", r.ml);

  if (!r.per_category.empty()) {
    std::printf("\n%-10s %8s %8s %8s %8s %8s %6s %6s %6s %4s %4s\n", "category", "mota", "motp",
                "idf1", "gt", "pred", "fp", "fn", "idsw", "mt", "ml");
    for (const auto& [cat, s] : r.per_category) {
      std::printf("%-10d %8.4f %8.4f %8.4f %8ld %8ld %6ld %6ld %6ld %4d %4d\n", cat, s.mota,
                  s.motp, s.idf1, s.num_gt, s.num_pred, s.fp, s.fn, s.idsw, s.mt, s.ml);
    }
  }
  return 0;
}

}  // namespace motkit::cli
