#include "motkit/metrics.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "motkit/assignment.hpp"

namespace motkit {

namespace {

using IdBoxes = std::map<std::int64_t, TrackedBox>;

IdBoxes index_frame(const FrameObjects& frame, const char* what) {
  IdBoxes by_id;
  for (const TrackedBox& tb : frame) {
    if (!by_id.emplace(tb.id, tb).second)
      throw std::invalid_argument(std::string("evaluate: duplicate ") + what + " id in frame");
  }
  return by_id;
}

TrackingScores evaluate_core(const std::vector<FrameObjects>& gt,
                             const std::vector<FrameObjects>& pred, Real iou_gate) {
  TrackingScores s;
  Real iou_sum = 0;
  std::map<std::int64_t, std::int64_t> corr;  // gt id -> last matched pred id
  std::map<std::int64_t, long> present, covered;
  std::map<std::pair<std::int64_t, std::int64_t>, long> overlap_frames;
  std::set<std::int64_t> pred_ids_seen;

  for (std::size_t f = 0; f < gt.size(); ++f) {
    const IdBoxes gts = index_frame(gt[f], "ground-truth");
    const IdBoxes preds = index_frame(pred[f], "prediction");
    s.num_gt += static_cast<long>(gts.size());
    s.num_pred += static_cast<long>(preds.size());
    for (const auto& [pid, tb] : preds) pred_ids_seen.insert(pid);
    for (const auto& [gid, tb] : gts) present[gid] += 1;

    // Identity score bookkeeping: co-location counts for every valid pair.
    for (const auto& [gid, g] : gts)
      for (const auto& [pid, p] : preds)
        if (g.category == p.category && iou(g.box, p.box) >= iou_gate)
          overlap_frames[{gid, pid}] += 1;

    // 1. Keep still-valid correspondences from previous frames.
    std::map<std::int64_t, std::int64_t> matched;  // gt id -> pred id, this frame
    std::set<std::int64_t> used_pred;
    for (const auto& [gid, g] : gts) {
      const auto it = corr.find(gid);
      if (it == corr.end()) continue;
      const auto pit = preds.find(it->second);
      if (pit == preds.end() || used_pred.count(it->second)) continue;
      if (pit->second.category != g.category || iou(g.box, pit->second.box) < iou_gate) continue;
      matched[gid] = it->second;
      used_pred.insert(it->second);
      iou_sum += iou(g.box, pit->second.box);
    }

    // 2. Match the rest: most pairs first, then highest total overlap.
    std::vector<std::int64_t> free_gt, free_pred;
    for (const auto& [gid, g] : gts)
      if (!matched.count(gid)) free_gt.push_back(gid);
    for (const auto& [pid, p] : preds)
      if (!used_pred.count(pid)) free_pred.push_back(pid);
    if (!free_gt.empty() && !free_pred.empty()) {
      Matrix utility =
          Matrix::Constant(static_cast<int>(free_gt.size()), static_cast<int>(free_pred.size()),
                           kForbiddenPair);
      for (std::size_t i = 0; i < free_gt.size(); ++i) {
        const TrackedBox& g = gts.at(free_gt[i]);
        for (std::size_t j = 0; j < free_pred.size(); ++j) {
          const TrackedBox& p = preds.at(free_pred[j]);
          if (g.category != p.category) continue;
          const Real overlap = iou(g.box, p.box);
          if (overlap >= iou_gate) utility(static_cast<int>(i), static_cast<int>(j)) = overlap;
        }
      }
      const std::vector<int> pick = solve_max_cardinality_assignment(utility);
      for (std::size_t i = 0; i < free_gt.size(); ++i) {
        if (pick[i] < 0) continue;
        const std::int64_t gid = free_gt[i];
        const std::int64_t pid = free_pred[pick[i]];
        matched[gid] = pid;
        used_pred.insert(pid);
        iou_sum += utility(static_cast<int>(i), pick[i]);
        const auto it = corr.find(gid);
        if (it != corr.end() && it->second != pid) s.idsw += 1;
      }
    }

    for (const auto& [gid, pid] : matched) {
      corr[gid] = pid;
      covered[gid] += 1;
    }
    s.num_matches += static_cast<long>(matched.size());
    s.fp += static_cast<long>(preds.size() - matched.size());
    s.fn += static_cast<long>(gts.size() - matched.size());
  }

  for (const auto& [gid, n] : present) {
    const Real ratio = static_cast<Real>(covered[gid]) / static_cast<Real>(n);
    if (ratio >= 0.8) s.mt += 1;
    if (ratio <= 0.2) s.ml += 1;
  }

  const Real denom = static_cast<Real>(std::max<long>(1, s.num_gt));
  s.mota = 1.0 - static_cast<Real>(s.fp + s.fn + s.idsw) / denom;
  s.motp = s.num_matches > 0 ? iou_sum / static_cast<Real>(s.num_matches) : 0.0;

  // Identity score: one global trajectory-to-trajectory matching.
  std::vector<std::int64_t> gt_ids, pred_ids;
  for (const auto& [gid, n] : present) gt_ids.push_back(gid);
  pred_ids.assign(pred_ids_seen.begin(), pred_ids_seen.end());
  long idtp = 0;
  if (!gt_ids.empty() && !pred_ids.empty()) {
    Matrix weight = Matrix::Zero(static_cast<int>(gt_ids.size()), static_cast<int>(pred_ids.size()));
    for (std::size_t i = 0; i < gt_ids.size(); ++i)
      for (std::size_t j = 0; j < pred_ids.size(); ++j) {
        const auto it = overlap_frames.find({gt_ids[i], pred_ids[j]});
        if (it != overlap_frames.end())
          weight(static_cast<int>(i), static_cast<int>(j)) = static_cast<Real>(it->second);
      }
    const std::vector<int> pick = solve_max_assignment(weight);
    for (std::size_t i = 0; i < gt_ids.size(); ++i)
      if (pick[i] >= 0) idtp += static_cast<long>(weight(static_cast<int>(i), pick[i]));
  }
  s.idf1 = (s.num_gt + s.num_pred) > 0
               ? 2.0 * static_cast<Real>(idtp) / static_cast<Real>(s.num_gt + s.num_pred)
               : 1.0;
  return s;
}

FrameObjects filter_category(const FrameObjects& frame, int category) {
  FrameObjects out;
  for (const TrackedBox& tb : frame)
    if (tb.category == category) out.push_back(tb);
  return out;
}

}  // namespace

EvalReport evaluate(const std::vector<FrameObjects>& gt, const std::vector<FrameObjects>& pred,
                    Real iou_gate) {
  if (gt.size() != pred.size())
    throw std::invalid_argument("evaluate: ground truth and prediction frame counts differ");
  if (!(iou_gate > 0) || !(iou_gate <= 1))
    throw std::invalid_argument("evaluate: iou_gate must be in (0, 1]");

  EvalReport report;
  static_cast<TrackingScores&>(report) = evaluate_core(gt, pred, iou_gate);

  std::set<int> categories;
  for (const FrameObjects& frame : gt)
    for (const TrackedBox& tb : frame) categories.insert(tb.category);

  if (categories.empty()) {
    report.mmota = report.mota;
    report.midf1 = report.idf1;
    return report;
  }
  for (int c : categories) {
    std::vector<FrameObjects> gt_c(gt.size()), pred_c(pred.size());
    for (std::size_t f = 0; f < gt.size(); ++f) {
      gt_c[f] = filter_category(gt[f], c);
      pred_c[f] = filter_category(pred[f], c);
    }
    report.per_category[c] = evaluate_core(gt_c, pred_c, iou_gate);
    report.mmota += report.per_category[c].mota;
    report.midf1 += report.per_category[c].idf1;
  }
  report.mmota /= static_cast<Real>(categories.size());
  report.midf1 /= static_cast<Real>(categories.size());
  return report;
}

}  // namespace motkit
