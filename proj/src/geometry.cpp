#include "motkit/geometry.hpp"

#include <algorithm>
#include <numeric>

namespace motkit {

Real iou(const BoundingBox& a, const BoundingBox& b) {
  if (!a.valid() || !b.valid()) return 0;
  const Real ix = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const Real iy = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (ix <= 0 || iy <= 0) return 0;
  const Real inter = ix * iy;
  // Rounding can push the ratio a few ulps past 1; the true value never is.
  return std::min(Real(1), inter / (a.area() + b.area() - inter));
}

namespace {

// Indices sorted by descending score; ties keep the lower input index first.
std::vector<int> score_order(const std::vector<Detection>& dets) {
  std::vector<int> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return dets[a].score > dets[b].score; });
  return order;
}

}  // namespace

std::vector<int> nms(const std::vector<Detection>& dets, Real iou_threshold) {
  std::vector<int> kept;
  for (int i : score_order(dets)) {
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](int k) {
      return dets[k].category == dets[i].category &&
             iou(dets[k].box, dets[i].box) > iou_threshold;
    });
    if (!suppressed) kept.push_back(i);
  }
  return kept;
}

std::vector<int> remove_inter_class_duplicates(const std::vector<Detection>& dets) {
  std::vector<int> kept;
  for (int i : score_order(dets)) {
    const Real gate = dets[i].score > 0.5 ? 0.7 : 0.3;
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](int k) {
      return iou(dets[k].box, dets[i].box) > gate;
    });
    if (!suppressed) kept.push_back(i);
  }
  return kept;
}

}  // namespace motkit
