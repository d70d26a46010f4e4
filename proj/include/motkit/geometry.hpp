#pragma once

#include <cstdint>
#include <vector>

#include "motkit/types.hpp"

namespace motkit {

// Axis-aligned box: top-left corner plus width/height, matching the column
// order of the result files (x, y, w, h).
struct BoundingBox {
  Real x = 0;
  Real y = 0;
  Real w = 0;
  Real h = 0;

  Real area() const { return w * h; }
  Real right() const { return x + w; }
  Real bottom() const { return y + h; }
  Real cx() const { return x + w / 2; }
  Real cy() const { return y + h / 2; }
  bool valid() const { return w > 0 && h > 0; }
};

struct Detection {
  BoundingBox box;
  Real score = 0;  // confidence in [0, 1]
  int category = 0;
  Vector embedding;  // size 0 when the producer attached none
  // Generating ground-truth identity for synthetic data; -1 = clutter/unknown.
  std::int64_t source_id = -1;

  bool has_embedding() const { return embedding.size() > 0; }
};

Real iou(const BoundingBox& a, const BoundingBox& b);

// Greedy score-descending suppression, applied independently per category.
// Returns indices of kept detections in descending-score order.
std::vector<int> nms(const std::vector<Detection>& dets, Real iou_threshold);

// Category-blind greedy suppression used to drop duplicate boxes that
// different category heads produced for the same object. A candidate is
// removed when it overlaps an already kept box beyond a confidence-dependent
// gate: IoU > 0.7 for candidates scoring above 0.5, IoU > 0.3 otherwise.
// Returns indices of kept detections in descending-score order.
std::vector<int> remove_inter_class_duplicates(const std::vector<Detection>& dets);

}  // namespace motkit
