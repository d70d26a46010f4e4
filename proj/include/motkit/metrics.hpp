#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "motkit/geometry.hpp"

namespace motkit {

struct TrackedBox {
  std::int64_t id = 0;
  int category = 0;
  BoundingBox box;
};

// One entry per frame; frame i of the sequence is element i.
using FrameObjects = std::vector<TrackedBox>;

struct TrackingScores {
  Real mota = 0;
  Real motp = 0;  // mean overlap of matched pairs
  Real idf1 = 0;
  long fp = 0;
  long fn = 0;
  long idsw = 0;
  int mt = 0;  // trajectories covered on >= 80% of their frames
  int ml = 0;  // trajectories covered on <= 20% of their frames
  long num_gt = 0;
  long num_pred = 0;
  long num_matches = 0;
};

struct EvalReport : TrackingScores {
  Real mmota = 0;  // mean of per-category mota
  Real midf1 = 0;  // mean of per-category idf1
  std::map<int, TrackingScores> per_category;
};

// Frame-by-frame evaluation. Correspondences require equal categories and
// overlap >= iou_gate; last frame's correspondences persist while they stay
// valid, remaining objects are matched per frame by maximum cardinality then
// maximum total overlap. An id switch is counted when a ground truth matches
// a different prediction than the last one it was ever matched to, however
// long ago that was. The identity score matches whole trajectories globally.
// Both sequences must have the same number of frames; ids must be unique
// within a frame. With an empty ground truth, mota uses denominator 1 and the
// per-category means fall back to the global values.
EvalReport evaluate(const std::vector<FrameObjects>& gt, const std::vector<FrameObjects>& pred,
                    Real iou_gate = 0.5);

}  // namespace motkit
