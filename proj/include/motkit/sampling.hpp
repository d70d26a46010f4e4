#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "motkit/geometry.hpp"
#include "motkit/types.hpp"

namespace motkit {

enum class RoiLabel { kPositive, kNegative, kIgnore };

struct Proposal {
  BoundingBox box;
  RoiLabel label = RoiLabel::kNegative;
  std::int64_t identity = -1;  // matched ground-truth id for positives
  int gt_index = -1;           // index of the best-overlapping ground truth
  Real max_iou = 0;            // best overlap against any ground truth
};

// Label proposals against ground-truth boxes: best IoU > alpha1 -> positive
// (inheriting that ground truth's identity), best IoU < alpha2 -> negative,
// anything between -> ignore. IoU ties pick the lower ground-truth index.
std::vector<Proposal> assign_labels(const std::vector<BoundingBox>& proposals,
                                    const std::vector<std::pair<BoundingBox, std::int64_t>>& gts,
                                    Real alpha1 = 0.7, Real alpha2 = 0.3);

// Anchor-side sampling: keep every positive (subsampled to n if there are
// more), then fill the remainder with negatives drawn from three equal-width
// best-IoU bins over [0, alpha2). Bin quotas are even; shortfall in one bin
// spills round-robin into the others. Returns indices into `proposals`,
// positives first.
std::vector<int> sample_key(const std::vector<Proposal>& proposals, int n, Real alpha2,
                            std::mt19937_64& rng);

// Target-side sampling: aim for a 1:1 positive/negative split of n, letting
// either side absorb the other's shortfall. Returns indices, positives first.
std::vector<int> sample_ref(const std::vector<Proposal>& proposals, int n, std::mt19937_64& rng);

struct PairBatch {
  std::vector<int> key_samples;  // indices into the key-frame proposal list
  std::vector<int> ref_samples;  // indices into the reference-frame proposal list
  BoolMatrix match;              // [key slot, ref slot] -> same identity

  struct AuxPair {
    int key_slot = -1;
    int ref_slot = -1;
    int target = 0;
  };
  std::vector<AuxPair> aux_pairs;
};

// Cross the sampled key and reference rois: match marks identity-equal
// positive pairs; aux_pairs lists every matching pair (target 1) plus three
// times as many sampled non-matching pairs (target 0).
PairBatch build_pair_batch(const std::vector<Proposal>& key, const std::vector<int>& key_samples,
                           const std::vector<Proposal>& ref, const std::vector<int>& ref_samples,
                           std::mt19937_64& rng);

// Uniform draw from the frames within max_offset of key_frame (inclusive,
// clipped to [0, num_frames)); the key frame itself is a valid choice.
int pick_reference_frame(int key_frame, int num_frames, int max_offset, std::mt19937_64& rng);

}  // namespace motkit
