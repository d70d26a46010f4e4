#include "motkit/sampling.hpp"

#include <algorithm>
#include <stdexcept>

namespace motkit {

std::vector<Proposal> assign_labels(const std::vector<BoundingBox>& proposals,
                                    const std::vector<std::pair<BoundingBox, std::int64_t>>& gts,
                                    Real alpha1, Real alpha2) {
  if (!(alpha2 <= alpha1) || alpha2 < 0 || alpha1 > 1)
    throw std::invalid_argument("assign_labels: need 0 <= alpha2 <= alpha1 <= 1");

  std::vector<Proposal> out;
  out.reserve(proposals.size());
  for (const BoundingBox& box : proposals) {
    Proposal p;
    p.box = box;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const Real overlap = iou(box, gts[g].first);
      if (overlap > p.max_iou) {
        p.max_iou = overlap;
        p.gt_index = static_cast<int>(g);
      }
    }
    if (p.max_iou > alpha1) {
      p.label = RoiLabel::kPositive;
      p.identity = gts[p.gt_index].second;
    } else if (p.max_iou < alpha2) {
      p.label = RoiLabel::kNegative;
    } else {
      p.label = RoiLabel::kIgnore;
    }
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

// Draw up to `want` elements uniformly without replacement, keeping input order.
std::vector<int> take(const std::vector<int>& pool, std::size_t want, std::mt19937_64& rng) {
  if (pool.size() <= want) return pool;
  std::vector<int> picked;
  picked.reserve(want);
  std::sample(pool.begin(), pool.end(), std::back_inserter(picked), want, rng);
  return picked;
}

}  // namespace

std::vector<int> sample_key(const std::vector<Proposal>& proposals, int n, Real alpha2,
                            std::mt19937_64& rng) {
  if (n < 0) throw std::invalid_argument("sample_key: n must be nonnegative");
  if (alpha2 <= 0) throw std::invalid_argument("sample_key: alpha2 must be positive");

  std::vector<int> positives;
  std::vector<int> bins[3];
  for (int i = 0; i < static_cast<int>(proposals.size()); ++i) {
    const Proposal& p = proposals[i];
    if (p.label == RoiLabel::kPositive) {
      positives.push_back(i);
    } else if (p.label == RoiLabel::kNegative && p.max_iou < alpha2) {
      const int b = std::min(2, static_cast<int>(p.max_iou / (alpha2 / 3)));
      bins[b].push_back(i);
    }
  }

  std::vector<int> out = take(positives, static_cast<std::size_t>(n), rng);
  int budget = n - static_cast<int>(out.size());

  // Even split over the three overlap bins; when a bin cannot fill its share,
  // the leftover budget cycles through the remaining bins.
  int quota[3] = {0, 0, 0};
  int remaining[3];
  for (int b = 0; b < 3; ++b) remaining[b] = static_cast<int>(bins[b].size());
  while (budget > 0 && (remaining[0] + remaining[1] + remaining[2]) > 0) {
    for (int b = 0; b < 3 && budget > 0; ++b) {
      if (remaining[b] > 0) {
        quota[b] += 1;
        remaining[b] -= 1;
        budget -= 1;
      }
    }
  }
  for (int b = 0; b < 3; ++b) {
    const std::vector<int> picked = take(bins[b], static_cast<std::size_t>(quota[b]), rng);
    out.insert(out.end(), picked.begin(), picked.end());
  }
  return out;
}

std::vector<int> sample_ref(const std::vector<Proposal>& proposals, int n, std::mt19937_64& rng) {
  if (n < 0) throw std::invalid_argument("sample_ref: n must be nonnegative");

  std::vector<int> positives, negatives;
  for (int i = 0; i < static_cast<int>(proposals.size()); ++i) {
    if (proposals[i].label == RoiLabel::kPositive) positives.push_back(i);
    else if (proposals[i].label == RoiLabel::kNegative) negatives.push_back(i);
  }

  // 1:1 split when both sides are rich enough; otherwise each side may absorb
  // the other's shortfall.
  int pos_take = std::min<int>(static_cast<int>(positives.size()), n / 2);
  int neg_take = std::min<int>(static_cast<int>(negatives.size()), n - pos_take);
  pos_take = std::min<int>(static_cast<int>(positives.size()), n - neg_take);

  std::vector<int> out = take(positives, static_cast<std::size_t>(pos_take), rng);
  const std::vector<int> negs = take(negatives, static_cast<std::size_t>(neg_take), rng);
  out.insert(out.end(), negs.begin(), negs.end());
  return out;
}

PairBatch build_pair_batch(const std::vector<Proposal>& key, const std::vector<int>& key_samples,
                           const std::vector<Proposal>& ref, const std::vector<int>& ref_samples,
                           std::mt19937_64& rng) {
  auto checked = [](const std::vector<Proposal>& list, int idx) -> const Proposal& {
    if (idx < 0 || idx >= static_cast<int>(list.size()))
      throw std::out_of_range("build_pair_batch: sample index out of range");
    return list[idx];
  };

  PairBatch batch;
  batch.key_samples = key_samples;
  batch.ref_samples = ref_samples;
  const int nk = static_cast<int>(key_samples.size());
  const int nr = static_cast<int>(ref_samples.size());
  batch.match = BoolMatrix::Constant(nk, nr, false);

  std::vector<PairBatch::AuxPair> non_matching;
  for (int i = 0; i < nk; ++i) {
    const Proposal& kp = checked(key, key_samples[i]);
    for (int j = 0; j < nr; ++j) {
      const Proposal& rp = checked(ref, ref_samples[j]);
      const bool same = kp.label == RoiLabel::kPositive && rp.label == RoiLabel::kPositive &&
                        kp.identity == rp.identity;
      batch.match(i, j) = same;
      if (same) batch.aux_pairs.push_back({i, j, 1});
      else non_matching.push_back({i, j, 0});
    }
  }

  const std::size_t neg_want = 3 * batch.aux_pairs.size();
  if (neg_want > 0 && !non_matching.empty()) {
    std::vector<PairBatch::AuxPair> picked;
    picked.reserve(std::min(neg_want, non_matching.size()));
    std::sample(non_matching.begin(), non_matching.end(), std::back_inserter(picked), neg_want,
                rng);
    batch.aux_pairs.insert(batch.aux_pairs.end(), picked.begin(), picked.end());
  }
  return batch;
}

int pick_reference_frame(int key_frame, int num_frames, int max_offset, std::mt19937_64& rng) {
  if (num_frames <= 0 || key_frame < 0 || key_frame >= num_frames)
    throw std::invalid_argument("pick_reference_frame: key frame out of range");
  if (max_offset < 0) throw std::invalid_argument("pick_reference_frame: negative offset");
  const int lo = std::max(0, key_frame - max_offset);
  const int hi = std::min(num_frames - 1, key_frame + max_offset);
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace motkit
