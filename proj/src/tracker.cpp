#include "motkit/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "motkit/association.hpp"
#include "motkit/geometry.hpp"

namespace motkit {

namespace {

void check_config(const TrackerConfig& cfg) {
  if (!(cfg.obj_threshold >= 0) || !(cfg.init_threshold >= cfg.obj_threshold) ||
      cfg.init_threshold > 1)
    throw std::invalid_argument("tracker: need 0 <= obj_threshold <= init_threshold <= 1");
  if (!std::isfinite(cfg.match_threshold))
    throw std::invalid_argument("tracker: match_threshold must be finite");
  if (cfg.memory_frames < 0) throw std::invalid_argument("tracker: negative memory");
  if (!(cfg.momentum >= 0) || cfg.momentum > 1)
    throw std::invalid_argument("tracker: momentum must lie in [0, 1]");
}

}  // namespace

Vector momentum_update(const Vector& old_embedding, const Vector& new_embedding, Real momentum) {
  if (old_embedding.size() == 0 || old_embedding.size() != new_embedding.size())
    throw std::invalid_argument("momentum_update: dimension mismatch");
  if (!(momentum >= 0) || momentum > 1)
    throw std::invalid_argument("momentum_update: momentum must lie in [0, 1]");
  return momentum * old_embedding + (1 - momentum) * new_embedding;
}

std::vector<TrackOutput> step(TrackerState& state, int frame_index,
                              const std::vector<Detection>& detections,
                              const std::vector<BoundingBox>* external_inits) {
  const TrackerConfig& cfg = state.config;
  check_config(cfg);
  if (frame_index <= state.frame_index)
    throw std::invalid_argument("step: frame index must increase");

  // Retire tracks unseen for longer than the memory window.
  std::erase_if(state.tracks,
                [&](const Track& t) { return frame_index - t.last_seen > cfg.memory_frames; });

  // All detections need embeddings of one consistent dimension.
  Eigen::Index dim = state.tracks.empty() ? 0 : state.tracks.front().embedding.size();
  for (const Detection& det : detections) {
    if (!det.has_embedding()) throw std::invalid_argument("step: detection without embedding");
    if (dim == 0) dim = det.embedding.size();
    if (det.embedding.size() != dim)
      throw std::invalid_argument("step: embedding dimension mismatch");
  }

  std::vector<int> kept(detections.size());
  std::iota(kept.begin(), kept.end(), 0);
  if (cfg.inter_class_dedup) {
    kept = remove_inter_class_duplicates(detections);
    std::sort(kept.begin(), kept.end());
  }

  std::vector<int> eligible;
  for (int i : kept)
    if (detections[i].score >= cfg.obj_threshold) eligible.push_back(i);

  // Candidate list: live tracks in id order, then last frame's backdrops.
  struct CandRef {
    bool is_track;
    std::size_t idx;
  };
  std::vector<CandRef> cands;
  for (std::size_t t = 0; t < state.tracks.size(); ++t) cands.push_back({true, t});
  if (cfg.use_backdrops)
    for (std::size_t b = 0; b < state.backdrops.size(); ++b) cands.push_back({false, b});

  std::vector<TrackOutput> outputs;
  std::vector<char> consumed(detections.size(), 0);

  auto attach = [&](Track& track, const Detection& det) {
    track.embedding = momentum_update(track.embedding, det.embedding, cfg.momentum);
    track.last_box = det.box;
    track.last_score = det.score;
    track.last_seen = frame_index;
    track.hits += 1;
    outputs.push_back({track.id, det, false});
  };

  if (cfg.oracle_association) {
    std::vector<int> order = eligible;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return detections[a].score > detections[b].score;
    });
    std::vector<char> taken(state.tracks.size(), 0);
    for (int i : order) {
      const Detection& det = detections[i];
      if (det.source_id < 0) continue;
      for (std::size_t t = 0; t < state.tracks.size(); ++t) {
        if (taken[t] || state.tracks[t].source_id != det.source_id) continue;
        attach(state.tracks[t], det);
        taken[t] = 1;
        consumed[i] = 1;
        break;
      }
    }
  } else if (!eligible.empty() && !cands.empty()) {
    Matrix det_emb(dim, static_cast<Eigen::Index>(eligible.size()));
    std::vector<Real> det_scores(eligible.size());
    std::vector<int> det_cats(eligible.size());
    for (std::size_t i = 0; i < eligible.size(); ++i) {
      const Detection& det = detections[eligible[i]];
      det_emb.col(static_cast<Eigen::Index>(i)) = det.embedding;
      det_scores[i] = det.score;
      det_cats[i] = det.category;
    }
    Matrix cand_emb(dim, static_cast<Eigen::Index>(cands.size()));
    std::vector<int> cand_cats(cands.size());
    for (std::size_t j = 0; j < cands.size(); ++j) {
      if (cands[j].is_track) {
        cand_emb.col(static_cast<Eigen::Index>(j)) = state.tracks[cands[j].idx].embedding;
        cand_cats[j] = state.tracks[cands[j].idx].category;
      } else {
        cand_emb.col(static_cast<Eigen::Index>(j)) = state.backdrops[cands[j].idx].embedding;
        cand_cats[j] = state.backdrops[cands[j].idx].category;
      }
    }

    const SimilarityMatrix sim = cfg.similarity == SimilarityMetric::kBisoftmax
                                     ? bisoftmax(det_emb, cand_emb)
                                     : cosine_matrix(det_emb, cand_emb);
    const Assignment assignment =
        cfg.assignment == AssignmentMethod::kGreedy
            ? greedy_assign(sim, det_scores, det_cats, cand_cats, cfg.match_threshold)
            : hungarian_assign(sim, det_scores, det_cats, cand_cats, cfg.match_threshold);

    for (const MatchedPair& m : assignment.matches) {
      const int det_idx = eligible[m.det];
      consumed[det_idx] = 1;
      if (cands[m.candidate].is_track)
        attach(state.tracks[cands[m.candidate].idx], detections[det_idx]);
      // Backdrop hits suppress the detection: no output, no new backdrop.
    }
  }

  // Births: leftover confident detections, gated by external boxes if asked.
  for (int i : kept) {
    if (consumed[i]) continue;
    const Detection& det = detections[i];
    if (!(det.score > cfg.init_threshold)) continue;
    if (cfg.init_source == InitSource::kExternalOnly) {
      const bool supported =
          external_inits && std::any_of(external_inits->begin(), external_inits->end(),
                                        [&](const BoundingBox& b) { return iou(det.box, b) > 0.5; });
      if (!supported) continue;
    }
    Track track;
    track.id = state.next_id++;
    track.embedding = det.embedding;
    track.category = det.category;
    track.last_box = det.box;
    track.last_score = det.score;
    track.last_seen = frame_index;
    track.hits = 1;
    track.source_id = det.source_id;
    state.tracks.push_back(std::move(track));
    outputs.push_back({state.tracks.back().id, det, true});
    consumed[i] = 1;
  }

  // Everything still unclaimed becomes next frame's backdrops.
  state.backdrops.clear();
  if (cfg.use_backdrops) {
    for (int i : kept) {
      if (consumed[i]) continue;
      const Detection& det = detections[i];
      state.backdrops.push_back({det.embedding, det.category, det.box, frame_index, det.source_id});
    }
  }

  state.frame_index = frame_index;
  std::stable_sort(outputs.begin(), outputs.end(), [&](const TrackOutput& a, const TrackOutput& b) {
    return a.track_id < b.track_id;
  });
  return outputs;
}

std::vector<std::vector<TrackOutput>> run_sequence(
    const TrackerConfig& config, const std::vector<std::vector<Detection>>& frames,
    const std::vector<std::vector<BoundingBox>>* external_inits) {
  if (external_inits && external_inits->size() != frames.size())
    throw std::invalid_argument("run_sequence: external init frame count mismatch");
  TrackerState state;
  state.config = config;
  std::vector<std::vector<TrackOutput>> outputs;
  outputs.reserve(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    outputs.push_back(step(state, static_cast<int>(f) + 1, frames[f],
                           external_inits ? &(*external_inits)[f] : nullptr));
  }
  return outputs;
}

}  // namespace motkit
