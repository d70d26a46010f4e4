#pragma once

#include <cstdint>
#include <vector>

#include "motkit/geometry.hpp"
#include "motkit/types.hpp"

namespace motkit {

enum class SimilarityMetric { kBisoftmax, kCosine };
enum class AssignmentMethod { kGreedy, kHungarian };
enum class InitSource { kInternal, kExternalOnly };

struct TrackerConfig {
  Real init_threshold = 0.8;   // minimum score to start a track
  Real obj_threshold = 0.5;    // minimum score to take part in association
  Real match_threshold = 0.5;  // minimum similarity to accept a match
  int memory_frames = 10;      // keep unmatched tracks alive this many frames
  Real momentum = 0.8;         // weight of the old embedding in updates
  SimilarityMetric similarity = SimilarityMetric::kBisoftmax;
  AssignmentMethod assignment = AssignmentMethod::kGreedy;
  bool use_backdrops = true;        // keep last frame's leftovers as decoys
  bool inter_class_dedup = true;    // drop cross-category duplicate boxes first
  InitSource init_source = InitSource::kInternal;
  // Bypass appearance entirely: detections join the track that shares their
  // source id. Detections without a source never match.
  bool oracle_association = false;
};

struct Track {
  std::int64_t id = 0;
  Vector embedding;
  int category = 0;
  BoundingBox last_box;
  Real last_score = 0;
  int last_seen = 0;  // frame of the most recent match
  long hits = 0;      // matched detections including the starting one
  std::int64_t source_id = -1;
};

// An unmatched, un-birthed detection kept for exactly one step so that its
// reappearance next frame gets absorbed instead of polluting real tracks.
struct Backdrop {
  Vector embedding;
  int category = 0;
  BoundingBox box;
  int frame = 0;
  std::int64_t source_id = -1;
};

struct TrackerState {
  TrackerConfig config;
  std::vector<Track> tracks;  // ascending id (birth order)
  std::vector<Backdrop> backdrops;
  int frame_index = 0;  // last processed frame; 0 = nothing processed
  std::int64_t next_id = 1;
};

struct TrackOutput {
  std::int64_t track_id = 0;
  Detection detection;
  bool is_new = false;  // true when this detection started the track
};

// Blend a track embedding with a matched detection's embedding:
// momentum * old + (1 - momentum) * fresh.
Vector momentum_update(const Vector& old_embedding, const Vector& new_embedding, Real momentum);

// Advance the tracker by one frame. frame_index must exceed the previous one
// (gaps allowed); every detection needs an embedding of a consistent
// dimension. In external-only init mode a new track additionally needs an
// external box overlapping the detection (IoU > 0.5); pass the boxes for this
// frame via external_inits. Outputs are ordered by track id.
std::vector<TrackOutput> step(TrackerState& state, int frame_index,
                              const std::vector<Detection>& detections,
                              const std::vector<BoundingBox>* external_inits = nullptr);

// Run a whole sequence (frame i of `frames` is frame_index i+1) against a
// fresh state. external_inits, when given, must have one entry per frame.
std::vector<std::vector<TrackOutput>> run_sequence(
    const TrackerConfig& config, const std::vector<std::vector<Detection>>& frames,
    const std::vector<std::vector<BoundingBox>>* external_inits = nullptr);

}  // namespace motkit
