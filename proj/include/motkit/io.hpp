#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "motkit/geometry.hpp"
#include "motkit/metrics.hpp"

namespace motkit {

// One row of a comma-separated result/ground-truth file:
//   frame,id,x,y,w,h,score,category,visibility
// Frames are 1-based and must be non-decreasing from row to row; frames with
// no rows are simply absent (legal: an empty frame).
struct MotRecord {
  int frame = 1;
  std::int64_t id = 1;
  BoundingBox box;
  Real score = 1;
  int category = 0;
  Real visibility = 1;
};

struct MotSequence {
  std::vector<MotRecord> records;
  int num_frames = 0;  // last frame seen (frames can be empty past a record gap)
};

MotSequence read_mot(const std::string& path);

// Records must already be in non-decreasing frame order. Reals are written
// with the shortest digits that read back to the identical value.
void write_mot(const std::string& path, const std::vector<MotRecord>& records);

// Group records per frame; the result has max(sequence length, min_frames)
// entries.
std::vector<FrameObjects> mot_to_frames(const MotSequence& seq, int min_frames = 0);

// Detections with embeddings, stored as one JSON object per line. The first
// line is a header {"dim": D, "frames": T}; every following line is
//   {"frame": f, "box": [x,y,w,h], "score": s, "category": c,
//    "embedding": [...], "source": id}
// with the same frame-ordering rule as the csv format. "source" is optional
// on input (defaults to -1).
struct DetectionSequence {
  int dim = 0;
  std::vector<std::vector<Detection>> frames;

  int num_frames() const { return static_cast<int>(frames.size()); }
};

DetectionSequence read_detections(const std::string& path);
void write_detections(const std::string& path, const DetectionSequence& seq);

}  // namespace motkit
