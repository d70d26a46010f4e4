#include <iostream>
#include <set>

#include <CLI11.hpp>

#include "commands.hpp"
#include "motkit/bench.hpp"
#include "motkit/io.hpp"
#include "motkit/tracker.hpp"

namespace motkit::cli {

int cmd_track(const TrackArgs& args) {
  TrackerConfig cfg;
  cfg.similarity =
      args.similarity == "cosine" ? SimilarityMetric::kCosine : SimilarityMetric::kBisoftmax;
  cfg.assignment =
      args.assignment == "hungarian" ? AssignmentMethod::kHungarian : AssignmentMethod::kGreedy;
  cfg.use_backdrops = !args.no_backdrops;
  cfg.inter_class_dedup = !args.no_dedup;
  cfg.oracle_association = args.oracle;
  cfg.init_threshold = args.tau_init;
  cfg.obj_threshold = args.tau_obj;
  cfg.match_threshold = args.tau_match;
  cfg.momentum = args.momentum;
  cfg.memory_frames = args.memory;
  cfg.init_source =
      args.init_source == "external" ? InitSource::kExternalOnly : InitSource::kInternal;

  const DetectionSequence dets = read_detections(args.detections_path);

  std::vector<std::vector<BoundingBox>> init_boxes;
  const bool external = cfg.init_source == InitSource::kExternalOnly;
  if (external && args.init_boxes_path.empty())
    throw CLI::ValidationError("track", "--init-source external requires --init-boxes");
  if (!args.init_boxes_path.empty()) {
    const MotSequence seq = read_mot(args.init_boxes_path);
    if (seq.num_frames > dets.num_frames())
      throw std::runtime_error(args.init_boxes_path + ": more frames than the detections file");
    init_boxes.resize(dets.frames.size());
    for (const MotRecord& rec : seq.records) init_boxes[rec.frame - 1].push_back(rec.box);
  }

  const auto outputs =
      run_sequence(cfg, dets.frames, init_boxes.empty() ? nullptr : &init_boxes);
  write_mot(args.output_path, outputs_to_mot(outputs));

  std::set<std::int64_t> ids;
  long n_out = 0;
  for (const auto& frame : outputs) {
    for (const TrackOutput& out : frame) {
      ids.insert(out.track_id);
      n_out += 1;
    }
  }
  std::cout << "frames=" << dets.num_frames() << "\ntracks=" << ids.size()
            << "\noutputs=" << n_out << "\n";
  return 0;
}

}  // namespace motkit::cli
