#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace motkit::cli {

struct SynthArgs {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string gt_out;
  std::string det_out;
  bool print_config = false;
};
int cmd_synth(const SynthArgs& args);

struct TrackArgs {
  std::string detections_path;
  std::string output_path;
  std::string similarity = "bisoftmax";
  std::string assignment = "greedy";
  bool no_backdrops = false;
  bool no_dedup = false;
  bool oracle = false;
  double tau_init = 0.8;
  double tau_obj = 0.5;
  double tau_match = 0.5;
  double momentum = 0.8;
  int memory = 10;
  std::string init_source = "internal";
  std::string init_boxes_path;
};
int cmd_track(const TrackArgs& args);

struct EvalArgs {
  std::string gt_path;
  std::string pred_path;
  double iou_gate = 0.5;
};
int cmd_eval(const EvalArgs& args);

struct AblateArgs {
  std::string config_path;
  std::vector<std::uint64_t> seeds;
  bool oracle_rows = false;
  int threads = 0;  // 0 = MOTKIT_THREADS env var or 1
};
int cmd_ablate(const AblateArgs& args);

struct LosscheckArgs {
  std::uint64_t seed = 0;
  int trials = 1000;
  bool inject_bug = false;
};
int cmd_losscheck(const LosscheckArgs& args);

}  // namespace motkit::cli
