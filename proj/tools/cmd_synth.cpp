#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "motkit/bench.hpp"
#include "motkit/config.hpp"
#include "motkit/io.hpp"
#include "motkit/synth.hpp"

namespace motkit::cli {

int cmd_synth(const SynthArgs& args) {
  if (args.print_config) {
    std::cout << default_config_text();
    return 0;
  }
  if (args.config_path.empty() || args.gt_out.empty() || args.det_out.empty())
    throw CLI::ValidationError("synth", "--config, --gt-out and --det-out are required");

  const BenchmarkConfig cfg = read_config(args.config_path);
  const Scenario scenario = generate_scenario(cfg.scenario, args.seed);
  const auto detections = corrupt(scenario, cfg.noise, args.seed + 1);

  write_mot(args.gt_out, gt_to_mot(scenario));
  write_detections(args.det_out, to_detection_sequence(scenario.embed_dim, detections));

  long n_det = 0;
  for (const auto& frame : detections) n_det += static_cast<long>(frame.size());
  long n_gt = 0;
  for (const auto& obj : scenario.objects) n_gt += obj.death_frame - obj.birth_frame;
  std::cout << "frames=" << scenario.frames << "\nobjects=" << scenario.objects.size()
            << "\ngt_boxes=" << n_gt << "\ndetections=" << n_det << "\n";
  return 0;
}

}  // namespace motkit::cli
