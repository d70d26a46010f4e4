#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace motkit::cli;
  CLI::App app{"Synthetic multi-object tracking toolkit"};
  app.require_subcommand(1);
  int rc = 0;

  SynthArgs synth;
  CLI::App* s = app.add_subcommand("synth", "Generate a scenario and noisy detections");
  s->add_option("--config", synth.config_path, "Scenario/noise config file");
  s->add_option("--seed", synth.seed, "Random seed");
  s->add_option("--gt-out", synth.gt_out, "Ground-truth csv to write");
  s->add_option("--det-out", synth.det_out, "Detections jsonl to write");
  s->add_flag("--print-config", synth.print_config, "Print the default config and exit");
  s->callback([&] { rc = cmd_synth(synth); });

  TrackArgs track;
  CLI::App* t = app.add_subcommand("track", "Run the tracker over a detections file");
  t->add_option("--detections", track.detections_path, "Input detections jsonl")->required();
  t->add_option("--output", track.output_path, "Tracking result csv to write")->required();
  t->add_option("--similarity", track.similarity, "Similarity used for association")
      ->check(CLI::IsMember({"bisoftmax", "cosine"}));
  t->add_option("--assignment", track.assignment, "Match selection strategy")
      ->check(CLI::IsMember({"greedy", "hungarian"}));
  t->add_flag("--no-backdrops", track.no_backdrops, "Do not keep unmatched boxes as decoys");
  t->add_flag("--no-dedup", track.no_dedup, "Skip cross-category duplicate removal");
  t->add_flag("--oracle", track.oracle, "Associate by source id instead of appearance");
  t->add_option("--tau-init", track.tau_init, "Score needed to start a track");
  t->add_option("--tau-obj", track.tau_obj, "Score needed to enter association");
  t->add_option("--tau-match", track.tau_match, "Similarity needed to match");
  t->add_option("--momentum", track.momentum, "Embedding update momentum");
  t->add_option("--memory", track.memory, "Frames a silent track stays alive");
  t->add_option("--init-source", track.init_source, "Where new tracks may come from")
      ->check(CLI::IsMember({"internal", "external"}));
  t->add_option("--init-boxes", track.init_boxes_path,
                "External init boxes csv (required with --init-source external)");
  t->callback([&] { rc = cmd_track(track); });

  EvalArgs eval;
  CLI::App* e = app.add_subcommand("eval", "Score a tracking result against ground truth");
  e->add_option("--gt", eval.gt_path, "Ground-truth csv")->required();
  e->add_option("--pred", eval.pred_path, "Tracking result csv")->required();
  e->add_option("--iou-gate", eval.iou_gate, "Overlap needed for a correspondence");
  e->callback([&] { rc = cmd_eval(eval); });

  AblateArgs ablate;
  CLI::App* a = app.add_subcommand("ablate", "Loss/similarity/candidate ablation grid");
  a->add_option("--config", ablate.config_path, "Benchmark config file")->required();
  a->add_option("--seeds", ablate.seeds, "Seeds to average over")->required()->delimiter(',');
  a->add_flag("--oracle", ablate.oracle_rows, "Append oracle reference rows");
  a->add_option("--threads", ablate.threads, "Worker threads (default: MOTKIT_THREADS or 1)");
  a->callback([&] { rc = cmd_ablate(ablate); });

  LosscheckArgs loss;
  CLI::App* l = app.add_subcommand("losscheck", "Verify loss gradients and invariants");
  l->add_option("--seed", loss.seed, "Random seed")->required();
  l->add_option("--trials", loss.trials, "Random instances per check")
      ->check(CLI::PositiveNumber);
  l->add_flag("--inject-bug", loss.inject_bug,
              "Perturb one analytic gradient and demand the checker catches it");
  l->callback([&] { rc = cmd_losscheck(loss); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return rc;
}
