#pragma once

#include <string>

#include "motkit/synth.hpp"

namespace motkit {

// Training half of a benchmark: proposal generation, roi sampling and the
// embedding fit. Proposal image size is taken from the scenario.
struct TrainSpec {
  ProposalSpec proposals;
  int key_samples = 64;
  int ref_samples = 128;
  Real alpha1 = 0.7;
  Real alpha2 = 0.3;
  int max_ref_offset = 3;
  int ref_rounds = 1;  // reference draws (= batches) per key frame
  int fit_steps = 500;
  Real fit_lr = 20;
  Real gamma_embed = 0.25;
  Real gamma_aux = 1.0;
};

struct BenchmarkConfig {
  ScenarioSpec scenario;
  NoiseModel noise;
  TrainSpec train;
};

// Flat "key = value" lines; '#' starts a comment; blank lines are ignored;
// unknown keys are errors. Anything not mentioned keeps its default.
BenchmarkConfig parse_config_text(const std::string& text,
                                  const std::string& name = "<config>");
BenchmarkConfig read_config(const std::string& path);

// Template listing every key with its default; parses back to defaults.
std::string default_config_text();

}  // namespace motkit
