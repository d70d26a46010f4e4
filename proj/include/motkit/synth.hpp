#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "motkit/embed_loss.hpp"
#include "motkit/geometry.hpp"
#include "motkit/metrics.hpp"
#include "motkit/types.hpp"

namespace motkit {

struct ScenarioObject {
  std::int64_t identity = 0;
  int category = 0;
  int birth_frame = 0;  // alive in [birth_frame, death_frame)
  int death_frame = 0;
  std::vector<std::optional<BoundingBox>> boxes;  // one slot per frame
  Vector latent;                                  // unit-norm appearance

  bool alive(int frame) const { return frame >= birth_frame && frame < death_frame; }
};

struct Scenario {
  int frames = 0;
  Real width = 0;
  Real height = 0;
  int embed_dim = 0;
  std::vector<ScenarioObject> objects;
};

struct ScenarioSpec {
  int frames = 100;
  Real width = 800;
  Real height = 600;
  int objects = 10;
  int categories = 2;  // assigned round-robin so every category occurs
  int embed_dim = 32;
  Real min_size = 24;
  Real max_size = 48;
  Real max_speed = 5;        // per-axis pixels per frame; paths reflect at borders
  Real birth_window = 0;     // fraction of the sequence in which births may fall
  Real death_window = 0;     // fraction of the sequence in which deaths may fall
};

// Deterministic for a given spec and seed. Identities are 1-based; every
// emitted box lies inside the image.
Scenario generate_scenario(const ScenarioSpec& spec, std::uint64_t seed);

enum class FpEmbedMode { kRandom, kNearObject };

struct NoiseModel {
  Real miss_rate = 0;        // per object-frame drop probability
  Real fp_rate = 0;          // expected false boxes per frame (Poisson)
  Real jitter_sigma = 0;     // per-corner Gaussian box noise, pixels
  Real score_tp_lo = 1, score_tp_hi = 1;
  Real score_fp_lo = 0.5, score_fp_hi = 0.75;
  Real embed_sigma = 0;      // Gaussian noise added to latents before renormalising
  FpEmbedMode fp_embed_mode = FpEmbedMode::kRandom;
  Real fp_embed_sigma = 0.3;  // offset of a clutter source from the object it shadows
  int fp_sources = 3;         // persistent clutter sources (near-object mode)
  Real fp_min_size = 24, fp_max_size = 48;
  Real dup_rate = 0;          // chance a true detection spawns a wrong-category twin
  Real embed_scale = 6;       // norm of every emitted embedding
};

// Turn ground truth into per-frame detections. All randomness comes from
// `seed`; with all rates and sigmas zero, boxes and scores equal the ground
// truth exactly and embeddings equal latent * embed_scale exactly. False
// boxes in near-object mode are drawn from a fixed pool of clutter sources
// whose appearance shadows a real object, so the same false object recurs
// across frames.
std::vector<std::vector<Detection>> corrupt(const Scenario& scenario, const NoiseModel& noise,
                                            std::uint64_t seed);

// Ground truth as metric input / labelling input.
std::vector<FrameObjects> scenario_gt_frames(const Scenario& scenario);
std::vector<std::pair<BoundingBox, std::int64_t>> frame_gt_boxes(const Scenario& scenario,
                                                                 int frame);

struct ProposalSpec {
  int per_gt_positive = 3;   // tight copies of each ground-truth box
  int per_gt_ignore = 2;     // moderately perturbed copies
  int background = 16;       // random boxes anywhere in the image
  Real width = 800, height = 600;
  Real bg_min_size = 16, bg_max_size = 64;
};

// Proposal boxes around one frame's ground truth, covering the high-overlap,
// mid-overlap and background regimes. Order: per ground truth its positives
// then its ignores, then the background boxes.
std::vector<BoundingBox> generate_proposals(
    const std::vector<std::pair<BoundingBox, std::int64_t>>& gts, const ProposalSpec& spec,
    std::mt19937_64& rng);

struct TrainingBatch {
  std::vector<InstanceRefs> instances;
  std::vector<AuxPairRef> aux_pairs;
};

struct FitSpec {
  ContrastiveKind kind = ContrastiveKind::kMultiPositive;
  int steps = 500;
  Real learning_rate = 20;
  Real gamma_embed = 0.25;
  Real gamma_aux = 1.0;
};

struct FitResult {
  Matrix embeddings;               // dim x num_embeddings, one column per slot
  std::vector<Real> loss_history;  // objective value before each update
};

// Plain gradient descent of the batch objective over a free embedding table
// (mean over batches). Throws if the objective stops being finite.
// learning_rate 0 leaves the (seeded random) initialisation untouched.
FitResult fit_embeddings(int dim, int num_embeddings, const std::vector<TrainingBatch>& batches,
                         const FitSpec& spec, std::uint64_t seed);

}  // namespace motkit
