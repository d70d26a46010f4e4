#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "motkit/config.hpp"
#include "motkit/io.hpp"
#include "motkit/metrics.hpp"
#include "motkit/synth.hpp"
#include "motkit/tracker.hpp"

namespace motkit {

// Glue between the synthetic generator, the embedding fit and the tracker:
// everything the ablation command and the benchmark suites share.

struct FittedEmbeddings {
  Matrix table;                          // dim x proposals, one column each
  std::vector<std::int64_t> identities;  // per column; -1 = not a positive roi
  std::vector<Real> loss_history;
};

// Propose boxes on every frame, sample key/reference roi pairs (one batch per
// key frame), and fit a free embedding table with the requested loss.
FittedEmbeddings run_training(const Scenario& scenario, const TrainSpec& train,
                              ContrastiveKind kind, std::uint64_t seed);

// Normalised mean of each identity's positive columns.
std::map<std::int64_t, Vector> identity_prototypes(const FittedEmbeddings& fit);

// Mean within-identity cosine minus mean cross-identity cosine over the
// positive columns. Needs at least one pair on each side.
Real cosine_separation(const FittedEmbeddings& fit);

// Copy of the scenario with each object's latent replaced by its prototype;
// objects without one keep their original latent.
Scenario with_prototype_latents(Scenario scenario, const std::map<std::int64_t, Vector>& protos);

// Re-embed detections with the fitted table: each detection is matched to the
// scenario latent nearest (by cosine) to its current embedding, then given a
// uniformly drawn fitted column of that identity, rescaled to `embed_scale`.
// Detections whose best latent cosine is below `min_cosine`, or whose nearest
// identity has no fitted columns, keep their original embedding.
std::vector<std::vector<Detection>> assign_fitted_embeddings(
    std::vector<std::vector<Detection>> frames, const Scenario& scenario,
    const FittedEmbeddings& fit, Real embed_scale, std::uint64_t seed, Real min_cosine = 0.5);

struct RunOutcome {
  EvalReport report;
  long fp_track_associations = 0;  // clutter detections attached to existing tracks
  long outputs = 0;
};

RunOutcome run_tracking(const Scenario& scenario,
                        const std::vector<std::vector<Detection>>& detections,
                        const TrackerConfig& config);

RunOutcome run_tracking_noisy(const Scenario& scenario, const NoiseModel& noise,
                              const TrackerConfig& config, std::uint64_t corrupt_seed);

// Detector-oracle variant of a noise model: exact boxes, full scores, no
// clutter or duplicates; appearance noise is kept.
NoiseModel detection_oracle_noise(const NoiseModel& base);

// File-record conversions.
std::vector<MotRecord> outputs_to_mot(const std::vector<std::vector<TrackOutput>>& outputs);
std::vector<MotRecord> gt_to_mot(const Scenario& scenario);
std::vector<FrameObjects> outputs_to_frames(const std::vector<std::vector<TrackOutput>>& outputs);
DetectionSequence to_detection_sequence(int dim,
                                        const std::vector<std::vector<Detection>>& frames);

}  // namespace motkit
