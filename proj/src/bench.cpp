#include "motkit/bench.hpp"

#include <stdexcept>

#include "motkit/sampling.hpp"

namespace motkit {

FittedEmbeddings run_training(const Scenario& scenario, const TrainSpec& train,
                              ContrastiveKind kind, std::uint64_t seed) {
  if (scenario.frames < 1) throw std::invalid_argument("run_training: empty scenario");
  std::mt19937_64 rng(seed);

  ProposalSpec pspec = train.proposals;
  pspec.width = scenario.width;
  pspec.height = scenario.height;

  // Labelled proposals per frame, laid out contiguously in one global table.
  std::vector<std::vector<Proposal>> labelled(scenario.frames);
  std::vector<int> offset(scenario.frames, 0);
  int total = 0;
  for (int f = 0; f < scenario.frames; ++f) {
    const auto gts = frame_gt_boxes(scenario, f);
    labelled[f] = assign_labels(generate_proposals(gts, pspec, rng), gts, train.alpha1,
                                train.alpha2);
    offset[f] = total;
    total += static_cast<int>(labelled[f].size());
  }
  if (total == 0) throw std::invalid_argument("run_training: no proposals");

  FittedEmbeddings out;
  out.identities.assign(total, -1);
  for (int f = 0; f < scenario.frames; ++f)
    for (std::size_t i = 0; i < labelled[f].size(); ++i)
      if (labelled[f][i].label == RoiLabel::kPositive)
        out.identities[offset[f] + static_cast<int>(i)] = labelled[f][i].identity;

  // Batches pair each key frame with `ref_rounds` reference frames: anchors
  // from the key frame, targets from the reference; non-matching reference
  // rois act as negatives. Columns are shared per proposal, so the same roi
  // meeting several partners stitches the identity clusters together.
  if (train.ref_rounds < 1) throw std::invalid_argument("run_training: ref_rounds must be >= 1");
  std::vector<TrainingBatch> batches;
  for (int f = 0; f < scenario.frames; ++f) {
    for (int round = 0; round < train.ref_rounds; ++round) {
      const int r = pick_reference_frame(f, scenario.frames, train.max_ref_offset, rng);
      const std::vector<int> key_sel =
          sample_key(labelled[f], train.key_samples, train.alpha2, rng);
      const std::vector<int> ref_sel = sample_ref(labelled[r], train.ref_samples, rng);
      const PairBatch pb = build_pair_batch(labelled[f], key_sel, labelled[r], ref_sel, rng);

      TrainingBatch batch;
      for (std::size_t i = 0; i < pb.key_samples.size(); ++i) {
        InstanceRefs refs;
        refs.anchor = offset[f] + pb.key_samples[i];
        for (std::size_t j = 0; j < pb.ref_samples.size(); ++j) {
          const int col = offset[r] + pb.ref_samples[j];
          if (pb.match(static_cast<int>(i), static_cast<int>(j))) refs.positives.push_back(col);
          else refs.negatives.push_back(col);
        }
        if (!refs.positives.empty()) batch.instances.push_back(std::move(refs));
      }
      for (const PairBatch::AuxPair& ap : pb.aux_pairs)
        batch.aux_pairs.push_back({offset[f] + pb.key_samples[ap.key_slot],
                                   offset[r] + pb.ref_samples[ap.ref_slot], ap.target});
      if (!batch.instances.empty()) batches.push_back(std::move(batch));
    }
  }
  if (batches.empty()) throw std::invalid_argument("run_training: no usable batches");

  FitSpec fit;
  fit.kind = kind;
  fit.steps = train.fit_steps;
  fit.learning_rate = train.fit_lr;
  fit.gamma_embed = train.gamma_embed;
  fit.gamma_aux = train.gamma_aux;
  FitResult res = fit_embeddings(scenario.embed_dim, total, batches, fit, seed + 1);
  out.table = std::move(res.embeddings);
  out.loss_history = std::move(res.loss_history);
  return out;
}

std::map<std::int64_t, Vector> identity_prototypes(const FittedEmbeddings& fit) {
  std::map<std::int64_t, Vector> sums;
  for (std::size_t c = 0; c < fit.identities.size(); ++c) {
    const std::int64_t id = fit.identities[c];
    if (id < 0) continue;
    const auto it = sums.find(id);
    if (it == sums.end()) sums[id] = fit.table.col(static_cast<Eigen::Index>(c));
    else it->second += fit.table.col(static_cast<Eigen::Index>(c));
  }
  std::map<std::int64_t, Vector> protos;
  for (auto& [id, sum] : sums) {
    const Real n = sum.norm();
    if (n > 0) protos[id] = sum / n;
  }
  return protos;
}

Real cosine_separation(const FittedEmbeddings& fit) {
  std::vector<Eigen::Index> cols;
  for (std::size_t c = 0; c < fit.identities.size(); ++c)
    if (fit.identities[c] >= 0) cols.push_back(static_cast<Eigen::Index>(c));

  Real intra = 0, inter = 0;
  long n_intra = 0, n_inter = 0;
  for (std::size_t a = 0; a < cols.size(); ++a) {
    const Vector va = fit.table.col(cols[a]).normalized();
    for (std::size_t b = a + 1; b < cols.size(); ++b) {
      const Real cos = va.dot(fit.table.col(cols[b]).normalized());
      if (fit.identities[cols[a]] == fit.identities[cols[b]]) {
        intra += cos;
        n_intra += 1;
      } else {
        inter += cos;
        n_inter += 1;
      }
    }
  }
  if (n_intra == 0 || n_inter == 0)
    throw std::invalid_argument("cosine_separation: need pairs on both sides");
  return intra / static_cast<Real>(n_intra) - inter / static_cast<Real>(n_inter);
}

Scenario with_prototype_latents(Scenario scenario, const std::map<std::int64_t, Vector>& protos) {
  for (ScenarioObject& obj : scenario.objects) {
    const auto it = protos.find(obj.identity);
    if (it == protos.end()) continue;
    if (it->second.size() != scenario.embed_dim)
      throw std::invalid_argument("with_prototype_latents: dimension mismatch");
    obj.latent = it->second;
  }
  return scenario;
}

std::vector<std::vector<Detection>> assign_fitted_embeddings(
    std::vector<std::vector<Detection>> frames, const Scenario& scenario,
    const FittedEmbeddings& fit, Real embed_scale, std::uint64_t seed, Real min_cosine) {
  if (embed_scale <= 0) throw std::invalid_argument("assign_fitted_embeddings: bad scale");
  std::map<std::int64_t, std::vector<Eigen::Index>> columns;
  for (std::size_t c = 0; c < fit.identities.size(); ++c)
    if (fit.identities[c] >= 0) columns[fit.identities[c]].push_back(static_cast<Eigen::Index>(c));

  std::mt19937_64 rng(seed);
  for (auto& frame : frames) {
    for (Detection& det : frame) {
      if (!det.has_embedding()) continue;
      const Real norm = det.embedding.norm();
      if (norm == 0) continue;
      std::int64_t best_id = -1;
      Real best_cos = min_cosine;
      for (const ScenarioObject& obj : scenario.objects) {
        const Real cos = det.embedding.dot(obj.latent) / (norm * obj.latent.norm());
        if (cos > best_cos) {
          best_cos = cos;
          best_id = obj.identity;
        }
      }
      const auto it = best_id >= 0 ? columns.find(best_id) : columns.end();
      if (it == columns.end()) continue;
      std::uniform_int_distribution<std::size_t> pick(0, it->second.size() - 1);
      const Vector col = fit.table.col(it->second[pick(rng)]);
      const Real col_norm = col.norm();
      if (col_norm > 0) det.embedding = col * (embed_scale / col_norm);
    }
  }
  return frames;
}

RunOutcome run_tracking(const Scenario& scenario,
                        const std::vector<std::vector<Detection>>& detections,
                        const TrackerConfig& config) {
  const auto outputs = run_sequence(config, detections);
  RunOutcome outcome;
  for (const auto& frame : outputs) {
    for (const TrackOutput& out : frame) {
      outcome.outputs += 1;
      if (!out.is_new && out.detection.source_id < 0) outcome.fp_track_associations += 1;
    }
  }
  outcome.report = evaluate(scenario_gt_frames(scenario), outputs_to_frames(outputs));
  return outcome;
}

RunOutcome run_tracking_noisy(const Scenario& scenario, const NoiseModel& noise,
                              const TrackerConfig& config, std::uint64_t corrupt_seed) {
  return run_tracking(scenario, corrupt(scenario, noise, corrupt_seed), config);
}

NoiseModel detection_oracle_noise(const NoiseModel& base) {
  NoiseModel oracle = base;
  oracle.miss_rate = 0;
  oracle.fp_rate = 0;
  oracle.jitter_sigma = 0;
  oracle.dup_rate = 0;
  oracle.score_tp_lo = 1;
  oracle.score_tp_hi = 1;
  return oracle;
}

std::vector<MotRecord> outputs_to_mot(const std::vector<std::vector<TrackOutput>>& outputs) {
  std::vector<MotRecord> records;
  for (std::size_t f = 0; f < outputs.size(); ++f) {
    for (const TrackOutput& out : outputs[f]) {
      MotRecord rec;
      rec.frame = static_cast<int>(f) + 1;
      rec.id = out.track_id;
      rec.box = out.detection.box;
      rec.score = out.detection.score;
      rec.category = out.detection.category;
      rec.visibility = 1;
      records.push_back(rec);
    }
  }
  return records;
}

std::vector<MotRecord> gt_to_mot(const Scenario& scenario) {
  std::vector<MotRecord> records;
  for (int f = 0; f < scenario.frames; ++f) {
    for (const ScenarioObject& obj : scenario.objects) {
      if (!obj.alive(f)) continue;
      MotRecord rec;
      rec.frame = f + 1;
      rec.id = obj.identity;
      rec.box = *obj.boxes[f];
      rec.score = 1;
      rec.category = obj.category;
      rec.visibility = 1;
      records.push_back(rec);
    }
  }
  return records;
}

std::vector<FrameObjects> outputs_to_frames(const std::vector<std::vector<TrackOutput>>& outputs) {
  std::vector<FrameObjects> frames(outputs.size());
  for (std::size_t f = 0; f < outputs.size(); ++f)
    for (const TrackOutput& out : outputs[f])
      frames[f].push_back({out.track_id, out.detection.category, out.detection.box});
  return frames;
}

DetectionSequence to_detection_sequence(int dim,
                                        const std::vector<std::vector<Detection>>& frames) {
  DetectionSequence seq;
  seq.dim = dim;
  seq.frames = frames;
  return seq;
}

}  // namespace motkit
