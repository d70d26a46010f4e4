#include <doctest.h>

#include <set>

#include "motkit/bench.hpp"

using namespace motkit;

namespace {

ScenarioSpec tiny_spec() {
  ScenarioSpec spec;
  spec.frames = 10;
  spec.objects = 4;
  spec.categories = 2;
  spec.embed_dim = 8;
  return spec;
}

TrainSpec tiny_train() {
  TrainSpec train;
  train.proposals.per_gt_positive = 2;
  train.proposals.per_gt_ignore = 1;
  train.proposals.background = 4;
  train.key_samples = 16;
  train.ref_samples = 24;
  train.fit_steps = 40;
  train.fit_lr = 2;
  train.max_ref_offset = 10;
  return train;
}

}  // namespace

TEST_CASE("training produces one column per proposal and is seed-deterministic") {
  const Scenario scn = generate_scenario(tiny_spec(), 3);
  const TrainSpec train = tiny_train();
  const FittedEmbeddings a = run_training(scn, train, ContrastiveKind::kMultiPositive, 17);
  const FittedEmbeddings b = run_training(scn, train, ContrastiveKind::kMultiPositive, 17);
  const FittedEmbeddings c = run_training(scn, train, ContrastiveKind::kMultiPositive, 18);

  // 4 objects alive on all 10 frames, 2+1 boxes per object plus 4 background each frame
  const Eigen::Index per_frame = 4 * 3 + 4;
  CHECK(a.table.rows() == scn.embed_dim);
  CHECK(a.table.cols() == per_frame * 10);
  REQUIRE(a.identities.size() == static_cast<std::size_t>(a.table.cols()));
  CHECK(a.table == b.table);
  CHECK(a.identities == b.identities);
  CHECK(a.table != c.table);
  CHECK_FALSE(a.loss_history.empty());
  CHECK(a.loss_history.back() < a.loss_history.front());

  // positives carry real identities, everything else is marked -1
  std::set<std::int64_t> ids(a.identities.begin(), a.identities.end());
  CHECK(ids.count(-1) == 1);
  for (std::int64_t id : ids)
    CHECK((id == -1 || (id >= 1 && id <= 4)));

  TrainSpec bad = train;
  bad.ref_rounds = 0;
  CHECK_THROWS_AS(run_training(scn, bad, ContrastiveKind::kMultiPositive, 17),
                  std::invalid_argument);
}

TEST_CASE("identity prototypes are unit vectors keyed by identity") {
  const Scenario scn = generate_scenario(tiny_spec(), 3);
  const FittedEmbeddings fit = run_training(scn, tiny_train(), ContrastiveKind::kMultiPositive, 17);
  const auto protos = identity_prototypes(fit);
  CHECK(protos.size() == 4);
  for (const auto& [id, proto] : protos) {
    CHECK(id >= 1);
    CHECK(id <= 4);
    CHECK(proto.size() == scn.embed_dim);
    CHECK(proto.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }

  const Scenario swapped = with_prototype_latents(scn, protos);
  for (std::size_t i = 0; i < scn.objects.size(); ++i)
    CHECK(swapped.objects[i].latent == protos.at(scn.objects[i].identity));

  std::map<std::int64_t, Vector> wrong_dim = {{1, Vector::Ones(3)}};
  CHECK_THROWS_AS(with_prototype_latents(scn, wrong_dim), std::invalid_argument);
}

TEST_CASE("cosine separation distinguishes clustered tables from scrambled ones") {
  FittedEmbeddings fit;
  fit.table = Matrix::Zero(2, 4);
  fit.table << 1, 1, 0, 0,
               0, 0, 1, 1;
  fit.identities = {1, 1, 2, 2};
  CHECK(cosine_separation(fit) == doctest::Approx(1.0));  // intra 1, inter 0

  // identities straddle the two directions: intra pairs are orthogonal (0)
  // while the four inter pairs average (1 + 0 + 0 + 1) / 4 = 1/2
  fit.identities = {1, 2, 1, 2};
  CHECK(cosine_separation(fit) == doctest::Approx(-0.5));

  fit.identities = {1, 1, -1, -1};  // a single identity has no cross pairs
  CHECK_THROWS_AS(cosine_separation(fit), std::invalid_argument);
}

TEST_CASE("re-embedding with a fitted table keeps scale and respects the gate") {
  const Scenario scn = generate_scenario(tiny_spec(), 3);
  const FittedEmbeddings fit = run_training(scn, tiny_train(), ContrastiveKind::kMultiPositive, 17);
  NoiseModel noise;
  noise.embed_sigma = 0.05;
  const auto dets = corrupt(scn, noise, 9);

  const auto mapped = assign_fitted_embeddings(dets, scn, fit, 6.0, 21);
  const auto mapped_again = assign_fitted_embeddings(dets, scn, fit, 6.0, 21);
  REQUIRE(mapped.size() == dets.size());
  for (std::size_t f = 0; f < mapped.size(); ++f) {
    REQUIRE(mapped[f].size() == dets[f].size());
    for (std::size_t i = 0; i < mapped[f].size(); ++i) {
      CHECK(mapped[f][i].embedding.norm() == doctest::Approx(6.0).epsilon(1e-9));
      CHECK(mapped[f][i].embedding == mapped_again[f][i].embedding);
      // everything but the embedding passes through untouched
      CHECK(mapped[f][i].score == dets[f][i].score);
      CHECK(mapped[f][i].source_id == dets[f][i].source_id);
    }
  }

  // an impossible gate keeps every original embedding
  const auto kept = assign_fitted_embeddings(dets, scn, fit, 6.0, 21, 1.1);
  for (std::size_t f = 0; f < kept.size(); ++f)
    for (std::size_t i = 0; i < kept[f].size(); ++i)
      CHECK(kept[f][i].embedding == dets[f][i].embedding);

  CHECK_THROWS_AS(assign_fitted_embeddings(dets, scn, fit, 0.0, 21), std::invalid_argument);
}

TEST_CASE("tracking a clean corruption of a scenario scores perfectly") {
  const Scenario scn = generate_scenario(tiny_spec(), 5);
  const RunOutcome out = run_tracking_noisy(scn, {}, TrackerConfig{}, 31);
  CHECK(out.report.mota == 1.0);
  CHECK(out.report.idf1 == 1.0);
  CHECK(out.report.idsw == 0);
  CHECK(out.fp_track_associations == 0);
  CHECK(out.outputs == 10 * 4);
}

TEST_CASE("clutter attached to an existing track is counted") {
  // one real object plus a recurring same-category clutter box; no backdrops,
  // so the clutter's second appearance joins the real track.
  Scenario scn;
  scn.frames = 3;
  scn.width = 800;
  scn.height = 600;
  scn.embed_dim = 4;
  ScenarioObject obj;
  obj.identity = 1;
  obj.category = 0;
  obj.birth_frame = 0;
  obj.death_frame = 3;
  obj.latent = Vector::Unit(4, 0);
  obj.boxes.assign(3, BoundingBox{0, 0, 20, 20});
  scn.objects.push_back(obj);

  auto make_det = [](const Vector& e, Real score, Real x, std::int64_t src) {
    Detection d;
    d.box = {x, 0, 20, 20};
    d.score = score;
    d.category = 0;
    d.embedding = e * 6;
    d.source_id = src;
    return d;
  };
  const Vector real = Vector::Unit(4, 0), fake = Vector::Unit(4, 1);
  std::vector<std::vector<Detection>> frames(3);
  frames[0] = {make_det(real, 0.9, 0, 1)};
  frames[1] = {make_det(real, 0.9, 0, 1), make_det(fake, 0.6, 300, -1)};
  frames[2] = {make_det(fake, 0.6, 300, -1)};

  TrackerConfig cfg;
  cfg.use_backdrops = false;
  const RunOutcome leaked = run_tracking(scn, frames, cfg);
  CHECK(leaked.fp_track_associations == 1);

  cfg.use_backdrops = true;
  const RunOutcome guarded = run_tracking(scn, frames, cfg);
  CHECK(guarded.fp_track_associations == 0);
}

TEST_CASE("the detector-oracle noise keeps appearance noise only") {
  NoiseModel noise;
  noise.miss_rate = 0.3;
  noise.fp_rate = 2;
  noise.jitter_sigma = 1.5;
  noise.dup_rate = 0.2;
  noise.score_tp_lo = 0.6;
  noise.score_tp_hi = 0.9;
  noise.embed_sigma = 0.15;
  noise.embed_scale = 4;
  const NoiseModel oracle = detection_oracle_noise(noise);
  CHECK(oracle.miss_rate == 0);
  CHECK(oracle.fp_rate == 0);
  CHECK(oracle.jitter_sigma == 0);
  CHECK(oracle.dup_rate == 0);
  CHECK(oracle.score_tp_lo == 1);
  CHECK(oracle.score_tp_hi == 1);
  CHECK(oracle.embed_sigma == noise.embed_sigma);
  CHECK(oracle.embed_scale == noise.embed_scale);
}

TEST_CASE("record conversions preserve frame structure") {
  const Scenario scn = generate_scenario(tiny_spec(), 7);
  const auto gt_records = gt_to_mot(scn);
  CHECK(gt_records.size() == 4 * 10);
  CHECK(gt_records.front().frame == 1);
  CHECK(gt_records.back().frame == 10);

  NoiseModel noise;
  const auto dets = corrupt(scn, noise, 3);
  const auto outputs = run_sequence(TrackerConfig{}, dets);
  const auto records = outputs_to_mot(outputs);
  CHECK(records.size() == 4 * 10);
  int last = 0;
  for (const MotRecord& r : records) {
    CHECK(r.frame >= last);
    last = r.frame;
    CHECK(r.id >= 1);
  }
  const auto frames = outputs_to_frames(outputs);
  REQUIRE(frames.size() == outputs.size());
  for (std::size_t f = 0; f < frames.size(); ++f) CHECK(frames[f].size() == outputs[f].size());

  const DetectionSequence seq = to_detection_sequence(scn.embed_dim, dets);
  CHECK(seq.dim == scn.embed_dim);
  CHECK(seq.num_frames() == scn.frames);
}
