#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "motkit/synth.hpp"

using namespace motkit;

namespace {

bool same_box(const BoundingBox& a, const BoundingBox& b) {
  return a.x == b.x && a.y == b.y && a.w == b.w && a.h == b.h;
}

ScenarioSpec small_spec() {
  ScenarioSpec spec;
  spec.frames = 40;
  spec.objects = 5;
  spec.categories = 2;
  spec.embed_dim = 8;
  return spec;
}

}  // namespace

TEST_CASE("scenario generation is a pure function of spec and seed") {
  const ScenarioSpec spec = small_spec();
  const Scenario a = generate_scenario(spec, 11);
  const Scenario b = generate_scenario(spec, 11);
  const Scenario c = generate_scenario(spec, 12);
  REQUIRE(a.objects.size() == b.objects.size());
  bool any_diff_c = false;
  for (std::size_t i = 0; i < a.objects.size(); ++i) {
    CHECK(a.objects[i].latent == b.objects[i].latent);
    for (int f = 0; f < spec.frames; ++f) {
      REQUIRE(a.objects[i].boxes[f].has_value() == b.objects[i].boxes[f].has_value());
      if (a.objects[i].boxes[f]) CHECK(same_box(*a.objects[i].boxes[f], *b.objects[i].boxes[f]));
      if (c.objects[i].boxes[f] && a.objects[i].boxes[f] &&
          !same_box(*a.objects[i].boxes[f], *c.objects[i].boxes[f]))
        any_diff_c = true;
    }
  }
  CHECK(any_diff_c);
}

TEST_CASE("every emitted box stays inside the image at the requested size") {
  ScenarioSpec spec = small_spec();
  spec.frames = 200;
  spec.max_speed = 15;  // plenty of border reflections
  spec.birth_window = 0.4;
  spec.death_window = 0.4;
  const Scenario scn = generate_scenario(spec, 3);
  for (const ScenarioObject& obj : scn.objects) {
    CHECK(obj.birth_frame >= 0);
    CHECK(obj.death_frame <= spec.frames);
    CHECK(obj.birth_frame < obj.death_frame);
    for (int f = 0; f < spec.frames; ++f) {
      REQUIRE(obj.boxes[f].has_value() == obj.alive(f));
      if (!obj.boxes[f]) continue;
      const BoundingBox& b = *obj.boxes[f];
      CHECK(b.x >= 0);
      CHECK(b.y >= 0);
      CHECK(b.right() <= spec.width);
      CHECK(b.bottom() <= spec.height);
      CHECK(b.w >= spec.min_size);
      CHECK(b.w <= spec.max_size);
      CHECK(b.h >= spec.min_size);
      CHECK(b.h <= spec.max_size);
    }
  }
}

TEST_CASE("identities are 1-based and categories cycle through the requested set") {
  ScenarioSpec spec = small_spec();
  spec.objects = 7;
  spec.categories = 3;
  const Scenario scn = generate_scenario(spec, 1);
  REQUIRE(scn.objects.size() == 7);
  for (int i = 0; i < 7; ++i) {
    CHECK(scn.objects[static_cast<std::size_t>(i)].identity == i + 1);
    CHECK(scn.objects[static_cast<std::size_t>(i)].category == i % 3);
    CHECK(scn.objects[static_cast<std::size_t>(i)].latent.size() == spec.embed_dim);
    CHECK(scn.objects[static_cast<std::size_t>(i)].latent.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("scenario spec validation") {
  ScenarioSpec spec = small_spec();
  spec.frames = 0;
  CHECK_THROWS_AS(generate_scenario(spec, 1), std::invalid_argument);
  spec = small_spec();
  spec.categories = 0;
  CHECK_THROWS_AS(generate_scenario(spec, 1), std::invalid_argument);
  spec = small_spec();
  spec.max_size = spec.min_size - 1;
  CHECK_THROWS_AS(generate_scenario(spec, 1), std::invalid_argument);
  spec = small_spec();
  spec.max_size = 10000;  // cannot fit
  CHECK_THROWS_AS(generate_scenario(spec, 1), std::invalid_argument);
  spec = small_spec();
  spec.birth_window = 1.5;
  CHECK_THROWS_AS(generate_scenario(spec, 1), std::invalid_argument);
}

TEST_CASE("noise-free corruption reproduces the ground truth exactly") {
  const Scenario scn = generate_scenario(small_spec(), 5);
  NoiseModel clean;  // all rates and sigmas zero
  const auto frames = corrupt(scn, clean, 99);
  REQUIRE(static_cast<int>(frames.size()) == scn.frames);
  for (int f = 0; f < scn.frames; ++f) {
    REQUIRE(frames[f].size() == scn.objects.size());
    for (std::size_t i = 0; i < scn.objects.size(); ++i) {
      const Detection& det = frames[f][i];
      const ScenarioObject& obj = scn.objects[i];
      CHECK(same_box(det.box, *obj.boxes[f]));
      CHECK(det.score == 1.0);
      CHECK(det.category == obj.category);
      CHECK(det.source_id == obj.identity);
      CHECK(det.embedding == obj.latent * clean.embed_scale);
    }
  }
}

TEST_CASE("drop rate behaves like an independent coin per object-frame") {
  ScenarioSpec spec = small_spec();
  spec.frames = 400;
  const Scenario scn = generate_scenario(spec, 7);
  NoiseModel noise;
  noise.miss_rate = 0.3;
  const auto frames = corrupt(scn, noise, 21);
  long kept = 0;
  for (const auto& f : frames) kept += static_cast<long>(f.size());
  const Real trials = 400.0 * 5;
  const Real mean = trials * 0.7;
  const Real sigma = std::sqrt(trials * 0.3 * 0.7);
  CHECK(static_cast<Real>(kept) > mean - 4 * sigma);
  CHECK(static_cast<Real>(kept) < mean + 4 * sigma);
}

TEST_CASE("false boxes arrive at the requested average rate") {
  ScenarioSpec spec = small_spec();
  spec.frames = 300;
  const Scenario scn = generate_scenario(spec, 8);
  NoiseModel noise;
  noise.fp_rate = 2.0;
  noise.fp_embed_mode = FpEmbedMode::kRandom;
  const auto frames = corrupt(scn, noise, 31);
  long fps = 0;
  for (const auto& f : frames)
    fps += static_cast<long>(std::count_if(f.begin(), f.end(),
                                           [](const Detection& d) { return d.source_id < 0; }));
  const Real mean = 300.0 * 2;
  CHECK(static_cast<Real>(fps) > mean - 4 * std::sqrt(mean));
  CHECK(static_cast<Real>(fps) < mean + 4 * std::sqrt(mean));
  // and every false box carries a score from the clutter range
  for (const auto& f : frames)
    for (const Detection& d : f)
      if (d.source_id < 0) {
        CHECK(d.score >= noise.score_fp_lo);
        CHECK(d.score <= noise.score_fp_hi);
      }
}

TEST_CASE("near-object clutter recurs with a stable appearance and position") {
  ScenarioSpec spec = small_spec();
  spec.frames = 120;
  const Scenario scn = generate_scenario(spec, 9);
  NoiseModel noise;
  noise.fp_rate = 1.0;
  noise.fp_embed_mode = FpEmbedMode::kNearObject;
  noise.fp_sources = 2;
  noise.fp_embed_sigma = 0;  // shadow the host object exactly
  const auto frames = corrupt(scn, noise, 41);

  std::vector<Vector> directions;
  std::vector<int> hits;
  int total_fps = 0;
  for (const auto& f : frames)
    for (const Detection& d : f) {
      if (d.source_id >= 0) continue;
      ++total_fps;
      const Vector dir = d.embedding / d.embedding.norm();
      bool found = false;
      for (std::size_t k = 0; k < directions.size(); ++k)
        if ((directions[k] - dir).norm() < 1e-9) {
          ++hits[k];
          found = true;
        }
      if (!found) {
        directions.push_back(dir);
        hits.push_back(1);
      }
    }
  REQUIRE(total_fps > 20);
  CHECK(directions.size() <= 2);  // only fp_sources distinct appearances
  for (int h : hits) CHECK(h > 1);
  for (const Vector& dir : directions) {
    bool matches_an_object = false;
    for (const ScenarioObject& obj : scn.objects)
      if ((obj.latent - dir).norm() < 1e-9) matches_an_object = true;
    CHECK(matches_an_object);
  }
}

TEST_CASE("duplicate twins sit on the object with the wrong category") {
  const Scenario scn = generate_scenario(small_spec(), 13);
  NoiseModel noise;
  noise.dup_rate = 1.0;
  const auto frames = corrupt(scn, noise, 55);
  for (const auto& f : frames) {
    REQUIRE(f.size() == 2 * scn.objects.size());
    for (std::size_t i = 0; i < f.size(); i += 2) {
      const Detection& tp = f[i];
      const Detection& twin = f[i + 1];
      CHECK(tp.source_id >= 1);
      CHECK(twin.source_id == -1);
      CHECK(twin.category != tp.category);
      CHECK(iou(tp.box, twin.box) > 0.5);
      CHECK(twin.score >= noise.score_fp_lo);
      CHECK(twin.score <= noise.score_fp_hi);
    }
  }

  // a single-category scenario has no wrong category to assign, so no twins
  ScenarioSpec one_cat = small_spec();
  one_cat.categories = 1;
  const Scenario flat = generate_scenario(one_cat, 13);
  const auto plain = corrupt(flat, noise, 55);
  for (const auto& f : plain) CHECK(f.size() == flat.objects.size());
}

TEST_CASE("noise model validation") {
  const Scenario scn = generate_scenario(small_spec(), 1);
  NoiseModel noise;
  noise.miss_rate = 1.5;
  CHECK_THROWS_AS(corrupt(scn, noise, 1), std::invalid_argument);
  noise = {};
  noise.embed_scale = 0;
  CHECK_THROWS_AS(corrupt(scn, noise, 1), std::invalid_argument);
  noise = {};
  noise.score_tp_lo = 0.9;
  noise.score_tp_hi = 0.5;
  CHECK_THROWS_AS(corrupt(scn, noise, 1), std::invalid_argument);
  noise = {};
  noise.fp_sources = 0;
  CHECK_THROWS_AS(corrupt(scn, noise, 1), std::invalid_argument);
}

TEST_CASE("ground-truth export agrees with the object table") {
  ScenarioSpec spec = small_spec();
  spec.birth_window = 0.5;
  spec.death_window = 0.5;
  const Scenario scn = generate_scenario(spec, 17);
  const auto frames = scenario_gt_frames(scn);
  REQUIRE(static_cast<int>(frames.size()) == scn.frames);
  for (int f = 0; f < scn.frames; ++f) {
    std::size_t alive = 0;
    for (const ScenarioObject& obj : scn.objects) alive += obj.alive(f) ? 1 : 0;
    CHECK(frames[f].size() == alive);
    const auto pairs = frame_gt_boxes(scn, f);
    REQUIRE(pairs.size() == alive);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      CHECK(frames[f][i].id == pairs[i].second);
      CHECK(same_box(frames[f][i].box, pairs[i].first));
    }
  }
}

TEST_CASE("proposal generation covers tight, loose and background boxes") {
  const Scenario scn = generate_scenario(small_spec(), 19);
  const auto gts = frame_gt_boxes(scn, 0);
  ProposalSpec pspec;
  pspec.per_gt_positive = 3;
  pspec.per_gt_ignore = 2;
  pspec.background = 10;
  std::mt19937_64 rng(77);
  const auto boxes = generate_proposals(gts, pspec, rng);
  REQUIRE(boxes.size() == gts.size() * 5 + 10);
  for (const BoundingBox& b : boxes) {
    CHECK(b.x >= 0);
    CHECK(b.y >= 0);
    CHECK(b.right() <= pspec.width + 1e-9);
    CHECK(b.bottom() <= pspec.height + 1e-9);
  }
  // the per-gt tight copies overlap their source heavily
  for (std::size_t g = 0; g < gts.size(); ++g)
    for (std::size_t i = 0; i < 3; ++i) CHECK(iou(boxes[g * 5 + i], gts[g].first) > 0.55);

  std::mt19937_64 rng2(77);
  const auto again = generate_proposals(gts, pspec, rng2);
  REQUIRE(again.size() == boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) CHECK(same_box(boxes[i], again[i]));
}

TEST_CASE("table fitting descends its objective and respects a zero learning rate") {
  // two identities, two slots each
  std::vector<TrainingBatch> batches(1);
  batches[0].instances = {{0, {1}, {2, 3}}, {1, {0}, {2, 3}}, {2, {3}, {0, 1}}, {3, {2}, {0, 1}}};
  batches[0].aux_pairs = {{0, 1, 1}, {2, 3, 1}, {0, 2, 0}, {1, 3, 0}};

  FitSpec frozen;
  frozen.steps = 30;
  frozen.learning_rate = 0;
  const FitResult still = fit_embeddings(4, 4, batches, frozen, 5);
  REQUIRE(still.loss_history.size() == 30);
  for (Real v : still.loss_history) CHECK(v == still.loss_history[0]);

  FitSpec spec;
  spec.steps = 300;
  spec.learning_rate = 0.5;
  const FitResult fit = fit_embeddings(4, 4, batches, spec, 5);
  REQUIRE(fit.loss_history.size() == 300);
  CHECK(still.loss_history[0] == fit.loss_history[0]);  // same seeded start
  for (std::size_t i = 1; i < fit.loss_history.size(); ++i)
    CHECK(fit.loss_history[i] <= fit.loss_history[i - 1] + 1e-9);
  CHECK(fit.loss_history.back() < 0.5 * fit.loss_history.front());

  // after fitting, within-identity similarity beats cross-identity similarity
  auto cosine = [&](int a, int b) {
    const Vector u = fit.embeddings.col(a), v = fit.embeddings.col(b);
    return u.dot(v) / (u.norm() * v.norm());
  };
  const Real intra = 0.5 * (cosine(0, 1) + cosine(2, 3));
  const Real inter = 0.25 * (cosine(0, 2) + cosine(0, 3) + cosine(1, 2) + cosine(1, 3));
  CHECK(intra - inter > 0.5);
}

TEST_CASE("table fitting reports divergence instead of emitting garbage") {
  std::vector<TrainingBatch> batches(1);
  batches[0].instances = {{0, {1}, {2}}};
  FitSpec spec;
  spec.steps = 50;
  spec.learning_rate = 1e150;
  CHECK_THROWS_WITH_AS(fit_embeddings(3, 3, batches, spec, 2), doctest::Contains("diverged"),
                       std::runtime_error);

  CHECK_THROWS_AS(fit_embeddings(0, 3, batches, spec, 2), std::invalid_argument);
  CHECK_THROWS_AS(fit_embeddings(3, 3, {}, spec, 2), std::invalid_argument);
  spec.learning_rate = -1;
  CHECK_THROWS_AS(fit_embeddings(3, 3, batches, spec, 2), std::invalid_argument);
}
