#include "motkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace motkit {

namespace {

Real uniform(std::mt19937_64& rng, Real lo, Real hi) {
  if (lo == hi) return lo;  // exact, no draw consumed
  return std::uniform_real_distribution<Real>(lo, hi)(rng);
}

Real gauss(std::mt19937_64& rng) { return std::normal_distribution<Real>(0, 1)(rng); }

Vector unit_gauss(std::mt19937_64& rng, int dim) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
  const Real n = v.norm();
  if (n == 0) return unit_gauss(rng, dim);
  return v / n;
}

// Expected-count Poisson draw via Knuth's product method (small means only).
int poisson(std::mt19937_64& rng, Real mean) {
  if (mean <= 0) return 0;
  const Real limit = std::exp(-mean);
  int k = 0;
  Real p = 1;
  do {
    ++k;
    p *= std::uniform_real_distribution<Real>(0, 1)(rng);
  } while (p > limit);
  return k - 1;
}

// Fold a coordinate into [lo, hi] as if reflecting off both ends.
Real reflect(Real value, Real lo, Real hi) {
  const Real span = hi - lo;
  if (span <= 0) return lo;
  Real t = std::fmod(value - lo, 2 * span);
  if (t < 0) t += 2 * span;
  return lo + (t <= span ? t : 2 * span - t);
}

BoundingBox clamp_to_image(BoundingBox box, Real width, Real height) {
  box.w = std::clamp(box.w, Real(1), width);
  box.h = std::clamp(box.h, Real(1), height);
  box.x = std::clamp(box.x, Real(0), width - box.w);
  box.y = std::clamp(box.y, Real(0), height - box.h);
  return box;
}

BoundingBox jitter_corners(const BoundingBox& box, Real sigma, std::mt19937_64& rng) {
  if (sigma == 0) return box;
  const Real x1 = box.x + sigma * gauss(rng);
  const Real y1 = box.y + sigma * gauss(rng);
  const Real x2 = box.right() + sigma * gauss(rng);
  const Real y2 = box.bottom() + sigma * gauss(rng);
  return {x1, y1, std::max(Real(1), x2 - x1), std::max(Real(1), y2 - y1)};
}

Vector noisy_embedding(const Vector& base, Real sigma, Real scale, std::mt19937_64& rng) {
  if (sigma == 0) return base * scale;  // exact
  Vector e = base;
  for (int i = 0; i < e.size(); ++i) e[i] += sigma * gauss(rng);
  const Real n = e.norm();
  if (n == 0) return base * scale;
  return e * (scale / n);
}

void check_noise(const NoiseModel& nm) {
  auto in01 = [](Real v) { return v >= 0 && v <= 1; };
  if (!in01(nm.miss_rate) || !in01(nm.dup_rate))
    throw std::invalid_argument("corrupt: rates must lie in [0, 1]");
  if (nm.fp_rate < 0 || nm.jitter_sigma < 0 || nm.embed_sigma < 0 || nm.fp_embed_sigma < 0)
    throw std::invalid_argument("corrupt: sigmas and fp_rate must be nonnegative");
  if (!(nm.score_tp_lo <= nm.score_tp_hi) || !(nm.score_fp_lo <= nm.score_fp_hi) ||
      !in01(nm.score_tp_lo) || !in01(nm.score_tp_hi) || !in01(nm.score_fp_lo) ||
      !in01(nm.score_fp_hi))
    throw std::invalid_argument("corrupt: score ranges must be ordered within [0, 1]");
  if (!(nm.embed_scale > 0)) throw std::invalid_argument("corrupt: embed_scale must be positive");
  if (nm.fp_sources < 1) throw std::invalid_argument("corrupt: fp_sources must be >= 1");
  if (!(nm.fp_min_size > 0) || nm.fp_max_size < nm.fp_min_size)
    throw std::invalid_argument("corrupt: bad fp box sizes");
}

}  // namespace

Scenario generate_scenario(const ScenarioSpec& spec, std::uint64_t seed) {
  if (spec.frames < 1) throw std::invalid_argument("scenario: frames must be >= 1");
  if (!(spec.width > 0) || !(spec.height > 0))
    throw std::invalid_argument("scenario: image size must be positive");
  if (spec.objects < 0) throw std::invalid_argument("scenario: negative object count");
  if (spec.categories < 1) throw std::invalid_argument("scenario: categories must be >= 1");
  if (spec.embed_dim < 1) throw std::invalid_argument("scenario: embed_dim must be >= 1");
  if (!(spec.min_size > 0) || spec.max_size < spec.min_size)
    throw std::invalid_argument("scenario: bad box sizes");
  if (spec.max_size > std::min(spec.width, spec.height))
    throw std::invalid_argument("scenario: boxes must fit inside the image");
  if (spec.max_speed < 0) throw std::invalid_argument("scenario: negative speed");
  if (spec.birth_window < 0 || spec.birth_window > 1 || spec.death_window < 0 ||
      spec.death_window > 1)
    throw std::invalid_argument("scenario: windows must lie in [0, 1]");

  std::mt19937_64 rng(seed);
  Scenario scn;
  scn.frames = spec.frames;
  scn.width = spec.width;
  scn.height = spec.height;
  scn.embed_dim = spec.embed_dim;

  for (int i = 0; i < spec.objects; ++i) {
    ScenarioObject obj;
    obj.identity = i + 1;
    obj.category = i % spec.categories;
    const Real w = uniform(rng, spec.min_size, spec.max_size);
    const Real h = uniform(rng, spec.min_size, spec.max_size);

    obj.birth_frame = 0;
    obj.death_frame = spec.frames;
    if (spec.birth_window > 0) {
      const int hi = static_cast<int>(spec.birth_window * (spec.frames - 1));
      obj.birth_frame = std::uniform_int_distribution<int>(0, hi)(rng);
    }
    if (spec.death_window > 0) {
      const int hi = static_cast<int>(spec.death_window * (spec.frames - 1));
      obj.death_frame = spec.frames - std::uniform_int_distribution<int>(0, hi)(rng);
    }
    obj.death_frame = std::max(obj.death_frame, obj.birth_frame + 1);

    const Real cx0 = uniform(rng, w / 2, spec.width - w / 2);
    const Real cy0 = uniform(rng, h / 2, spec.height - h / 2);
    const Real vx = uniform(rng, -spec.max_speed, spec.max_speed);
    const Real vy = uniform(rng, -spec.max_speed, spec.max_speed);

    obj.boxes.resize(spec.frames);
    for (int f = obj.birth_frame; f < obj.death_frame; ++f) {
      const int t = f - obj.birth_frame;
      const Real cx = reflect(cx0 + vx * t, w / 2, spec.width - w / 2);
      const Real cy = reflect(cy0 + vy * t, h / 2, spec.height - h / 2);
      obj.boxes[f] = BoundingBox{cx - w / 2, cy - h / 2, w, h};
    }
    obj.latent = unit_gauss(rng, spec.embed_dim);
    scn.objects.push_back(std::move(obj));
  }
  return scn;
}

std::vector<std::vector<Detection>> corrupt(const Scenario& scenario, const NoiseModel& noise,
                                            std::uint64_t seed) {
  check_noise(noise);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> u01(0, 1);

  std::vector<int> categories;
  {
    std::set<int> cats;
    for (const auto& obj : scenario.objects) cats.insert(obj.category);
    categories.assign(cats.begin(), cats.end());
  }

  // Persistent clutter sources: a static box with an appearance offset from a
  // randomly chosen real object.
  struct ClutterSource {
    BoundingBox box;
    Vector latent;
    int category = 0;
  };
  std::vector<ClutterSource> clutter;
  const bool near_mode =
      noise.fp_embed_mode == FpEmbedMode::kNearObject && !scenario.objects.empty();
  if (noise.fp_rate > 0 && near_mode) {
    std::uniform_int_distribution<std::size_t> pick(0, scenario.objects.size() - 1);
    for (int k = 0; k < noise.fp_sources; ++k) {
      const ScenarioObject& obj = scenario.objects[pick(rng)];
      ClutterSource src;
      const Real w = uniform(rng, noise.fp_min_size, noise.fp_max_size);
      const Real h = uniform(rng, noise.fp_min_size, noise.fp_max_size);
      src.box = clamp_to_image({uniform(rng, 0, scenario.width - w),
                                uniform(rng, 0, scenario.height - h), w, h},
                               scenario.width, scenario.height);
      Vector base = obj.latent;
      if (noise.fp_embed_sigma > 0) {
        for (int i = 0; i < base.size(); ++i) base[i] += noise.fp_embed_sigma * gauss(rng);
        const Real n = base.norm();
        if (n > 0) base /= n;
      }
      src.latent = base;
      src.category = obj.category;
      clutter.push_back(std::move(src));
    }
  }

  std::vector<std::vector<Detection>> frames(scenario.frames);
  for (int f = 0; f < scenario.frames; ++f) {
    std::vector<Detection>& dets = frames[f];
    for (const ScenarioObject& obj : scenario.objects) {
      if (!obj.alive(f)) continue;
      if (noise.miss_rate > 0 && u01(rng) < noise.miss_rate) continue;

      Detection det;
      det.box = clamp_to_image(jitter_corners(*obj.boxes[f], noise.jitter_sigma, rng),
                               scenario.width, scenario.height);
      det.embedding = noisy_embedding(obj.latent, noise.embed_sigma, noise.embed_scale, rng);
      det.score = uniform(rng, noise.score_tp_lo, noise.score_tp_hi);
      det.category = obj.category;
      det.source_id = obj.identity;
      dets.push_back(std::move(det));

      // Wrong-category twin of the same physical object.
      if (noise.dup_rate > 0 && categories.size() > 1 && u01(rng) < noise.dup_rate) {
        Detection dup;
        const Real sigma = 0.02 * (obj.boxes[f]->w + obj.boxes[f]->h) / 2;
        dup.box = clamp_to_image(jitter_corners(*obj.boxes[f], sigma, rng), scenario.width,
                                 scenario.height);
        const auto it = std::find(categories.begin(), categories.end(), obj.category);
        const std::size_t at = static_cast<std::size_t>(it - categories.begin());
        dup.category = categories[(at + 1) % categories.size()];
        dup.embedding = noisy_embedding(obj.latent, noise.embed_sigma, noise.embed_scale, rng);
        dup.score = uniform(rng, noise.score_fp_lo, noise.score_fp_hi);
        dup.source_id = -1;
        dets.push_back(std::move(dup));
      }
    }

    const int n_fp = poisson(rng, noise.fp_rate);
    for (int j = 0; j < n_fp; ++j) {
      Detection fp;
      if (near_mode) {
        const ClutterSource& src = clutter[j % clutter.size()];
        fp.box = clamp_to_image(jitter_corners(src.box, 2.0, rng), scenario.width,
                                scenario.height);
        fp.embedding = noisy_embedding(src.latent, noise.embed_sigma, noise.embed_scale, rng);
        fp.category = src.category;
      } else {
        const Real w = uniform(rng, noise.fp_min_size, noise.fp_max_size);
        const Real h = uniform(rng, noise.fp_min_size, noise.fp_max_size);
        fp.box = clamp_to_image({uniform(rng, 0, std::max(Real(0), scenario.width - w)),
                                 uniform(rng, 0, std::max(Real(0), scenario.height - h)), w, h},
                                scenario.width, scenario.height);
        fp.embedding = unit_gauss(rng, scenario.embed_dim) * noise.embed_scale;
        fp.category = categories.empty()
                          ? 0
                          : categories[std::uniform_int_distribution<std::size_t>(
                                0, categories.size() - 1)(rng)];
      }
      fp.score = uniform(rng, noise.score_fp_lo, noise.score_fp_hi);
      fp.source_id = -1;
      dets.push_back(std::move(fp));
    }
  }
  return frames;
}

std::vector<FrameObjects> scenario_gt_frames(const Scenario& scenario) {
  std::vector<FrameObjects> frames(scenario.frames);
  for (int f = 0; f < scenario.frames; ++f)
    for (const ScenarioObject& obj : scenario.objects)
      if (obj.alive(f)) frames[f].push_back({obj.identity, obj.category, *obj.boxes[f]});
  return frames;
}

std::vector<std::pair<BoundingBox, std::int64_t>> frame_gt_boxes(const Scenario& scenario,
                                                                 int frame) {
  std::vector<std::pair<BoundingBox, std::int64_t>> out;
  for (const ScenarioObject& obj : scenario.objects)
    if (obj.alive(frame)) out.emplace_back(*obj.boxes[frame], obj.identity);
  return out;
}

std::vector<BoundingBox> generate_proposals(
    const std::vector<std::pair<BoundingBox, std::int64_t>>& gts, const ProposalSpec& spec,
    std::mt19937_64& rng) {
  if (spec.per_gt_positive < 0 || spec.per_gt_ignore < 0 || spec.background < 0)
    throw std::invalid_argument("proposals: negative counts");
  if (!(spec.width > 0) || !(spec.height > 0))
    throw std::invalid_argument("proposals: image size must be positive");
  if (!(spec.bg_min_size > 0) || spec.bg_max_size < spec.bg_min_size)
    throw std::invalid_argument("proposals: bad background sizes");

  std::vector<BoundingBox> out;
  auto perturbed = [&](const BoundingBox& b, Real shift, Real scale_lo, Real scale_hi) {
    const Real w = b.w * uniform(rng, scale_lo, scale_hi);
    const Real h = b.h * uniform(rng, scale_lo, scale_hi);
    const Real cx = b.cx() + b.w * uniform(rng, -shift, shift);
    const Real cy = b.cy() + b.h * uniform(rng, -shift, shift);
    return clamp_to_image({cx - w / 2, cy - h / 2, w, h}, spec.width, spec.height);
  };
  for (const auto& [box, id] : gts) {
    for (int i = 0; i < spec.per_gt_positive; ++i) out.push_back(perturbed(box, 0.05, 0.95, 1.05));
    for (int i = 0; i < spec.per_gt_ignore; ++i) out.push_back(perturbed(box, 0.35, 0.6, 1.5));
  }
  for (int i = 0; i < spec.background; ++i) {
    const Real w = uniform(rng, spec.bg_min_size, spec.bg_max_size);
    const Real h = uniform(rng, spec.bg_min_size, spec.bg_max_size);
    out.push_back(clamp_to_image({uniform(rng, 0, std::max(Real(0), spec.width - w)),
                                  uniform(rng, 0, std::max(Real(0), spec.height - h)), w, h},
                                 spec.width, spec.height));
  }
  return out;
}

FitResult fit_embeddings(int dim, int num_embeddings, const std::vector<TrainingBatch>& batches,
                         const FitSpec& spec, std::uint64_t seed) {
  if (dim < 1 || num_embeddings < 1) throw std::invalid_argument("fit: empty table");
  if (batches.empty()) throw std::invalid_argument("fit: no batches");
  if (spec.steps < 0 || !(spec.learning_rate >= 0) || spec.gamma_embed < 0 || spec.gamma_aux < 0)
    throw std::invalid_argument("fit: bad optimiser settings");

  std::mt19937_64 rng(seed);
  FitResult res;
  res.embeddings = Matrix(dim, num_embeddings);
  const Real init_scale = 1 / std::sqrt(static_cast<Real>(dim));
  for (int j = 0; j < num_embeddings; ++j)
    for (int i = 0; i < dim; ++i) res.embeddings(i, j) = init_scale * gauss(rng);

  const Real batch_w = 1 / static_cast<Real>(batches.size());
  for (int step = 0; step < spec.steps; ++step) {
    Real value = 0;
    Matrix grad = Matrix::Zero(dim, num_embeddings);
    for (const TrainingBatch& batch : batches) {
      const BatchObjective obj = batch_embedding_objective(
          res.embeddings, batch.instances, batch.aux_pairs, spec.gamma_embed, spec.gamma_aux,
          spec.kind);
      value += batch_w * obj.value;
      grad += batch_w * obj.grad;
    }
    if (!std::isfinite(value) || !grad.allFinite())
      throw std::runtime_error("fit: objective diverged at step " + std::to_string(step));
    res.loss_history.push_back(value);
    res.embeddings -= spec.learning_rate * grad;
  }
  return res;
}

}  // namespace motkit
