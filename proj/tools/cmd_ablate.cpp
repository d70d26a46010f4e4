#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <thread>

#include "commands.hpp"
#include "motkit/bench.hpp"
#include "motkit/config.hpp"

namespace motkit::cli {

namespace {

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("MOTKIT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min<int>(threads, static_cast<int>(n));
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

struct CellStats {
  double mota = 0;
  double idf1 = 0;
  double fp_assoc = 0;
};

constexpr int kGridCells = 12;
constexpr int kOracleCells = 3;

const char* kKindNames[3] = {"single", "naive", "multi"};
constexpr ContrastiveKind kKinds[3] = {ContrastiveKind::kSinglePositive,
                                       ContrastiveKind::kMultiNaive,
                                       ContrastiveKind::kMultiPositive};

TrackerConfig grid_tracker(SimilarityMetric sim, bool full) {
  TrackerConfig cfg;
  cfg.similarity = sim;
  cfg.use_backdrops = full;
  cfg.inter_class_dedup = full;
  return cfg;
}

}  // namespace

int cmd_ablate(const AblateArgs& args) {
  const BenchmarkConfig cfg = read_config(args.config_path);
  if (args.seeds.empty()) throw std::runtime_error("ablate: need at least one seed");

  const int n_cells = kGridCells + (args.oracle_rows ? kOracleCells : 0);
  std::vector<std::vector<CellStats>> per_seed(args.seeds.size(),
                                               std::vector<CellStats>(n_cells));

  parallel_for(args.seeds.size(), resolve_threads(args.threads), [&](std::size_t si) {
    const std::uint64_t seed = args.seeds[si];
    const Scenario base = generate_scenario(cfg.scenario, seed);
    const std::uint64_t corrupt_seed = seed + 1;

    // One corrupt stream per seed; the loss rows only swap the embeddings, so
    // every cell sees the same boxes and the comparison is paired.
    const auto dets = corrupt(base, cfg.noise, corrupt_seed);

    int cell = 0;
    for (int k = 0; k < 3; ++k) {
      const FittedEmbeddings fitted =
          run_training(base, cfg.train, kKinds[k], seed * 10 + static_cast<std::uint64_t>(k));
      const auto mapped = assign_fitted_embeddings(dets, base, fitted, cfg.noise.embed_scale,
                                                   corrupt_seed * 10 + static_cast<std::uint64_t>(k));
      for (SimilarityMetric sim : {SimilarityMetric::kBisoftmax, SimilarityMetric::kCosine}) {
        for (bool full : {false, true}) {
          const RunOutcome out = run_tracking(base, mapped, grid_tracker(sim, full));
          per_seed[si][cell] = {out.report.mota, out.report.idf1,
                                static_cast<double>(out.fp_track_associations)};
          ++cell;
        }
      }
    }
    if (args.oracle_rows) {
      // Reference rows run on the raw latents, independent of any fit.
      const TrackerConfig plain = grid_tracker(SimilarityMetric::kBisoftmax, true);
      const RunOutcome latent = run_tracking_noisy(base, cfg.noise, plain, corrupt_seed);
      per_seed[si][cell++] = {latent.report.mota, latent.report.idf1,
                              static_cast<double>(latent.fp_track_associations)};

      const RunOutcome det_oracle =
          run_tracking_noisy(base, detection_oracle_noise(cfg.noise), plain, corrupt_seed);
      per_seed[si][cell++] = {det_oracle.report.mota, det_oracle.report.idf1,
                              static_cast<double>(det_oracle.fp_track_associations)};

      TrackerConfig oracle_cfg = plain;
      oracle_cfg.oracle_association = true;
      const RunOutcome trk_oracle = run_tracking_noisy(base, cfg.noise, oracle_cfg, corrupt_seed);
      per_seed[si][cell++] = {trk_oracle.report.mota, trk_oracle.report.idf1,
                              static_cast<double>(trk_oracle.fp_track_associations)};
    }
  });

  std::vector<CellStats> mean(n_cells);
  for (const auto& seed_cells : per_seed) {
    for (int c = 0; c < n_cells; ++c) {
      mean[c].mota += seed_cells[c].mota / static_cast<double>(args.seeds.size());
      mean[c].idf1 += seed_cells[c].idf1 / static_cast<double>(args.seeds.size());
      mean[c].fp_assoc += seed_cells[c].fp_assoc / static_cast<double>(args.seeds.size());
    }
  }

  std::printf("%-8s %-10s %-10s %8s %8s %10s\n", "loss", "similarity", "candidates", "mota",
              "idf1", "fp_assoc");
  int cell = 0;
  for (int k = 0; k < 3; ++k) {
    for (const char* sim : {"bisoftmax", "cosine"}) {
      for (const char* cands : {"plain", "full"}) {
        std::printf("%-8s %-10s %-10s %8.4f %8.4f %10.1f\n", kKindNames[k], sim, cands,
                    mean[cell].mota, mean[cell].idf1, mean[cell].fp_assoc);
        ++cell;
      }
    }
  }
  if (args.oracle_rows) {
    for (const char* name : {"latent", "det-orcl", "trk-orcl"}) {
      std::printf("%-8s %-10s %-10s %8.4f %8.4f %10.1f\n", name, "bisoftmax", "full",
                  mean[cell].mota, mean[cell].idf1, mean[cell].fp_assoc);
      ++cell;
    }
  }
  return 0;
}

}  // namespace motkit::cli
