#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "motkit/config.hpp"

using namespace motkit;

TEST_CASE("the default config text parses back to default settings") {
  const BenchmarkConfig cfg = parse_config_text(default_config_text(), "default");
  const BenchmarkConfig fresh;
  CHECK(cfg.scenario.frames == fresh.scenario.frames);
  CHECK(cfg.scenario.width == fresh.scenario.width);
  CHECK(cfg.scenario.objects == fresh.scenario.objects);
  CHECK(cfg.scenario.categories == fresh.scenario.categories);
  CHECK(cfg.scenario.embed_dim == fresh.scenario.embed_dim);
  CHECK(cfg.scenario.max_speed == fresh.scenario.max_speed);
  CHECK(cfg.noise.miss_rate == fresh.noise.miss_rate);
  CHECK(cfg.noise.fp_rate == fresh.noise.fp_rate);
  CHECK(cfg.noise.score_fp_hi == fresh.noise.score_fp_hi);
  CHECK(cfg.noise.fp_embed_mode == fresh.noise.fp_embed_mode);
  CHECK(cfg.noise.embed_scale == fresh.noise.embed_scale);
  CHECK(cfg.train.key_samples == fresh.train.key_samples);
  CHECK(cfg.train.ref_samples == fresh.train.ref_samples);
  CHECK(cfg.train.alpha1 == fresh.train.alpha1);
  CHECK(cfg.train.alpha2 == fresh.train.alpha2);
  CHECK(cfg.train.max_ref_offset == fresh.train.max_ref_offset);
  CHECK(cfg.train.ref_rounds == fresh.train.ref_rounds);
  CHECK(cfg.train.fit_steps == fresh.train.fit_steps);
  CHECK(cfg.train.fit_lr == fresh.train.fit_lr);
  CHECK(cfg.train.gamma_embed == fresh.train.gamma_embed);
  CHECK(cfg.train.gamma_aux == fresh.train.gamma_aux);
  // proposal boxes live on the scenario's image plane
  CHECK(cfg.train.proposals.width == cfg.scenario.width);
  CHECK(cfg.train.proposals.height == cfg.scenario.height);
}

TEST_CASE("overrides, comments and whitespace") {
  const std::string text =
      "frames= 40 # short run\n"
      "\n"
      "   # full-line comment\n"
      "\tmiss_rate =0.25\n"
      "fp_embed_mode = near_object\n"
      "width = 400\n"
      "ref_rounds = 2\n";
  const BenchmarkConfig cfg = parse_config_text(text, "test");
  CHECK(cfg.scenario.frames == 40);
  CHECK(cfg.noise.miss_rate == 0.25);
  CHECK(cfg.noise.fp_embed_mode == FpEmbedMode::kNearObject);
  CHECK(cfg.train.ref_rounds == 2);
  CHECK(cfg.train.proposals.width == 400);     // follows the overridden scenario
  CHECK(cfg.scenario.objects == 10);           // untouched keys keep defaults
}

TEST_CASE("parse errors carry the source name and line") {
  auto expect_error = [](const std::string& text, const std::string& needle, long line) {
    try {
      parse_config_text(text, "cfg");
      FAIL_CHECK("expected parse failure for: " << text);
    } catch (const std::runtime_error& e) {
      const std::string what = e.what();
      CHECK(what.find("cfg:" + std::to_string(line) + ":") != std::string::npos);
      CHECK(what.find(needle) != std::string::npos);
    }
  };
  expect_error("frames = 10\nmystery = 3\n", "unknown key 'mystery'", 2);
  expect_error("frames = ten\n", "bad value 'ten'", 1);
  expect_error("frames = 1.5\n", "bad value", 1);
  expect_error("frames\n", "expected 'key = value'", 1);
  expect_error("frames =\n", "empty value", 1);
  expect_error("frames = # 10\n", "empty value", 1);
  expect_error("fp_embed_mode = sideways\n", "'random' or 'near_object'", 1);
}

TEST_CASE("reading a config file") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "motkit_config_tests";
  fs::create_directories(dir);
  const fs::path p = dir / "bench.cfg";
  {
    std::ofstream out(p);
    out << "objects = 4\nembed_dim = 12\n";
  }
  const BenchmarkConfig cfg = read_config(p.string());
  CHECK(cfg.scenario.objects == 4);
  CHECK(cfg.scenario.embed_dim == 12);
  CHECK_THROWS_WITH_AS(read_config((dir / "absent.cfg").string()),
                       doctest::Contains("cannot open"), std::runtime_error);
}
