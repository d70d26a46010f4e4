#include "motkit/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace motkit {

namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t");
  return std::string(s.substr(begin, end - begin + 1));
}

[[noreturn]] void fail(const std::string& name, long line, const std::string& what) {
  throw std::runtime_error(name + ":" + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_number(const std::string& value, const std::string& name, long line) {
  T out{};
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto res = std::from_chars(begin, end, out);
  if (res.ec != std::errc() || res.ptr != end) fail(name, line, "bad value '" + value + "'");
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(out)) fail(name, line, "non-finite value");
  }
  return out;
}

}  // namespace

BenchmarkConfig parse_config_text(const std::string& text, const std::string& name) {
  BenchmarkConfig cfg;

  using Setter = std::function<void(const std::string&, long)>;
  std::map<std::string, Setter> keys;
  auto real_key = [&](const std::string& key, Real& slot) {
    keys[key] = [ptr = &slot, name](const std::string& v, long line) {
      *ptr = parse_number<Real>(v, name, line);
    };
  };
  auto int_key = [&](const std::string& key, int& slot) {
    keys[key] = [ptr = &slot, name](const std::string& v, long line) {
      *ptr = parse_number<int>(v, name, line);
    };
  };

  int_key("frames", cfg.scenario.frames);
  real_key("width", cfg.scenario.width);
  real_key("height", cfg.scenario.height);
  int_key("objects", cfg.scenario.objects);
  int_key("categories", cfg.scenario.categories);
  int_key("embed_dim", cfg.scenario.embed_dim);
  real_key("min_size", cfg.scenario.min_size);
  real_key("max_size", cfg.scenario.max_size);
  real_key("max_speed", cfg.scenario.max_speed);
  real_key("birth_window", cfg.scenario.birth_window);
  real_key("death_window", cfg.scenario.death_window);

  real_key("miss_rate", cfg.noise.miss_rate);
  real_key("fp_rate", cfg.noise.fp_rate);
  real_key("jitter_sigma", cfg.noise.jitter_sigma);
  real_key("score_tp_lo", cfg.noise.score_tp_lo);
  real_key("score_tp_hi", cfg.noise.score_tp_hi);
  real_key("score_fp_lo", cfg.noise.score_fp_lo);
  real_key("score_fp_hi", cfg.noise.score_fp_hi);
  real_key("embed_sigma", cfg.noise.embed_sigma);
  real_key("fp_embed_sigma", cfg.noise.fp_embed_sigma);
  int_key("fp_sources", cfg.noise.fp_sources);
  real_key("fp_min_size", cfg.noise.fp_min_size);
  real_key("fp_max_size", cfg.noise.fp_max_size);
  real_key("dup_rate", cfg.noise.dup_rate);
  real_key("embed_scale", cfg.noise.embed_scale);
  keys["fp_embed_mode"] = [&cfg, name](const std::string& v, long line) {
    if (v == "random") cfg.noise.fp_embed_mode = FpEmbedMode::kRandom;
    else if (v == "near_object") cfg.noise.fp_embed_mode = FpEmbedMode::kNearObject;
    else fail(name, line, "fp_embed_mode must be 'random' or 'near_object'");
  };

  int_key("proposals_positive", cfg.train.proposals.per_gt_positive);
  int_key("proposals_ignore", cfg.train.proposals.per_gt_ignore);
  int_key("proposals_background", cfg.train.proposals.background);
  real_key("bg_min_size", cfg.train.proposals.bg_min_size);
  real_key("bg_max_size", cfg.train.proposals.bg_max_size);
  int_key("key_samples", cfg.train.key_samples);
  int_key("ref_samples", cfg.train.ref_samples);
  real_key("alpha1", cfg.train.alpha1);
  real_key("alpha2", cfg.train.alpha2);
  int_key("max_ref_offset", cfg.train.max_ref_offset);
  int_key("ref_rounds", cfg.train.ref_rounds);
  int_key("fit_steps", cfg.train.fit_steps);
  real_key("fit_lr", cfg.train.fit_lr);
  real_key("gamma_embed", cfg.train.gamma_embed);
  real_key("gamma_aux", cfg.train.gamma_aux);

  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) fail(name, lineno, "expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    const auto it = keys.find(key);
    if (it == keys.end()) fail(name, lineno, "unknown key '" + key + "'");
    if (value.empty()) fail(name, lineno, "empty value for '" + key + "'");
    it->second(value, lineno);
  }

  cfg.train.proposals.width = cfg.scenario.width;
  cfg.train.proposals.height = cfg.scenario.height;
  return cfg;
}

BenchmarkConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string default_config_text() {
  return R"(# Scenario
frames = 100
width = 800
height = 600
objects = 10
categories = 2
embed_dim = 32
min_size = 24
max_size = 48
max_speed = 5
birth_window = 0
death_window = 0

# Detection noise
miss_rate = 0
fp_rate = 0
jitter_sigma = 0
score_tp_lo = 1
score_tp_hi = 1
score_fp_lo = 0.5
score_fp_hi = 0.75
embed_sigma = 0
fp_embed_mode = random   # random | near_object
fp_embed_sigma = 0.3
fp_sources = 3
fp_min_size = 24
fp_max_size = 48
dup_rate = 0
embed_scale = 6

# Training (ablation runs)
proposals_positive = 3
proposals_ignore = 2
proposals_background = 16
bg_min_size = 16
bg_max_size = 64
key_samples = 64
ref_samples = 128
alpha1 = 0.7
alpha2 = 0.3
max_ref_offset = 3
ref_rounds = 1
fit_steps = 500
fit_lr = 20
gamma_embed = 0.25
gamma_aux = 1
)";
}

}  // namespace motkit
