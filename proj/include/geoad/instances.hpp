#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geoad/core.hpp"

namespace geoad {

// Deterministic 64-bit generator (splitmix64).  Used instead of <random>
// engines so that the same seed reproduces the same instance on every
// platform and standard-library implementation.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  // Uniform draw from (0, 1]; never returns zero so that weights and
  // rewards derived from it stay strictly positive.
  double next_unit();

  // Uniform integer in [0, n), n >= 1, via Lemire's multiply-shift.
  int next_below(int n);

 private:
  std::uint64_t state_;
};

// Independent sub-stream of a master seed.  Each generated quantity (shop
// placement, qualities, rewards, walks, weights) reads its own stream so
// that changing one config knob never shifts the draws of the others.
SplitMix64 make_stream(std::uint64_t seed, std::uint64_t stream_id);

// Rectangular grid of cells; each advertiser has one shop cell and its ad
// quality decays linearly with normalised Manhattan distance from it.
struct GridWorld {
  int width = 10;
  int height = 10;
  std::vector<int> shop_cell;        // one cell index (y * width + x) per ad
  std::vector<double> base_quality;  // quality at the shop itself
  std::vector<double> decay;         // loss per unit of normalised distance

  int num_cells() const { return width * height; }
  int manhattan(int cell_a, int cell_b) const;
  double quality(int ad, int cell) const;
};

struct GenConfig {
  std::uint64_t seed = 0;
  int num_ads = 30;
  double lambda = 0.5;      // constant continuation probability
  int num_paths = 1;        // 1 builds a chain, >1 a path tree
  int path_length = 20;     // exact walk length when num_paths == 1
  int min_path_length = 1;  // multi-path lengths drawn uniformly in range
  int max_path_length = 20;
  int width = 10;
  int height = 10;
};

struct GeneratedInstance {
  Instance instance;
  GridWorld world;
};

// Random instance: shops uniform over the grid, rewards uniform in (0, 100],
// per-ad base quality and decay uniform in (0, 1], user paths are random
// grid walks from a common start (revisits allowed), path weights uniform
// then normalised.  Fully determined by the config.
GeneratedInstance generate_instance(const GenConfig& cfg);

// Small hand-built instances used by the documentation, the fixtures under
// fixtures/, and the regression tests: "table1a", "table1a-nonmono",
// "table1b", "example2".
Instance builtin_fixture(const std::string& name);

}  // namespace geoad
