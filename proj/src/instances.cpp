#include "geoad/instances.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>

#include "geoad/path_tree.hpp"

namespace geoad {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::next_unit() {
  // 53 uniform bits, shifted into (0, 1].
  return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
}

int SplitMix64::next_below(int n) {
  if (n < 1) throw std::invalid_argument("next_below needs n >= 1");
  const auto range = static_cast<std::uint64_t>(n);
  // Multiply-shift with rejection of the biased low band.
  const std::uint64_t threshold = (0ULL - range) % range;
  while (true) {
    const unsigned __int128 m =
        static_cast<unsigned __int128>(next()) * range;
    if (static_cast<std::uint64_t>(m) >= threshold) {
      return static_cast<int>(static_cast<std::uint64_t>(m >> 64));
    }
  }
}

SplitMix64 make_stream(std::uint64_t seed, std::uint64_t stream_id) {
  // Decorrelate streams by running the master seed through one splitmix
  // step per stream id before seeding the stream generator.
  SplitMix64 master(seed ^ (0xda3e39cb94b95bdbULL * (stream_id + 1)));
  return SplitMix64(master.next());
}

int GridWorld::manhattan(int cell_a, int cell_b) const {
  const int ax = cell_a % width, ay = cell_a / width;
  const int bx = cell_b % width, by = cell_b / width;
  return std::abs(ax - bx) + std::abs(ay - by);
}

double GridWorld::quality(int ad, int cell) const {
  const double span = static_cast<double>(width - 1 + height - 1);
  const double dist =
      span > 0.0 ? static_cast<double>(manhattan(shop_cell[ad], cell)) / span
                 : 0.0;
  const double q = base_quality[ad] - decay[ad] * dist;
  return q > 0.0 ? q : 0.0;
}

namespace {

enum Stream : std::uint64_t {
  kShops = 0,
  kBaseQuality = 1,
  kDecay = 2,
  kRewards = 3,
  kWalks = 4,
  kWeights = 5,
};

std::vector<int> grid_neighbors(int cell, int width, int height) {
  const int x = cell % width, y = cell / width;
  std::vector<int> out;
  if (x + 1 < width) out.push_back(cell + 1);
  if (x - 1 >= 0) out.push_back(cell - 1);
  if (y + 1 < height) out.push_back(cell + width);
  if (y - 1 >= 0) out.push_back(cell - width);
  return out;
}

std::vector<int> random_walk(SplitMix64& rng, int start, int length, int width,
                             int height) {
  std::vector<int> cells{start};
  cells.reserve(length);
  while (static_cast<int>(cells.size()) < length) {
    const std::vector<int> nbrs = grid_neighbors(cells.back(), width, height);
    cells.push_back(nbrs[rng.next_below(static_cast<int>(nbrs.size()))]);
  }
  return cells;
}

}  // namespace

GeneratedInstance generate_instance(const GenConfig& cfg) {
  if (cfg.width < 1 || cfg.height < 1) {
    throw std::invalid_argument("grid must have at least one cell");
  }
  if (cfg.num_ads < 1) throw std::invalid_argument("need at least one ad");
  if (cfg.num_paths < 1) throw std::invalid_argument("need at least one path");
  if (cfg.path_length < 1 || cfg.min_path_length < 1 ||
      cfg.max_path_length < cfg.min_path_length) {
    throw std::invalid_argument("path lengths must be positive and ordered");
  }

  GeneratedInstance out;
  GridWorld& world = out.world;
  world.width = cfg.width;
  world.height = cfg.height;

  SplitMix64 shops = make_stream(cfg.seed, kShops);
  SplitMix64 base = make_stream(cfg.seed, kBaseQuality);
  SplitMix64 decay = make_stream(cfg.seed, kDecay);
  SplitMix64 rewards = make_stream(cfg.seed, kRewards);
  SplitMix64 walks = make_stream(cfg.seed, kWalks);
  SplitMix64 weights = make_stream(cfg.seed, kWeights);

  for (int a = 0; a < cfg.num_ads; ++a) {
    world.shop_cell.push_back(shops.next_below(world.num_cells()));
    world.base_quality.push_back(base.next_unit());
    world.decay.push_back(decay.next_unit());
  }

  const int start = walks.next_below(world.num_cells());
  std::vector<Path> paths;
  for (int p = 0; p < cfg.num_paths; ++p) {
    const int length =
        cfg.num_paths == 1
            ? cfg.path_length
            : cfg.min_path_length +
                  walks.next_below(cfg.max_path_length - cfg.min_path_length +
                                   1);
    Path path;
    path.vertices = random_walk(walks, start, length, cfg.width, cfg.height);
    path.gamma = cfg.num_paths == 1 ? 1.0 : weights.next_unit();
    paths.push_back(std::move(path));
  }
  paths = normalize_gammas(paths, cfg.num_paths);

  Instance& inst = out.instance;
  inst.tree = build_tree(paths);

  for (int a = 0; a < cfg.num_ads; ++a) {
    Advertiser ad;
    ad.reward = 100.0 * rewards.next_unit();
    for (const TreeNode& node : inst.tree.nodes) {
      const double q = world.quality(a, node.vertex);
      if (q > 0.0) ad.qualities[node.id] = q;
    }
    inst.advertisers.push_back(std::move(ad));
  }

  const int depth = inst.tree.max_depth();
  inst.fatigue.lambdas.assign(std::max(1, depth - 1), cfg.lambda);
  check_instance(inst);
  return out;
}

Instance builtin_fixture(const std::string& name) {
  const auto two_node = [](double r1, double r2, double lambda) {
    Instance inst;
    Path p;
    p.gamma = 1.0;
    p.vertices = {0, 1};
    inst.tree = build_tree({p});
    Advertiser a1, a2;
    a1.reward = r1;
    a1.qualities = {{0, 0.5}, {1, 1.0}};
    a2.reward = r2;
    a2.qualities = {{0, 0.5}, {1, 1.0}};
    inst.advertisers = {a1, a2};
    inst.fatigue.lambdas = {lambda};
    check_instance(inst);
    return inst;
  };

  if (name == "table1a") return two_node(2.0, 4.0, 0.5);
  if (name == "table1a-nonmono") return two_node(2.0, 4.0, 0.2);
  if (name == "table1b") return two_node(6.0, 4.0, 0.2);
  if (name == "example2") {
    Instance inst;
    Path p;
    p.gamma = 1.0;
    p.vertices = {0, 1, 2};
    inst.tree = build_tree({p});
    Advertiser a1, a2, a3;
    a1.reward = 100.0;
    a1.qualities = {{2, 1.0}};
    a2.reward = 79.0;
    a2.qualities = {{0, 1.0}};
    a3.reward = 70.0;
    a3.qualities = {{1, 1.0}};
    inst.advertisers = {a1, a2, a3};
    inst.fatigue.lambdas = {0.2, 0.2};
    check_instance(inst);
    return inst;
  }
  throw std::invalid_argument("unknown fixture: " + name);
}

}  // namespace geoad
