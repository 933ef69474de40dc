#pragma once

#include <cmath>

#include "geoad/core.hpp"
#include "geoad/path_tree.hpp"

namespace geoad::test {

inline bool sw_close(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// Chain instance over `vertices` 0..len-1 with explicit advertisers.
inline Instance make_chain(int len, std::vector<Advertiser> ads,
                           std::vector<double> lambdas) {
  Path p;
  p.gamma = 1.0;
  for (int v = 0; v < len; ++v) p.vertices.push_back(v);
  Instance inst;
  inst.tree = build_tree({p});
  inst.advertisers = std::move(ads);
  inst.fatigue.lambdas = std::move(lambdas);
  check_instance(inst);
  return inst;
}

// Root plus three leaves, gamma 0.5/0.25/0.25, with a root-only ad and a
// leaf ad; the maximal ads along every path are distinct.
inline Instance make_star() {
  std::vector<Path> paths;
  for (int i = 0; i < 3; ++i) {
    Path p;
    p.gamma = i == 0 ? 0.5 : 0.25;
    p.vertices = {0, 10 + i};
    paths.push_back(p);
  }
  Instance inst;
  inst.tree = build_tree(paths);
  Advertiser root_ad, leaf_ad;
  root_ad.reward = 10.0;
  root_ad.qualities = {{0, 0.8}};
  leaf_ad.reward = 20.0;
  leaf_ad.qualities = {{1, 1.0}, {2, 0.6}, {3, 0.4}};
  inst.advertisers = {root_ad, leaf_ad};
  inst.fatigue.lambdas = {0.5};
  check_instance(inst);
  return inst;
}

}  // namespace geoad::test
