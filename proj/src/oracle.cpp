#include "geoad/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace geoad {

namespace {

void check_guard(const Instance& inst, const EnumerationGuard& guard) {
  const int n = inst.num_nodes();
  const int a = inst.num_ads();
  if (n > guard.max_nodes || a > guard.max_ads) {
    throw std::runtime_error("oracle: instance exceeds enumeration guard (" +
                             std::to_string(n) + " nodes, " + std::to_string(a) +
                             " ads)");
  }
  const double plans = std::pow(static_cast<double>(a) + 1.0, n);
  if (plans > static_cast<double>(guard.max_plans)) {
    throw std::runtime_error(
        "oracle: " + std::to_string(plans) +
        " candidate plans exceed the enumeration guard of " +
        std::to_string(guard.max_plans));
  }
}

struct Search {
  const Instance& inst;
  const std::function<bool(const Plan&)>* keep;
  Plan current;
  Plan best;
  double best_sw;
  bool have_best = false;

  explicit Search(const Instance& i, const std::function<bool(const Plan&)>* k)
      : inst(i), keep(k), best_sw(0.0) {}

  // Nodes are visited in id (breadth-first) order, so every ancestor of a
  // node is decided before the node itself and per-path uniqueness reduces
  // to "no ad repeated on the ancestor chain".
  void visit(int node) {
    if (node == inst.num_nodes()) {
      if (keep && !(*keep)(current)) return;
      const double sw = social_welfare(inst, current);
      if (!have_best || plan_improves(sw, current, best_sw, best)) {
        best = current;
        best_sw = sw;
        have_best = true;
      }
      return;
    }
    visit(node + 1);  // leave the node empty
    for (int ad = 0; ad < inst.num_ads(); ++ad) {
      bool clash = false;
      int cur = inst.tree.node(node).parent;
      while (cur >= 0) {
        if (current.ad_at(cur) == ad) {
          clash = true;
          break;
        }
        cur = inst.tree.node(cur).parent;
      }
      if (clash) continue;
      current.set(node, ad);
      visit(node + 1);
      current.assignment.erase(node);
    }
  }
};

OracleResult run(const Instance& inst, const std::function<bool(const Plan&)>* keep,
                 const EnumerationGuard& guard) {
  check_guard(inst, guard);
  if (inst.num_ads() == 0) return {Plan{}, 0.0};
  Search search(inst, keep);
  search.visit(0);
  if (!search.have_best) return {Plan{}, 0.0};
  return {search.best, search.best_sw};
}

}  // namespace

OracleResult brute_force_optimal(const Instance& inst, const EnumerationGuard& guard) {
  return run(inst, nullptr, guard);
}

OracleResult brute_force_restricted(const Instance& inst,
                                    const std::function<bool(const Plan&)>& keep,
                                    const EnumerationGuard& guard) {
  return run(inst, &keep, guard);
}

}  // namespace geoad
