#pragma once

#include <cstdint>
#include <stdexcept>

#include "geoad/core.hpp"

namespace geoad {

// Raised instead of running a search whose worst case exceeds the
// configured cap; callers can force the run under the expansion budget.
struct BudgetRefusal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TreeSolveOptions {
  std::uint64_t max_expansions = 5'000'000;  // branch-and-bound node budget
  double timeout_s = 0.0;                    // wall clock, 0 = unlimited
  bool force = false;                        // accept arbitrarily large instances
  double worst_case_cap = 1e12;              // refuse when |A|^|N| exceeds this
                                             // (unless force is set)
};

struct TreeSolveResult {
  Plan plan;
  double sw = 0.0;
  bool optimal = true;  // false when budget/timeout returned the incumbent
  std::uint64_t expansions = 0;
};

// Admissible completion bound for a partial plan that has decided every node
// with id < next_node: sum over the undecided nodes of
// alpha_n * continuation(ads already placed on n's ancestor chain) * max_a(q*r),
// i.e. ignoring ad-uniqueness and any fatigue the completion itself adds.
double branch_bound_upper(const Instance& inst, const Plan& partial, int next_node);

// Exact multi-path solver: recursive branch and bound over subtrees.  At each
// node it branches over {no ad} and every ad with value there that no
// ancestor already shows; sibling subtrees share no root-leaf path, so each
// child subproblem — identified by (subtree, ads shown above, inherited ad
// bans) — is solved independently, memoized, and pruned against an admissible
// bound built from per-(path, ad) prices tuned by subgradient ascent.
// Branches are cut only when strictly worse, so the returned plan is the
// canonical optimum under the shared tie-breaking order.  Exceeding the
// expansion budget or timeout returns the best of the partial search and a
// seeded heuristic incumbent, with optimal=false.  Throws BudgetRefusal when
// |A|^|N| exceeds worst_case_cap and force is not set.
TreeSolveResult solve_tree_exact(const Instance& inst,
                                 const TreeSolveOptions& options = {});

// Value/plan tables of the maximal-ad tree recursion at `node`: entry i is
// the best achievable in the subtree when i ads are shown before reaching it
// (i ranges over 0..depth(node)-1).  Requires every root-to-leaf path to have
// pairwise-distinct maximal ads; throws std::invalid_argument otherwise.
struct TreeDpVectors {
  std::vector<double> pi;
  std::vector<Plan> phi;
};
TreeDpVectors tree_dp_vectors(const Instance& inst, int node);

// Linear-time tree solver for the restricted domain above: at each node
// either its maximal ad is shown or nothing, ties resolved toward showing
// nothing; leaves always take their maximal ad.
Plan solve_tree_dp(const Instance& inst);

// The chain sub-problem induced by one path: nodes renumbered 0..len-1 along
// the path, per-node probability mass and qualities carried over.
Instance path_subinstance(const Instance& inst, int path_index);

struct BestPathResult {
  Plan plan;          // expressed in original tree node ids
  double sw = 0.0;    // value of the winning path's plan
  int path_index = -1;
};

// Plans each path independently (capped at max_ads per plan) and keeps the
// best path, lowest path index winning ties.  SW >= OPT *
// (1 - prod of the first max_ads-1 lambdas) / |paths|.
BestPathResult solve_tree_best_path(const Instance& inst, int max_ads);

// Same with the exact chain solver per path; SW >= OPT / |paths|.
BestPathResult solve_tree_best_path_exact(const Instance& inst);

}  // namespace geoad
