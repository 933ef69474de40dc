#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "geoad/core.hpp"

namespace geoad {

// Bookkeeping for one candidate set B of chain nodes that receive ads:
// members in path order and, for each member, how many members precede it
// (which fixes its fatigue discount).
struct SubsetContext {
  std::vector<int> members;          // node ids, path order
  std::map<int, int> count_before;   // member node id -> #members before it
};

// Builds the context for `members` (any order, node ids of a chain tree).
// Throws when the tree is not a chain or a member is not a tree node.
SubsetContext make_subset_context(const PathTree& tree, std::vector<int> members);

// Reference evaluation of one subset: discounted value matrix
// w[a][i] = alpha * q_{a,n_i} * r_a * continuation(count_before(n_i))
// solved as a single assignment.  Returns the best plan allocating exactly
// the member nodes and its value.  Requires |B| <= |A|.
std::pair<Plan, double> chain_subset_value(const Instance& inst,
                                           const std::vector<int>& members);

struct ChainSolveOptions {
  double timeout_s = 0.0;  // 0 = unlimited
};

struct ChainSolveResult {
  Plan plan;
  double sw = 0.0;
  bool optimal = true;  // false only when the timeout interrupted the search
};

// Exact single-path solver: searches every subset B of chain nodes with
// |B| <= min(|N|, |A|), scoring each by one assignment over fatigue-discounted
// values, with an admissible upper bound used only to skip provably
// non-improving branches.  O(2^|N| * |A|^3) worst case.  Ties break toward
// fewer allocated ads, then the lexicographically smallest node set.
// Throws std::invalid_argument when the tree is not a chain.
ChainSolveResult solve_chain_exact(const Instance& inst,
                                   const ChainSolveOptions& options = {});

// Same search restricted to plans with at most `max_ads` ads; exact within
// that range (and identical to solve_chain_exact when
// max_ads >= min(|N|, |A|)).  Throws when max_ads < 1.
ChainSolveResult solve_chain_capped(const Instance& inst, int max_ads,
                                    const ChainSolveOptions& options = {});

// Lowest-index advertiser maximizing q_{a,n} * r_a at the node.
// Throws std::invalid_argument when the catalog is empty.
int maximal_ad(const Instance& inst, int node);

struct ChainDpResult {
  Plan plan;
  // pi[i][j]: best value from chain position j (0-based) on, given i ads
  // shown before it; entries with i > j are unused and left at 0.
  std::vector<std::vector<double>> pi;
};

// Quadratic DP for chains where every advertiser is maximal in at most one
// node: walks positions right to left deciding "allocate the node's maximal
// ad or skip", ties resolved toward skipping; the last position always takes
// its maximal ad.  Throws std::invalid_argument (mentioning
// solve_chain_dp_general) when some ad is maximal in two nodes.
ChainDpResult solve_chain_dp(const Instance& inst);

// Chain solver without the distinct-maximality requirement: whenever an ad is
// maximal in k > 1 nodes, splits into k subproblems (the ad stays a candidate
// in one node, is removed from the others), recurses until maximals are
// distinct, solves each leaf subproblem with the DP above, and returns the
// best plan.  Subproblems are memoized on their candidate sets.
Plan solve_chain_dp_general(const Instance& inst);

// Fatigue-blind approximation: solves a single assignment on w = alpha * q * r
// (as if every lambda were 1) and returns that plan, which allocates
// min(|N|, |A|) ads.  Guarantees SW >= (prod of the first |N|-1 lambdas) * OPT
// but is not monotone in the declared rewards.
Plan solve_chain_no_fatigue(const Instance& inst);

}  // namespace geoad
