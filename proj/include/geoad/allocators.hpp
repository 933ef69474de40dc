#pragma once

#include <cstdint>
#include <string>

#include "geoad/core.hpp"
#include "geoad/multi_path.hpp"
#include "geoad/oracle.hpp"
#include "geoad/single_path.hpp"

namespace geoad {

// Every allocation routine the CLI and the mechanism can drive.
enum class AllocatorId {
  chain_exact,          // "fe"   exact single-path
  chain_dp,             // "dp"   distinct-maximal DP
  chain_dp_general,     // "dpgen" conflict-splitting DP
  chain_capped,         // "fa"   at most max_ads ads, exact in range
  chain_no_fatigue,     // "fa2"  fatigue-blind single assignment
  tree_exact,           // "fem"  exact multi-path branch and bound
  tree_dp,              // "fmp"  maximal-ad tree recursion
  tree_best_path,       // "fam"  best single path, capped per path
  tree_best_path_exact, // "fam-star" best single path, exact per path
  brute_force,          // "brute" exhaustive reference
};

AllocatorId allocator_from_string(const std::string& name);
std::string to_string(AllocatorId id);

struct AllocatorOptions {
  int max_ads = 2;            // cap for chain_capped / tree_best_path
  ChainSolveOptions chain;    // timeout for the subset-search solvers
  TreeSolveOptions tree;      // budget/timeout for tree_exact
  EnumerationGuard guard;     // limits for brute_force
};

struct AllocateResult {
  Plan plan;
  bool optimal = true;  // false when a budgeted solver returned its incumbent
};

AllocateResult allocate(const Instance& inst, AllocatorId id,
                        const AllocatorOptions& opts = {});

}  // namespace geoad
