#pragma once

#include <cstdint>
#include <functional>

#include "geoad/core.hpp"

namespace geoad {

// Size guard for exhaustive enumeration: (|A|+1)^|N| complete plans.
struct EnumerationGuard {
  int max_nodes = 20;
  int max_ads = 10;
  std::uint64_t max_plans = 20'000'000;
};

struct OracleResult {
  Plan plan;
  double sw = 0.0;
};

// Exhaustively enumerates every node->ad map (pruning repeated ads per path
// early), evaluates each with social_welfare, and returns the best plan under
// the shared tie-breaking order (plan_improves).  Throws std::runtime_error
// when the guard is exceeded.  Empty catalog yields the empty plan.
OracleResult brute_force_optimal(const Instance& inst,
                                 const EnumerationGuard& guard = {});

// Same enumeration restricted to plans accepted by `keep`.  The predicate
// sees complete candidate plans.  Returns the empty plan (sw 0) when no valid
// plan is accepted; callers restricting to non-empty ranges should check.
OracleResult brute_force_restricted(const Instance& inst,
                                    const std::function<bool(const Plan&)>& keep,
                                    const EnumerationGuard& guard = {});

}  // namespace geoad
