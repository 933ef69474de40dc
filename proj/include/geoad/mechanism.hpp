#pragma once

#include <vector>

#include "geoad/allocators.hpp"
#include "geoad/core.hpp"

namespace geoad {

struct MechanismOutcome {
  Plan plan;                      // allocation under the reported rewards
  double sw = 0.0;                // welfare of that allocation at the reports
  std::vector<double> vtrs;       // per-advertiser visit-through rate
  std::vector<double> transfers;  // per-advertiser payment to the mechanism
};

// Clarke-pivot mechanism on top of a welfare-maximising allocator: each
// advertiser pays the welfare the others would get without it, minus the
// welfare the others get in the chosen plan.  Requires an allocator that
// returns a true optimum; the fatigue-blind heuristic is rejected because
// its allocation is not monotone in the reported reward.
//
// `reports` replaces the instance rewards advertiser by advertiser.  With
// `fast` set, advertisers that received no slot skip their counterfactual
// solve and pay zero, which coincides with the full computation.
MechanismOutcome run_mechanism(const Instance& inst,
                               const std::vector<double>& reports,
                               AllocatorId allocator,
                               const AllocatorOptions& opts = {},
                               bool fast = false);

// Quasi-linear utility of one advertiser given its true per-visit reward.
double utility(const MechanismOutcome& outcome, int ad, double true_reward);

}  // namespace geoad
