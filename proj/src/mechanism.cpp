#include "geoad/mechanism.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace geoad {
namespace {

Instance with_rewards(const Instance& inst, const std::vector<double>& rewards) {
  Instance out = inst;
  for (std::size_t a = 0; a < rewards.size(); ++a) {
    out.advertisers[a].reward = rewards[a];
  }
  return out;
}

// Instance with advertiser `drop` removed; node assignments in plans of the
// reduced instance use the reduced ad indices.
Instance without_ad(const Instance& inst, int drop) {
  Instance out = inst;
  out.advertisers.erase(out.advertisers.begin() + drop);
  return out;
}

Plan solve_or_throw(const Instance& inst, AllocatorId id,
                    const AllocatorOptions& opts) {
  AllocateResult res = allocate(inst, id, opts);
  if (!res.optimal) {
    throw std::runtime_error(
        "mechanism needs an exact optimum; the allocator exhausted its "
        "budget — raise it or pick a smaller instance");
  }
  return std::move(res.plan);
}

}  // namespace

MechanismOutcome run_mechanism(const Instance& inst,
                               const std::vector<double>& reports,
                               AllocatorId allocator,
                               const AllocatorOptions& opts, bool fast) {
  if (allocator == AllocatorId::chain_no_fatigue) {
    throw std::invalid_argument(
        "the fatigue-blind allocator is not monotone in the reported "
        "reward, so charging pivot payments on top of it is not truthful");
  }
  if (static_cast<int>(reports.size()) != inst.num_ads()) {
    throw std::invalid_argument("one report per advertiser required");
  }
  for (double r : reports) {
    if (!std::isfinite(r) || r < 0.0) {
      throw std::invalid_argument("reports must be finite and non-negative");
    }
  }

  const Instance reported = with_rewards(inst, reports);
  MechanismOutcome out;
  out.plan = solve_or_throw(reported, allocator, opts);
  out.sw = social_welfare(reported, out.plan);

  const int ads = inst.num_ads();
  out.vtrs.resize(ads, 0.0);
  out.transfers.resize(ads, 0.0);
  std::vector<bool> allocated(ads, false);
  for (const auto& [node, ad] : out.plan.assignment) {
    (void)node;
    allocated[ad] = true;
  }

  for (int a = 0; a < ads; ++a) {
    out.vtrs[a] = visit_through_rate(reported, out.plan, a);
    if (fast && !allocated[a]) {
      // Without slot, dropping the advertiser leaves the optimum unchanged,
      // so the pivot terms cancel exactly.
      out.transfers[a] = 0.0;
      continue;
    }
    const Instance reduced = without_ad(reported, a);
    double sw_without = 0.0;
    if (reduced.num_ads() > 0) {
      const Plan plan_without = solve_or_throw(reduced, allocator, opts);
      sw_without = social_welfare(reduced, plan_without);
    }
    const double others_now = out.sw - out.vtrs[a] * reports[a];
    out.transfers[a] = sw_without - others_now;
  }
  return out;
}

double utility(const MechanismOutcome& outcome, int ad, double true_reward) {
  return outcome.vtrs[ad] * true_reward - outcome.transfers[ad];
}

}  // namespace geoad
