#pragma once

#include <map>
#include <optional>
#include <vector>

#include "geoad/path_tree.hpp"

namespace geoad {

// Sentinel ad index meaning "nothing shown here".
inline constexpr int kNoAd = -1;

struct Advertiser {
  double reward = 0.0;                // declared value of one shop visit
  std::map<int, double> qualities;   // tree node id -> probability the shown
                                     // ad converts to a visit; missing == 0
  double quality(int node) const {
    auto it = qualities.find(node);
    return it == qualities.end() ? 0.0 : it->second;
  }
};

// Attention-fatigue model: the i-th ad a user has already seen keeps them
// receptive with probability lambda_i, so after c ads the continuation
// probability is the product of the first c lambdas.
struct FatigueModel {
  std::vector<double> lambdas;

  // Product of the first `count` lambdas; continuation(0) == 1.
  // Throws std::out_of_range when count < 0 or count > lambdas.size().
  double continuation(int count) const;
};

// Sparse advertising plan: tree node id -> ad index.  Unmapped nodes show
// nothing.
struct Plan {
  std::map<int, int> assignment;

  bool empty() const { return assignment.empty(); }
  int size() const { return static_cast<int>(assignment.size()); }
  std::optional<int> ad_at(int node) const {
    auto it = assignment.find(node);
    if (it == assignment.end()) return std::nullopt;
    return it->second;
  }
  void set(int node, int ad) { assignment[node] = ad; }
  bool operator==(const Plan& other) const = default;
};

struct Instance {
  std::vector<Advertiser> advertisers;
  FatigueModel fatigue;
  PathTree tree;

  int num_ads() const { return static_cast<int>(advertisers.size()); }
  int num_nodes() const { return tree.size(); }
};

struct PlanViolation {
  enum class Kind { repeated_ad, unknown_node, unknown_ad };
  Kind kind;
  int path = -1;  // path index for repeated_ad, -1 otherwise
  int ad = kNoAd;
  int node = -1;  // offending node for unknown_node, -1 otherwise
};

// Checks a plan against an instance.  Returns one repeated_ad violation per
// (path, ad) pair where the ad occurs more than once on that path, plus one
// violation per unknown node id or out-of-catalog ad index.
std::vector<PlanViolation> validate_plan(const Instance& inst, const Plan& plan);

inline bool plan_valid(const Instance& inst, const Plan& plan) {
  return validate_plan(inst, plan).empty();
}

// Number of non-empty ads on the strict ancestors of `node` (i.e. shown
// earlier on the user's way to `node`).  Throws on unknown node.
int preceding_ad_count(const Plan& plan, const PathTree& tree, int node);

// Expected visits the plan produces for advertiser `ad`:
//   sum over nodes assigned to `ad` of alpha_n * continuation(c_n) * q_{ad,n}.
// Throws std::invalid_argument on an invalid plan, std::out_of_range on an
// unknown ad index.
double visit_through_rate(const Instance& inst, const Plan& plan, int ad);

// Sum over advertisers of visit_through_rate * declared reward.
double social_welfare(const Instance& inst, const Plan& plan);

// Report-independent plan preference used to break exact value ties across
// all solvers: fewer assigned nodes first, then lexicographically smaller
// node-id set, then lexicographically smaller (node, ad) pairs.
// Returns true when `a` is preferred over `b`.
bool plan_tie_less(const Plan& a, const Plan& b);

// True when candidate (sw_new, plan_new) should replace (sw_old, plan_old).
bool plan_improves(double sw_new, const Plan& plan_new, double sw_old,
                   const Plan& plan_old);

// Validates cross-field instance invariants (lambda range, gamma sum, quality
// range, fatigue sequence long enough for the deepest path).  Throws
// std::invalid_argument describing the first problem found.
void check_instance(const Instance& inst);

}  // namespace geoad
