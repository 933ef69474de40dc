#include "geoad/core.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace geoad {

double FatigueModel::continuation(int count) const {
  if (count < 0 || count > static_cast<int>(lambdas.size())) {
    throw std::out_of_range("FatigueModel: continuation count " +
                            std::to_string(count) + " outside [0, " +
                            std::to_string(lambdas.size()) + "]");
  }
  double product = 1.0;
  for (int i = 0; i < count; ++i) product *= lambdas[static_cast<size_t>(i)];
  return product;
}

std::vector<PlanViolation> validate_plan(const Instance& inst, const Plan& plan) {
  std::vector<PlanViolation> out;
  for (const auto& [node, ad] : plan.assignment) {
    if (node < 0 || node >= inst.num_nodes()) {
      out.push_back({PlanViolation::Kind::unknown_node, -1, ad, node});
    }
    if (ad < 0 || ad >= inst.num_ads()) {
      out.push_back({PlanViolation::Kind::unknown_ad, -1, ad, node});
    }
  }
  if (!out.empty()) return out;
  for (size_t p = 0; p < inst.tree.paths.size(); ++p) {
    std::set<int> seen, reported;
    for (int node : inst.tree.paths[p].nodes) {
      auto ad = plan.ad_at(node);
      if (!ad) continue;
      if (!seen.insert(*ad).second && reported.insert(*ad).second) {
        out.push_back({PlanViolation::Kind::repeated_ad, static_cast<int>(p),
                       *ad, -1});
      }
    }
  }
  return out;
}

int preceding_ad_count(const Plan& plan, const PathTree& tree, int node) {
  tree.node(node);  // throws on unknown id
  int count = 0;
  int cur = tree.node(node).parent;
  while (cur >= 0) {
    if (plan.ad_at(cur)) ++count;
    cur = tree.node(cur).parent;
  }
  return count;
}

namespace {

void require_valid(const Instance& inst, const Plan& plan, const char* who) {
  if (!plan_valid(inst, plan)) {
    throw std::invalid_argument(std::string(who) + ": plan is invalid for this instance");
  }
}

}  // namespace

double visit_through_rate(const Instance& inst, const Plan& plan, int ad) {
  if (ad < 0 || ad >= inst.num_ads()) {
    throw std::out_of_range("visit_through_rate: unknown ad index " +
                            std::to_string(ad));
  }
  require_valid(inst, plan, "visit_through_rate");
  double total = 0.0;
  for (const auto& [node, assigned] : plan.assignment) {
    if (assigned != ad) continue;
    const TreeNode& n = inst.tree.node(node);
    const int c = preceding_ad_count(plan, inst.tree, node);
    total += n.alpha * inst.fatigue.continuation(c) *
             inst.advertisers[static_cast<size_t>(ad)].quality(node);
  }
  return total;
}

double social_welfare(const Instance& inst, const Plan& plan) {
  require_valid(inst, plan, "social_welfare");
  double total = 0.0;
  for (const auto& [node, ad] : plan.assignment) {
    const TreeNode& n = inst.tree.node(node);
    const int c = preceding_ad_count(plan, inst.tree, node);
    const Advertiser& adv = inst.advertisers[static_cast<size_t>(ad)];
    total += n.alpha * inst.fatigue.continuation(c) * adv.quality(node) *
             adv.reward;
  }
  return total;
}

bool plan_tie_less(const Plan& a, const Plan& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  // std::map iterates in node-id order, so key sequences compare directly.
  auto ita = a.assignment.begin(), itb = b.assignment.begin();
  for (; ita != a.assignment.end(); ++ita, ++itb) {
    if (ita->first != itb->first) return ita->first < itb->first;
  }
  return a.assignment < b.assignment;
}

bool plan_improves(double sw_new, const Plan& plan_new, double sw_old,
                   const Plan& plan_old) {
  if (sw_new > sw_old) return true;
  if (sw_new < sw_old) return false;
  return plan_tie_less(plan_new, plan_old);
}

void check_instance(const Instance& inst) {
  for (double l : inst.fatigue.lambdas) {
    if (!(l >= 0.0 && l <= 1.0)) {
      throw std::invalid_argument("instance: lambda outside [0,1]");
    }
  }
  if (inst.tree.empty()) throw std::invalid_argument("instance: empty tree");
  if (static_cast<int>(inst.fatigue.lambdas.size()) < inst.tree.max_depth() - 1) {
    throw std::invalid_argument(
        "instance: fatigue sequence shorter than the deepest path");
  }
  double gamma_sum = 0.0;
  for (const TreePath& p : inst.tree.paths) gamma_sum += p.gamma;
  if (std::abs(gamma_sum - 1.0) > 1e-9) {
    throw std::invalid_argument("instance: path gammas do not sum to 1");
  }
  for (const Advertiser& adv : inst.advertisers) {
    if (!(adv.reward >= 0.0) || !std::isfinite(adv.reward)) {
      throw std::invalid_argument("instance: reward must be finite and >= 0");
    }
    for (const auto& [node, q] : adv.qualities) {
      if (node < 0 || node >= inst.num_nodes()) {
        throw std::invalid_argument("instance: quality on unknown node");
      }
      if (!(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument("instance: quality outside [0,1]");
      }
    }
  }
}

}  // namespace geoad
