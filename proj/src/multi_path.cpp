#include "geoad/multi_path.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>
#include <stdexcept>
#include <string>

#include "geoad/single_path.hpp"

namespace geoad {

double branch_bound_upper(const Instance& inst, const Plan& partial, int next_node) {
  if (next_node < 0 || next_node > inst.num_nodes()) {
    throw std::out_of_range("branch_bound_upper: next_node out of range");
  }
  double bound = 0.0;
  for (int n = next_node; n < inst.num_nodes(); ++n) {
    const TreeNode& node = inst.tree.node(n);
    double best = 0.0;
    for (const Advertiser& adv : inst.advertisers) {
      best = std::max(best, adv.quality(n) * adv.reward);
    }
    bound += node.alpha * inst.fatigue.continuation(preceding_ad_count(partial, inst.tree, n)) * best;
  }
  return bound;
}

namespace {

// An optimal assignment for one subtree, sorted by node id.
struct Frag {
  double value = 0.0;
  std::vector<std::pair<int, int>> picks;
};

// Mirrors plan_improves/plan_tie_less on fragment vectors: higher value, then
// fewer ads, then lexicographically smaller node-id sequence, then smaller ad
// sequence.  Fragments of disjoint subtrees occupy disjoint node sets, so the
// per-subtree canonical choice composes to the canonical full plan.
bool frag_improves(const Frag& a, const Frag& b) {
  if (a.value > b.value) return true;
  if (a.value < b.value) return false;
  if (a.picks.size() != b.picks.size()) return a.picks.size() < b.picks.size();
  for (size_t i = 0; i < a.picks.size(); ++i) {
    if (a.picks[i].first != b.picks[i].first) return a.picks[i].first < b.picks[i].first;
  }
  for (size_t i = 0; i < a.picks.size(); ++i) {
    if (a.picks[i].second != b.picks[i].second) return a.picks[i].second < b.picks[i].second;
  }
  return false;
}

class TreeSearch {
 public:
  TreeSearch(const Instance& inst, const TreeSolveOptions& options)
      : inst_(inst), options_(options), num_nodes_(inst.num_nodes()),
        num_ads_(inst.num_ads()), num_paths_(static_cast<int>(inst.tree.paths.size())) {
    const int lam_len = static_cast<int>(inst.fatigue.lambdas.size());
    levels_ = lam_len + 1;
    lam_.resize(static_cast<size_t>(levels_));
    for (int i = 0; i <= lam_len; ++i) lam_[static_cast<size_t>(i)] = inst.fatigue.continuation(i);

    qr_.resize(static_cast<size_t>(num_nodes_));
    cand_order_.resize(static_cast<size_t>(num_nodes_));
    for (int n = 0; n < num_nodes_; ++n) {
      auto& row = qr_[static_cast<size_t>(n)];
      row.assign(static_cast<size_t>(num_ads_), 0.0);
      for (int a = 0; a < num_ads_; ++a) {
        const Advertiser& adv = inst.advertisers[static_cast<size_t>(a)];
        row[static_cast<size_t>(a)] = adv.quality(n) * adv.reward;
      }
      for (int a = 0; a < num_ads_; ++a) {
        if (row[static_cast<size_t>(a)] > 0.0) {
          cand_order_[static_cast<size_t>(n)].push_back(a);
        }
      }
      std::sort(cand_order_[static_cast<size_t>(n)].begin(),
                cand_order_[static_cast<size_t>(n)].end(), [&](int a, int b) {
                  if (row[static_cast<size_t>(a)] != row[static_cast<size_t>(b)]) {
                    return row[static_cast<size_t>(a)] > row[static_cast<size_t>(b)];
                  }
                  return a < b;
                });
    }

    node_paths_.resize(static_cast<size_t>(num_nodes_));
    for (int p = 0; p < num_paths_; ++p) {
      for (int n : inst.tree.paths[static_cast<size_t>(p)].nodes) {
        node_paths_[static_cast<size_t>(n)].push_back(p);
      }
    }

    mu_.assign(static_cast<size_t>(num_paths_) * static_cast<size_t>(num_ads_), 0.0);
    penalty_.resize(static_cast<size_t>(num_nodes_));
    take_value_.resize(static_cast<size_t>(num_nodes_));
    take_ad_.resize(static_cast<size_t>(num_nodes_));
    best_below_.resize(static_cast<size_t>(num_nodes_));
    for (int n = 0; n < num_nodes_; ++n) {
      penalty_[static_cast<size_t>(n)].assign(static_cast<size_t>(num_ads_), 0.0);
      take_value_[static_cast<size_t>(n)].assign(static_cast<size_t>(levels_), 0.0);
      take_ad_[static_cast<size_t>(n)].assign(static_cast<size_t>(levels_), -1);
      best_below_[static_cast<size_t>(n)].assign(static_cast<size_t>(levels_), 0.0);
    }
    mass_.assign(static_cast<size_t>(num_nodes_), 0.0);
    banned_.assign(static_cast<size_t>(num_ads_), 0);

    // Ads with any value inside each subtree: bans outside this set cannot
    // change the subtree's optimum, so memo keys ignore them.
    relevant_.resize(static_cast<size_t>(num_nodes_));
    for (int n = num_nodes_ - 1; n >= 0; --n) {
      std::set<int> ads(cand_order_[static_cast<size_t>(n)].begin(),
                        cand_order_[static_cast<size_t>(n)].end());
      for (int ch : inst.tree.node(n).children) {
        ads.insert(relevant_[static_cast<size_t>(ch)].begin(),
                   relevant_[static_cast<size_t>(ch)].end());
      }
      relevant_[static_cast<size_t>(n)].assign(ads.begin(), ads.end());
    }
    memo_.resize(static_cast<size_t>(num_nodes_));
  }

  void seed_incumbent(Plan plan, double sw) {
    inc_plan_ = std::move(plan);
    inc_sw_ = sw;
  }

  TreeSolveResult run() {
    if (options_.timeout_s > 0.0) {
      has_deadline_ = true;
      deadline_ = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(options_.timeout_s));
    }
    tune_penalties();
    const Frag root = solve_subtree(0, 0);
    Plan plan;
    for (const auto& [n, a] : root.picks) plan.set(n, a);
    if (plan_improves(root.value, plan, inc_sw_, inc_plan_)) {
      inc_plan_ = std::move(plan);
      inc_sw_ = root.value;
    }
    return {inc_plan_, inc_sw_, !exhausted_, expansions_};
  }

 private:
  double lam(int c) const {
    return lam_[static_cast<size_t>(std::min<int>(c, levels_ - 1))];
  }

  double below(int n, int c) const {
    return best_below_[static_cast<size_t>(n)][static_cast<size_t>(std::min<int>(c, levels_ - 1))];
  }

  // Rebuilds the bound tables for the current per-(path, ad) prices.
  //
  // best_below_[n][c] solves the relaxation in which an ad may repeat along a
  // path but each use pays the price of every path through its node: the most
  // the subtree rooted at n can add (net of prices) when every ancestor of n
  // already shows c ads.  Fatigue propagates exactly, so for nonnegative
  // prices the net table plus the subtree's unspent price mass upper-bounds
  // every valid completion, and it tightens sharply as ancestors get fixed.
  void rebuild_tables() {
    for (int n = 0; n < num_nodes_; ++n) {
      auto& pen = penalty_[static_cast<size_t>(n)];
      std::fill(pen.begin(), pen.end(), 0.0);
      for (int p : node_paths_[static_cast<size_t>(n)]) {
        const double* row = &mu_[static_cast<size_t>(p) * static_cast<size_t>(num_ads_)];
        for (int a = 0; a < num_ads_; ++a) pen[static_cast<size_t>(a)] += row[a];
      }
    }
    // mass_[n]: price mass of all paths ending inside the subtree of n; such
    // paths run through n, so the per-node price rows already aggregate them.
    for (int n = 0; n < num_nodes_; ++n) {
      double m = 0.0;
      for (int a = 0; a < num_ads_; ++a) m += penalty_[static_cast<size_t>(n)][static_cast<size_t>(a)];
      mass_[static_cast<size_t>(n)] = m;
    }
    // mass_top_[n]: tighter mass cap — a path with k nodes inside the subtree
    // of n shows at most k ads there, so it recovers at most its k largest
    // prices rather than its whole row.
    mass_top_.assign(static_cast<size_t>(num_nodes_), 0.0);
    std::vector<double> vals;
    for (int p = 0; p < num_paths_; ++p) {
      const auto& nodes = inst_.tree.paths[static_cast<size_t>(p)].nodes;
      const double* row = &mu_[static_cast<size_t>(p) * static_cast<size_t>(num_ads_)];
      vals.clear();
      for (int a = 0; a < num_ads_; ++a) {
        if (row[a] > 0.0) vals.push_back(row[a]);
      }
      std::sort(vals.begin(), vals.end(), std::greater<>());
      for (size_t i = 1; i < vals.size(); ++i) vals[i] += vals[i - 1];  // prefix sums
      for (size_t idx = 0; idx < nodes.size(); ++idx) {
        const size_t k = std::min(nodes.size() - idx, vals.size());
        if (k > 0) mass_top_[static_cast<size_t>(nodes[idx])] += vals[k - 1];
      }
    }
    for (int n = num_nodes_ - 1; n >= 0; --n) {
      const TreeNode& node = inst_.tree.node(n);
      const auto& pen = penalty_[static_cast<size_t>(n)];
      const auto& row = qr_[static_cast<size_t>(n)];
      for (int c = 0; c < levels_; ++c) {
        double best = 0.0;
        int best_ad = -1;
        const double weight = node.alpha * lam_[static_cast<size_t>(c)];
        for (int a : cand_order_[static_cast<size_t>(n)]) {
          const double value = weight * row[static_cast<size_t>(a)] - pen[static_cast<size_t>(a)];
          if (value > best) {
            best = value;
            best_ad = a;
          }
        }
        take_value_[static_cast<size_t>(n)][static_cast<size_t>(c)] = best;
        take_ad_[static_cast<size_t>(n)][static_cast<size_t>(c)] = best_ad;
        double take = best;
        double skip = 0.0;
        for (int ch : node.children) {
          take += below(ch, c + 1);
          skip += below(ch, c);
        }
        best_below_[static_cast<size_t>(n)][static_cast<size_t>(c)] = std::max(take, skip);
      }
    }
  }

  // Counts how often each (path, ad) pair is used by the relaxation's own
  // maximiser; overused pairs are exactly where the relaxation cheats.
  void relaxed_uses(int n, int c, std::vector<int>& uses) const {
    const int cc = std::min(c, levels_ - 1);
    const TreeNode& node = inst_.tree.node(n);
    const int ad = take_ad_[static_cast<size_t>(n)][static_cast<size_t>(cc)];
    double take = take_value_[static_cast<size_t>(n)][static_cast<size_t>(cc)];
    double skip = 0.0;
    for (int ch : node.children) {
      take += below(ch, cc + 1);
      skip += below(ch, cc);
    }
    const bool taken = ad >= 0 && take > skip;
    if (taken) {
      for (int p : node_paths_[static_cast<size_t>(n)]) {
        ++uses[static_cast<size_t>(p) * static_cast<size_t>(num_ads_) + static_cast<size_t>(ad)];
      }
    }
    for (int ch : node.children) relaxed_uses(ch, cc + (taken ? 1 : 0), uses);
  }

  double root_bound() const {
    double mu_total = 0.0;
    for (double m : mu_) mu_total += m;
    return below(0, 0) + mu_total;
  }

  // Projected subgradient ascent on the prices, keeping the price vector with
  // the tightest root bound.  Deterministic, and cheap next to the search.
  void tune_penalties() {
    rebuild_tables();
    double bound = root_bound();
    if (bound <= inc_sw_ * (1.0 + 1e-12)) return;  // incumbent already provably optimal
    std::vector<double> best_mu = mu_;
    double best_bound = bound;
    std::vector<int> uses(mu_.size(), 0);
    std::vector<double> grad(mu_.size(), 0.0);
    double theta = 2.0;
    int since_improvement = 0;
    for (int iter = 0; iter < 200; ++iter) {
      std::fill(uses.begin(), uses.end(), 0);
      relaxed_uses(0, 0, uses);
      double norm = 0.0;
      for (size_t i = 0; i < mu_.size(); ++i) {
        const double g = static_cast<double>(uses[i]) - 1.0;
        grad[i] = (mu_[i] > 0.0 || g > 0.0) ? g : 0.0;
        norm += grad[i] * grad[i];
      }
      if (norm == 0.0) break;  // relaxation already respects uniqueness
      const double step = theta * (bound - inc_sw_) / norm;
      for (size_t i = 0; i < mu_.size(); ++i) {
        mu_[i] = std::max(0.0, mu_[i] + step * grad[i]);
      }
      rebuild_tables();
      bound = root_bound();
      if (bound < best_bound - 1e-12) {
        best_bound = bound;
        best_mu = mu_;
        since_improvement = 0;
      } else if (++since_improvement >= 12) {
        theta *= 0.5;
        since_improvement = 0;
        if (theta < 1e-3) break;
      }
      if (bound <= inc_sw_ * (1.0 + 1e-12)) break;
    }
    if (mu_ != best_mu) {
      mu_ = best_mu;
      rebuild_tables();
    }
  }

  bool over_budget() {
    if (expansions_ >= options_.max_expansions) return true;
    if (has_deadline_ && (expansions_ & 1023) == 0 &&
        std::chrono::steady_clock::now() > deadline_) {
      return true;
    }
    return false;
  }

  // Exact canonical optimum for the subtree rooted at u with c ads above it
  // and the ads in banned_ unavailable (used by assigned ancestors).  Subtrees
  // hanging off different frontier nodes share no root-leaf path, so each is
  // solved on its own; only fatigue (c) and bans travel down, which keeps the
  // plateau of near-optimal alternatives from multiplying across branches.
  Frag solve_subtree(int u, int c) {
    if (exhausted_) return {};
    // Identical subproblems recur across sibling options; answer from the
    // memo when this subtree was already solved under an equivalent state.
    scratch_key_.first = std::min(c, levels_ - 1);
    scratch_key_.second.clear();
    for (int b : relevant_[static_cast<size_t>(u)]) {
      if (banned_[static_cast<size_t>(b)]) scratch_key_.second.push_back(b);
    }
    auto& memo = memo_[static_cast<size_t>(u)];
    if (auto it = memo.find(scratch_key_); it != memo.end()) return it->second;

    ++expansions_;
    if (over_budget()) {
      exhausted_ = true;
      return {};
    }
    MemoKey key = scratch_key_;  // keep a copy: recursion reuses the scratch
    Frag result = solve_options(u, c);
    if (!exhausted_) memo.emplace(std::move(key), result);
    return result;
  }

  Frag solve_options(int u, int c) {
    const TreeNode& node = inst_.tree.node(u);
    const auto& row = qr_[static_cast<size_t>(u)];
    const double weight = node.alpha * lam(c);

    if (node.children.empty()) {
      // A leaf blocks nothing: its best available ad strictly dominates the
      // lesser ads, and the empty choice wins only when nothing has value.
      for (int a : cand_order_[static_cast<size_t>(u)]) {
        const double v = weight * row[static_cast<size_t>(a)];
        if (v <= 0.0) break;  // sorted: the rest contribute nothing here
        if (banned_[static_cast<size_t>(a)]) continue;
        Frag f;
        f.value = v;
        f.picks.emplace_back(u, a);
        return f;
      }
      return {};
    }

    // Per-child bound pieces.  A child's fragment is worth at most its net
    // relaxation value plus whatever price mass its paths can still recover:
    // the un-banned remainder, further capped by per-path capacity.
    const auto& kids = node.children;
    const size_t nk = kids.size();
    std::vector<double> child_x(nk);   // remaining (un-banned) price mass
    std::vector<double> child_b0(nk);  // relaxation value if u stays empty
    std::vector<double> child_b1(nk);  // relaxation value if u shows an ad
    for (size_t i = 0; i < nk; ++i) {
      const int ch = kids[i];
      double banned_mass = 0.0;
      for (int b : banned_stack_) {
        banned_mass += penalty_[static_cast<size_t>(ch)][static_cast<size_t>(b)];
      }
      child_x[i] = mass_[static_cast<size_t>(ch)] - banned_mass;
      child_b0[i] = below(ch, c);
      child_b1[i] = below(ch, c + 1);
    }
    const auto child_bound = [&](size_t i, int a) {
      const double cap = mass_top_[static_cast<size_t>(kids[i])];
      if (a < 0) return child_b0[i] + std::min(child_x[i], cap);
      const double pen = penalty_[static_cast<size_t>(kids[i])][static_cast<size_t>(a)];
      return child_b1[i] + std::min(child_x[i] - pen, cap);
    };

    // Options at u: stay empty, or show one of the valued, un-banned ads.
    std::vector<std::pair<double, int>> options;
    options.reserve(cand_order_[static_cast<size_t>(u)].size() + 1);
    {
      double ub = 0.0;
      for (size_t i = 0; i < nk; ++i) ub += child_bound(i, -1);
      options.emplace_back(ub, -1);
    }
    for (int a : cand_order_[static_cast<size_t>(u)]) {
      const double v = weight * row[static_cast<size_t>(a)];
      if (v <= 0.0) break;
      if (banned_[static_cast<size_t>(a)]) continue;
      double ub = v;
      for (size_t i = 0; i < nk; ++i) ub += child_bound(i, a);
      options.emplace_back(ub, a);
    }
    std::sort(options.begin(), options.end(), [](const auto& x, const auto& y) {
      if (x.first != y.first) return x.first > y.first;
      return x.second < y.second;
    });

    Frag best;
    best.value = -1.0;  // even an empty fragment (value 0) must be explored
    for (const auto& [ub, a] : options) {
      if (ub < best.value) continue;  // strict: equal-value options still compete
      Frag current;
      double rest = ub;  // unresolved share of the option bound
      const int child_count = a < 0 ? c : c + 1;
      if (a >= 0) {
        current.value = weight * row[static_cast<size_t>(a)];
        current.picks.emplace_back(u, a);
        rest -= current.value;
        banned_[static_cast<size_t>(a)] = 1;
        banned_stack_.push_back(a);
      }
      bool doomed = false;
      for (size_t i = 0; i < nk; ++i) {
        rest -= child_bound(i, a);
        Frag sub = solve_subtree(kids[i], child_count);
        current.value += sub.value;
        current.picks.insert(current.picks.end(), sub.picks.begin(), sub.picks.end());
        if (exhausted_) break;
        if (current.value + rest < best.value) {
          doomed = true;  // strictly short even with remaining children maxed
          break;
        }
      }
      if (a >= 0) {
        banned_stack_.pop_back();
        banned_[static_cast<size_t>(a)] = 0;
      }
      if (!doomed) {
        std::sort(current.picks.begin(), current.picks.end());
        if (frag_improves(current, best)) best = std::move(current);
      }
      if (exhausted_) break;
    }
    return best;
  }

  const Instance& inst_;
  const TreeSolveOptions& options_;
  int num_nodes_;
  int num_ads_;
  int num_paths_;
  int levels_ = 1;
  std::vector<double> lam_;
  std::vector<std::vector<double>> qr_;
  std::vector<std::vector<int>> cand_order_;
  std::vector<std::vector<int>> node_paths_;
  std::vector<double> mu_;                    // price per (path, ad)
  std::vector<std::vector<double>> penalty_;  // per node: price over its paths
  std::vector<double> mass_;      // per node: total price mass of its paths
  std::vector<double> mass_top_;  // per node: capacity-capped price mass
  std::vector<std::vector<double>> take_value_;
  std::vector<std::vector<int>> take_ad_;
  std::vector<std::vector<double>> best_below_;
  std::vector<char> banned_;
  std::vector<int> banned_stack_;
  std::vector<std::vector<int>> relevant_;  // per node: ads valued in its subtree
  using MemoKey = std::pair<int, std::vector<int>>;  // (fatigue level, active bans)
  std::vector<std::map<MemoKey, Frag>> memo_;
  MemoKey scratch_key_;
  Plan inc_plan_;
  double inc_sw_ = 0.0;
  std::uint64_t expansions_ = 0;
  bool exhausted_ = false;
  bool has_deadline_ = false;
  std::chrono::steady_clock::time_point deadline_{};
};

}  // namespace

namespace {

// Hill-climb on single-node rewrites (fill, swap, or clear one node) until no
// rewrite raises the welfare.  Only used to warm-start the exact search with a
// strong incumbent; the search itself still proves optimality.
Plan greedy_augment(const Instance& inst, const Plan& start) {
  const int num_nodes = inst.num_nodes();
  const int num_ads = inst.num_ads();
  std::vector<std::vector<int>> subtree(static_cast<size_t>(num_nodes));
  for (int n = num_nodes - 1; n >= 0; --n) {
    for (int c : inst.tree.node(n).children) {
      auto& list = subtree[static_cast<size_t>(n)];
      list.push_back(c);
      list.insert(list.end(), subtree[static_cast<size_t>(c)].begin(),
                  subtree[static_cast<size_t>(c)].end());
    }
  }
  std::vector<int> assigned(static_cast<size_t>(num_nodes), -1);
  for (const auto& [n, a] : start.assignment) assigned[static_cast<size_t>(n)] = a;
  std::vector<int> cnt(static_cast<size_t>(num_nodes), 0);
  for (int n = 0; n < num_nodes; ++n) {
    if (assigned[static_cast<size_t>(n)] < 0) continue;
    for (int d : subtree[static_cast<size_t>(n)]) ++cnt[static_cast<size_t>(d)];
  }

  const auto qr = [&](int n, int a) {
    const Advertiser& adv = inst.advertisers[static_cast<size_t>(a)];
    return adv.quality(n) * adv.reward;
  };
  const auto lam = [&](int c) { return inst.fatigue.continuation(c); };
  // Welfare swing from toggling the subtree counts under n by +/-1.
  const auto below_delta = [&](int n, int step) {
    double delta = 0.0;
    for (int d : subtree[static_cast<size_t>(n)]) {
      const int a = assigned[static_cast<size_t>(d)];
      if (a < 0) continue;
      const int c = cnt[static_cast<size_t>(d)];
      delta += inst.tree.node(d).alpha * qr(d, a) * (lam(c + step) - lam(c));
    }
    return delta;
  };

  for (int round = 0; round < 10 * num_nodes; ++round) {
    double best_delta = 1e-9;
    int best_node = -1;
    int best_ad = -1;
    for (int n = 0; n < num_nodes; ++n) {
      const int cur = assigned[static_cast<size_t>(n)];
      const double alpha = inst.tree.node(n).alpha;
      const double disc = lam(cnt[static_cast<size_t>(n)]);
      const double cur_value = cur < 0 ? 0.0 : alpha * disc * qr(n, cur);
      if (cur >= 0) {
        const double delta = below_delta(n, -1) - cur_value;
        if (delta > best_delta) {
          best_delta = delta;
          best_node = n;
          best_ad = -1;
        }
      }
      const double fill_penalty = cur < 0 ? below_delta(n, 1) : 0.0;
      for (int a = 0; a < num_ads; ++a) {
        if (a == cur) continue;
        const double gain = alpha * disc * qr(n, a) - cur_value + fill_penalty;
        if (gain <= best_delta) continue;
        bool clash = false;
        for (int up = inst.tree.node(n).parent; up >= 0; up = inst.tree.node(up).parent) {
          if (assigned[static_cast<size_t>(up)] == a) {
            clash = true;
            break;
          }
        }
        if (!clash) {
          for (int d : subtree[static_cast<size_t>(n)]) {
            if (assigned[static_cast<size_t>(d)] == a) {
              clash = true;
              break;
            }
          }
        }
        if (clash) continue;
        best_delta = gain;
        best_node = n;
        best_ad = a;
      }
    }
    if (best_node < 0) break;
    const int prev = assigned[static_cast<size_t>(best_node)];
    assigned[static_cast<size_t>(best_node)] = best_ad;
    if ((prev < 0) != (best_ad < 0)) {
      const int step = best_ad < 0 ? -1 : 1;
      for (int d : subtree[static_cast<size_t>(best_node)]) {
        cnt[static_cast<size_t>(d)] += step;
      }
    }
  }

  Plan plan;
  for (int n = 0; n < num_nodes; ++n) {
    if (assigned[static_cast<size_t>(n)] >= 0) plan.set(n, assigned[static_cast<size_t>(n)]);
  }
  return plan;
}

}  // namespace

TreeSolveResult solve_tree_exact(const Instance& inst, const TreeSolveOptions& options) {
  if (inst.num_ads() == 0) return {Plan{}, 0.0, true, 0};
  if (!options.force) {
    const double worst_case =
        static_cast<double>(inst.num_nodes()) * std::log(std::max(2.0, static_cast<double>(inst.num_ads())));
    if (worst_case > std::log(options.worst_case_cap)) {
      throw BudgetRefusal(
          "solve_tree_exact: worst-case search space exceeds the cap; "
          "set force to run anyway under the expansion budget");
    }
  }
  TreeSearch search(inst, options);
  const BestPathResult star = solve_tree_best_path_exact(inst);
  Plan seed_plan = star.plan;
  double seed_sw = star.sw;
  const auto consider = [&](const Plan& plan) {
    const double sw = social_welfare(inst, plan);
    if (plan_improves(sw, plan, seed_sw, seed_plan)) {
      seed_plan = plan;
      seed_sw = sw;
    }
  };
  consider(greedy_augment(inst, star.plan));
  try {
    const Plan dp = solve_tree_dp(inst);
    consider(dp);
    consider(greedy_augment(inst, dp));
  } catch (const std::invalid_argument&) {
    // The maximal-ad recursion does not apply; keep the other seeds.
  }
  search.seed_incumbent(std::move(seed_plan), seed_sw);
  return search.run();
}

namespace {

void require_path_distinct_maximals(const Instance& inst) {
  for (size_t p = 0; p < inst.tree.paths.size(); ++p) {
    std::set<int> seen;
    for (int n : inst.tree.paths[p].nodes) {
      const int a = maximal_ad(inst, n);
      if (!seen.insert(a).second) {
        throw std::invalid_argument(
            "tree dp: ad " + std::to_string(a) + " is maximal twice on path " +
            std::to_string(p) + "; the maximal-ad recursion does not apply");
      }
    }
  }
}

TreeDpVectors dp_recurse(const Instance& inst, int node) {
  const TreeNode& n = inst.tree.node(node);
  const int a = maximal_ad(inst, node);
  const double value = n.alpha * inst.advertisers[static_cast<size_t>(a)].quality(node) *
                       inst.advertisers[static_cast<size_t>(a)].reward;
  std::vector<TreeDpVectors> kids;
  kids.reserve(n.children.size());
  for (int c : n.children) kids.push_back(dp_recurse(inst, c));

  TreeDpVectors out;
  const int size = n.depth;
  out.pi.assign(static_cast<size_t>(size), 0.0);
  out.phi.assign(static_cast<size_t>(size), Plan{});
  for (int i = 0; i < size; ++i) {
    const double lam_i = inst.fatigue.continuation(i);
    if (kids.empty()) {
      out.pi[static_cast<size_t>(i)] = lam_i * value;
      out.phi[static_cast<size_t>(i)].set(node, a);
      continue;
    }
    double skip = 0.0, taken = lam_i * value;
    for (const TreeDpVectors& k : kids) {
      skip += k.pi[static_cast<size_t>(i)];
      taken += k.pi[static_cast<size_t>(i) + 1];
    }
    if (taken > skip) {  // ties resolve toward not allocating
      out.pi[static_cast<size_t>(i)] = taken;
      Plan& plan = out.phi[static_cast<size_t>(i)];
      plan.set(node, a);
      for (const TreeDpVectors& k : kids) {
        for (const auto& [kn, ka] : k.phi[static_cast<size_t>(i) + 1].assignment) {
          plan.set(kn, ka);
        }
      }
    } else {
      out.pi[static_cast<size_t>(i)] = skip;
      Plan& plan = out.phi[static_cast<size_t>(i)];
      for (const TreeDpVectors& k : kids) {
        for (const auto& [kn, ka] : k.phi[static_cast<size_t>(i)].assignment) {
          plan.set(kn, ka);
        }
      }
    }
  }
  return out;
}

}  // namespace

TreeDpVectors tree_dp_vectors(const Instance& inst, int node) {
  if (inst.num_ads() == 0) {
    throw std::invalid_argument("tree_dp_vectors: empty advertiser catalog");
  }
  require_path_distinct_maximals(inst);
  return dp_recurse(inst, node);
}

Plan solve_tree_dp(const Instance& inst) {
  if (inst.num_ads() == 0) return {};
  require_path_distinct_maximals(inst);
  return dp_recurse(inst, 0).phi[0];
}

Instance path_subinstance(const Instance& inst, int path_index) {
  const std::vector<int> nodes = inst.tree.nodes_of_path(path_index);
  std::vector<int> vertices;
  std::vector<double> alphas;
  for (int n : nodes) {
    vertices.push_back(inst.tree.node(n).vertex);
    alphas.push_back(inst.tree.node(n).alpha);
  }
  Instance sub;
  sub.fatigue = inst.fatigue;
  sub.tree = chain_tree(vertices, alphas, inst.tree.paths[static_cast<size_t>(path_index)].gamma);
  sub.advertisers.reserve(inst.advertisers.size());
  for (const Advertiser& adv : inst.advertisers) {
    Advertiser copy;
    copy.reward = adv.reward;
    for (size_t i = 0; i < nodes.size(); ++i) {
      const double q = adv.quality(nodes[i]);
      if (q > 0.0) copy.qualities[static_cast<int>(i)] = q;
    }
    sub.advertisers.push_back(std::move(copy));
  }
  return sub;
}

namespace {

BestPathResult best_path_impl(const Instance& inst, int max_ads, bool exact) {
  BestPathResult best;
  for (int p = 0; p < static_cast<int>(inst.tree.paths.size()); ++p) {
    const Instance sub = path_subinstance(inst, p);
    const ChainSolveResult res =
        exact ? solve_chain_exact(sub) : solve_chain_capped(sub, max_ads);
    if (best.path_index < 0 || res.sw > best.sw) {
      best.path_index = p;
      best.sw = res.sw;
      best.plan = Plan{};
      const std::vector<int> nodes = inst.tree.nodes_of_path(p);
      for (const auto& [pos, ad] : res.plan.assignment) {
        best.plan.set(nodes[static_cast<size_t>(pos)], ad);
      }
    }
  }
  return best;
}

}  // namespace

BestPathResult solve_tree_best_path(const Instance& inst, int max_ads) {
  return best_path_impl(inst, max_ads, false);
}

BestPathResult solve_tree_best_path_exact(const Instance& inst) {
  return best_path_impl(inst, 0, true);
}

}  // namespace geoad
