#include "geoad/single_path.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "geoad/assignment.hpp"

namespace geoad {

namespace {

std::vector<int> chain_or_throw(const Instance& inst, const char* who) {
  if (!inst.tree.is_chain()) {
    throw std::invalid_argument(std::string(who) +
                                ": tree has branching paths; use a multi-path solver");
  }
  return inst.tree.chain();
}

}  // namespace

SubsetContext make_subset_context(const PathTree& tree, std::vector<int> members) {
  const std::vector<int> chain = tree.chain();
  std::map<int, int> position;
  for (size_t i = 0; i < chain.size(); ++i) position[chain[i]] = static_cast<int>(i);
  for (int m : members) {
    if (!position.count(m)) {
      throw std::invalid_argument("make_subset_context: node " + std::to_string(m) +
                                  " is not on the chain");
    }
  }
  std::sort(members.begin(), members.end(),
            [&](int a, int b) { return position[a] < position[b]; });
  members.erase(std::unique(members.begin(), members.end()), members.end());
  SubsetContext ctx;
  ctx.members = members;
  for (size_t i = 0; i < members.size(); ++i) {
    ctx.count_before[members[i]] = static_cast<int>(i);
  }
  return ctx;
}

std::pair<Plan, double> chain_subset_value(const Instance& inst,
                                           const std::vector<int>& members) {
  SubsetContext ctx = make_subset_context(inst.tree, members);
  if (ctx.members.empty()) return {Plan{}, 0.0};
  const int num_ads = inst.num_ads();
  ValueMatrix w(num_ads, static_cast<int>(ctx.members.size()));
  for (int c = 0; c < w.cols; ++c) {
    const int node = ctx.members[static_cast<size_t>(c)];
    const double discount =
        inst.tree.node(node).alpha * inst.fatigue.continuation(ctx.count_before[node]);
    for (int a = 0; a < num_ads; ++a) {
      w.at(a, c) = discount * inst.advertisers[static_cast<size_t>(a)].quality(node) *
                   inst.advertisers[static_cast<size_t>(a)].reward;
    }
  }
  const AssignmentResult res = solve_max_assignment(w);
  Plan plan;
  for (int c = 0; c < w.cols; ++c) {
    plan.set(ctx.members[static_cast<size_t>(c)], res.row_of_col[static_cast<size_t>(c)]);
  }
  return {plan, res.value};
}

namespace {

// Depth-first search over node subsets of a chain, in path order, with one
// incremental assignment augmentation per added node.  The completion bound
// pairs the largest remaining per-node values with the steepest remaining
// fatigue discounts, which is admissible because discounts only deepen and
// sharing ads only hurts.
class SubsetSearch {
 public:
  SubsetSearch(const Instance& inst, std::vector<int> chain, int kmax)
      : inst_(inst),
        chain_(std::move(chain)),
        length_(static_cast<int>(chain_.size())),
        num_ads_(inst.num_ads()),
        kmax_(kmax),
        engine_(inst.num_ads()) {
    base_.resize(static_cast<size_t>(length_));
    node_best_.assign(static_cast<size_t>(length_), 0.0);
    for (int j = 0; j < length_; ++j) {
      auto& row = base_[static_cast<size_t>(j)];
      row.assign(static_cast<size_t>(num_ads_), 0.0);
      const TreeNode& n = inst_.tree.node(chain_[static_cast<size_t>(j)]);
      for (int a = 0; a < num_ads_; ++a) {
        const Advertiser& adv = inst_.advertisers[static_cast<size_t>(a)];
        row[static_cast<size_t>(a)] = n.alpha * adv.quality(n.id) * adv.reward;
        node_best_[static_cast<size_t>(j)] =
            std::max(node_best_[static_cast<size_t>(j)], row[static_cast<size_t>(a)]);
      }
    }
    row_values_.assign(static_cast<size_t>(num_ads_), 0.0);
  }

  void run(double timeout_s) {
    if (timeout_s > 0.0) {
      has_deadline_ = true;
      deadline_ = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(timeout_s));
    }
    if (kmax_ > 4) {
      prepare_tail(3);
      dfs(0, 3);
    }
    if (!timed_out_) {
      prepare_tail(kmax_);
      dfs(0, kmax_);
    }
  }

  const Plan& best_plan() const { return inc_plan_; }
  double best_sw() const { return inc_sw_; }
  bool timed_out() const { return timed_out_; }

 private:
  void prepare_tail(int k_limit) {
    std::vector<double> sorted;
    for (double v : node_best_) {
      if (v > 0.0) sorted.push_back(v);
    }
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    tail_.assign(static_cast<size_t>(k_limit) + 1, 0.0);
    for (int k = k_limit - 1; k >= 0; --k) {
      double sum = 0.0;
      for (int t = 0; k + t < k_limit && t < static_cast<int>(sorted.size()); ++t) {
        sum += inst_.fatigue.continuation(k + t) * sorted[static_cast<size_t>(t)];
      }
      tail_[static_cast<size_t>(k)] = sum;
    }
  }

  void dfs(int start, int k_limit) {
    const int k = static_cast<int>(chosen_.size());
    const double lam_k = inst_.fatigue.continuation(k);
    for (int j = start; j < length_; ++j) {
      if ((++steps_ & 8191) == 0 && has_deadline_ &&
          std::chrono::steady_clock::now() > deadline_) {
        timed_out_ = true;
      }
      if (timed_out_) return;
      const double nb = node_best_[static_cast<size_t>(j)];
      if (nb <= 0.0) continue;
      if (engine_.value() + lam_k * nb + tail_[static_cast<size_t>(k + 1)] < inc_sw_) {
        continue;
      }
      for (int a = 0; a < num_ads_; ++a) {
        row_values_[static_cast<size_t>(a)] =
            lam_k * base_[static_cast<size_t>(j)][static_cast<size_t>(a)];
      }
      const double h = engine_.push(row_values_);
      chosen_.push_back(j);
      if (h >= inc_sw_) consider_current(h);
      if (k + 1 < k_limit &&
          !(h + tail_[static_cast<size_t>(k + 1)] < inc_sw_)) {
        dfs(j + 1, k_limit);
      }
      chosen_.pop_back();
      engine_.pop();
      if (timed_out_) return;
    }
  }

  void consider_current(double sw) {
    Plan candidate;
    const std::vector<int> match = engine_.matched_col_by_row();
    for (size_t r = 0; r < chosen_.size(); ++r) {
      candidate.set(chain_[static_cast<size_t>(chosen_[r])], match[r]);
    }
    if (plan_improves(sw, candidate, inc_sw_, inc_plan_)) {
      inc_plan_ = std::move(candidate);
      inc_sw_ = sw;
    }
  }

  const Instance& inst_;
  std::vector<int> chain_;
  int length_;
  int num_ads_;
  int kmax_;
  IncrementalAssignment engine_;
  std::vector<std::vector<double>> base_;
  std::vector<double> node_best_;
  std::vector<double> tail_;
  std::vector<double> row_values_;
  std::vector<int> chosen_;
  Plan inc_plan_;
  double inc_sw_ = 0.0;
  std::uint64_t steps_ = 0;
  bool has_deadline_ = false;
  bool timed_out_ = false;
  std::chrono::steady_clock::time_point deadline_{};
};

ChainSolveResult run_subset_search(const Instance& inst, int kmax,
                                   const ChainSolveOptions& options,
                                   const char* who) {
  const std::vector<int> chain = chain_or_throw(inst, who);
  if (inst.num_ads() == 0 || kmax == 0) return {Plan{}, 0.0, true};
  SubsetSearch search(inst, chain, kmax);
  search.run(options.timeout_s);
  return {search.best_plan(), search.best_sw(), !search.timed_out()};
}

}  // namespace

ChainSolveResult solve_chain_exact(const Instance& inst,
                                   const ChainSolveOptions& options) {
  const int kmax = std::min(inst.num_nodes(), inst.num_ads());
  return run_subset_search(inst, kmax, options, "solve_chain_exact");
}

ChainSolveResult solve_chain_capped(const Instance& inst, int max_ads,
                                    const ChainSolveOptions& options) {
  if (max_ads < 1) {
    throw std::invalid_argument("solve_chain_capped: max_ads must be >= 1");
  }
  const int kmax = std::min({max_ads, inst.num_nodes(), inst.num_ads()});
  return run_subset_search(inst, kmax, options, "solve_chain_capped");
}

int maximal_ad(const Instance& inst, int node) {
  if (inst.num_ads() == 0) {
    throw std::invalid_argument("maximal_ad: empty advertiser catalog");
  }
  inst.tree.node(node);  // range check
  int best = 0;
  double best_value = inst.advertisers[0].quality(node) * inst.advertisers[0].reward;
  for (int a = 1; a < inst.num_ads(); ++a) {
    const double v =
        inst.advertisers[static_cast<size_t>(a)].quality(node) *
        inst.advertisers[static_cast<size_t>(a)].reward;
    if (v > best_value) {
      best = a;
      best_value = v;
    }
  }
  return best;
}

namespace {

struct DpInput {
  std::vector<int> chain;
  std::vector<int> amax;      // -1 when a node has no candidate ad
  std::vector<double> value;  // alpha * q * r of that ad (0 when none)
};

ChainDpResult dp_run(const Instance& inst, const DpInput& in) {
  const int length = static_cast<int>(in.chain.size());
  ChainDpResult out;
  out.pi.assign(static_cast<size_t>(length),
                std::vector<double>(static_cast<size_t>(length), 0.0));
  std::vector<std::vector<char>> take(
      static_cast<size_t>(length),
      std::vector<char>(static_cast<size_t>(length), 0));
  std::vector<double> lam(static_cast<size_t>(length));
  for (int i = 0; i < length; ++i) lam[static_cast<size_t>(i)] = inst.fatigue.continuation(i);

  const int last = length - 1;
  for (int i = 0; i <= last; ++i) {
    if (in.amax[static_cast<size_t>(last)] >= 0) {
      out.pi[static_cast<size_t>(i)][static_cast<size_t>(last)] =
          lam[static_cast<size_t>(i)] * in.value[static_cast<size_t>(last)];
      take[static_cast<size_t>(i)][static_cast<size_t>(last)] = 1;
    }
  }
  for (int j = last - 1; j >= 0; --j) {
    for (int i = 0; i <= j; ++i) {
      const double skip = out.pi[static_cast<size_t>(i)][static_cast<size_t>(j + 1)];
      double best = skip;
      char flag = 0;
      if (in.amax[static_cast<size_t>(j)] >= 0) {
        const double taken = lam[static_cast<size_t>(i)] * in.value[static_cast<size_t>(j)] +
                             out.pi[static_cast<size_t>(i + 1)][static_cast<size_t>(j + 1)];
        if (taken > skip) {  // ties resolve toward not allocating
          best = taken;
          flag = 1;
        }
      }
      out.pi[static_cast<size_t>(i)][static_cast<size_t>(j)] = best;
      take[static_cast<size_t>(i)][static_cast<size_t>(j)] = flag;
    }
  }
  int i = 0;
  for (int j = 0; j < length; ++j) {
    if (take[static_cast<size_t>(i)][static_cast<size_t>(j)]) {
      out.plan.set(in.chain[static_cast<size_t>(j)], in.amax[static_cast<size_t>(j)]);
      ++i;
    }
  }
  return out;
}

DpInput dp_input_from_masks(const Instance& inst, const std::vector<int>& chain,
                            const std::vector<std::vector<std::uint64_t>>& cands) {
  DpInput in;
  in.chain = chain;
  in.amax.assign(chain.size(), -1);
  in.value.assign(chain.size(), 0.0);
  for (size_t j = 0; j < chain.size(); ++j) {
    const TreeNode& n = inst.tree.node(chain[j]);
    double best = -1.0;
    for (int a = 0; a < inst.num_ads(); ++a) {
      if (!(cands[j][static_cast<size_t>(a) / 64] &
            (std::uint64_t{1} << (static_cast<size_t>(a) % 64)))) {
        continue;
      }
      const Advertiser& adv = inst.advertisers[static_cast<size_t>(a)];
      const double v = adv.quality(n.id) * adv.reward;
      if (v > best) {
        best = v;
        in.amax[j] = a;
      }
    }
    if (in.amax[j] >= 0) {
      const Advertiser& adv = inst.advertisers[static_cast<size_t>(in.amax[j])];
      in.value[j] = n.alpha * adv.quality(n.id) * adv.reward;
    }
  }
  return in;
}

}  // namespace

ChainDpResult solve_chain_dp(const Instance& inst) {
  const std::vector<int> chain = chain_or_throw(inst, "solve_chain_dp");
  if (inst.num_ads() == 0) return {};
  DpInput in;
  in.chain = chain;
  std::map<int, int> seen;  // ad -> first position where it is maximal
  for (size_t j = 0; j < chain.size(); ++j) {
    const int a = maximal_ad(inst, chain[j]);
    auto [it, fresh] = seen.emplace(a, static_cast<int>(j));
    if (!fresh) {
      throw std::invalid_argument(
          "solve_chain_dp: ad " + std::to_string(a) + " is maximal in nodes " +
          std::to_string(chain[static_cast<size_t>(it->second)]) + " and " +
          std::to_string(chain[j]) + "; use solve_chain_dp_general");
    }
    in.amax.push_back(a);
    const TreeNode& n = inst.tree.node(chain[j]);
    const Advertiser& adv = inst.advertisers[static_cast<size_t>(a)];
    in.value.push_back(n.alpha * adv.quality(n.id) * adv.reward);
  }
  return dp_run(inst, in);
}

Plan solve_chain_dp_general(const Instance& inst) {
  const std::vector<int> chain = chain_or_throw(inst, "solve_chain_dp_general");
  if (inst.num_ads() == 0) return {};
  const size_t words = (static_cast<size_t>(inst.num_ads()) + 63) / 64;

  using CandKey = std::vector<std::uint64_t>;  // node-major concatenated masks
  std::map<CandKey, std::pair<Plan, double>> memo;

  struct Ctx {
    const Instance& inst;
    const std::vector<int>& chain;
    size_t words;
    std::map<CandKey, std::pair<Plan, double>>& memo;

    std::pair<Plan, double> solve(const std::vector<std::vector<std::uint64_t>>& cands) {
      CandKey key;
      key.reserve(cands.size() * words);
      for (const auto& mask : cands) key.insert(key.end(), mask.begin(), mask.end());
      if (auto it = memo.find(key); it != memo.end()) return it->second;

      const DpInput in = dp_input_from_masks(inst, chain, cands);
      // Find the lowest-indexed ad that is maximal in more than one node.
      int conflict_ad = -1;
      std::vector<int> where;
      for (int a = 0; a < inst.num_ads() && conflict_ad < 0; ++a) {
        where.clear();
        for (size_t j = 0; j < chain.size(); ++j) {
          if (in.amax[j] == a) where.push_back(static_cast<int>(j));
        }
        if (where.size() > 1) conflict_ad = a;
      }

      std::pair<Plan, double> best;
      if (conflict_ad < 0) {
        ChainDpResult dp = dp_run(inst, in);
        best = {dp.plan, dp.pi.empty() ? 0.0 : dp.pi[0][0]};
      } else {
        bool have = false;
        for (int keep_pos : where) {
          auto child = cands;
          for (int other : where) {
            if (other == keep_pos) continue;
            child[static_cast<size_t>(other)][static_cast<size_t>(conflict_ad) / 64] &=
                ~(std::uint64_t{1} << (static_cast<size_t>(conflict_ad) % 64));
          }
          const auto sub = solve(child);
          if (!have || plan_improves(sub.second, sub.first, best.second, best.first)) {
            best = sub;
            have = true;
          }
        }
      }
      memo.emplace(std::move(key), best);
      return best;
    }
  } ctx{inst, chain, words, memo};

  std::vector<std::vector<std::uint64_t>> all(chain.size(),
                                              std::vector<std::uint64_t>(words, 0));
  for (auto& mask : all) {
    for (int a = 0; a < inst.num_ads(); ++a) {
      mask[static_cast<size_t>(a) / 64] |= std::uint64_t{1} << (static_cast<size_t>(a) % 64);
    }
  }
  return ctx.solve(all).first;
}

Plan solve_chain_no_fatigue(const Instance& inst) {
  const std::vector<int> chain = chain_or_throw(inst, "solve_chain_no_fatigue");
  const int num_ads = inst.num_ads();
  const int length = static_cast<int>(chain.size());
  if (num_ads == 0) return {};
  Plan plan;
  if (num_ads >= length) {
    ValueMatrix w(num_ads, length);
    for (int c = 0; c < length; ++c) {
      const TreeNode& n = inst.tree.node(chain[static_cast<size_t>(c)]);
      for (int a = 0; a < num_ads; ++a) {
        const Advertiser& adv = inst.advertisers[static_cast<size_t>(a)];
        w.at(a, c) = n.alpha * adv.quality(n.id) * adv.reward;
      }
    }
    const AssignmentResult res = solve_max_assignment(w);
    for (int c = 0; c < length; ++c) {
      plan.set(chain[static_cast<size_t>(c)], res.row_of_col[static_cast<size_t>(c)]);
    }
  } else {
    // Fewer ads than nodes: give every ad a distinct node instead.
    ValueMatrix w(length, num_ads);
    for (int r = 0; r < length; ++r) {
      const TreeNode& n = inst.tree.node(chain[static_cast<size_t>(r)]);
      for (int a = 0; a < num_ads; ++a) {
        const Advertiser& adv = inst.advertisers[static_cast<size_t>(a)];
        w.at(r, a) = n.alpha * adv.quality(n.id) * adv.reward;
      }
    }
    const AssignmentResult res = solve_max_assignment(w);
    for (int a = 0; a < num_ads; ++a) {
      plan.set(chain[static_cast<size_t>(res.row_of_col[static_cast<size_t>(a)])], a);
    }
  }
  return plan;
}

}  // namespace geoad
