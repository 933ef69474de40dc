// Release gate for the geo-ad allocation library.  Each check prints one
// [PASS]/[FAIL] line; the process exits non-zero if any check fails.
//
// The checks pin externally meaningful behavior: the worked fixtures, exact
// solvers against exhaustive search, the published worst-case guarantees,
// mechanism properties on a misreport grid, and the desk-scale benchmark
// sweeps with their runtime envelopes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "geoad/allocators.hpp"
#include "geoad/bench.hpp"
#include "geoad/core.hpp"
#include "geoad/instances.hpp"
#include "geoad/multi_path.hpp"
#include "geoad/oracle.hpp"
#include "geoad/serialize.hpp"
#include "geoad/single_path.hpp"
#include "geoad/verify.hpp"

#ifndef GEOAD_FIXTURE_DIR
#define GEOAD_FIXTURE_DIR "fixtures"
#endif

namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

void report(bool ok, const std::string& name, const std::string& detail,
            double ms) {
  if (!ok) ++g_failures;
  std::printf("[%s] %s — %s (%.1f ms)\n", ok ? "PASS" : "FAIL", name.c_str(),
              detail.c_str(), ms);
  std::fflush(stdout);
}

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string fixture(const std::string& name) {
  return std::string(GEOAD_FIXTURE_DIR) + "/" + name;
}

geoad::Plan make_plan(std::initializer_list<std::pair<int, int>> picks) {
  geoad::Plan p;
  for (const auto& [n, a] : picks) p.set(n, a);
  return p;
}

// Two-node fixture: one low-reward and one high-reward ad, both better at
// the second node.  Below the break-even fatigue the solver must show only
// the high-reward ad at the far node; above it, both ads.
void check_crossover() {
  using namespace geoad;
  const auto start = Clock::now();
  Instance inst = load_instance(fixture("table1a.json"));
  const Plan far_only = make_plan({{1, 1}});
  const Plan both = make_plan({{0, 0}, {1, 1}});

  std::string detail;
  bool ok = true;
  double best_ms = 1e18;
  for (int rep = 0; rep < 3 && ok; ++rep) {  // best of 3 for the timing gate
    const auto rep_start = Clock::now();
    for (double lambda : {0.5, 0.7, 0.74, 0.76, 0.8, 1.0}) {
      inst.fatigue.lambdas = {lambda};
      const ChainSolveResult res = solve_chain_exact(inst);
      const Plan& expected = lambda < 0.75 ? far_only : both;
      if (!(res.plan == expected)) {
        ok = false;
        detail = "unexpected plan at lambda " + std::to_string(lambda);
        break;
      }
    }
    best_ms = std::min(best_ms, ms_since(rep_start));
  }
  if (ok && best_ms >= 1.0) {
    ok = false;
    detail = "six solves took " + std::to_string(best_ms) + " ms (limit 1)";
  }
  if (ok) {
    detail = "far node only below break-even, both ads above; six lambdas in " +
             std::to_string(best_ms) + " ms";
  }
  report(ok, "two-node crossover thresholds", detail, ms_since(start));
}

// Three-node chain where showing anything before the 100-reward ad loses
// welfare at strong fatigue: every exact solver must return exactly the
// single far-node assignment worth 100.
void check_chain_optimum() {
  using namespace geoad;
  const auto start = Clock::now();
  const Instance inst = load_instance(fixture("example2.json"));
  const Plan expected = make_plan({{2, 0}});

  const ChainSolveResult fe = solve_chain_exact(inst);
  const TreeSolveResult fem = solve_tree_exact(inst);
  const OracleResult brute = brute_force_optimal(inst);

  bool ok = true;
  std::string detail;
  const auto check_one = [&](const char* who, const Plan& plan, double sw) {
    if (!(plan == expected) || std::abs(sw - 100.0) > 1e-9) {
      ok = false;
      detail += std::string(detail.empty() ? "" : "; ") + who +
                " returned sw " + std::to_string(sw);
    }
  };
  check_one("subset search", fe.plan, fe.sw);
  check_one("tree search", fem.plan, fem.sw);
  check_one("exhaustive search", brute.plan, brute.sw);
  const double ms = ms_since(start);
  if (ok && ms >= 1000.0) {
    ok = false;
    detail = "took too long";
  }
  if (ok) detail = "all three solvers: sw 100, single far-node assignment";
  report(ok, "three-node chain optimum", detail, ms);
}

// Raising one advertiser's reward makes the fatigue-blind assignment move
// that ad to a later (discounted) node, cutting its realized visit rate from
// 0.5 to 0.2 — the non-monotonicity the capped solver family avoids.
void check_non_monotonicity() {
  using namespace geoad;
  const auto start = Clock::now();
  bool ok = true;
  std::string detail;

  const auto vtr_of_first = [&](const std::string& file) {
    const Instance inst = load_instance(fixture(file));
    const Plan plan = solve_chain_no_fatigue(inst);
    return visit_through_rate(inst, plan, 0);
  };
  const double before = vtr_of_first("table1a-nonmono.json");
  const double after = vtr_of_first("table1b.json");
  if (std::abs(before - 0.5) > 1e-12 || std::abs(after - 0.2) > 1e-12) {
    ok = false;
  }
  detail = "visit rate " + std::to_string(before) + " -> " +
           std::to_string(after) + " after the reward raise";
  report(ok, "fatigue-blind allocation is non-monotone", detail,
         ms_since(start));
}

// 100 random chains and 100 random trees, all small enough to enumerate:
// the exact solvers must match exhaustive search, and the restricted-domain
// dynamic programs must match it whenever their domain requirement holds.
void check_oracle_equivalence() {
  using namespace geoad;
  const auto start = Clock::now();
  int bad = 0;
  int dp_domain = 0;
  int tree_dp_domain = 0;
  std::string first_bad;

  const auto mismatch = [&](int seed, const char* who, double got,
                            double want) {
    ++bad;
    if (first_bad.empty()) {
      first_bad = std::string(who) + " seed " + std::to_string(seed) +
                  " got " + std::to_string(got) + " want " +
                  std::to_string(want);
    }
  };

  ProbeShape chain_shape{6, 4, false};
  for (int s = 0; s < 100; ++s) {
    const Instance inst = probe_instance(static_cast<std::uint64_t>(s),
                                         chain_shape);
    const OracleResult brute = brute_force_optimal(inst);
    const ChainSolveResult fe = solve_chain_exact(inst);
    if (!rel_close(fe.sw, brute.sw, 1e-9)) {
      mismatch(s, "subset search", fe.sw, brute.sw);
    }
    const TreeSolveResult fem = solve_tree_exact(inst);
    if (!rel_close(fem.sw, brute.sw, 1e-9)) {
      mismatch(s, "tree search", fem.sw, brute.sw);
    }
    const Plan general = solve_chain_dp_general(inst);
    if (!rel_close(social_welfare(inst, general), brute.sw, 1e-9)) {
      mismatch(s, "splitting dp", social_welfare(inst, general), brute.sw);
    }
    try {
      const ChainDpResult dp = solve_chain_dp(inst);
      ++dp_domain;
      if (!rel_close(social_welfare(inst, dp.plan), brute.sw, 1e-9)) {
        mismatch(s, "chain dp", social_welfare(inst, dp.plan), brute.sw);
      }
    } catch (const std::invalid_argument&) {
      // some ad is maximal at two nodes: outside the dp's domain
    }
  }

  ProbeShape tree_shape{6, 4, true};
  for (int s = 0; s < 100; ++s) {
    const Instance inst = probe_instance(static_cast<std::uint64_t>(s),
                                         tree_shape);
    const OracleResult brute = brute_force_optimal(inst);
    const TreeSolveResult fem = solve_tree_exact(inst);
    if (!rel_close(fem.sw, brute.sw, 1e-9)) {
      mismatch(s, "tree search", fem.sw, brute.sw);
    }
    try {
      const Plan dp = solve_tree_dp(inst);
      ++tree_dp_domain;
      if (!rel_close(social_welfare(inst, dp), brute.sw, 1e-9)) {
        mismatch(s, "tree dp", social_welfare(inst, dp), brute.sw);
      }
    } catch (const std::invalid_argument&) {
      // an ad repeats as maximal along some path: outside the dp's domain
    }
  }

  const double ms = ms_since(start);
  bool ok = bad == 0 && ms < 120'000.0;
  std::string detail;
  if (bad > 0) {
    detail = std::to_string(bad) + " mismatches; first: " + first_bad;
  } else if (ms >= 120'000.0) {
    detail = "exceeded the 2 minute budget";
  } else {
    detail = "200 instances; dp domains hit on " + std::to_string(dp_domain) +
             " chains / " + std::to_string(tree_dp_domain) + " trees";
  }
  report(ok, "exact solvers match exhaustive search", detail, ms);
}

// Worst-case guarantees of the approximate solvers against the exact
// optimum: capped solver, fatigue-blind solver, and best-single-path solver.
void check_approximation_bounds() {
  using namespace geoad;
  const auto start = Clock::now();
  int violations = 0;
  std::string first;

  const auto violated = [&](int seed, const char* what, double got,
                            double bound) {
    ++violations;
    if (first.empty()) {
      first = std::string(what) + " seed " + std::to_string(seed) + " got " +
              std::to_string(got) + " bound " + std::to_string(bound);
    }
  };

  ProbeShape chain_shape{6, 4, false};
  for (int s = 0; s < 100; ++s) {
    const Instance inst = probe_instance(static_cast<std::uint64_t>(s),
                                         chain_shape);
    const double opt = solve_chain_exact(inst).sw;
    const int ladder = static_cast<int>(inst.fatigue.lambdas.size());
    for (int mbar = 1; mbar <= 3; ++mbar) {
      const double sw = solve_chain_capped(inst, mbar).sw;
      const double bound =
          (1.0 - inst.fatigue.continuation(std::min(mbar - 1, ladder))) * opt;
      if (sw < bound - 1e-9 * std::max(1.0, opt)) {
        violated(s, "capped solver", sw, bound);
      }
    }
    const double blind = social_welfare(inst, solve_chain_no_fatigue(inst));
    const double blind_bound =
        inst.fatigue.continuation(inst.num_nodes() - 1) * opt;
    if (blind < blind_bound - 1e-9 * std::max(1.0, opt)) {
      violated(s, "fatigue-blind solver", blind, blind_bound);
    }
  }

  ProbeShape tree_shape{6, 4, true};
  for (int s = 0; s < 100; ++s) {
    const Instance inst = probe_instance(static_cast<std::uint64_t>(s),
                                         tree_shape);
    const double opt = solve_tree_exact(inst).sw;
    const double star = solve_tree_best_path_exact(inst).sw;
    const double bound =
        opt / static_cast<double>(inst.tree.paths.size());
    if (star < bound - 1e-9 * std::max(1.0, opt)) {
      violated(s, "best single path", star, bound);
    }
  }

  const double ms = ms_since(start);
  const bool ok = violations == 0;
  report(ok, "worst-case approximation guarantees",
         ok ? "capped, fatigue-blind, and best-path bounds hold on 200 instances"
            : std::to_string(violations) + " violations; first: " + first,
         ms);
}

// Restricting plans to discounts no worse than a floor delta loses at most
// delta * OPT, for every floor in the instance's own discount ladder.
void check_truncation_bound() {
  using namespace geoad;
  const auto start = Clock::now();
  int violations = 0;
  int cases = 0;
  std::string first;

  const auto run_family = [&](bool multi) {
    ProbeShape shape{5, 3, multi};
    for (int s = 0; s < 50; ++s) {
      const Instance inst = probe_instance(static_cast<std::uint64_t>(s),
                                           shape);
      const double opt = brute_force_optimal(inst).sw;
      const int ladder = std::min(inst.num_nodes(),
                                  static_cast<int>(inst.fatigue.lambdas.size()));
      for (int k = 1; k <= ladder; ++k) {  // the achievable discount floors
        const double delta = inst.fatigue.continuation(k);
        const auto keep = [&](const Plan& plan) {
          for (const auto& [node, ad] : plan.assignment) {
            const int before = preceding_ad_count(plan, inst.tree, node);
            if (inst.fatigue.continuation(before) < delta - 1e-12) {
              return false;
            }
          }
          return true;
        };
        const double restricted = brute_force_restricted(inst, keep).sw;
        ++cases;
        if (restricted < (1.0 - delta) * opt - 1e-9 * std::max(1.0, opt)) {
          ++violations;
          if (first.empty()) {
            first = "seed " + std::to_string(s) + " floor " +
                    std::to_string(delta) + " restricted " +
                    std::to_string(restricted) + " vs (1-d)*opt " +
                    std::to_string((1.0 - delta) * opt);
          }
        }
      }
    }
  };
  run_family(false);
  run_family(true);

  const bool ok = violations == 0;
  report(ok, "discount-floor truncation bound",
         ok ? std::to_string(cases) + " (instance, floor) pairs hold"
            : std::to_string(violations) + " violations; first: " + first,
         ms_since(start));
}

// Misreport grid for the transfer mechanism over both truthful allocation
// rules: no profitable lie, no loss from honest participation, and no
// payment flowing back to an advertiser.
void check_mechanism_properties() {
  using namespace geoad;
  const auto start = Clock::now();
  ProbeShape shape{4, 4, false};
  AllocatorOptions opts;
  opts.max_ads = 2;

  int violations = 0;
  int cases = 0;
  std::string first;
  const auto absorb = [&](const VerifyReport& r, const char* what) {
    cases += r.cases;
    violations += r.violations;
    if (first.empty() && !r.ok()) {
      first = std::string(what) +
              (r.notes.empty() ? std::string(" violated")
                               : ": " + r.notes.front());
    }
  };

  for (AllocatorId id : {AllocatorId::chain_exact, AllocatorId::chain_capped}) {
    const char* tag =
        id == AllocatorId::chain_exact ? "exact rule" : "capped rule";
    absorb(verify_dsic(id, opts, 100, 25, shape), tag);
    absorb(verify_ir(id, opts, 100, shape), tag);
    absorb(verify_wbb(id, opts, 100, shape), tag);
  }

  const double ms = ms_since(start);
  bool ok = violations == 0 && ms < 300'000.0;
  std::string detail;
  if (violations > 0) {
    detail = std::to_string(violations) + " violations; first: " + first;
  } else if (ms >= 300'000.0) {
    detail = "exceeded the 5 minute budget";
  } else {
    detail = std::to_string(cases) + " grid cases clean for both rules";
  }
  report(ok, "mechanism truthfulness, participation, no-subsidy", detail, ms);
}

// Desk-scale benchmark sweeps: the capped chain solver's average ratio at
// cap 2, and the best-single-path solver's average ratio on trees, measured
// only on instances the exact solver finished.
void check_benchmark_ratios() {
  using namespace geoad;
  const auto start = Clock::now();
  bool ok = true;
  std::string detail;

  SingleSweepConfig scfg;
  scfg.lambdas = {0.5};
  scfg.sizes = {10, 20};
  scfg.seeds = 50;
  scfg.mbars = {2};
  const auto sagg = aggregate(bench_single_path(scfg));
  for (int size : scfg.sizes) {
    const auto it = sagg.find({"fa", size, 0.5, 2});
    if (it == sagg.end() || it->second.rated == 0 || it->second.aar < 0.70) {
      ok = false;
      detail += "chain cap-2 ratio below 0.70 at length " +
                std::to_string(size) + "; ";
    } else {
      detail += "chains n=" + std::to_string(size) + " ratio " +
                std::to_string(it->second.aar).substr(0, 5) + "; ";
    }
  }

  MultiSweepConfig mcfg;  // lambda 0.5, 5 and 10 paths, 50 seeds, cap 1..3
  const auto magg = aggregate(bench_multi_path(mcfg));
  for (int pc : mcfg.path_counts) {
    const auto it = magg.find({"fam-star", pc, 0.5, -1});
    if (it == magg.end() || it->second.rated == 0 || it->second.aar < 0.5) {
      ok = false;
      detail += "best-path ratio below 0.5 at " + std::to_string(pc) +
                " paths; ";
    } else {
      detail += "trees p=" + std::to_string(pc) + " ratio " +
                std::to_string(it->second.aar).substr(0, 5) + " over " +
                std::to_string(it->second.rated) + " rated; ";
    }
  }

  const double ms = ms_since(start);
  if (ms >= 900'000.0) {
    ok = false;
    detail += "exceeded the 15 minute budget";
  }
  report(ok, "desk-scale approximation sweep", detail, ms);
}

// Qualitative scaling: weaker fatigue (larger lambda) must slow the exact
// chain solver at length 20, and the capped solver must stay fast at
// length 50 for every small cap.
void check_scaling_trends() {
  using namespace geoad;
  const auto start = Clock::now();
  bool ok = true;
  std::string detail;

  const auto median_fe_ms = [&](double lambda) {
    std::vector<double> times;
    for (int s = 0; s < 15; ++s) {
      GenConfig gen;
      gen.seed = static_cast<std::uint64_t>(s);
      gen.num_paths = 1;
      gen.path_length = 20;
      gen.lambda = lambda;
      const Instance inst = generate_instance(gen).instance;
      const auto t0 = Clock::now();
      solve_chain_exact(inst);
      times.push_back(ms_since(t0));
    }
    std::nth_element(times.begin(), times.begin() + times.size() / 2,
                     times.end());
    return times[times.size() / 2];
  };
  const double med_lo = median_fe_ms(0.5);
  const double med_hi = median_fe_ms(0.8);
  if (!(med_hi > med_lo)) {
    ok = false;
    detail += "exact solver not slower at lambda 0.8; ";
  }
  detail += "exact medians " + std::to_string(med_lo).substr(0, 6) +
            " ms at lambda 0.5 vs " + std::to_string(med_hi).substr(0, 6) +
            " ms at 0.8; ";

  double worst_capped = 0.0;
  for (int s = 0; s < 5; ++s) {
    GenConfig gen;
    gen.seed = static_cast<std::uint64_t>(s);
    gen.num_paths = 1;
    gen.path_length = 50;
    gen.lambda = 0.5;
    const Instance inst = generate_instance(gen).instance;
    for (int mbar = 1; mbar <= 3; ++mbar) {
      const auto t0 = Clock::now();
      solve_chain_capped(inst, mbar);
      worst_capped = std::max(worst_capped, ms_since(t0));
    }
  }
  if (worst_capped >= 10'000.0) {
    ok = false;
    detail += "capped solver exceeded 10 s at length 50; ";
  } else {
    detail += "capped solver worst " + std::to_string(worst_capped).substr(0, 6) +
              " ms at length 50";
  }
  report(ok, "runtime scaling trends", detail, ms_since(start));
}

}  // namespace

int main() {
  check_crossover();
  check_chain_optimum();
  check_non_monotonicity();
  check_oracle_equivalence();
  check_approximation_bounds();
  check_truncation_bound();
  check_mechanism_properties();
  check_benchmark_ratios();
  check_scaling_trends();

  if (g_failures == 0) {
    std::printf("all acceptance checks passed\n");
  } else {
    std::printf("%d acceptance check%s failed\n", g_failures,
                g_failures == 1 ? "" : "s");
  }
  return g_failures == 0 ? 0 : 1;
}
