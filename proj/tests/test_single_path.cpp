#include <stdexcept>

#include "doctest.h"
#include "geoad/instances.hpp"
#include "geoad/oracle.hpp"
#include "geoad/single_path.hpp"
#include "geoad/verify.hpp"
#include "test_util.hpp"

using namespace geoad;
using geoad::test::sw_close;

namespace {

// Chain probes only; skips seeds whose merged tree happens to branch.
Instance chain_probe(int seed, int max_nodes = 5, int max_ads = 4) {
  ProbeShape shape;
  shape.max_nodes = max_nodes;
  shape.max_ads = max_ads;
  return probe_instance(static_cast<std::uint64_t>(seed), shape);
}

double lambda_prefix_product(const Instance& inst, int count) {
  double prod = 1.0;
  const auto& l = inst.fatigue.lambdas;
  for (int i = 0; i < count && i < static_cast<int>(l.size()); ++i) {
    prod *= l[static_cast<size_t>(i)];
  }
  return prod;
}

}  // namespace

TEST_SUITE("single_path") {

TEST_CASE("the two-ad example crosses over between 0.74 and 0.76") {
  Instance inst = builtin_fixture("table1a");
  for (double lam : {0.5, 0.7, 0.74}) {
    inst.fatigue.lambdas = {lam};
    const ChainSolveResult res = solve_chain_exact(inst);
    Plan expect;
    expect.set(1, 1);
    CHECK(res.plan == expect);
    CHECK(res.sw == doctest::Approx(4.0));
    CHECK(res.optimal);
  }
  // just below the crossover the two-ad plan loses by exactly 0.04
  inst.fatigue.lambdas = {0.74};
  Plan both;
  both.set(0, 0);
  both.set(1, 1);
  CHECK(social_welfare(inst, both) == doctest::Approx(3.96));
  for (double lam : {0.76, 0.8, 1.0}) {
    inst.fatigue.lambdas = {lam};
    const ChainSolveResult res = solve_chain_exact(inst);
    CHECK(res.plan == both);
    CHECK(res.sw == doctest::Approx(1.0 + 4.0 * lam));
  }
  inst.fatigue.lambdas = {0.75};  // exact tie: keep the smaller plan
  Plan second;
  second.set(1, 1);
  CHECK(solve_chain_exact(inst).plan == second);
}

TEST_CASE("matches the exhaustive reference on random chains") {
  int checked = 0;
  for (int s = 0; s < 200; ++s) {
    const Instance inst = chain_probe(s);
    const OracleResult ref = brute_force_optimal(inst);
    const ChainSolveResult res = solve_chain_exact(inst);
    CHECK(res.optimal);
    CHECK(sw_close(social_welfare(inst, res.plan), ref.sw));
    CHECK(validate_plan(inst, res.plan).empty());
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("rejects branching trees") {
  const Instance star = geoad::test::make_star();
  CHECK_THROWS_AS(solve_chain_exact(star), std::invalid_argument);
  CHECK_THROWS_AS(solve_chain_capped(star, 2), std::invalid_argument);
  CHECK_THROWS_AS(solve_chain_no_fatigue(star), std::invalid_argument);
}

TEST_CASE("cap covering the whole chain reproduces the exact optimum") {
  for (int s = 0; s < 60; ++s) {
    const Instance inst = chain_probe(s);
    const ChainSolveResult exact = solve_chain_exact(inst);
    const ChainSolveResult capped =
        solve_chain_capped(inst, inst.num_nodes());
    CHECK(capped.plan == exact.plan);
    CHECK(sw_close(capped.sw, exact.sw));
  }
}

TEST_CASE("welfare grows with the cap and respects the fatigue bound") {
  for (int s = 0; s < 120; ++s) {
    const Instance inst = chain_probe(s);
    const double opt = social_welfare(inst, solve_chain_exact(inst).plan);
    double prev = 0.0;
    for (int mbar = 1; mbar <= 3; ++mbar) {
      const ChainSolveResult res = solve_chain_capped(inst, mbar);
      const double sw = social_welfare(inst, res.plan);
      CHECK(sw >= prev - 1e-12);
      prev = sw;
      // guaranteed fraction: 1 - prod of the first mbar-1 lambdas
      const double bound = (1.0 - lambda_prefix_product(inst, mbar - 1)) * opt;
      CHECK(sw >= bound - 1e-9);
      CHECK(static_cast<int>(res.plan.assignment.size()) <= mbar);
    }
  }
}

TEST_CASE("cap of one places the single most valuable ad") {
  Instance inst = geoad::test::make_chain(
      2,
      {[] {
         Advertiser a;
         a.reward = 2.0;
         a.qualities = {{0, 0.5}, {1, 1.0}};
         return a;
       }(),
       [] {
         Advertiser a;
         a.reward = 4.0;
         a.qualities = {{0, 0.5}, {1, 1.0}};
         return a;
       }()},
      {0.9});
  const ChainSolveResult res = solve_chain_capped(inst, 1);
  Plan expect;
  expect.set(1, 1);  // alpha and quality peak at the second node, ad 1 pays 4
  CHECK(res.plan == expect);
  CHECK(res.sw == doctest::Approx(4.0));
}

TEST_CASE("fatigue-blind allocation is not monotone in the reward") {
  const Instance low = builtin_fixture("table1a-nonmono");
  const Instance high = builtin_fixture("table1b");  // ad 0 reward 2 -> 6
  const Plan p_low = solve_chain_no_fatigue(low);
  const Plan p_high = solve_chain_no_fatigue(high);
  CHECK(visit_through_rate(low, p_low, 0) == doctest::Approx(0.5));
  CHECK(visit_through_rate(high, p_high, 0) == doctest::Approx(0.2));
}

TEST_CASE("fatigue-blind welfare keeps the full-fatigue fraction") {
  for (int s = 0; s < 120; ++s) {
    const Instance inst = chain_probe(s);
    const double opt = social_welfare(inst, solve_chain_exact(inst).plan);
    const Plan blind = solve_chain_no_fatigue(inst);
    CHECK(validate_plan(inst, blind).empty());
    const double floor =
        lambda_prefix_product(inst, inst.num_nodes() - 1) * opt;
    CHECK(social_welfare(inst, blind) >= floor - 1e-9);
  }
}

TEST_CASE("fatigue-blind handles more nodes than ads") {
  Advertiser a;
  a.reward = 1.0;
  a.qualities = {{0, 0.1}, {1, 0.2}, {2, 0.3}, {3, 0.9}};
  Instance inst = geoad::test::make_chain(4, {a}, {0.5, 0.5, 0.5});
  const Plan plan = solve_chain_no_fatigue(inst);
  Plan expect;
  expect.set(3, 0);  // best quality, ignoring fatigue
  CHECK(plan == expect);
}

TEST_CASE("maximal ad per node breaks ties toward the lower index") {
  Instance inst = builtin_fixture("example2");
  CHECK(maximal_ad(inst, 0) == 1);
  CHECK(maximal_ad(inst, 1) == 2);
  CHECK(maximal_ad(inst, 2) == 0);
  Instance tie = builtin_fixture("table1a");
  tie.advertisers[0].reward = 4.0;  // both ads now worth 4 * q everywhere
  CHECK(maximal_ad(tie, 0) == 0);
  CHECK(maximal_ad(tie, 1) == 0);
}

TEST_CASE("the distinct-maximal recursion solves its domain exactly") {
  const Instance inst = builtin_fixture("example2");
  const ChainDpResult res = solve_chain_dp(inst);
  Plan expect;
  expect.set(2, 0);
  CHECK(res.plan == expect);
  CHECK(social_welfare(inst, res.plan) == doctest::Approx(100.0));
  // value table: entry [i][j] is the best welfare from position j on with
  // i ads already shown; the full solve sits at [0][0]
  REQUIRE(!res.pi.empty());
  CHECK(res.pi[0][0] == doctest::Approx(100.0));
}

TEST_CASE("the recursion rejects chains with a repeated maximal ad") {
  const Instance inst = builtin_fixture("table1a");  // ad 1 maximal twice
  CHECK_THROWS_WITH_AS(solve_chain_dp(inst),
                       doctest::Contains("solve_chain_dp_general"),
                       std::invalid_argument);
}

TEST_CASE("conflict splitting matches the reference on every chain") {
  for (int s = 0; s < 150; ++s) {
    const Instance inst = chain_probe(s);
    const OracleResult ref = brute_force_optimal(inst);
    const Plan plan = solve_chain_dp_general(inst);
    CHECK(sw_close(social_welfare(inst, plan), ref.sw));
  }
  // and on the repeated-maximal fixture
  const Instance inst = builtin_fixture("table1a");
  CHECK(social_welfare(inst, solve_chain_dp_general(inst)) ==
        doctest::Approx(4.0));
}

TEST_CASE("distinct-maximal recursion agrees with the exact solver") {
  int applicable = 0;
  for (int s = 0; s < 200 && applicable < 40; ++s) {
    const Instance inst = chain_probe(s, 5, 6);
    ChainDpResult res;
    try {
      res = solve_chain_dp(inst);
    } catch (const std::invalid_argument&) {
      continue;  // repeated maximal ad: out of this solver's domain
    }
    ++applicable;
    const ChainSolveResult exact = solve_chain_exact(inst);
    CHECK(sw_close(social_welfare(inst, res.plan),
                   social_welfare(inst, exact.plan)));
  }
  CHECK(applicable >= 10);
}

TEST_CASE("a tiny timeout still returns a valid incumbent") {
  GenConfig cfg;
  cfg.seed = 11;
  cfg.num_paths = 1;
  cfg.path_length = 20;
  cfg.num_ads = 30;
  cfg.lambda = 0.9;
  const Instance inst = generate_instance(cfg).instance;
  ChainSolveOptions opts;
  opts.timeout_s = 1e-6;
  const ChainSolveResult res = solve_chain_exact(inst, opts);
  CHECK_FALSE(res.optimal);
  CHECK(validate_plan(inst, res.plan).empty());
}

TEST_CASE("subset evaluation helper scores a fixed node set optimally") {
  const Instance inst = builtin_fixture("example2");
  const SubsetContext ctx = make_subset_context(inst.tree, {2, 0});
  CHECK(ctx.members == std::vector<int>{0, 2});
  CHECK(ctx.count_before.at(0) == 0);
  CHECK(ctx.count_before.at(2) == 1);

  // allocating exactly the last node: ad 0 is the clear winner
  const auto [plan, value] = chain_subset_value(inst, {2});
  Plan expect;
  expect.set(2, 0);
  CHECK(plan == expect);
  CHECK(value == doctest::Approx(100.0));

  // allocating both ends: the first node eats one fatigue step
  const auto [plan2, value2] = chain_subset_value(inst, {0, 2});
  CHECK(plan2.ad_at(0) != plan2.ad_at(2));
  CHECK(value2 == doctest::Approx(79.0 + 0.2 * 100.0));
}

}  // TEST_SUITE
