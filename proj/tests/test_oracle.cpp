#include <stdexcept>

#include "doctest.h"
#include "geoad/instances.hpp"
#include "geoad/oracle.hpp"
#include "geoad/verify.hpp"
#include "test_util.hpp"

using namespace geoad;

TEST_SUITE("oracle") {

TEST_CASE("finds the worked two-node optima on both sides of the crossover") {
  Instance inst = builtin_fixture("table1a");
  for (double lam : {0.5, 0.7, 0.74}) {
    inst.fatigue.lambdas = {lam};
    const OracleResult res = brute_force_optimal(inst);
    Plan expect;
    expect.set(1, 1);
    CHECK(res.plan == expect);
    CHECK(res.sw == doctest::Approx(4.0));
  }
  for (double lam : {0.76, 0.8, 1.0}) {
    inst.fatigue.lambdas = {lam};
    const OracleResult res = brute_force_optimal(inst);
    Plan expect;
    expect.set(0, 0);
    expect.set(1, 1);
    CHECK(res.plan == expect);
    CHECK(res.sw == doctest::Approx(1.0 + 4.0 * lam));
  }
}

TEST_CASE("at the exact crossover the smaller plan wins the tie") {
  Instance inst = builtin_fixture("table1a");
  inst.fatigue.lambdas = {0.75};  // both candidate plans reach welfare 4
  const OracleResult res = brute_force_optimal(inst);
  Plan expect;
  expect.set(1, 1);
  CHECK(res.plan == expect);
  CHECK(res.sw == doctest::Approx(4.0));
}

TEST_CASE("three-ad chain: showing only the last-position ad is optimal") {
  const Instance inst = builtin_fixture("example2");
  const OracleResult res = brute_force_optimal(inst);
  Plan expect;
  expect.set(2, 0);
  CHECK(res.plan == expect);
  CHECK(res.sw == doctest::Approx(100.0));
}

TEST_CASE("empty catalog yields the empty plan") {
  Instance inst = builtin_fixture("table1a");
  inst.advertisers.clear();
  const OracleResult res = brute_force_optimal(inst);
  CHECK(res.plan.assignment.empty());
  CHECK(res.sw == doctest::Approx(0.0));
}

TEST_CASE("the enumeration guard rejects oversized instances") {
  GenConfig cfg;
  cfg.seed = 3;
  cfg.num_paths = 1;
  cfg.path_length = 20;
  cfg.num_ads = 10;
  const Instance inst = generate_instance(cfg).instance;
  CHECK_THROWS_AS(brute_force_optimal(inst), std::runtime_error);
  EnumerationGuard tight;
  tight.max_nodes = 3;
  Instance small = builtin_fixture("example2");
  CHECK_NOTHROW(brute_force_optimal(small, tight));
  tight.max_nodes = 2;
  CHECK_THROWS_AS(brute_force_optimal(small, tight), std::runtime_error);
}

TEST_CASE("restricted search honours the predicate") {
  const Instance inst = builtin_fixture("example2");
  // forbid the unrestricted optimum (ad 0 at the last node)
  const OracleResult res = brute_force_restricted(inst, [](const Plan& p) {
    return p.ad_at(2) != 0;
  });
  CHECK(res.plan.ad_at(2) != 0);
  CHECK(res.sw < 100.0);
  CHECK(res.sw > 0.0);

  // predicate rejecting everything leaves the empty plan
  const OracleResult none =
      brute_force_restricted(inst, [](const Plan&) { return false; });
  CHECK(none.plan.assignment.empty());
  CHECK(none.sw == doctest::Approx(0.0));
}

TEST_CASE("never emits an invalid plan on random trees") {
  for (int s = 0; s < 80; ++s) {
    ProbeShape shape;
    shape.multi_path = (s % 2 == 1);
    shape.max_nodes = 5;
    const Instance inst = probe_instance(s, shape);
    const OracleResult res = brute_force_optimal(inst);
    CHECK(validate_plan(inst, res.plan).empty());
    CHECK(geoad::test::sw_close(res.sw, social_welfare(inst, res.plan)));
  }
}

}  // TEST_SUITE
