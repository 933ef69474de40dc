#include <stdexcept>

#include "doctest.h"
#include "geoad/instances.hpp"
#include "geoad/mechanism.hpp"
#include "geoad/verify.hpp"
#include "test_util.hpp"

using namespace geoad;

namespace {

std::vector<double> rewards_of(const Instance& inst) {
  std::vector<double> out;
  for (const Advertiser& ad : inst.advertisers) out.push_back(ad.reward);
  return out;
}

}  // namespace

TEST_SUITE("mechanism") {

TEST_CASE("worked two-node instance without fatigue") {
  Instance inst = builtin_fixture("table1a");
  inst.fatigue.lambdas = {1.0};
  const MechanismOutcome out =
      run_mechanism(inst, {2.0, 4.0}, AllocatorId::chain_exact);
  // both ads allocated: welfare 0.5*2 + 1.0*4 = 5
  CHECK(out.sw == doctest::Approx(5.0));
  CHECK(out.vtrs[0] == doctest::Approx(0.5));
  CHECK(out.vtrs[1] == doctest::Approx(1.0));
  // dropping ad 0 leaves ad 1 at welfare 4: ad 0 pays 4 - (5 - 1) = 0
  CHECK(out.transfers[0] == doctest::Approx(0.0));
  // dropping ad 1 leaves ad 0 alone at welfare 2: ad 1 pays 2 - (5 - 4) = 1
  CHECK(out.transfers[1] == doctest::Approx(1.0));
  CHECK(utility(out, 0, 2.0) == doctest::Approx(1.0));
  CHECK(utility(out, 1, 4.0) == doctest::Approx(3.0));
}

TEST_CASE("reports replace the instance rewards") {
  Instance inst = builtin_fixture("table1a");
  inst.fatigue.lambdas = {1.0};
  // ad 1 underreports enough to lose its slot priority structure
  const MechanismOutcome out =
      run_mechanism(inst, {2.0, 0.0}, AllocatorId::chain_exact);
  // with a zero report ad 1 contributes nothing: only ad 0 is placed
  CHECK(out.sw == doctest::Approx(2.0));
  CHECK(out.vtrs[1] * 0.0 == doctest::Approx(0.0));
  CHECK(out.transfers[1] == doctest::Approx(0.0));
}

TEST_CASE("input validation") {
  const Instance inst = builtin_fixture("table1a");
  CHECK_THROWS_AS(run_mechanism(inst, {1.0}, AllocatorId::chain_exact),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_mechanism(inst, {1.0, -2.0}, AllocatorId::chain_exact),
                  std::invalid_argument);
}

TEST_CASE("the fatigue-blind allocator is rejected") {
  const Instance inst = builtin_fixture("table1a");
  CHECK_THROWS_AS(
      run_mechanism(inst, {2.0, 4.0}, AllocatorId::chain_no_fatigue),
      std::invalid_argument);
}

TEST_CASE("a budget-limited allocation aborts the mechanism") {
  GenConfig cfg;
  cfg.seed = 7;
  cfg.num_paths = 3;
  cfg.num_ads = 5;
  const Instance inst = generate_instance(cfg).instance;
  AllocatorOptions opts;
  opts.tree.force = true;
  opts.tree.max_expansions = 1;
  CHECK_THROWS_AS(
      run_mechanism(inst, rewards_of(inst), AllocatorId::tree_exact, opts),
      std::runtime_error);
}

TEST_CASE("skipping counterfactuals for unallocated ads changes nothing") {
  for (int s = 0; s < 40; ++s) {
    ProbeShape shape;
    shape.multi_path = (s % 2 == 1);
    shape.max_nodes = 5;
    const Instance inst = probe_instance(static_cast<std::uint64_t>(s), shape);
    const AllocatorId id = shape.multi_path ? AllocatorId::tree_exact
                                            : AllocatorId::chain_exact;
    const auto full = run_mechanism(inst, rewards_of(inst), id, {}, false);
    const auto fast = run_mechanism(inst, rewards_of(inst), id, {}, true);
    CHECK(full.plan == fast.plan);
    for (int a = 0; a < inst.num_ads(); ++a) {
      CHECK(full.transfers[a] ==
            doctest::Approx(fast.transfers[a]).epsilon(1e-12));
    }
  }
}

TEST_CASE("payments never exceed the reported value of the slots") {
  for (int s = 0; s < 50; ++s) {
    ProbeShape shape;
    const Instance inst = probe_instance(static_cast<std::uint64_t>(s), shape);
    const std::vector<double> truth = rewards_of(inst);
    const auto out = run_mechanism(inst, truth, AllocatorId::chain_exact);
    for (int a = 0; a < inst.num_ads(); ++a) {
      CHECK(out.transfers[a] <= out.vtrs[a] * truth[a] + 1e-9);
      CHECK(out.transfers[a] >= -1e-9);
    }
  }
}

TEST_CASE("no profitable misreport on probe instances (exact chain solver)") {
  AllocatorOptions opts;
  const VerifyReport report =
      verify_dsic(AllocatorId::chain_exact, opts, 25, 11);
  CHECK(report.cases > 0);
  CHECK(report.violations == 0);
}

TEST_CASE("no profitable misreport with the capped solver") {
  AllocatorOptions opts;
  opts.max_ads = 2;
  const VerifyReport report =
      verify_dsic(AllocatorId::chain_capped, opts, 25, 11);
  CHECK(report.cases > 0);
  CHECK(report.violations == 0);
}

TEST_CASE("no profitable misreport with the exact tree solver") {
  AllocatorOptions opts;
  ProbeShape shape;
  shape.multi_path = true;
  shape.max_nodes = 5;
  const VerifyReport report =
      verify_dsic(AllocatorId::tree_exact, opts, 12, 9, shape);
  CHECK(report.cases > 0);
  CHECK(report.violations == 0);
}

TEST_CASE("truthful participation never hurts and never pays out") {
  AllocatorOptions opts;
  opts.max_ads = 2;
  for (const AllocatorId id :
       {AllocatorId::chain_exact, AllocatorId::chain_capped}) {
    const VerifyReport ir = verify_ir(id, opts, 40);
    CHECK(ir.violations == 0);
    const VerifyReport wbb = verify_wbb(id, opts, 40);
    CHECK(wbb.violations == 0);
  }
}

TEST_CASE("exact solvers pass the cross-check suite") {
  ProbeShape chains;
  const VerifyReport r1 = verify_ae(60, chains);
  CHECK(r1.violations == 0);
  ProbeShape trees;
  trees.multi_path = true;
  trees.max_nodes = 6;
  const VerifyReport r2 = verify_ae(60, trees);
  CHECK(r2.violations == 0);
}

TEST_CASE("allocator ids round-trip through their names") {
  for (const char* name : {"fe", "dp", "dpgen", "fa", "fa2", "fem", "fmp",
                           "fam", "fam-star", "brute"}) {
    CHECK(to_string(allocator_from_string(name)) == name);
  }
  CHECK_THROWS_AS(allocator_from_string("nope"), std::invalid_argument);
}

TEST_CASE("every allocator id dispatches on a compatible instance") {
  const Instance chain = builtin_fixture("example2");
  for (const AllocatorId id :
       {AllocatorId::chain_exact, AllocatorId::chain_dp,
        AllocatorId::chain_dp_general, AllocatorId::chain_capped,
        AllocatorId::chain_no_fatigue, AllocatorId::tree_exact,
        AllocatorId::tree_dp, AllocatorId::tree_best_path,
        AllocatorId::tree_best_path_exact, AllocatorId::brute_force}) {
    const AllocateResult res = allocate(chain, id);
    CHECK(res.optimal);
    CHECK(validate_plan(chain, res.plan).empty());
  }
}

}  // TEST_SUITE
