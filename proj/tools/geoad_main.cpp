#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "geoad/allocators.hpp"
#include "geoad/bench.hpp"
#include "geoad/instances.hpp"
#include "geoad/mechanism.hpp"
#include "geoad/multi_path.hpp"
#include "geoad/path_tree.hpp"
#include "geoad/serialize.hpp"
#include "geoad/verify.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitPropertyFailure = 2;
constexpr int kExitBudget = 3;

void write_output(const std::string& out_path, const json& j) {
  if (out_path.empty() || out_path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << j.dump(2) << '\n';
}

json vtr_json(const geoad::Instance& inst, const geoad::Plan& plan) {
  json j = json::object();
  for (int a = 0; a < inst.num_ads(); ++a) {
    j[std::to_string(a)] = geoad::visit_through_rate(inst, plan, a);
  }
  return j;
}

struct SolveArgs {
  std::string instance_path;
  std::string algorithm = "fe";
  std::string out_path;
  int mbar = 2;
  std::uint64_t budget = 5'000'000;
  double timeout_s = 0.0;
  bool force = false;
};

int cmd_solve(const SolveArgs& args) {
  const geoad::Instance inst = geoad::load_instance(args.instance_path);
  const geoad::AllocatorId id = geoad::allocator_from_string(args.algorithm);
  geoad::AllocatorOptions opts;
  opts.max_ads = args.mbar;
  opts.chain.timeout_s = args.timeout_s;
  opts.tree.max_expansions = args.budget;
  opts.tree.timeout_s = args.timeout_s;
  opts.tree.force = args.force;

  geoad::AllocateResult res;
  try {
    res = geoad::allocate(inst, id, opts);
  } catch (const geoad::BudgetRefusal& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kExitBudget;
  }

  json j;
  j["algorithm"] = args.algorithm;
  j["sw"] = geoad::social_welfare(inst, res.plan);
  j["optimal"] = res.optimal;
  j["plan"] = geoad::plan_to_json(res.plan);
  j["vtr"] = vtr_json(inst, res.plan);
  write_output(args.out_path, j);
  if (!res.optimal && !args.force) {
    std::cerr << "solver stopped at its budget; returned the incumbent\n";
    return kExitBudget;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "geoad: fatigue-aware ad allocation on user path trees.\n"
      "Instances are JSON files (see `geoad gen`); plans map tree node ids\n"
      "to advertiser indices."};
  app.require_subcommand(1);

  // ---- gen ----------------------------------------------------------
  geoad::GenConfig gen_cfg;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--seed", gen_cfg.seed, "Generator seed");
  gen->add_option("--ads", gen_cfg.num_ads, "Number of advertisers")
      ->check(CLI::PositiveNumber);
  gen->add_option("--lambda", gen_cfg.lambda, "Constant continuation probability")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--paths", gen_cfg.num_paths, "Number of user paths")
      ->check(CLI::PositiveNumber);
  gen->add_option("--nodes", gen_cfg.path_length,
                  "Walk length when --paths is 1")
      ->check(CLI::PositiveNumber);
  gen->add_option("--min-len", gen_cfg.min_path_length,
                  "Minimum walk length when --paths > 1")
      ->check(CLI::PositiveNumber);
  gen->add_option("--max-len", gen_cfg.max_path_length,
                  "Maximum walk length when --paths > 1")
      ->check(CLI::PositiveNumber);
  gen->add_option("--width", gen_cfg.width, "Grid width")
      ->check(CLI::PositiveNumber);
  gen->add_option("--height", gen_cfg.height, "Grid height")
      ->check(CLI::PositiveNumber);
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  // ---- dump-tree ----------------------------------------------------
  std::string dump_instance;
  CLI::App* dump =
      app.add_subcommand("dump-tree", "Print the path tree of an instance");
  dump->add_option("--instance", dump_instance, "Instance JSON file")
      ->required();

  // ---- solve --------------------------------------------------------
  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "Allocate ads on an instance");
  solve->add_option("--instance", solve_args.instance_path,
                    "Instance JSON file")
      ->required();
  solve->add_option("--algorithm", solve_args.algorithm,
                    "One of fe|dp|dpgen|fa|fa2|fem|fmp|fam|fam-star|brute");
  solve->add_option("--mbar", solve_args.mbar, "Ad cap for fa / fam")
      ->check(CLI::PositiveNumber);
  solve->add_option("--budget", solve_args.budget,
                    "Node-expansion budget for fem");
  solve->add_option("--timeout-s", solve_args.timeout_s,
                    "Wall-clock limit per solve (0 = none)");
  solve->add_flag("--force", solve_args.force,
                  "Accept oversized instances and budget-limited results");
  solve->add_option("--out", solve_args.out_path, "Output file (default stdout)");

  // ---- mechanism ----------------------------------------------------
  std::string mech_instance, mech_reports, mech_out;
  std::string mech_algorithm = "fe";
  int mech_mbar = 2;
  std::uint64_t mech_budget = 5'000'000;
  bool mech_fast = false;
  CLI::App* mech = app.add_subcommand(
      "mechanism", "Run the pivot-payment mechanism on an instance");
  mech->add_option("--instance", mech_instance, "Instance JSON file")
      ->required();
  mech->add_option("--algorithm", mech_algorithm,
                   "Welfare-maximising allocator (fe, fem, brute, ...)");
  mech->add_option("--mbar", mech_mbar, "Ad cap for fa")
      ->check(CLI::PositiveNumber);
  mech->add_option("--budget", mech_budget, "Node-expansion budget for fem");
  mech->add_option("--reports", mech_reports,
                   "JSON array of reported rewards (default: instance rewards)");
  mech->add_flag("--fast", mech_fast,
                 "Skip counterfactual solves for unallocated advertisers");
  mech->add_option("--out", mech_out, "Output file (default stdout)");

  // ---- verify -------------------------------------------------------
  std::string verify_property = "dsic";
  std::string verify_algorithm = "fe";
  int verify_seeds = 100;
  int verify_grid = 25;
  int verify_mbar = 2;
  bool verify_multi = false;
  CLI::App* verify =
      app.add_subcommand("verify", "Check mechanism/solver properties "
                                   "on seeded random instances");
  verify->add_option("--property", verify_property,
                     "One of dsic|ir|wbb|ae");
  verify->add_option("--algorithm", verify_algorithm,
                     "Allocator under test (dsic/ir/wbb)");
  verify->add_option("--seeds", verify_seeds, "Number of seeded instances")
      ->check(CLI::PositiveNumber);
  verify->add_option("--grid", verify_grid,
                     "Misreport grid points per advertiser (dsic)")
      ->check(CLI::PositiveNumber);
  verify->add_option("--mbar", verify_mbar, "Ad cap when testing fa")
      ->check(CLI::PositiveNumber);
  verify->add_flag("--multi-path", verify_multi,
                   "Probe with small trees instead of chains");

  // ---- bench-single -------------------------------------------------
  geoad::SingleSweepConfig single_cfg;
  std::string single_out = "bench_single.csv";
  bool single_gnuplot = false;
  CLI::App* bench_single =
      app.add_subcommand("bench-single", "Chain sweep: fe vs fa vs fa2");
  bench_single->add_option("--lambdas", single_cfg.lambdas,
                           "Continuation probabilities to sweep");
  bench_single->add_option("--sizes", single_cfg.sizes, "Chain lengths");
  bench_single->add_option("--seeds", single_cfg.seeds, "Seeds per cell")
      ->check(CLI::PositiveNumber);
  bench_single->add_option("--mbars", single_cfg.mbars, "Ad caps for fa");
  bench_single->add_option("--ads", single_cfg.num_ads, "Advertisers")
      ->check(CLI::PositiveNumber);
  bench_single->add_option("--timeout-s", single_cfg.timeout_s,
                           "Per-solve wall-clock limit (0 = none)");
  bench_single->add_option("--jobs", single_cfg.jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
  bench_single->add_option("--out", single_out, "Rows CSV path");
  bench_single->add_flag("--gnuplot", single_gnuplot,
                         "Also write a gnuplot script");

  // ---- bench-multi --------------------------------------------------
  geoad::MultiSweepConfig multi_cfg;
  std::string multi_out = "bench_multi.csv";
  bool multi_gnuplot = false;
  CLI::App* bench_multi = app.add_subcommand(
      "bench-multi", "Tree sweep: fem vs fam vs fam-star");
  bench_multi->add_option("--lambda", multi_cfg.lambda,
                          "Continuation probability");
  bench_multi->add_option("--paths", multi_cfg.path_counts,
                          "Path counts to sweep");
  bench_multi->add_option("--seeds", multi_cfg.seeds, "Seeds per cell")
      ->check(CLI::PositiveNumber);
  bench_multi->add_option("--mbars", multi_cfg.mbars, "Ad caps for fam");
  bench_multi->add_option("--ads", multi_cfg.num_ads, "Advertisers")
      ->check(CLI::PositiveNumber);
  bench_multi->add_option("--budget", multi_cfg.budget,
                          "Node-expansion budget for fem");
  bench_multi->add_option("--timeout-s", multi_cfg.timeout_s,
                          "Per-solve wall-clock limit (0 = none)");
  bench_multi->add_option("--jobs", multi_cfg.jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
  bench_multi->add_option("--out", multi_out, "Rows CSV path");
  bench_multi->add_flag("--gnuplot", multi_gnuplot,
                        "Also write a gnuplot script");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const geoad::GeneratedInstance g = geoad::generate_instance(gen_cfg);
      write_output(gen_out, geoad::instance_to_json(g.instance));
      if (!gen_out.empty() && gen_out != "-") {
        std::cerr << "wrote " << gen_out << " (" << g.instance.num_nodes()
                  << " nodes, " << g.instance.num_ads() << " ads)\n";
      }
      return kExitOk;
    }

    if (dump->parsed()) {
      const geoad::Instance inst = geoad::load_instance(dump_instance);
      std::printf("%4s %6s %5s %10s %6s  children\n", "id", "vertex", "depth",
                  "alpha", "parent");
      for (const geoad::TreeNode& n : inst.tree.nodes) {
        std::printf("%4d %6d %5d %10.6f %6d  ", n.id, n.vertex, n.depth,
                    n.alpha, n.parent);
        for (std::size_t i = 0; i < n.children.size(); ++i) {
          std::printf(i == 0 ? "%d" : " %d", n.children[i]);
        }
        std::printf("\n");
      }
      std::printf("%d paths, %d nodes, depth %d\n",
                  static_cast<int>(inst.tree.paths.size()),
                  inst.num_nodes(), inst.tree.max_depth());
      return kExitOk;
    }

    if (solve->parsed()) return cmd_solve(solve_args);

    if (mech->parsed()) {
      const geoad::Instance inst = geoad::load_instance(mech_instance);
      std::vector<double> reports;
      if (mech_reports.empty()) {
        for (const geoad::Advertiser& ad : inst.advertisers) {
          reports.push_back(ad.reward);
        }
      } else {
        std::ifstream in(mech_reports);
        if (!in) throw std::runtime_error("cannot read " + mech_reports);
        reports = json::parse(in).get<std::vector<double>>();
      }
      geoad::AllocatorOptions opts;
      opts.max_ads = mech_mbar;
      opts.tree.max_expansions = mech_budget;
      const geoad::MechanismOutcome outcome = geoad::run_mechanism(
          inst, reports, geoad::allocator_from_string(mech_algorithm), opts,
          mech_fast);
      json j;
      j["algorithm"] = mech_algorithm;
      j["sw"] = outcome.sw;
      j["plan"] = geoad::plan_to_json(outcome.plan);
      j["vtrs"] = outcome.vtrs;
      j["transfers"] = outcome.transfers;
      json utilities = json::array();
      for (int a = 0; a < inst.num_ads(); ++a) {
        utilities.push_back(
            geoad::utility(outcome, a, inst.advertisers[a].reward));
      }
      j["utilities"] = utilities;
      write_output(mech_out, j);
      return kExitOk;
    }

    if (verify->parsed()) {
      geoad::AllocatorOptions opts;
      opts.max_ads = verify_mbar;
      geoad::ProbeShape shape;
      shape.multi_path = verify_multi;
      if (verify_multi) shape.max_nodes = 6;
      const geoad::AllocatorId id =
          geoad::allocator_from_string(verify_algorithm);
      geoad::VerifyReport report;
      if (verify_property == "dsic") {
        report = geoad::verify_dsic(id, opts, verify_seeds, verify_grid, shape);
      } else if (verify_property == "ir") {
        report = geoad::verify_ir(id, opts, verify_seeds, shape);
      } else if (verify_property == "wbb") {
        report = geoad::verify_wbb(id, opts, verify_seeds, shape);
      } else if (verify_property == "ae") {
        report = geoad::verify_ae(verify_seeds, shape);
      } else {
        throw std::invalid_argument("unknown property: " + verify_property);
      }
      std::cout << report.property << ": " << report.cases << " cases, "
                << report.violations << " violations\n";
      for (const std::string& note : report.notes) {
        std::cout << "  " << note << '\n';
      }
      return report.ok() ? kExitOk : kExitPropertyFailure;
    }

    if (bench_single->parsed()) {
      const std::vector<geoad::BenchRow> rows =
          geoad::bench_single_path(single_cfg);
      geoad::write_rows_csv(single_out, rows);
      const auto agg = geoad::aggregate(rows);
      const std::string agg_path = geoad::agg_path_for(single_out);
      geoad::write_agg_csv(agg_path, agg);
      std::cerr << "wrote " << single_out << " and " << agg_path << '\n';
      if (single_gnuplot) {
        geoad::write_gnuplot_script(single_out + ".gp", agg_path, agg);
        std::cerr << "wrote " << single_out << ".gp\n";
      }
      return kExitOk;
    }

    if (bench_multi->parsed()) {
      const std::vector<geoad::BenchRow> rows =
          geoad::bench_multi_path(multi_cfg);
      geoad::write_rows_csv(multi_out, rows);
      const auto agg = geoad::aggregate(rows);
      const std::string agg_path = geoad::agg_path_for(multi_out);
      geoad::write_agg_csv(agg_path, agg);
      std::cerr << "wrote " << multi_out << " and " << agg_path << '\n';
      if (multi_gnuplot) {
        geoad::write_gnuplot_script(multi_out + ".gp", agg_path, agg);
        std::cerr << "wrote " << multi_out << ".gp\n";
      }
      return kExitOk;
    }
  } catch (const geoad::BudgetRefusal& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
