#include "geoad/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geoad/instances.hpp"
#include "geoad/mechanism.hpp"
#include "geoad/path_tree.hpp"

namespace geoad {
namespace {

void note_violation(VerifyReport& report, const std::string& line) {
  ++report.violations;
  if (report.notes.size() < 20) report.notes.push_back(line);
}

std::vector<double> rewards_of(const Instance& inst) {
  std::vector<double> out;
  out.reserve(inst.advertisers.size());
  for (const Advertiser& ad : inst.advertisers) out.push_back(ad.reward);
  return out;
}

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

Instance probe_instance(std::uint64_t seed, const ProbeShape& shape) {
  SplitMix64 rng = make_stream(seed, 0x70726f6265ULL);  // probe stream

  Instance inst;
  const int num_ads = 1 + rng.next_below(shape.max_ads);
  static constexpr double kLambdaMenu[] = {0.2, 0.5, 0.8, 1.0};
  const double lambda = kLambdaMenu[rng.next_below(4)];

  std::vector<Path> paths;
  if (!shape.multi_path) {
    Path p;
    p.gamma = 1.0;
    const int len = 1 + rng.next_below(shape.max_nodes);
    for (int v = 0; v < len; ++v) p.vertices.push_back(v);
    paths.push_back(std::move(p));
  } else {
    // Length budget guarantees the merged tree fits in max_nodes even if
    // the paths only share their root.
    const int num_paths = shape.max_nodes >= 5 ? 2 + rng.next_below(2) : 2;
    int budget = shape.max_nodes - 1;
    for (int i = 0; i < num_paths; ++i) {
      Path p;
      p.gamma = rng.next_unit();
      p.vertices.push_back(0);
      const int extra = rng.next_below(std::min(budget, 3) + 1);
      for (int v = 0; v < extra; ++v) {
        p.vertices.push_back(1 + rng.next_below(4));
      }
      budget -= extra;
      paths.push_back(std::move(p));
    }
    paths = normalize_gammas(paths, num_paths);
  }
  inst.tree = build_tree(paths);

  for (int a = 0; a < num_ads; ++a) {
    Advertiser ad;
    ad.reward = rng.next_below(10) == 0 ? 0.0 : 100.0 * rng.next_unit();
    for (const TreeNode& node : inst.tree.nodes) {
      if (rng.next_below(4) == 0) continue;  // sparse zeros
      ad.qualities[node.id] = rng.next_unit();
    }
    inst.advertisers.push_back(std::move(ad));
  }
  inst.fatigue.lambdas.assign(std::max(1, inst.tree.max_depth() - 1), lambda);
  check_instance(inst);
  return inst;
}

VerifyReport verify_dsic(AllocatorId allocator, const AllocatorOptions& opts,
                         int seeds, int grid_points, const ProbeShape& shape) {
  VerifyReport report;
  report.property = "dsic";
  for (int s = 0; s < seeds; ++s) {
    const Instance inst = probe_instance(static_cast<std::uint64_t>(s), shape);
    const std::vector<double> truth = rewards_of(inst);
    const MechanismOutcome honest =
        run_mechanism(inst, truth, allocator, opts);
    for (int a = 0; a < inst.num_ads(); ++a) {
      const double u_honest = utility(honest, a, truth[a]);
      for (int g = 0; g < grid_points; ++g) {
        const double lie =
            grid_points > 1
                ? truth[a] * 2.0 * static_cast<double>(g) /
                      static_cast<double>(grid_points - 1)
                : 0.0;
        std::vector<double> reports = truth;
        reports[a] = lie;
        const MechanismOutcome dev =
            run_mechanism(inst, reports, allocator, opts);
        const double u_dev = utility(dev, a, truth[a]);
        ++report.cases;
        if (u_dev > u_honest + kVerifyTolerance) {
          std::ostringstream os;
          os << "seed " << s << " ad " << a << " report " << lie
             << " utility " << u_dev << " > truthful " << u_honest;
          note_violation(report, os.str());
        }
      }
    }
  }
  return report;
}

VerifyReport verify_ir(AllocatorId allocator, const AllocatorOptions& opts,
                       int seeds, const ProbeShape& shape) {
  VerifyReport report;
  report.property = "ir";
  for (int s = 0; s < seeds; ++s) {
    const Instance inst = probe_instance(static_cast<std::uint64_t>(s), shape);
    const std::vector<double> truth = rewards_of(inst);
    const MechanismOutcome honest =
        run_mechanism(inst, truth, allocator, opts);
    for (int a = 0; a < inst.num_ads(); ++a) {
      ++report.cases;
      const double u = utility(honest, a, truth[a]);
      if (u < -kVerifyTolerance) {
        std::ostringstream os;
        os << "seed " << s << " ad " << a << " truthful utility " << u;
        note_violation(report, os.str());
      }
    }
  }
  return report;
}

VerifyReport verify_wbb(AllocatorId allocator, const AllocatorOptions& opts,
                        int seeds, const ProbeShape& shape) {
  VerifyReport report;
  report.property = "wbb";
  for (int s = 0; s < seeds; ++s) {
    const Instance inst = probe_instance(static_cast<std::uint64_t>(s), shape);
    const MechanismOutcome honest =
        run_mechanism(inst, rewards_of(inst), allocator, opts);
    for (int a = 0; a < inst.num_ads(); ++a) {
      ++report.cases;
      if (honest.transfers[a] < -kVerifyTolerance) {
        std::ostringstream os;
        os << "seed " << s << " ad " << a << " transfer "
           << honest.transfers[a];
        note_violation(report, os.str());
      }
    }
  }
  return report;
}

VerifyReport verify_ae(int seeds, const ProbeShape& shape) {
  VerifyReport report;
  report.property = "ae";
  AllocatorOptions opts;
  for (int s = 0; s < seeds; ++s) {
    const Instance inst = probe_instance(static_cast<std::uint64_t>(s), shape);
    const OracleResult oracle = brute_force_optimal(inst, opts.guard);

    const std::vector<AllocatorId> exact_ids =
        inst.tree.is_chain()
            ? std::vector<AllocatorId>{AllocatorId::chain_exact,
                                       AllocatorId::chain_dp_general,
                                       AllocatorId::tree_exact}
            : std::vector<AllocatorId>{AllocatorId::tree_exact};
    for (AllocatorId id : exact_ids) {
      const AllocateResult res = allocate(inst, id, opts);
      ++report.cases;
      const double sw = social_welfare(inst, res.plan);
      if (!res.optimal || !close(sw, oracle.sw, kVerifyTolerance)) {
        std::ostringstream os;
        os << "seed " << s << ' ' << to_string(id) << " welfare " << sw
           << " vs reference " << oracle.sw;
        note_violation(report, os.str());
      }
    }
  }
  return report;
}

}  // namespace geoad
