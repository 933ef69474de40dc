#include "geoad/allocators.hpp"

#include <stdexcept>

namespace geoad {

AllocatorId allocator_from_string(const std::string& name) {
  if (name == "fe") return AllocatorId::chain_exact;
  if (name == "dp") return AllocatorId::chain_dp;
  if (name == "dpgen") return AllocatorId::chain_dp_general;
  if (name == "fa") return AllocatorId::chain_capped;
  if (name == "fa2") return AllocatorId::chain_no_fatigue;
  if (name == "fem") return AllocatorId::tree_exact;
  if (name == "fmp") return AllocatorId::tree_dp;
  if (name == "fam") return AllocatorId::tree_best_path;
  if (name == "fam-star") return AllocatorId::tree_best_path_exact;
  if (name == "brute") return AllocatorId::brute_force;
  throw std::invalid_argument("unknown algorithm id: " + name);
}

std::string to_string(AllocatorId id) {
  switch (id) {
    case AllocatorId::chain_exact: return "fe";
    case AllocatorId::chain_dp: return "dp";
    case AllocatorId::chain_dp_general: return "dpgen";
    case AllocatorId::chain_capped: return "fa";
    case AllocatorId::chain_no_fatigue: return "fa2";
    case AllocatorId::tree_exact: return "fem";
    case AllocatorId::tree_dp: return "fmp";
    case AllocatorId::tree_best_path: return "fam";
    case AllocatorId::tree_best_path_exact: return "fam-star";
    case AllocatorId::brute_force: return "brute";
  }
  throw std::logic_error("unhandled allocator id");
}

AllocateResult allocate(const Instance& inst, AllocatorId id,
                        const AllocatorOptions& opts) {
  AllocateResult out;
  switch (id) {
    case AllocatorId::chain_exact: {
      ChainSolveResult res = solve_chain_exact(inst, opts.chain);
      out.plan = std::move(res.plan);
      out.optimal = res.optimal;
      return out;
    }
    case AllocatorId::chain_dp: {
      out.plan = solve_chain_dp(inst).plan;
      return out;
    }
    case AllocatorId::chain_dp_general: {
      out.plan = solve_chain_dp_general(inst);
      return out;
    }
    case AllocatorId::chain_capped: {
      ChainSolveResult res = solve_chain_capped(inst, opts.max_ads, opts.chain);
      out.plan = std::move(res.plan);
      out.optimal = res.optimal;
      return out;
    }
    case AllocatorId::chain_no_fatigue: {
      out.plan = solve_chain_no_fatigue(inst);
      return out;
    }
    case AllocatorId::tree_exact: {
      TreeSolveResult res = solve_tree_exact(inst, opts.tree);
      out.plan = std::move(res.plan);
      out.optimal = res.optimal;
      return out;
    }
    case AllocatorId::tree_dp: {
      out.plan = solve_tree_dp(inst);
      return out;
    }
    case AllocatorId::tree_best_path: {
      out.plan = solve_tree_best_path(inst, opts.max_ads).plan;
      return out;
    }
    case AllocatorId::tree_best_path_exact: {
      out.plan = solve_tree_best_path_exact(inst).plan;
      return out;
    }
    case AllocatorId::brute_force: {
      out.plan = brute_force_optimal(inst, opts.guard).plan;
      return out;
    }
  }
  throw std::logic_error("unhandled allocator id");
}

}  // namespace geoad
