#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geoad/allocators.hpp"
#include "geoad/core.hpp"

namespace geoad {

struct VerifyReport {
  std::string property;
  int cases = 0;
  int violations = 0;
  std::vector<std::string> notes;  // one line per violation, truncated

  bool ok() const { return violations == 0; }
};

struct ProbeShape {
  int max_nodes = 4;
  int max_ads = 4;
  bool multi_path = false;  // chains when false, small trees when true
};

// Deterministic family of small random instances used by the property
// suites: varied rewards, sparse qualities, varied fatigue levels.
Instance probe_instance(std::uint64_t seed, const ProbeShape& shape);

// Numeric slack: a report counts as a violation only when it beats the
// truthful bound by more than this.
inline constexpr double kVerifyTolerance = 1e-9;

// No advertiser can gain by misreporting its reward: for each seeded
// instance, each advertiser, and a grid of misreports spanning [0, 2r],
// utility under the misreport must not exceed truthful utility.
VerifyReport verify_dsic(AllocatorId allocator, const AllocatorOptions& opts,
                         int seeds, int grid_points = 25,
                         const ProbeShape& shape = {});

// Truthful reporting never yields negative utility.
VerifyReport verify_ir(AllocatorId allocator, const AllocatorOptions& opts,
                       int seeds, const ProbeShape& shape = {});

// The mechanism never pays advertisers on net: every transfer is >= 0.
VerifyReport verify_wbb(AllocatorId allocator, const AllocatorOptions& opts,
                        int seeds, const ProbeShape& shape = {});

// Exact solvers match the exhaustive reference on every probe instance.
VerifyReport verify_ae(int seeds, const ProbeShape& shape = {});

}  // namespace geoad
