#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "geoad/core.hpp"

namespace geoad {

struct BenchRow {
  std::uint64_t seed = 0;
  std::string algorithm;
  int size = 0;           // chain length for single-path, path count for multi
  double lambda = 0.0;
  int mbar = -1;          // ad cap, -1 when the algorithm has none
  double runtime_ms = 0.0;
  double sw = 0.0;
  double approx_ratio = 0.0;  // vs the exact optimum on the same instance
  bool has_ratio = false;     // false when the exact run exhausted its budget
  bool timed_out = false;
};

struct SingleSweepConfig {
  std::vector<double> lambdas{0.5};
  std::vector<int> sizes{10, 20};
  int seeds = 50;
  std::vector<int> mbars{1, 2, 3};
  int num_ads = 30;
  double timeout_s = 0.0;  // per exact solve; 0 disables
  int jobs = 1;
};

struct MultiSweepConfig {
  double lambda = 0.5;
  std::vector<int> path_counts{5, 10};
  int seeds = 50;
  std::vector<int> mbars{1, 2, 3};
  int num_ads = 30;
  std::uint64_t budget = 1'000'000;  // node expansions for the exact solver
  double timeout_s = 0.0;
  int jobs = 1;
};

// Chain sweep: the exact solver plus the capped solver at each cap and the
// fatigue-blind heuristic, on the same generated instances.
std::vector<BenchRow> bench_single_path(const SingleSweepConfig& cfg);

// Tree sweep: the exact solver (within budget) plus the best-single-path
// solvers, on the same generated instances.
std::vector<BenchRow> bench_multi_path(const MultiSweepConfig& cfg);

struct BenchKey {
  std::string algorithm;
  int size = 0;
  double lambda = 0.0;
  int mbar = -1;

  bool operator<(const BenchKey& o) const;
};

struct BenchAgg {
  int rows = 0;
  int completed = 0;          // rows that finished within budget
  double mean_runtime_ms = 0.0;
  double median_runtime_ms = 0.0;
  double aar = 0.0;           // average approximation ratio over rated rows
  int rated = 0;              // rows contributing to the AAR
};

std::map<BenchKey, BenchAgg> aggregate(const std::vector<BenchRow>& rows);

// Rows CSV: "# geoad-bench v1" comment, then a header line, then one line
// per row.  Blank approx_ratio / mbar mean "not applicable".
void write_rows_csv(std::ostream& out, const std::vector<BenchRow>& rows);
void write_rows_csv(const std::string& path, const std::vector<BenchRow>& rows);

// Aggregate CSV next to the rows file, same comment-plus-header shape.
void write_agg_csv(std::ostream& out, const std::map<BenchKey, BenchAgg>& agg);
void write_agg_csv(const std::string& path,
                   const std::map<BenchKey, BenchAgg>& agg);

// Gnuplot script plotting median runtime and AAR against size from the
// aggregate CSV.
void write_gnuplot_script(const std::string& path, const std::string& agg_csv,
                          const std::map<BenchKey, BenchAgg>& agg);

// "<stem>_agg.csv" for "<stem>.csv" (and any other extension).
std::string agg_path_for(const std::string& rows_path);

}  // namespace geoad
