#include "geoad/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "geoad/instances.hpp"
#include "geoad/multi_path.hpp"
#include "geoad/single_path.hpp"

namespace geoad {
namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

// Ratio of a heuristic's welfare to the exact optimum, clamped for the
// all-zero edge case.
double ratio_against(double sw, double sw_exact) {
  if (sw_exact <= 0.0) return 1.0;
  return sw / sw_exact;
}

// Runs tasks [0, count) on `jobs` threads, each task writing only its own
// output slots, so row order is independent of scheduling.
void parallel_for(int count, int jobs,
                  const std::function<void(int)>& task) {
  if (jobs <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  const int n_workers = std::min(jobs, count);
  workers.reserve(n_workers);
  for (int w = 0; w < n_workers; ++w) {
    workers.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        task(i);
      }
    });
  }
  for (std::thread& t : workers) t.join();
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void write_row(std::ostream& out, const BenchRow& r) {
  out << r.seed << ',' << r.algorithm << ',' << r.size << ','
      << format_double(r.lambda) << ',';
  if (r.mbar >= 0) out << r.mbar;
  out << ',' << format_double(r.runtime_ms) << ',' << format_double(r.sw)
      << ',';
  if (r.has_ratio) out << format_double(r.approx_ratio);
  out << ',' << (r.timed_out ? 1 : 0) << '\n';
}

}  // namespace

std::vector<BenchRow> bench_single_path(const SingleSweepConfig& cfg) {
  struct Task {
    double lambda;
    int size;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (double lambda : cfg.lambdas) {
    for (int size : cfg.sizes) {
      for (int s = 0; s < cfg.seeds; ++s) {
        tasks.push_back({lambda, size, static_cast<std::uint64_t>(s)});
      }
    }
  }
  // fe + one fa row per cap + fa2, per instance.
  const int rows_per_task = 2 + static_cast<int>(cfg.mbars.size());
  std::vector<BenchRow> rows(tasks.size() * rows_per_task);

  parallel_for(static_cast<int>(tasks.size()), cfg.jobs, [&](int t) {
    const Task& task = tasks[static_cast<size_t>(t)];
    GenConfig gen;
    gen.seed = task.seed;
    gen.num_ads = cfg.num_ads;
    gen.lambda = task.lambda;
    gen.num_paths = 1;
    gen.path_length = task.size;
    const Instance inst = generate_instance(gen).instance;

    BenchRow base;
    base.seed = task.seed;
    base.size = task.size;
    base.lambda = task.lambda;
    BenchRow* slot = &rows[static_cast<size_t>(t) * rows_per_task];

    ChainSolveOptions copts;
    copts.timeout_s = cfg.timeout_s;
    auto start = std::chrono::steady_clock::now();
    const ChainSolveResult exact = solve_chain_exact(inst, copts);
    BenchRow fe = base;
    fe.algorithm = "fe";
    fe.runtime_ms = elapsed_ms(start);
    fe.sw = social_welfare(inst, exact.plan);
    fe.timed_out = !exact.optimal;
    if (exact.optimal) {
      fe.approx_ratio = 1.0;
      fe.has_ratio = true;
    }
    *slot++ = fe;

    for (int mbar : cfg.mbars) {
      start = std::chrono::steady_clock::now();
      const ChainSolveResult capped = solve_chain_capped(inst, mbar, copts);
      BenchRow fa = base;
      fa.algorithm = "fa";
      fa.mbar = mbar;
      fa.runtime_ms = elapsed_ms(start);
      fa.sw = social_welfare(inst, capped.plan);
      fa.timed_out = !capped.optimal;
      if (exact.optimal && capped.optimal) {
        fa.approx_ratio = ratio_against(fa.sw, fe.sw);
        fa.has_ratio = true;
      }
      *slot++ = fa;
    }

    start = std::chrono::steady_clock::now();
    const Plan blind = solve_chain_no_fatigue(inst);
    BenchRow fa2 = base;
    fa2.algorithm = "fa2";
    fa2.runtime_ms = elapsed_ms(start);
    fa2.sw = social_welfare(inst, blind);
    if (exact.optimal) {
      fa2.approx_ratio = ratio_against(fa2.sw, fe.sw);
      fa2.has_ratio = true;
    }
    *slot++ = fa2;
  });
  return rows;
}

std::vector<BenchRow> bench_multi_path(const MultiSweepConfig& cfg) {
  struct Task {
    int path_count;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (int pc : cfg.path_counts) {
    for (int s = 0; s < cfg.seeds; ++s) {
      tasks.push_back({pc, static_cast<std::uint64_t>(s)});
    }
  }
  // fem + one fam row per cap + fam-star, per instance.
  const int rows_per_task = 2 + static_cast<int>(cfg.mbars.size());
  std::vector<BenchRow> rows(tasks.size() * rows_per_task);

  parallel_for(static_cast<int>(tasks.size()), cfg.jobs, [&](int t) {
    const Task& task = tasks[static_cast<size_t>(t)];
    GenConfig gen;
    gen.seed = task.seed;
    gen.num_ads = cfg.num_ads;
    gen.lambda = cfg.lambda;
    gen.num_paths = task.path_count;
    gen.min_path_length = 1;
    gen.max_path_length = 20;
    const Instance inst = generate_instance(gen).instance;

    BenchRow base;
    base.seed = task.seed;
    base.size = task.path_count;
    base.lambda = cfg.lambda;
    BenchRow* slot = &rows[static_cast<size_t>(t) * rows_per_task];

    TreeSolveOptions topts;
    topts.max_expansions = cfg.budget;
    topts.timeout_s = cfg.timeout_s;
    topts.force = true;
    auto start = std::chrono::steady_clock::now();
    const TreeSolveResult exact = solve_tree_exact(inst, topts);
    BenchRow fem = base;
    fem.algorithm = "fem";
    fem.runtime_ms = elapsed_ms(start);
    fem.sw = social_welfare(inst, exact.plan);
    fem.timed_out = !exact.optimal;
    if (exact.optimal) {
      fem.approx_ratio = 1.0;
      fem.has_ratio = true;
    }
    *slot++ = fem;

    for (int mbar : cfg.mbars) {
      start = std::chrono::steady_clock::now();
      const BestPathResult capped = solve_tree_best_path(inst, mbar);
      BenchRow fam = base;
      fam.algorithm = "fam";
      fam.mbar = mbar;
      fam.runtime_ms = elapsed_ms(start);
      fam.sw = social_welfare(inst, capped.plan);
      if (exact.optimal) {
        fam.approx_ratio = ratio_against(fam.sw, fem.sw);
        fam.has_ratio = true;
      }
      *slot++ = fam;
    }

    start = std::chrono::steady_clock::now();
    const BestPathResult star = solve_tree_best_path_exact(inst);
    BenchRow fam_star = base;
    fam_star.algorithm = "fam-star";
    fam_star.runtime_ms = elapsed_ms(start);
    fam_star.sw = social_welfare(inst, star.plan);
    if (exact.optimal) {
      fam_star.approx_ratio = ratio_against(fam_star.sw, fem.sw);
      fam_star.has_ratio = true;
    }
    *slot++ = fam_star;
  });
  return rows;
}

bool BenchKey::operator<(const BenchKey& o) const {
  return std::tie(algorithm, size, lambda, mbar) <
         std::tie(o.algorithm, o.size, o.lambda, o.mbar);
}

std::map<BenchKey, BenchAgg> aggregate(const std::vector<BenchRow>& rows) {
  struct Acc {
    std::vector<double> runtimes;
    double ratio_sum = 0.0;
    int rated = 0;
    int completed = 0;
  };
  std::map<BenchKey, Acc> accs;
  for (const BenchRow& r : rows) {
    Acc& acc = accs[{r.algorithm, r.size, r.lambda, r.mbar}];
    acc.runtimes.push_back(r.runtime_ms);
    if (!r.timed_out) {
      ++acc.completed;
      if (r.has_ratio) {
        acc.ratio_sum += r.approx_ratio;
        ++acc.rated;
      }
    }
  }
  std::map<BenchKey, BenchAgg> out;
  for (auto& [key, acc] : accs) {
    BenchAgg agg;
    agg.rows = static_cast<int>(acc.runtimes.size());
    agg.completed = acc.completed;
    double sum = 0.0;
    for (double v : acc.runtimes) sum += v;
    agg.mean_runtime_ms = sum / static_cast<double>(agg.rows);
    std::sort(acc.runtimes.begin(), acc.runtimes.end());
    const std::size_t n = acc.runtimes.size();
    agg.median_runtime_ms = n % 2 == 1
                                ? acc.runtimes[n / 2]
                                : 0.5 * (acc.runtimes[n / 2 - 1] +
                                         acc.runtimes[n / 2]);
    agg.rated = acc.rated;
    agg.aar = acc.rated > 0 ? acc.ratio_sum / acc.rated : 0.0;
    out.emplace(key, agg);
  }
  return out;
}

void write_rows_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "# geoad-bench v1\n";
  out << "seed,algorithm,size,lambda,mbar,runtime_ms,sw,approx_ratio,"
         "timed_out\n";
  for (const BenchRow& r : rows) write_row(out, r);
}

void write_rows_csv(const std::string& path,
                    const std::vector<BenchRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_rows_csv(out, rows);
}

void write_agg_csv(std::ostream& out, const std::map<BenchKey, BenchAgg>& agg) {
  out << "# geoad-bench v1\n";
  out << "algorithm,size,lambda,mbar,rows,completed,mean_runtime_ms,"
         "median_runtime_ms,aar\n";
  for (const auto& [key, a] : agg) {
    out << key.algorithm << ',' << key.size << ',' << format_double(key.lambda)
        << ',';
    if (key.mbar >= 0) out << key.mbar;
    out << ',' << a.rows << ',' << a.completed << ','
        << format_double(a.mean_runtime_ms) << ','
        << format_double(a.median_runtime_ms) << ',';
    if (a.rated > 0) out << format_double(a.aar);
    out << '\n';
  }
}

void write_agg_csv(const std::string& path,
                   const std::map<BenchKey, BenchAgg>& agg) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_agg_csv(out, agg);
}

void write_gnuplot_script(const std::string& path, const std::string& agg_csv,
                          const std::map<BenchKey, BenchAgg>& agg) {
  // One curve per algorithm/cap combination present in the data.
  struct Curve {
    std::string algorithm;
    int mbar;
    std::string label;
  };
  std::vector<Curve> curves;
  for (const auto& [key, a] : agg) {
    (void)a;
    const std::string label =
        key.mbar >= 0 ? key.algorithm + " m=" + std::to_string(key.mbar)
                      : key.algorithm;
    bool seen = false;
    for (const Curve& c : curves) {
      if (c.algorithm == key.algorithm && c.mbar == key.mbar) seen = true;
    }
    if (!seen) curves.push_back({key.algorithm, key.mbar, label});
  }

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "set datafile separator comma\n";
  out << "set style data linespoints\n";
  out << "set term pngcairo size 1000,700\n";
  out << "set xlabel 'size'\n\n";
  const auto emit_plot = [&](const std::string& png, const std::string& ylabel,
                             int column, bool logscale) {
    out << "set output '" << png << "'\n";
    out << "set ylabel '" << ylabel << "'\n";
    out << (logscale ? "set logscale y\n" : "unset logscale y\n");
    out << "plot ";
    bool first = true;
    for (const Curve& c : curves) {
      if (!first) out << ", \\\n     ";
      first = false;
      out << "'" << agg_csv << "' using (strcol(1) eq '" << c.algorithm
          << "'";
      if (c.mbar >= 0) {
        out << " && $4 == " << c.mbar;
      } else {
        out << " && strcol(4) eq ''";
      }
      out << " ? $2 : NaN):" << column << " title '" << c.label << "'";
    }
    out << "\n\n";
  };
  emit_plot("bench_runtime.png", "median runtime (ms)", 8, true);
  emit_plot("bench_aar.png", "average approximation ratio", 9, false);
}

std::string agg_path_for(const std::string& rows_path) {
  const std::size_t dot = rows_path.find_last_of('.');
  const std::size_t slash = rows_path.find_last_of("/\\");
  if (dot == std::string::npos ||
      (slash != std::string::npos && dot < slash)) {
    return rows_path + "_agg.csv";
  }
  return rows_path.substr(0, dot) + "_agg" + rows_path.substr(dot);
}

}  // namespace geoad
