#include "bisp/bench.hpp"

#include <atomic>
#include <chrono>
#include <ostream>
#include <thread>
#include <vector>

#include "bisp/analysis.hpp"
#include "bisp/graphs.hpp"
#include "bisp/layered_sampler.hpp"
#include "bisp/partitioner.hpp"

namespace bisp {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint32_t ceil_sqrt(std::uint64_t x) {
  const std::uint32_t r = isqrt64(x);
  return std::uint64_t{r} * r == x ? r : r + 1;
}

struct SweepRun {
  std::size_t graph;
  std::size_t layout;
  std::uint32_t n;
  std::uint64_t seed;
  Mode mode;
  std::uint32_t rf_max = 0;
  double imbalance = 0.0;
  double elapsed_seconds = 0.0;
};

// Dynamic scheduling: run granularity is uneven (1e6-edge graphs next to
// the 1000-edge star).
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  const unsigned spawn = std::min<std::size_t>(threads, count);
  workers.reserve(spawn);
  for (unsigned w = 0; w < spawn; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count;
           i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (auto& worker : workers) worker.join();
}

}  // namespace

json run_bench(const BenchOptions& opts, std::ostream* progress) {
  const auto bench_start = Clock::now();
  unsigned threads = opts.threads;
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  json report;
  report["seed"] = opts.seed;
  report["threads"] = threads;

  // Cardinality table: planned cardinality against the bounds
  // ceil(sqrt(n)) <= cardinality <= ceil(sqrt(n0)) + h + 1, plus the
  // schedule bound ceil(sqrt(n0)) + ceil((n - n0) / floor(sqrt(n0))) + 1.
  {
    const auto start = Clock::now();
    json rows = json::array();
    bool all_within = true;
    for (std::uint32_t n = 1; n <= opts.table_max; ++n) {
      const LayoutPlan plan = plan_schedule(n);
      const auto h = static_cast<std::uint32_t>(plan.blocks.size());
      const std::uint32_t lower = ceil_sqrt(n);
      const std::uint32_t upper = ceil_sqrt(plan.n0) + h + 1;
      const std::uint32_t floor_base = std::max(1u, isqrt64(plan.n0));
      const std::uint32_t schedule_bound =
          ceil_sqrt(plan.n0) + (n - plan.n0 + floor_base - 1) / floor_base + 1;
      const bool within = lower <= plan.cardinality &&
                          plan.cardinality <= upper &&
                          plan.cardinality <= schedule_bound;
      all_within = all_within && within;
      rows.push_back(json::array(
          {n, plan.n0, h, plan.cardinality, lower, upper}));
    }
    report["cardinality_table"] = {
        {"max_n", opts.table_max},
        {"columns", json::array({"n", "n0", "h", "cardinality", "lower", "upper"})},
        {"rows", std::move(rows)},
        {"all_within_envelope", all_within},
        {"elapsed_seconds", seconds_since(start)}};
    if (progress) {
      *progress << "cardinality table 1.." << opts.table_max
                << (all_within ? ": within envelope\n" : ": VIOLATION\n");
    }
  }

  // Shared corpus.
  const auto corpus_start = Clock::now();
  struct GraphSpec {
    const char* name;
    std::vector<Edge> edges;
  };
  std::vector<GraphSpec> corpus;
  {
    CompleteSource k200(200);
    corpus.push_back({"k200", collect(k200)});
    ErdosRenyiSource er(10000, 1000000, 42);
    corpus.push_back({"er", collect(er)});
    PowerLawSource pl(10000, 1000000, 2.2, 42);
    corpus.push_back({"powerlaw", collect(pl)});
    corpus.push_back({"star", star_edges(1000)});
  }
  {
    json meta = json::object();
    for (const auto& g : corpus) meta[g.name] = g.edges.size();
    report["corpus"] = {{"edges", std::move(meta)},
                        {"gen_seconds", seconds_since(corpus_start)}};
  }

  // Replication-factor sweep: 4 graphs x 3 n x 20 seeds, modes alternating
  // between hash (even offsets) and rng (odd offsets).
  const std::vector<std::uint32_t> n_values{7, 13, 31};
  constexpr std::uint32_t kSeeds = 20;
  {
    const auto start = Clock::now();
    std::vector<Layout> layouts;
    json bounds = json::object();
    for (const std::uint32_t n : n_values) {
      layouts.push_back(plan_layout(n));
      bounds[std::to_string(n)] = layouts.back().plan().cardinality;
    }
    std::vector<SweepRun> runs;
    for (std::size_t gi = 0; gi < corpus.size(); ++gi) {
      for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
        for (std::uint32_t s = 0; s < kSeeds; ++s) {
          runs.push_back({gi, ni, n_values[ni], opts.seed + s,
                          s % 2 == 0 ? Mode::hash : Mode::rng});
        }
      }
    }
    parallel_for(runs.size(), threads, [&](std::size_t i) {
      SweepRun& run = runs[i];
      const auto run_start = Clock::now();
      const Layout& layout = layouts[run.layout];
      const BispAssigner assigner(layout, run.seed, run.mode);
      MetricsAccumulator acc(run.n);
      const auto& edges = corpus[run.graph].edges;
      for (std::size_t k = 0; k < edges.size(); ++k) {
        acc.add(edges[k].src, edges[k].dst, assigner.assign(edges[k], k));
      }
      const Metrics m = acc.finalize();
      run.rf_max = m.rf_max;
      run.imbalance = m.imbalance;
      run.elapsed_seconds = seconds_since(run_start);
    });
    json run_rows = json::array();
    bool all_rf_ok = true;
    double assign_seconds = 0.0;
    std::uint64_t assign_edges = 0;
    for (const auto& run : runs) {
      const std::uint32_t bound = layouts[run.layout].plan().cardinality;
      const bool ok = run.rf_max <= bound;
      all_rf_ok = all_rf_ok && ok;
      run_rows.push_back({{"graph", corpus[run.graph].name},
                          {"n", run.n},
                          {"seed", run.seed},
                          {"mode", run.mode == Mode::hash ? "hash" : "rng"},
                          {"rf_max", run.rf_max},
                          {"bound", bound},
                          {"rf_ok", ok},
                          {"imbalance", run.imbalance},
                          {"elapsed_seconds", run.elapsed_seconds}});
      assign_seconds += run.elapsed_seconds;
      assign_edges += corpus[run.graph].edges.size();
    }
    report["rf_sweep"] = {
        {"n_values", n_values},
        {"bounds", std::move(bounds)},
        {"seeds", kSeeds},
        {"runs", std::move(run_rows)},
        {"all_rf_ok", all_rf_ok},
        {"elapsed_seconds", seconds_since(start)},
        {"ns_per_edge",
         assign_edges == 0 ? 0.0 : assign_seconds * 1e9 / assign_edges}};
    if (progress) {
      *progress << "rf sweep " << runs.size() << " runs"
                << (all_rf_ok ? ": bound holds\n" : ": BOUND VIOLATED\n");
    }

    // Imbalance detail on the uniform random graph at n = 31.
    {
      json values = json::array();
      std::uint32_t within = 0;
      double max_run_seconds = 0.0;
      for (const auto& run : runs) {
        if (std::string(corpus[run.graph].name) != "er" || run.n != 31) {
          continue;
        }
        values.push_back(run.imbalance);
        if (run.imbalance <= 1.05) ++within;
        max_run_seconds = std::max(max_run_seconds, run.elapsed_seconds);
      }
      report["imbalance_er_n31"] = {{"values", std::move(values)},
                                    {"threshold", 1.05},
                                    {"within_threshold", within},
                                    {"max_run_seconds", max_run_seconds}};
      if (progress) {
        *progress << "imbalance er n=31: " << within << "/" << kSeeds
                  << " within 1.05\n";
      }
    }

    // Baseline separation on the star at n = 31.
    {
      const auto& star = corpus.back().edges;
      json rows = json::array();
      bool separated_all = true;
      std::uint32_t bisp_worst = 0;
      std::uint32_t random_best = UINT32_MAX;
      for (std::uint32_t s = 0; s < kSeeds; ++s) {
        const std::uint64_t seed = opts.seed + s;
        std::uint32_t bisp_rf = 0;
        for (const auto& run : runs) {
          if (std::string(corpus[run.graph].name) == "star" && run.n == 31 &&
              run.seed == seed) {
            bisp_rf = run.rf_max;
          }
        }
        const RandomAssigner baseline(31, seed);
        MetricsAccumulator acc(31);
        for (std::size_t k = 0; k < star.size(); ++k) {
          acc.add(star[k].src, star[k].dst, baseline.assign(star[k], k));
        }
        const std::uint32_t random_rf = acc.finalize().rf_max;
        rows.push_back({{"seed", seed},
                        {"bisp_rf_max", bisp_rf},
                        {"random_rf_max", random_rf}});
        separated_all = separated_all && random_rf > bisp_rf;
        bisp_worst = std::max(bisp_worst, bisp_rf);
        random_best = std::min(random_best, random_rf);
      }
      report["baseline_star_n31"] = {{"runs", std::move(rows)},
                                     {"bisp_rf_worst", bisp_worst},
                                     {"random_rf_best", random_best},
                                     {"separated_all", separated_all}};
      if (progress) {
        *progress << "star baseline: bisp worst " << bisp_worst
                  << ", random best " << random_best << "\n";
      }
    }
  }

  report["elapsed_seconds"] = seconds_since(bench_start);
  return report;
}

}  // namespace bisp
