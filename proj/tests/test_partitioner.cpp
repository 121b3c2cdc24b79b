#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "bisp/analysis.hpp"
#include "bisp/graphs.hpp"
#include "bisp/partitioner.hpp"

using namespace bisp;

namespace {

constexpr double kChi2Dof6 = 38.26;  // significance 1e-6

std::vector<Assignment> run_bisp(const std::vector<Edge>& edges,
                                 std::uint32_t n, std::uint64_t seed,
                                 Mode mode) {
  const Layout layout = plan_layout(n);
  VectorSource source(edges);
  return bisp_partition(source, layout, seed, mode);
}

std::vector<Edge> matching_edges(std::uint64_t count) {
  std::vector<Edge> edges;
  edges.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    edges.push_back({2 * k, 2 * k + 1});
  }
  return edges;
}

}  // namespace

TEST_CASE("replication factors stay under the planned cardinality") {
  std::vector<std::vector<Edge>> graphs;
  {
    CompleteSource complete(50);
    graphs.push_back(collect(complete));
    ErdosRenyiSource er(500, 20000, 11);
    graphs.push_back(collect(er));
    graphs.push_back(star_edges(2000));
  }
  for (const std::uint32_t n : {7u, 13u, 31u}) {
    const Layout layout = plan_layout(n);
    const std::uint32_t bound = layout.plan().cardinality;
    for (const auto& edges : graphs) {
      for (const Mode mode : {Mode::hash, Mode::rng}) {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
          VectorSource source(edges);
          const auto assignments = bisp_partition(source, layout, seed, mode);
          const Metrics m = compute_metrics(assignments, n);
          CHECK(m.rf_max <= bound);
        }
      }
    }
  }
}

TEST_CASE("per-edge assignments are uniform over fresh endpoint pairs") {
  // A matching keeps every endpoint distinct, so edge outcomes are
  // independent and a chi-square applies.
  const auto edges = matching_edges(1000000);
  for (const Mode mode : {Mode::hash, Mode::rng}) {
    const auto assignments = run_bisp(edges, 7, 2024, mode);
    std::vector<std::uint64_t> counts(7, 0);
    for (const auto& a : assignments) ++counts[a.partition];
    const double expected = edges.size() / 7.0;
    double chi2 = 0.0;
    for (const auto c : counts) {
      const double d = c - expected;
      chi2 += d * d / expected;
    }
    CHECK(chi2 < kChi2Dof6);
  }
}

TEST_CASE("hash mode is a pure function of edge content") {
  std::vector<Edge> edges;
  {
    ErdosRenyiSource er(300, 5000, 5);
    edges = collect(er);
  }
  const auto first = run_bisp(edges, 13, 99, Mode::hash);
  const auto second = run_bisp(edges, 13, 99, Mode::hash);
  CHECK(first == second);

  std::vector<Edge> reversed(edges.rbegin(), edges.rend());
  const auto backward = run_bisp(reversed, 13, 99, Mode::hash);
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint32_t> by_edge;
  for (const auto& a : first) by_edge[{a.src, a.dst}] = a.partition;
  for (const auto& a : backward) {
    CHECK(by_edge.at({a.src, a.dst}) == a.partition);
  }

  const auto other_seed = run_bisp(edges, 13, 100, Mode::hash);
  CHECK(first != other_seed);
}

TEST_CASE("parallel edges repeat in hash mode and spread in rng mode") {
  // n = 2 has the single base set {0, 1}, so every edge draws a fresh coin.
  const std::vector<Edge> repeated(1000, Edge{5, 6});
  const auto hash_out = run_bisp(repeated, 2, 8, Mode::hash);
  std::set<std::uint32_t> hash_parts;
  for (const auto& a : hash_out) hash_parts.insert(a.partition);
  CHECK(hash_parts.size() == 1);

  const auto rng_out = run_bisp(repeated, 2, 8, Mode::rng);
  std::set<std::uint32_t> rng_parts;
  for (const auto& a : rng_out) rng_parts.insert(a.partition);
  CHECK(rng_parts.size() == 2);
}

TEST_CASE("loops land inside the vertex's own label set") {
  const Layout layout = plan_layout(7);
  for (const Mode mode : {Mode::hash, Mode::rng}) {
    const BispAssigner assigner(layout, 31, mode);
    for (std::uint64_t v = 0; v < 200; ++v) {
      const VertexLabel label = assigner.label(v);
      const auto pts = layout.plane().line_points(label.base_index);
      const std::uint32_t p = assigner.assign({v, v}, v);
      CHECK(std::find(pts.begin(), pts.end(), p) != pts.end());
    }
  }
}

TEST_CASE("labels are deterministic in both modes") {
  const Layout layout = plan_layout(13);
  for (const Mode mode : {Mode::hash, Mode::rng}) {
    const BispAssigner a(layout, 7, mode);
    const BispAssigner b(layout, 7, mode);
    for (std::uint64_t v = 0; v < 50; ++v) {
      CHECK(a.label(v).base_index == b.label(v).base_index);
      CHECK(a.label(v).block_choice == b.label(v).block_choice);
    }
  }
}

TEST_CASE("the uniform baseline floods a star hub") {
  const auto star = star_edges(1000);
  VectorSource source(star);
  const auto assignments = random_partition(source, 31, 1);
  const Metrics m = compute_metrics(assignments, 31);
  CHECK(m.rf_max == 31);
}

TEST_CASE("the uniform baseline balances sizes to within one percent") {
  std::vector<Edge> edges = matching_edges(1000000);
  VectorSource source(edges);
  const auto assignments = random_partition(source, 10, 3);
  const Metrics m = compute_metrics(assignments, 10);
  for (const auto size : m.sizes) {
    CHECK(size > 99000);
    CHECK(size < 101000);
  }
}

TEST_CASE("one partition sends everything to partition zero") {
  const auto edges = matching_edges(100);
  VectorSource source(edges);
  for (const auto& a : random_partition(source, 1, 5)) {
    CHECK(a.partition == 0);
  }
}

TEST_CASE("grid replication factors respect the row plus column bound") {
  struct Case {
    std::uint32_t n, bound;
  };
  for (const auto& c : {Case{4, 3}, Case{9, 5}, Case{12, 6}}) {
    CompleteSource complete(40);
    const auto edges = collect(complete);
    VectorSource source(edges);
    const auto assignments = grid_partition(source, c.n, 2);
    const Metrics m = compute_metrics(assignments, c.n);
    CHECK(m.rf_max <= c.bound);
    for (const auto& a : assignments) CHECK(a.partition < c.n);
  }
}

TEST_CASE("large prime partition counts have no grid shape") {
  CHECK_THROWS_AS(GridAssigner(7, 1), NoGridShape);
  CHECK_THROWS_AS(GridAssigner(13, 1), NoGridShape);
  CHECK_NOTHROW(GridAssigner(2, 1));
  CHECK_NOTHROW(GridAssigner(3, 1));
  CHECK_NOTHROW(GridAssigner(1, 1));
}

TEST_CASE("grid cells give both endpoints a shared candidate") {
  const GridAssigner grid(9, 4);
  CHECK(grid.rows() == 3);
  CHECK(grid.cols() == 3);
  CompleteSource complete(30);
  const auto edges = collect(complete);
  std::uint64_t k = 0;
  for (const auto& e : edges) {
    const std::uint32_t p = grid.assign(e, k++);
    CHECK(p < 9);
  }
}

TEST_CASE("empty streams produce empty assignments") {
  std::vector<Edge> none;
  VectorSource a(none), b(none), c(none);
  const Layout layout = plan_layout(7);
  CHECK(bisp_partition(a, layout, 1, Mode::hash).empty());
  CHECK(random_partition(b, 5, 1).empty());
  CHECK(grid_partition(c, 4, 1).empty());
}

TEST_CASE("chunked concurrent assignment matches the serial order") {
  std::vector<Edge> edges;
  {
    ErdosRenyiSource er(1000, 50000, 6);
    edges = collect(er);
  }
  const Layout layout = plan_layout(13);
  const BispAssigner bisp(layout, 4, Mode::hash);
  const RandomAssigner random(13, 4);
  const GridAssigner grid(12, 4);
  const auto check_parallel = [&](const auto& assigner) {
    const auto serial = assign_parallel(edges, assigner, 1);
    REQUIRE(serial.size() == edges.size());
    for (const unsigned threads : {2u, 5u}) {
      CHECK(assign_parallel(edges, assigner, threads) == serial);
    }
    for (std::size_t k = 0; k < edges.size(); ++k) {
      CHECK(serial[k] == assigner.assign(edges[k], k));
    }
  };
  check_parallel(bisp);
  check_parallel(random);
  check_parallel(grid);
}

TEST_CASE("rng mode with one thread matches the streaming path") {
  std::vector<Edge> edges;
  {
    ErdosRenyiSource er(100, 2000, 8);
    edges = collect(er);
  }
  const Layout layout = plan_layout(9);
  const BispAssigner assigner(layout, 12, Mode::rng);
  const auto parts = assign_parallel(edges, assigner, 3);
  VectorSource source(edges);
  const auto streamed = bisp_partition(source, layout, 12, Mode::rng);
  REQUIRE(streamed.size() == parts.size());
  for (std::size_t k = 0; k < parts.size(); ++k) {
    CHECK(streamed[k].partition == parts[k]);
  }
}
