#pragma once

#include <cstdint>
#include <iosfwd>

#include <nlohmann/json.hpp>

namespace bisp {

struct BenchOptions {
  std::uint64_t seed = 1;       // base of the 20-seed sweeps
  std::uint32_t table_max = 1000;
  unsigned threads = 0;         // 0 = hardware concurrency
};

// Runs the full experiment grid and returns one JSON report:
// - cardinality table for n = 1..table_max with the envelope check,
// - replication-factor sweep over the test corpus (complete K_200,
//   uniform and power-law random graphs at 1e4 nodes / 1e6 edges, star
//   K_{1,1000}) for n in {7, 13, 31} across 20 seeds, modes alternating,
// - imbalance values on the uniform random graph at n = 31,
// - star baseline separation against the uniform random partitioner.
// Results are independent of the thread count (assignment is pure per
// edge); `progress`, when given, receives one line per section.
nlohmann::json run_bench(const BenchOptions& opts,
                         std::ostream* progress = nullptr);

}  // namespace bisp
