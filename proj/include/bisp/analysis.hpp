#pragma once

#include <cstdint>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bisp/error.hpp"
#include "bisp/explicit_system.hpp"
#include "bisp/partitioner.hpp"

namespace bisp {

struct Metrics {
  std::uint32_t n = 0;
  std::uint64_t edge_count = 0;
  std::vector<std::uint64_t> sizes;
  double imbalance = 0.0;           // max size / (edges / n)
  std::uint64_t imbalance_num = 0;  // max size * n
  std::uint64_t imbalance_den = 0;  // edges
  std::unordered_map<std::uint64_t, std::uint32_t> rf_per_vertex;
  std::uint32_t rf_max = 0;
  double rf_avg = 0.0;
  std::map<std::uint32_t, std::uint64_t> rf_histogram;  // rf -> #vertices
};

// Single-pass, mergeable metric accumulation. Per-vertex partition sets are
// bitmasks for n <= 64 and sorted small vectors above; this is the one
// non-streaming structure (memory O(|V| * avg rf)).
class MetricsAccumulator {
 public:
  explicit MetricsAccumulator(std::uint32_t n);

  void add(std::uint64_t src, std::uint64_t dst, std::uint32_t partition);
  void add(const Assignment& a) { add(a.src, a.dst, a.partition); }
  void merge(const MetricsAccumulator& other);
  // Throws EmptyInput when no edges were added (imbalance undefined).
  Metrics finalize() const;

 private:
  void touch(std::uint64_t vertex, std::uint32_t partition);

  std::uint32_t n_;
  std::uint64_t edges_ = 0;
  std::vector<std::uint64_t> sizes_;
  std::unordered_map<std::uint64_t, std::uint64_t> mask_;  // n <= 64
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> sets_;
};

Metrics compute_metrics(const std::vector<Assignment>& assignments,
                        std::uint32_t n);

// Reads back the system realized by a partitioning of the complete graph
// (with loops) on N vertices: family = distinct per-vertex partition sets,
// w = vertex class fractions, s = conditional assignment frequencies per
// ordered class pair. The report's epsilon equals imbalance - 1.
std::pair<ExplicitSystem, SystemReport> extract_system(
    const std::vector<Assignment>& assignments, std::uint32_t nodes,
    std::uint32_t n);

}  // namespace bisp
