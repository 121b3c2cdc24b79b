#include "bisp/analysis.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace bisp {

MetricsAccumulator::MetricsAccumulator(std::uint32_t n)
    : n_(n), sizes_(n, 0) {
  if (n == 0) throw InvalidN("partition count must be positive");
}

void MetricsAccumulator::touch(std::uint64_t vertex, std::uint32_t partition) {
  if (n_ <= 64) {
    mask_[vertex] |= std::uint64_t{1} << partition;
    return;
  }
  auto& set = sets_[vertex];
  const auto it = std::lower_bound(set.begin(), set.end(), partition);
  if (it == set.end() || *it != partition) set.insert(it, partition);
}

void MetricsAccumulator::add(std::uint64_t src, std::uint64_t dst,
                             std::uint32_t partition) {
  if (partition >= n_) {
    throw PartitionOutOfRange("partition " + std::to_string(partition) +
                              " out of range for n = " + std::to_string(n_));
  }
  ++edges_;
  ++sizes_[partition];
  touch(src, partition);
  if (dst != src) touch(dst, partition);
}

void MetricsAccumulator::merge(const MetricsAccumulator& other) {
  if (other.n_ != n_) throw InvalidN("cannot merge metrics across n");
  edges_ += other.edges_;
  for (std::uint32_t p = 0; p < n_; ++p) sizes_[p] += other.sizes_[p];
  for (const auto& [vertex, mask] : other.mask_) mask_[vertex] |= mask;
  for (const auto& [vertex, set] : other.sets_) {
    auto& mine = sets_[vertex];
    std::vector<std::uint32_t> merged;
    merged.reserve(mine.size() + set.size());
    std::set_union(mine.begin(), mine.end(), set.begin(), set.end(),
                   std::back_inserter(merged));
    mine = std::move(merged);
  }
}

Metrics MetricsAccumulator::finalize() const {
  if (edges_ == 0) {
    throw EmptyInput("no edges: imbalance is undefined");
  }
  Metrics m;
  m.n = n_;
  m.edge_count = edges_;
  m.sizes = sizes_;
  const std::uint64_t max_size = *std::max_element(sizes_.begin(), sizes_.end());
  m.imbalance_num = max_size * n_;
  m.imbalance_den = edges_;
  m.imbalance = static_cast<double>(m.imbalance_num) /
                static_cast<double>(m.imbalance_den);
  std::uint64_t rf_total = 0;
  std::uint64_t vertices = 0;
  auto record = [&](std::uint64_t vertex, std::uint32_t rf) {
    m.rf_per_vertex.emplace(vertex, rf);
    m.rf_max = std::max(m.rf_max, rf);
    rf_total += rf;
    ++vertices;
    ++m.rf_histogram[rf];
  };
  for (const auto& [vertex, mask] : mask_) {
    record(vertex, static_cast<std::uint32_t>(std::popcount(mask)));
  }
  for (const auto& [vertex, set] : sets_) {
    record(vertex, static_cast<std::uint32_t>(set.size()));
  }
  m.rf_avg = static_cast<double>(rf_total) / static_cast<double>(vertices);
  return m;
}

Metrics compute_metrics(const std::vector<Assignment>& assignments,
                        std::uint32_t n) {
  MetricsAccumulator acc(n);
  for (const auto& a : assignments) acc.add(a);
  return acc.finalize();
}

std::pair<ExplicitSystem, SystemReport> extract_system(
    const std::vector<Assignment>& assignments, std::uint32_t nodes,
    std::uint32_t n) {
  const std::uint64_t total = std::uint64_t{nodes} * nodes;
  if (assignments.size() != total) {
    throw NotComplete("expected " + std::to_string(total) +
                      " assignments for the complete graph on " +
                      std::to_string(nodes) + " vertices, got " +
                      std::to_string(assignments.size()));
  }
  std::vector<bool> seen(total, false);
  std::vector<std::vector<bool>> incident(
      nodes, std::vector<bool>(n, false));
  for (const auto& a : assignments) {
    if (a.src >= nodes || a.dst >= nodes) {
      throw NotComplete("vertex id beyond the declared node count");
    }
    if (a.partition >= n) {
      throw PartitionOutOfRange("partition " + std::to_string(a.partition) +
                                " out of range for n = " + std::to_string(n));
    }
    const std::uint64_t pair = a.src * nodes + a.dst;
    if (seen[pair]) {
      throw NotComplete("duplicate ordered pair in complete-graph input");
    }
    seen[pair] = true;
    incident[a.src][a.partition] = true;
    incident[a.dst][a.partition] = true;
  }

  // Classes: distinct per-vertex partition sets, ordered lexicographically
  // so extraction is deterministic regardless of vertex numbering.
  std::vector<std::vector<std::uint32_t>> vertex_set(nodes);
  for (std::uint32_t v = 0; v < nodes; ++v) {
    for (std::uint32_t p = 0; p < n; ++p) {
      if (incident[v][p]) vertex_set[v].push_back(p);
    }
  }
  std::vector<std::vector<std::uint32_t>> family_sets = vertex_set;
  std::sort(family_sets.begin(), family_sets.end());
  family_sets.erase(std::unique(family_sets.begin(), family_sets.end()),
                    family_sets.end());
  const std::size_t m = family_sets.size();
  std::vector<std::uint32_t> class_of(nodes);
  std::vector<std::uint64_t> class_size(m, 0);
  for (std::uint32_t v = 0; v < nodes; ++v) {
    const auto it = std::lower_bound(family_sets.begin(), family_sets.end(),
                                     vertex_set[v]);
    class_of[v] = static_cast<std::uint32_t>(it - family_sets.begin());
    ++class_size[class_of[v]];
  }

  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint64_t>>
      counts;
  for (const auto& a : assignments) {
    auto& row = counts[{class_of[a.src], class_of[a.dst]}];
    if (row.empty()) row.assign(n, 0);
    ++row[a.partition];
  }

  ExplicitSystem sys;
  sys.family = SetFamily(n, std::move(family_sets));
  sys.w.reserve(m);
  for (const std::uint64_t size : class_size) {
    sys.w.push_back(static_cast<double>(size) / static_cast<double>(nodes));
  }
  for (const auto& [pair, row] : counts) {
    const auto [i, j] = pair;
    const double denom =
        static_cast<double>(class_size[i]) * static_cast<double>(class_size[j]);
    SparseRow srow;
    for (std::uint32_t p = 0; p < n; ++p) {
      if (row[p] > 0) {
        srow.emplace_back(p, static_cast<double>(row[p]) / denom);
      }
    }
    sys.s.emplace(pair, std::move(srow));
  }
  SystemReport report = verify_system(sys, 1e-9);
  return {std::move(sys), std::move(report)};
}

}  // namespace bisp
