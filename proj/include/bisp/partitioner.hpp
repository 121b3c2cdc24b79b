#pragma once

#include <cstdint>
#include <vector>

#include "bisp/graphs.hpp"
#include "bisp/layered_sampler.hpp"
#include "bisp/randomness.hpp"

namespace bisp {

// hash: labels from the 6-independent polynomial family, edge randomness
// keyed by the endpoint-pair digest, so output is a pure function of edge
// content and seed (parallel edges repeat their assignment). rng: labels
// and per-edge coins from the counter mixer, edges keyed by stream ordinal,
// so parallel edges stay independent.
enum class Mode { rng, hash };

enum class Algo { bisp, random_uniform, grid };

struct Assignment {
  std::uint64_t src = 0;
  std::uint64_t dst = 0;
  std::uint32_t partition = 0;

  bool operator==(const Assignment&) const = default;
};

// Per-edge pure assignment over a layout. Labels are a pure function of
// (seed, vertex id) in both modes, so no state is kept and workers can
// share one assigner.
class BispAssigner {
 public:
  BispAssigner(const Layout& layout, std::uint64_t seed, Mode mode);

  VertexLabel label(std::uint64_t vertex) const;
  std::uint32_t assign(const Edge& e, std::uint64_t ordinal) const;
  const Layout& layout() const { return *layout_; }

 private:
  const Layout* layout_;
  std::uint64_t seed_;
  Mode mode_;
  std::vector<PolyHash> component_hash_;  // hash mode, one per component
};

// Uniform baseline: every edge occurrence assigned independently.
class RandomAssigner {
 public:
  RandomAssigner(std::uint32_t n, std::uint64_t seed);
  std::uint32_t assign(const Edge& e, std::uint64_t ordinal) const;

 private:
  std::uint32_t n_;
  std::uint64_t seed_;
};

// Classic grid baseline: vertices hash to cells of an a x b grid
// (a = largest divisor of n at most sqrt(n)); an edge goes to a uniform
// cell of (row_v union col_v) intersect (row_u union col_u). Throws
// NoGridShape when n is prime and n > 3.
class GridAssigner {
 public:
  GridAssigner(std::uint32_t n, std::uint64_t seed);
  std::uint32_t assign(const Edge& e, std::uint64_t ordinal) const;
  std::uint32_t rows() const { return a_; }
  std::uint32_t cols() const { return b_; }

 private:
  std::uint32_t cell(std::uint64_t vertex) const;

  std::uint32_t n_, a_, b_;
  std::uint64_t seed_;
};

// Drives a source through an assigner in stream order.
template <class Assigner, class Fn>
void assign_stream(EdgeSource& edges, const Assigner& assigner, Fn&& fn) {
  std::uint64_t ordinal = 0;
  while (auto e = edges.next()) {
    fn(Assignment{e->src, e->dst, assigner.assign(*e, ordinal)});
    ++ordinal;
  }
}

std::vector<Assignment> bisp_partition(EdgeSource& edges, const Layout& layout,
                                       std::uint64_t seed, Mode mode);
std::vector<Assignment> random_partition(EdgeSource& edges, std::uint32_t n,
                                         std::uint64_t seed);
std::vector<Assignment> grid_partition(EdgeSource& edges, std::uint32_t n,
                                       std::uint64_t seed);

// Chunked concurrent assignment; result order matches input order (each
// edge's assignment is pure in content and ordinal).
template <class Assigner>
std::vector<std::uint32_t> assign_parallel(const std::vector<Edge>& edges,
                                           const Assigner& assigner,
                                           unsigned threads);

}  // namespace bisp
