#include "bisp/partitioner.hpp"

#include <algorithm>
#include <thread>

namespace bisp {

BispAssigner::BispAssigner(const Layout& layout, std::uint64_t seed, Mode mode)
    : layout_(&layout), seed_(seed), mode_(mode) {
  if (mode_ == Mode::hash) {
    const std::uint32_t components = 1 + layout.block_count();
    component_hash_.reserve(components);
    for (std::uint32_t c = 0; c < components; ++c) {
      component_hash_.push_back(make_poly_hash(seed, c));
    }
  }
}

VertexLabel BispAssigner::label(std::uint64_t vertex) const {
  VertexLabel label;
  const std::uint32_t h = layout_->block_count();
  label.block_choice.reserve(h);
  if (mode_ == Mode::hash) {
    label.base_index = static_cast<std::uint32_t>(to_range(
        poly_hash_eval(component_hash_[0], vertex), kHashPrime,
        layout_->n0()));
    for (std::uint32_t t = 0; t < h; ++t) {
      label.block_choice.push_back(
          layout_->block_low(t) +
          static_cast<std::uint32_t>(
              to_range(poly_hash_eval(component_hash_[t + 1], vertex),
                       kHashPrime, layout_->block_size(t))));
    }
    return label;
  }
  const StreamKey sk{seed_, kDomainVertexLabel, vertex};
  label.base_index =
      static_cast<std::uint32_t>(range64(draw(sk, 0), layout_->n0()));
  for (std::uint32_t t = 0; t < h; ++t) {
    label.block_choice.push_back(
        layout_->block_low(t) +
        static_cast<std::uint32_t>(
            range64(draw(sk, t + 1), layout_->block_size(t))));
  }
  return label;
}

std::uint32_t BispAssigner::assign(const Edge& e, std::uint64_t ordinal) const {
  const VertexLabel lv = label(e.src);
  const VertexLabel lu = e.dst == e.src ? lv : label(e.dst);
  const std::uint64_t key =
      mode_ == Mode::hash ? pair_digest(e.src, e.dst) : ordinal;
  CounterStream rand(StreamKey{seed_, kDomainEdgeRand, key});
  return assign_edge(*layout_, lv, lu, rand);
}

RandomAssigner::RandomAssigner(std::uint32_t n, std::uint64_t seed)
    : n_(n), seed_(seed) {
  if (n == 0) throw InvalidN("partition count must be positive");
}

std::uint32_t RandomAssigner::assign(const Edge& e,
                                     std::uint64_t ordinal) const {
  const StreamKey sk{seed_, kDomainRandomBaseline, pair_digest(e.src, e.dst)};
  return static_cast<std::uint32_t>(range64(draw(sk, ordinal), n_));
}

GridAssigner::GridAssigner(std::uint32_t n, std::uint64_t seed)
    : n_(n), seed_(seed) {
  if (n == 0) throw InvalidN("partition count must be positive");
  a_ = 1;
  for (std::uint32_t d = isqrt64(n); d >= 1; --d) {
    if (n % d == 0) {
      a_ = d;
      break;
    }
  }
  b_ = n / a_;
  if (a_ == 1 && n > 3) {
    throw NoGridShape("no grid shape for " + std::to_string(n) +
                      " partitions (prime); pad the partition count");
  }
}

std::uint32_t GridAssigner::cell(std::uint64_t vertex) const {
  const StreamKey sk{seed_, kDomainGridCell, vertex};
  return static_cast<std::uint32_t>(range64(draw(sk, 0), n_));
}

std::uint32_t GridAssigner::assign(const Edge& e,
                                   std::uint64_t ordinal) const {
  const std::uint32_t cv = cell(e.src);
  const std::uint32_t cu = e.dst == e.src ? cv : cell(e.dst);
  const std::uint32_t xv = cv / b_, yv = cv % b_;
  const std::uint32_t xu = cu / b_, yu = cu % b_;
  // (row_v u col_v) n (row_u u col_u): full row/column on axis agreement
  // plus the two crossing cells.
  std::vector<std::uint32_t> common;
  if (xv == xu) {
    for (std::uint32_t y = 0; y < b_; ++y) common.push_back(xv * b_ + y);
  }
  if (yv == yu) {
    for (std::uint32_t x = 0; x < a_; ++x) common.push_back(x * b_ + yv);
  }
  common.push_back(xv * b_ + yu);
  common.push_back(xu * b_ + yv);
  std::sort(common.begin(), common.end());
  common.erase(std::unique(common.begin(), common.end()), common.end());
  const StreamKey sk{seed_, kDomainGridPick, pair_digest(e.src, e.dst)};
  return common[range64(draw(sk, ordinal), common.size())];
}

namespace {

template <class Assigner>
std::vector<Assignment> run_stream(EdgeSource& edges,
                                   const Assigner& assigner) {
  std::vector<Assignment> out;
  assign_stream(edges, assigner,
                [&out](const Assignment& a) { out.push_back(a); });
  return out;
}

}  // namespace

std::vector<Assignment> bisp_partition(EdgeSource& edges, const Layout& layout,
                                       std::uint64_t seed, Mode mode) {
  return run_stream(edges, BispAssigner(layout, seed, mode));
}

std::vector<Assignment> random_partition(EdgeSource& edges, std::uint32_t n,
                                         std::uint64_t seed) {
  return run_stream(edges, RandomAssigner(n, seed));
}

std::vector<Assignment> grid_partition(EdgeSource& edges, std::uint32_t n,
                                       std::uint64_t seed) {
  return run_stream(edges, GridAssigner(n, seed));
}

template <class Assigner>
std::vector<std::uint32_t> assign_parallel(const std::vector<Edge>& edges,
                                           const Assigner& assigner,
                                           unsigned threads) {
  if (threads == 0) threads = 1;
  if (edges.size() < threads) {
    threads = static_cast<unsigned>(std::max<std::size_t>(edges.size(), 1));
  }
  std::vector<std::uint32_t> parts(edges.size());
  if (threads == 1) {
    for (std::size_t k = 0; k < edges.size(); ++k) {
      parts[k] = assigner.assign(edges[k], k);
    }
    return parts;
  }
  std::vector<std::thread> workers;
  workers.reserve(threads);
  const std::size_t chunk = (edges.size() + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::size_t lo = std::min(edges.size(), w * chunk);
    const std::size_t hi = std::min(edges.size(), lo + chunk);
    workers.emplace_back([&, lo, hi] {
      for (std::size_t k = lo; k < hi; ++k) {
        parts[k] = assigner.assign(edges[k], k);
      }
    });
  }
  for (auto& worker : workers) worker.join();
  return parts;
}

template std::vector<std::uint32_t> assign_parallel<BispAssigner>(
    const std::vector<Edge>&, const BispAssigner&, unsigned);
template std::vector<std::uint32_t> assign_parallel<RandomAssigner>(
    const std::vector<Edge>&, const RandomAssigner&, unsigned);
template std::vector<std::uint32_t> assign_parallel<GridAssigner>(
    const std::vector<Edge>&, const GridAssigner&, unsigned);

}  // namespace bisp
