#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "bisp/error.hpp"
#include "bisp/explicit_system.hpp"
#include "bisp/finite_plane.hpp"
#include "bisp/randomness.hpp"

namespace bisp {

// Arithmetic-only description of the constructed system for n partitions:
// a base family (projective plane for n >= 7, cyclic intervals for n <= 6)
// plus extension blocks r_1..r_h occupying element ranges
// [n0, n0+r_1), [n0+r_1, n0+r_1+r_2), ... Block t fires with probability
// accept_num[t] / accept_den[t] = r_t^2 / (n0 + r_1 + ... + r_t).
struct LayoutPlan {
  enum class Base { plane, cyclic };

  std::uint32_t n = 0;
  Base base = Base::plane;
  std::uint32_t q = 0;         // plane order (plane base only)
  std::uint32_t n0 = 0;        // base element count
  std::uint32_t interval = 0;  // interval length t (cyclic base only)
  std::vector<std::uint32_t> blocks;
  std::vector<std::uint64_t> accept_num;
  std::vector<std::uint64_t> accept_den;
  std::uint32_t cardinality = 0;
};

// Chooses the base and block schedule for n partitions without building any
// tables: n <= 6 takes cyclic intervals of length floor(n/2)+1; n >= 7
// scans every prime q with q^2+q+1 <= n, runs the greedy schedule
// r = min(floor(sqrt(cur)), remaining), and keeps the plan of minimal
// cardinality, tie-broken by largest q.
LayoutPlan plan_schedule(std::uint32_t n);

std::uint32_t isqrt64(std::uint64_t x);

// A plan plus the tables needed to sample from it (the plane, or the
// interval sets). Immutable after construction.
class Layout {
 public:
  explicit Layout(LayoutPlan plan);

  const LayoutPlan& plan() const { return plan_; }
  std::uint32_t n() const { return plan_.n; }
  std::uint32_t n0() const { return plan_.n0; }
  std::uint32_t block_count() const {
    return static_cast<std::uint32_t>(plan_.blocks.size());
  }
  std::uint32_t block_low(std::uint32_t t) const { return block_low_[t]; }
  std::uint32_t block_size(std::uint32_t t) const { return plan_.blocks[t]; }

  bool plane_base() const { return plan_.base == LayoutPlan::Base::plane; }
  const ProjectivePlane& plane() const { return *plane_; }

  // Sorted elements of interval `start` (cyclic base).
  std::span<const std::uint32_t> interval(std::uint32_t start) const;
  // Number of distinct base sets (differs from n0 only for n = 2, where
  // both interval starts give the same set).
  std::uint32_t distinct_base_count() const { return distinct_base_count_; }
  // Distinct-set index for a base choice (identity for plane bases).
  std::uint32_t base_set_index(std::uint32_t base_index) const;

 private:
  LayoutPlan plan_;
  std::vector<std::uint32_t> block_low_;
  std::unique_ptr<ProjectivePlane> plane_;
  std::vector<std::uint32_t> interval_elems_;   // n0 rows of `interval` ids
  std::vector<std::uint32_t> interval_index_;   // start -> distinct index
  std::uint32_t distinct_base_count_ = 0;
};

Layout plan_layout(std::uint32_t n);

std::uint32_t layout_cardinality(const LayoutPlan& plan);
std::uint32_t layout_cardinality(const Layout& layout);

// A vertex's choice: one base set plus one element per block.
struct VertexLabel {
  std::uint32_t base_index = 0;
  std::vector<std::uint32_t> block_choice;
};

void validate_label(const Layout& layout, const VertexLabel& label);

// Index of the label's set in materialize()'s family ordering: the distinct
// base index folded with each block pick (idx = idx * r_t + pick_t).
std::uint32_t label_set_index(const Layout& layout, const VertexLabel& label);

// Uniform label: one draw for the base, one per block, consumed in that
// order from the stream.
template <class Stream>
VertexLabel sample_label(const Layout& layout, Stream& rand) {
  VertexLabel label;
  label.base_index =
      static_cast<std::uint32_t>(range64(rand.next(), layout.n0()));
  const std::uint32_t h = layout.block_count();
  label.block_choice.reserve(h);
  for (std::uint32_t t = 0; t < h; ++t) {
    label.block_choice.push_back(
        layout.block_low(t) +
        static_cast<std::uint32_t>(range64(rand.next(), layout.block_size(t))));
  }
  return label;
}

namespace detail {
// Base-phase assignment once no block has fired. Sorted interval
// intersection for cyclic bases is never empty (2 * interval > n).
template <class Stream>
std::uint32_t assign_base(const Layout& layout, std::uint32_t base_v,
                          std::uint32_t base_u, Stream& rand) {
  if (layout.plane_base()) {
    if (base_v != base_u) return layout.plane().meet(base_v, base_u);
    const auto pts = layout.plane().line_points(base_v);
    return pts[range64(rand.next(), pts.size())];
  }
  const auto a = layout.interval(base_v);
  const auto b = layout.interval(base_u);
  std::uint32_t common[6];
  std::uint32_t count = 0;
  std::size_t ia = 0, ib = 0;
  while (ia < a.size() && ib < b.size()) {
    if (a[ia] < b[ib]) {
      ++ia;
    } else if (a[ia] > b[ib]) {
      ++ib;
    } else {
      common[count++] = a[ia];
      ++ia;
      ++ib;
    }
  }
  if (count == 1) return common[0];
  return common[range64(rand.next(), count)];
}
}  // namespace detail

// One edge assignment: blocks are checked from t = h down to 1, a matching
// block consumes exactly one draw and fires with its acceptance
// probability; otherwise the edge falls through to the base intersection
// (deterministic for distinct plane lines, one draw when a uniform pick is
// needed). The result always lies in F_lv intersect F_lu.
template <class Stream>
std::uint32_t assign_edge(const Layout& layout, const VertexLabel& lv,
                          const VertexLabel& lu, Stream& rand) {
  validate_label(layout, lv);
  validate_label(layout, lu);
  const auto& plan = layout.plan();
  for (std::uint32_t t = layout.block_count(); t-- > 0;) {
    if (lv.block_choice[t] == lu.block_choice[t] &&
        coin64(rand.next(), plan.accept_num[t], plan.accept_den[t])) {
      return lv.block_choice[t];
    }
  }
  return detail::assign_base(layout, lv.base_index, lu.base_index, rand);
}

// Exact distribution of assign_edge over [0, n), by unrolling the block
// recursion. Sums to 1 up to floating-point rounding.
std::vector<double> edge_distribution(const Layout& layout,
                                      const VertexLabel& lv,
                                      const VertexLabel& lu);

// The explicit system with the same sampling semantics as
// (sample_label, assign_edge): the base family (distinct sets, weights by
// start multiplicity) extended once per block. Guarded by the planned set
// count n0 * prod(r_t) <= 1e5.
ExplicitSystem materialize(const Layout& layout);

}  // namespace bisp
