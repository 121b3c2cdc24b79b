#include "bisp/layered_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bisp {

std::uint32_t isqrt64(std::uint64_t x) {
  if (x == 0) return 0;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x)));
  using u128 = unsigned __int128;
  while (r > 0 && u128{r} * r > x) --r;
  while (u128{r + 1} * (r + 1) <= x) ++r;
  return static_cast<std::uint32_t>(r);
}

namespace {

// Greedy block schedule on top of a base of n0 elements; returns false if
// the base alone already covers n.
void schedule_blocks(std::uint32_t n, std::uint32_t n0, LayoutPlan& plan) {
  std::uint64_t cur = n0;
  while (cur < n) {
    const std::uint64_t r =
        std::min<std::uint64_t>(isqrt64(cur), n - cur);
    cur += r;
    plan.blocks.push_back(static_cast<std::uint32_t>(r));
    plan.accept_num.push_back(r * r);
    plan.accept_den.push_back(cur);
  }
}

}  // namespace

LayoutPlan plan_schedule(std::uint32_t n) {
  if (n == 0) throw InvalidN("partition count must be positive");
  LayoutPlan plan;
  plan.n = n;
  if (n <= 6) {
    plan.base = LayoutPlan::Base::cyclic;
    plan.n0 = n;
    plan.interval = n / 2 + 1;
    plan.cardinality = plan.interval;
    return plan;
  }
  bool have_best = false;
  for (std::uint32_t q = 2; std::uint64_t{q} * q + q + 1 <= n; ++q) {
    if (!is_prime(q)) continue;
    LayoutPlan cand;
    cand.n = n;
    cand.base = LayoutPlan::Base::plane;
    cand.q = q;
    cand.n0 = q * q + q + 1;
    schedule_blocks(n, cand.n0, cand);
    cand.cardinality =
        q + 1 + static_cast<std::uint32_t>(cand.blocks.size());
    // Minimal cardinality wins; ties go to the larger plane.
    if (!have_best || cand.cardinality < plan.cardinality ||
        (cand.cardinality == plan.cardinality && q > plan.q)) {
      plan = std::move(cand);
      have_best = true;
    }
  }
  return plan;
}

Layout::Layout(LayoutPlan plan_in) : plan_(std::move(plan_in)) {
  if (plan_.n == 0) throw InvalidN("partition count must be positive");
  std::uint64_t low = plan_.n0;
  for (const std::uint32_t r : plan_.blocks) {
    block_low_.push_back(static_cast<std::uint32_t>(low));
    low += r;
  }
  if (low != plan_.n) {
    throw InvalidN("layout blocks do not cover the partition range");
  }
  if (plan_.base == LayoutPlan::Base::plane) {
    plane_ = std::make_unique<ProjectivePlane>(plan_.q);
    if (plane_->size() != plan_.n0) {
      throw InvalidN("plane size does not match layout base size");
    }
    distinct_base_count_ = plan_.n0;
    return;
  }
  const std::uint32_t n0 = plan_.n0;
  const std::uint32_t len = plan_.interval;
  if (len == 0 || len > n0) {
    throw InvalidN("cyclic interval length out of range");
  }
  interval_elems_.assign(std::uint64_t{n0} * len, 0);
  std::vector<std::vector<std::uint32_t>> seen;
  interval_index_.assign(n0, 0);
  for (std::uint32_t start = 0; start < n0; ++start) {
    std::vector<std::uint32_t> set;
    set.reserve(len);
    for (std::uint32_t off = 0; off < len; ++off) {
      set.push_back((start + off) % n0);
    }
    std::sort(set.begin(), set.end());
    std::copy(set.begin(), set.end(),
              interval_elems_.begin() + std::uint64_t{start} * len);
    const auto it = std::find(seen.begin(), seen.end(), set);
    if (it == seen.end()) {
      interval_index_[start] = static_cast<std::uint32_t>(seen.size());
      seen.push_back(std::move(set));
    } else {
      interval_index_[start] =
          static_cast<std::uint32_t>(it - seen.begin());
    }
  }
  distinct_base_count_ = static_cast<std::uint32_t>(seen.size());
}

std::span<const std::uint32_t> Layout::interval(std::uint32_t start) const {
  return {interval_elems_.data() + std::uint64_t{start} * plan_.interval,
          plan_.interval};
}

std::uint32_t Layout::base_set_index(std::uint32_t base_index) const {
  return plane_base() ? base_index : interval_index_[base_index];
}

Layout plan_layout(std::uint32_t n) { return Layout(plan_schedule(n)); }

std::uint32_t layout_cardinality(const LayoutPlan& plan) {
  return plan.cardinality;
}

std::uint32_t layout_cardinality(const Layout& layout) {
  return layout.plan().cardinality;
}

void validate_label(const Layout& layout, const VertexLabel& label) {
  if (label.base_index >= layout.n0()) {
    throw LabelMismatch("base index " + std::to_string(label.base_index) +
                        " out of range for base of size " +
                        std::to_string(layout.n0()));
  }
  const std::uint32_t h = layout.block_count();
  if (label.block_choice.size() != h) {
    throw LabelMismatch("label has " +
                        std::to_string(label.block_choice.size()) +
                        " block choices, layout has " + std::to_string(h) +
                        " blocks");
  }
  for (std::uint32_t t = 0; t < h; ++t) {
    const std::uint32_t c = label.block_choice[t];
    if (c < layout.block_low(t) ||
        c >= layout.block_low(t) + layout.block_size(t)) {
      throw LabelMismatch("block choice " + std::to_string(c) +
                          " outside block " + std::to_string(t));
    }
  }
}

std::uint32_t label_set_index(const Layout& layout, const VertexLabel& label) {
  validate_label(layout, label);
  std::uint64_t idx = layout.base_set_index(label.base_index);
  for (std::uint32_t t = 0; t < layout.block_count(); ++t) {
    idx = idx * layout.block_size(t) +
          (label.block_choice[t] - layout.block_low(t));
  }
  return static_cast<std::uint32_t>(idx);
}

std::vector<double> edge_distribution(const Layout& layout,
                                      const VertexLabel& lv,
                                      const VertexLabel& lu) {
  validate_label(layout, lv);
  validate_label(layout, lu);
  std::vector<double> dist(layout.n(), 0.0);
  const auto& plan = layout.plan();
  double remaining = 1.0;
  for (std::uint32_t t = layout.block_count(); t-- > 0;) {
    if (lv.block_choice[t] == lu.block_choice[t]) {
      const double alpha = static_cast<double>(plan.accept_num[t]) /
                           static_cast<double>(plan.accept_den[t]);
      dist[lv.block_choice[t]] += remaining * alpha;
      remaining *= 1.0 - alpha;
    }
  }
  if (layout.plane_base()) {
    if (lv.base_index != lu.base_index) {
      dist[layout.plane().meet(lv.base_index, lu.base_index)] += remaining;
    } else {
      const auto pts = layout.plane().line_points(lv.base_index);
      const double share = remaining / static_cast<double>(pts.size());
      for (const std::uint32_t p : pts) dist[p] += share;
    }
    return dist;
  }
  const auto a = layout.interval(lv.base_index);
  const auto b = layout.interval(lu.base_index);
  std::vector<std::uint32_t> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(common));
  const double share = remaining / static_cast<double>(common.size());
  for (const std::uint32_t p : common) dist[p] += share;
  return dist;
}

ExplicitSystem materialize(const Layout& layout) {
  const auto& plan = layout.plan();
  std::uint64_t sets = plan.n0;
  for (const std::uint32_t r : plan.blocks) {
    sets *= r;
    if (sets > 100000) break;
  }
  if (sets > 100000) {
    throw TooLargeToMaterialize(
        "materializing n = " + std::to_string(plan.n) + " needs over " +
        std::to_string(sets) + " sets (cap 100000)");
  }

  std::vector<std::vector<std::uint32_t>> base_sets;
  if (layout.plane_base()) {
    const auto& plane = layout.plane();
    base_sets.reserve(plane.size());
    for (std::uint32_t li = 0; li < plane.size(); ++li) {
      const auto pts = plane.line_points(li);
      base_sets.emplace_back(pts.begin(), pts.end());
    }
  } else {
    // Distinct interval sets in first-occurrence order, matching
    // base_set_index. Duplicates (n = 2) collapse; uniform weight over the
    // distinct sets equals the start-multiplicity weighting there.
    std::uint32_t next = 0;
    for (std::uint32_t start = 0; start < layout.n0(); ++start) {
      if (layout.base_set_index(start) == next) {
        const auto iv = layout.interval(start);
        base_sets.emplace_back(iv.begin(), iv.end());
        ++next;
      }
    }
  }
  ExplicitSystem sys =
      from_symmetric_family(SetFamily(plan.n0, std::move(base_sets)));
  for (const std::uint32_t r : plan.blocks) {
    sys = extend_system(sys, r);
  }
  return sys;
}

}  // namespace bisp
