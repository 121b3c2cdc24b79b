#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "bisp/layered_sampler.hpp"
#include "bisp/randomness.hpp"

using namespace bisp;

namespace {

// Chi-square critical values at significance 1e-6.
constexpr double kChi2Dof1 = 23.93;
constexpr double kChi2Dof6 = 38.26;

std::vector<VertexLabel> all_labels(const Layout& layout) {
  std::vector<VertexLabel> labels;
  labels.push_back({0, std::vector<std::uint32_t>(layout.block_count(), 0)});
  for (std::uint32_t t = 0; t < layout.block_count(); ++t) {
    labels.back().block_choice[t] = layout.block_low(t);
  }
  while (true) {
    labels.push_back(labels.back());
    VertexLabel& next = labels.back();
    std::uint32_t t = layout.block_count();
    for (; t-- > 0;) {
      if (++next.block_choice[t] <
          layout.block_low(t) + layout.block_size(t)) {
        break;
      }
      next.block_choice[t] = layout.block_low(t);
    }
    if (t == UINT32_MAX) {
      if (++next.base_index >= layout.n0()) {
        labels.pop_back();
        return labels;
      }
    }
  }
}

double label_probability(const Layout& layout) {
  double pr = 1.0 / layout.n0();
  for (std::uint32_t t = 0; t < layout.block_count(); ++t) {
    pr /= layout.block_size(t);
  }
  return pr;
}

}  // namespace

TEST_CASE("plans for exact plane sizes use the bare plane") {
  const std::vector<std::pair<std::uint32_t, std::uint32_t>> cases = {
      {7, 2}, {13, 3}, {31, 5}, {57, 7}, {133, 11}};
  for (const auto& [n, q] : cases) {
    const LayoutPlan plan = plan_schedule(n);
    CHECK(plan.base == LayoutPlan::Base::plane);
    CHECK(plan.q == q);
    CHECK(plan.n0 == n);
    CHECK(plan.blocks.empty());
    CHECK(plan.cardinality == q + 1);
  }
}

TEST_CASE("small partition counts fall back to cyclic intervals") {
  for (std::uint32_t n = 1; n <= 6; ++n) {
    const LayoutPlan plan = plan_schedule(n);
    CHECK(plan.base == LayoutPlan::Base::cyclic);
    CHECK(plan.n0 == n);
    CHECK(plan.interval == n / 2 + 1);
    CHECK(plan.blocks.empty());
    CHECK(plan.cardinality == (n == 2 ? 2 : n / 2 + 1));
  }
}

TEST_CASE("the block schedule grows greedily from the plane") {
  const LayoutPlan plan9 = plan_schedule(9);
  CHECK(plan9.q == 2);
  CHECK(plan9.blocks == std::vector<std::uint32_t>{2});
  REQUIRE(plan9.accept_num.size() == 1);
  CHECK(plan9.accept_num[0] == 4);
  CHECK(plan9.accept_den[0] == 9);
  CHECK(plan9.cardinality == 4);

  const LayoutPlan plan12 = plan_schedule(12);
  CHECK(plan12.q == 2);
  CHECK(plan12.blocks == std::vector<std::uint32_t>{2, 3});
  CHECK(plan12.cardinality == 5);
  CHECK(plan12.accept_num[1] == 9);
  CHECK(plan12.accept_den[1] == 12);

  const LayoutPlan plan20 = plan_schedule(20);
  CHECK(plan20.q == 3);
  CHECK(plan20.blocks == std::vector<std::uint32_t>{3, 4});
  CHECK(plan20.cardinality == 6);
}

TEST_CASE("zero partitions are rejected") {
  CHECK_THROWS_AS(plan_schedule(0), InvalidN);
  CHECK_THROWS_AS(plan_layout(0), InvalidN);
}

TEST_CASE("every block satisfies its extension precondition") {
  for (std::uint32_t n = 1; n <= 1000; ++n) {
    const LayoutPlan plan = plan_schedule(n);
    std::uint64_t cur = plan.n0;
    std::uint64_t total = plan.n0;
    for (std::size_t t = 0; t < plan.blocks.size(); ++t) {
      const std::uint64_t r = plan.blocks[t];
      total += r;
      CHECK(r * r <= cur + r);
      cur += r;
      CHECK(plan.accept_num[t] == r * r);
      CHECK(plan.accept_den[t] == cur);
    }
    CHECK(total == n);
    CHECK(layout_cardinality(plan) == plan.cardinality);
  }
}

TEST_CASE("cardinality stays inside the planning envelope up to 1000") {
  for (std::uint32_t n = 1; n <= 1000; ++n) {
    const LayoutPlan plan = plan_schedule(n);
    const std::uint32_t root = isqrt64(n);
    const std::uint32_t ceil_root = root * root == n ? root : root + 1;
    CHECK(plan.cardinality >= ceil_root);
    const std::uint32_t r0 = isqrt64(plan.n0);
    const std::uint32_t ceil_r0 = r0 * r0 == plan.n0 ? r0 : r0 + 1;
    CHECK(plan.cardinality <=
          ceil_r0 + static_cast<std::uint32_t>(plan.blocks.size()) + 1);
  }
}

TEST_CASE("cyclic interval tables hold the expected sets") {
  const Layout layout = plan_layout(3);
  CHECK_FALSE(layout.plane_base());
  const auto i0 = layout.interval(0);
  const auto i2 = layout.interval(2);
  CHECK(std::vector<std::uint32_t>(i0.begin(), i0.end()) ==
        std::vector<std::uint32_t>{0, 1});
  CHECK(std::vector<std::uint32_t>(i2.begin(), i2.end()) ==
        std::vector<std::uint32_t>{0, 2});
  CHECK(layout.distinct_base_count() == 3);
}

TEST_CASE("the two intervals of n = 2 collapse to one set") {
  const Layout layout = plan_layout(2);
  CHECK(layout.distinct_base_count() == 1);
  CHECK(layout.base_set_index(0) == 0);
  CHECK(layout.base_set_index(1) == 0);
  const auto i1 = layout.interval(1);
  CHECK(std::vector<std::uint32_t>(i1.begin(), i1.end()) ==
        std::vector<std::uint32_t>{0, 1});
}

TEST_CASE("sampled base indices are uniform over the seven lines") {
  const Layout layout = plan_layout(7);
  std::vector<std::uint64_t> counts(7, 0);
  const std::size_t trials = 100000;
  for (std::size_t v = 0; v < trials; ++v) {
    CounterStream stream({11, kDomainVertexLabel, v});
    ++counts[sample_label(layout, stream).base_index];
  }
  const double expected = trials / 7.0;
  double chi2 = 0.0;
  for (const auto c : counts) {
    const double d = c - expected;
    chi2 += d * d / expected;
  }
  CHECK(chi2 < kChi2Dof6);
}

TEST_CASE("a single partition always yields the constant label") {
  const Layout layout = plan_layout(1);
  CounterStream stream({4, kDomainVertexLabel, 0});
  const VertexLabel label = sample_label(layout, stream);
  CHECK(label.base_index == 0);
  CHECK(label.block_choice.empty());
  CounterStream edge({4, kDomainEdgeRand, 0});
  CHECK(assign_edge(layout, label, label, edge) == 0);
}

TEST_CASE("block choices for n = 9 spread evenly over the two new elements") {
  const Layout layout = plan_layout(9);
  std::uint64_t count7 = 0;
  const std::size_t trials = 100000;
  for (std::size_t v = 0; v < trials; ++v) {
    CounterStream stream({13, kDomainVertexLabel, v});
    const VertexLabel label = sample_label(layout, stream);
    REQUIRE(label.block_choice.size() == 1);
    REQUIRE(label.block_choice[0] >= 7);
    REQUIRE(label.block_choice[0] <= 8);
    if (label.block_choice[0] == 7) ++count7;
  }
  const double expected = trials / 2.0;
  const double d = count7 - expected;
  CHECK(2 * d * d / expected < kChi2Dof1);
}

TEST_CASE("distinct lines assign deterministically without consuming draws") {
  const Layout layout = plan_layout(7);
  const VertexLabel lv{2, {}};
  const VertexLabel lu{5, {}};
  CounterStream stream({1, kDomainEdgeRand, 0});
  const std::uint32_t p = assign_edge(layout, lv, lu, stream);
  CHECK(stream.consumed() == 0);
  CHECK(p == layout.plane().meet(2, 5));
}

TEST_CASE("equal lines consume one draw and stay on the line") {
  const Layout layout = plan_layout(7);
  const VertexLabel lv{3, {}};
  const auto pts = layout.plane().line_points(3);
  for (std::uint64_t k = 0; k < 300; ++k) {
    CounterStream stream({21, kDomainEdgeRand, k});
    const std::uint32_t p = assign_edge(layout, lv, lv, stream);
    CHECK(stream.consumed() == 1);
    CHECK(std::find(pts.begin(), pts.end(), p) != pts.end());
  }
}

TEST_CASE("a matching block fires with its acceptance probability") {
  const Layout layout = plan_layout(9);
  const VertexLabel lv{0, {7}};
  const VertexLabel lu{1, {7}};
  const std::vector<double> dist = edge_distribution(layout, lv, lu);
  const std::uint32_t x = layout.plane().meet(0, 1);
  REQUIRE(dist.size() == 9);
  CHECK(dist[7] == doctest::Approx(4.0 / 9).epsilon(1e-12));
  CHECK(dist[x] == doctest::Approx(5.0 / 9).epsilon(1e-12));
  CHECK(dist[8] == 0.0);

  // Empirical agreement within 4 standard deviations per outcome.
  const std::size_t trials = 1000000;
  std::vector<std::uint64_t> counts(9, 0);
  for (std::size_t k = 0; k < trials; ++k) {
    CounterStream stream({3, kDomainEdgeRand, k});
    ++counts[assign_edge(layout, lv, lu, stream)];
  }
  for (std::uint32_t p = 0; p < 9; ++p) {
    const double freq = static_cast<double>(counts[p]) / trials;
    const double se = std::sqrt(dist[p] * (1 - dist[p]) / trials);
    CHECK(std::abs(freq - dist[p]) <= 4 * se + 1e-12);
  }
}

TEST_CASE("mismatched block choices never return block elements") {
  const Layout layout = plan_layout(9);
  const VertexLabel lv{0, {7}};
  const VertexLabel lu{1, {8}};
  for (std::uint64_t k = 0; k < 500; ++k) {
    CounterStream stream({17, kDomainEdgeRand, k});
    const std::uint32_t p = assign_edge(layout, lv, lu, stream);
    CHECK(p < 7);
  }
  const std::vector<double> dist = edge_distribution(layout, lv, lu);
  CHECK(dist[7] == 0.0);
  CHECK(dist[8] == 0.0);
}

TEST_CASE("labels outside their block range are rejected") {
  const Layout layout = plan_layout(9);
  CounterStream stream({1, kDomainEdgeRand, 0});
  const VertexLabel good{0, {7}};
  const VertexLabel bad_block{0, {9}};
  const VertexLabel bad_base{7, {7}};
  const VertexLabel bad_count{0, {}};
  CHECK_THROWS_AS(assign_edge(layout, good, bad_block, stream), LabelMismatch);
  CHECK_THROWS_AS(assign_edge(layout, bad_base, good, stream), LabelMismatch);
  CHECK_THROWS_AS(assign_edge(layout, bad_count, good, stream), LabelMismatch);
  CHECK_THROWS_AS(edge_distribution(layout, good, bad_block), LabelMismatch);
}

TEST_CASE("equal labels on one line spread uniformly over it") {
  const Layout layout = plan_layout(7);
  const VertexLabel lv{4, {}};
  const std::vector<double> dist = edge_distribution(layout, lv, lv);
  const auto pts = layout.plane().line_points(4);
  double total = 0.0;
  for (const auto p : pts) {
    CHECK(dist[p] == doctest::Approx(1.0 / 3).epsilon(1e-12));
    total += dist[p];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cyclic bases with double intersections split the remainder") {
  const Layout layout = plan_layout(6);
  // Intervals of length 4 on Z/6: starts 0 and 3 overlap in two arcs.
  const VertexLabel lv{0, {}};
  const VertexLabel lu{3, {}};
  const std::vector<double> dist = edge_distribution(layout, lv, lu);
  CHECK(dist[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(dist[3] == doctest::Approx(0.5).epsilon(1e-12));
  CounterStream stream({5, kDomainEdgeRand, 0});
  const std::uint32_t p = assign_edge(layout, lv, lu, stream);
  CHECK(stream.consumed() == 1);
  CHECK((p == 0 || p == 3));
}

TEST_CASE("every distribution is supported inside both label sets") {
  for (const std::uint32_t n : {2u, 5u, 9u, 12u}) {
    const Layout layout = plan_layout(n);
    const auto labels = all_labels(layout);
    for (const auto& lv : labels) {
      for (const auto& lu : labels) {
        const std::vector<double> dist = edge_distribution(layout, lv, lu);
        double total = 0.0;
        for (std::uint32_t p = 0; p < n; ++p) {
          total += dist[p];
          if (dist[p] <= 0.0) continue;
          // Membership: base interval or line, or a chosen block element.
          bool in_v = false, in_u = false;
          if (layout.plane_base() && p < layout.n0()) {
            const auto pv = layout.plane().line_points(lv.base_index);
            const auto pu = layout.plane().line_points(lu.base_index);
            in_v = std::find(pv.begin(), pv.end(), p) != pv.end();
            in_u = std::find(pu.begin(), pu.end(), p) != pu.end();
          } else if (!layout.plane_base() && p < layout.n0()) {
            const auto iv = layout.interval(lv.base_index);
            const auto iu = layout.interval(lu.base_index);
            in_v = std::find(iv.begin(), iv.end(), p) != iv.end();
            in_u = std::find(iu.begin(), iu.end(), p) != iu.end();
          }
          for (std::uint32_t t = 0; t < layout.block_count(); ++t) {
            in_v = in_v || lv.block_choice[t] == p;
            in_u = in_u || lu.block_choice[t] == p;
          }
          CHECK(in_v);
          CHECK(in_u);
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("materializing seven partitions recovers the plane system") {
  const ExplicitSystem sys = materialize(plan_layout(7));
  CHECK(sys.n() == 7);
  CHECK(sys.family.size() == 7);
  for (const auto& set : sys.family.sets) CHECK(set.size() == 3);
  const SystemReport report = verify_system(sys, 1e-12);
  CHECK(report.balanced);
  CHECK(report.intersecting);
}

TEST_CASE("materializing nine partitions matches the extended plane system") {
  const ExplicitSystem sys = materialize(plan_layout(9));
  CHECK(sys.family.size() == 14);
  for (const auto& set : sys.family.sets) CHECK(set.size() == 4);
  CHECK(verify_system(sys, 1e-9).balanced);
}

TEST_CASE("materializing two partitions degenerates to the full set") {
  const ExplicitSystem sys = materialize(plan_layout(2));
  REQUIRE(sys.family.size() == 1);
  CHECK(sys.family.sets[0] == std::vector<std::uint32_t>{0, 1});
  const SparseRow& row = sys.s.at({0, 0});
  REQUIRE(row.size() == 2);
  CHECK(row[0].second == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(row[1].second == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("oversized layouts refuse to materialize") {
  CHECK_THROWS_AS(materialize(plan_layout(500)), TooLargeToMaterialize);
}

TEST_CASE("the sampler distribution equals the materialized system rows") {
  for (std::uint32_t n = 2; n <= 12; ++n) {
    const Layout layout = plan_layout(n);
    const ExplicitSystem sys = materialize(layout);
    const auto labels = all_labels(layout);
    std::vector<double> average(n, 0.0);
    const double pr = label_probability(layout);
    for (const auto& lv : labels) {
      for (const auto& lu : labels) {
        const std::vector<double> dist = edge_distribution(layout, lv, lu);
        const std::uint32_t i = label_set_index(layout, lv);
        const std::uint32_t j = label_set_index(layout, lu);
        std::vector<double> row(n, 0.0);
        for (const auto& [p, value] : sys.s.at({i, j})) row[p] = value;
        for (std::uint32_t p = 0; p < n; ++p) {
          CHECK(std::abs(dist[p] - row[p]) <= 1e-12);
          average[p] += pr * pr * dist[p];
        }
      }
    }
    for (std::uint32_t p = 0; p < n; ++p) {
      CHECK(std::abs(average[p] - 1.0 / n) <= 1e-9);
    }
  }
}

TEST_CASE("label set indices agree with the label weighting of the system") {
  // Multiplicity weighting: weight of set index i in the materialized
  // system equals the fraction of labels mapping to i.
  for (const std::uint32_t n : {2u, 6u, 9u}) {
    const Layout layout = plan_layout(n);
    const ExplicitSystem sys = materialize(layout);
    std::vector<double> weight(sys.family.size(), 0.0);
    const auto labels = all_labels(layout);
    for (const auto& label : labels) {
      weight[label_set_index(layout, label)] += 1.0 / labels.size();
    }
    for (std::size_t i = 0; i < weight.size(); ++i) {
      CHECK(weight[i] == doctest::Approx(sys.w[i]).epsilon(1e-12));
    }
  }
}
