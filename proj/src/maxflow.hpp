#pragma once

// Dinic max-flow on integer capacities; internal detail of
// check_balanceable_given_w. Instances there are tiny (at most a few
// thousand nodes), so no scaling tricks are needed.

#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

namespace bisp::detail {

class MaxFlow {
 public:
  explicit MaxFlow(std::size_t nodes) : head_(nodes, -1), level_(nodes), it_(nodes) {}

  // Returns the index of the forward edge so flows can be read back later.
  std::size_t add_edge(std::uint32_t from, std::uint32_t to, std::uint64_t cap) {
    const std::size_t id = to_.size();
    to_.push_back(to);
    cap_.push_back(cap);
    next_.push_back(head_[from]);
    head_[from] = static_cast<std::int64_t>(id);
    to_.push_back(from);
    cap_.push_back(0);
    next_.push_back(head_[to]);
    head_[to] = static_cast<std::int64_t>(id + 1);
    return id;
  }

  std::uint64_t flow_on(std::size_t edge_id) const { return cap_[edge_id ^ 1]; }

  std::uint64_t run(std::uint32_t s, std::uint32_t t) {
    std::uint64_t total = 0;
    while (bfs(s, t)) {
      it_ = head_;
      while (std::uint64_t pushed =
                 dfs(s, t, std::numeric_limits<std::uint64_t>::max())) {
        total += pushed;
      }
    }
    return total;
  }

 private:
  bool bfs(std::uint32_t s, std::uint32_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::uint32_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const std::uint32_t v = q.front();
      q.pop();
      for (std::int64_t e = head_[v]; e >= 0; e = next_[e]) {
        if (cap_[e] > 0 && level_[to_[e]] < 0) {
          level_[to_[e]] = level_[v] + 1;
          q.push(to_[e]);
        }
      }
    }
    return level_[t] >= 0;
  }

  std::uint64_t dfs(std::uint32_t v, std::uint32_t t, std::uint64_t limit) {
    if (v == t || limit == 0) return limit;
    for (std::int64_t& e = it_[v]; e >= 0; e = next_[e]) {
      const std::uint32_t u = to_[e];
      if (cap_[e] > 0 && level_[u] == level_[v] + 1) {
        const std::uint64_t pushed =
            dfs(u, t, std::min(limit, cap_[e]));
        if (pushed > 0) {
          cap_[e] -= pushed;
          cap_[e ^ 1] += pushed;
          return pushed;
        }
        level_[u] = -1;
      }
    }
    return 0;
  }

  std::vector<std::int64_t> head_;
  std::vector<std::uint32_t> to_;
  std::vector<std::uint64_t> cap_;
  std::vector<std::int64_t> next_;
  std::vector<std::int32_t> level_;
  std::vector<std::int64_t> it_;
};

}  // namespace bisp::detail
