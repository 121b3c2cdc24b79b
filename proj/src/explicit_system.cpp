#include "bisp/explicit_system.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "maxflow.hpp"

namespace bisp {

namespace {

std::vector<std::uint32_t> intersect_sorted(
    const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

bool contains_sorted(const std::vector<std::uint32_t>& set, std::uint32_t p) {
  return std::binary_search(set.begin(), set.end(), p);
}

}  // namespace

SetFamily::SetFamily(std::uint32_t n,
                     std::vector<std::vector<std::uint32_t>> sets_in)
    : n(n), sets(std::move(sets_in)) {
  for (auto& set : sets) {
    std::sort(set.begin(), set.end());
    if (!set.empty() && set.back() >= n) {
      throw IndexOutOfRange("set element " + std::to_string(set.back()) +
                            " out of range for ground set of size " +
                            std::to_string(n));
    }
    if (std::adjacent_find(set.begin(), set.end()) != set.end()) {
      throw IndexOutOfRange("duplicate element within a set");
    }
  }
}

SystemReport verify_system(const ExplicitSystem& sys, double tol) {
  const std::uint32_t n = sys.n();
  const std::size_t m = sys.family.size();
  SystemReport report;
  report.per_element_mass.assign(n, 0.0);

  bool valid = sys.w.size() == m;
  double wsum = 0.0;
  for (const double wi : sys.w) {
    if (wi < 0.0) valid = false;
    wsum += wi;
  }
  if (std::abs(wsum - 1.0) > tol) valid = false;

  for (std::size_t i = 0; i < m && i < sys.w.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (j >= sys.w.size()) break;
      if (sys.w[i] * sys.w[j] > 0.0 &&
          !sys.s.count({static_cast<std::uint32_t>(i),
                        static_cast<std::uint32_t>(j)})) {
        throw MissingPair(static_cast<std::uint32_t>(i),
                          static_cast<std::uint32_t>(j));
      }
    }
  }

  bool intersecting = true;
  for (const auto& [pair, row] : sys.s) {
    const auto [i, j] = pair;
    if (i >= m || j >= m) {
      valid = false;
      continue;
    }
    double rsum = 0.0;
    for (const auto& [p, value] : row) {
      if (p >= n || value < 0.0) {
        valid = false;
        continue;
      }
      rsum += value;
      if (value > 0.0 && (!contains_sorted(sys.family.sets[i], p) ||
                          !contains_sorted(sys.family.sets[j], p))) {
        intersecting = false;
      }
      if (i < sys.w.size() && j < sys.w.size()) {
        report.per_element_mass[p] += sys.w[i] * sys.w[j] * value;
      }
    }
    if (std::abs(rsum - 1.0) > tol) valid = false;
  }

  double eps = 0.0;
  for (const double mass : report.per_element_mass) {
    eps = std::max(eps, n * mass - 1.0);
  }

  report.valid = valid;
  report.intersecting = intersecting;
  report.epsilon = eps;
  report.balanced = eps <= tol;
  std::uint32_t card = 0;
  for (const auto& set : sys.family.sets) {
    card = std::max(card, static_cast<std::uint32_t>(set.size()));
  }
  report.cardinality = card;
  return report;
}

ExplicitSystem from_symmetric_family(const SetFamily& family) {
  const std::size_t m = family.size();
  if (m == 0) throw EmptyFamily("cannot build a system from an empty family");
  ExplicitSystem sys;
  sys.family = family;
  sys.w.assign(m, 1.0 / static_cast<double>(m));
  for (std::uint32_t i = 0; i < m; ++i) {
    for (std::uint32_t j = 0; j < m; ++j) {
      auto inter = intersect_sorted(family.sets[i], family.sets[j]);
      if (inter.empty()) throw NotIntersecting(i, j);
      SparseRow row;
      row.reserve(inter.size());
      const double v = 1.0 / static_cast<double>(inter.size());
      for (const std::uint32_t p : inter) row.emplace_back(p, v);
      sys.s.emplace(std::make_pair(i, j), std::move(row));
    }
  }
  return sys;
}

ExplicitSystem extend_system(const ExplicitSystem& sys, std::uint32_t r) {
  const std::uint64_t n = sys.n();
  if (r == 0) throw BlockTooLarge("extension block must be nonempty");
  if (std::uint64_t{r} * r > n + r) {
    throw BlockTooLarge("block of " + std::to_string(r) +
                        " violates r^2 <= n + r for n = " + std::to_string(n));
  }
  const std::size_t m = sys.family.size();
  if (sys.w.size() != m) {
    throw Error("weight vector length does not match family size");
  }
  const double alpha =
      static_cast<double>(std::uint64_t{r} * r) / static_cast<double>(n + r);

  ExplicitSystem out;
  out.family.n = static_cast<std::uint32_t>(n + r);
  out.family.sets.reserve(m * r);
  out.w.reserve(m * r);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::uint32_t pick = 0; pick < r; ++pick) {
      auto set = sys.family.sets[i];
      set.push_back(static_cast<std::uint32_t>(n + pick));
      out.family.sets.push_back(std::move(set));
      out.w.push_back(sys.w[i] / static_cast<double>(r));
    }
  }

  for (const auto& [pair, row] : sys.s) {
    const auto [i, j] = pair;
    for (std::uint32_t pi = 0; pi < r; ++pi) {
      for (std::uint32_t pj = 0; pj < r; ++pj) {
        const std::uint32_t ni = i * r + pi;
        const std::uint32_t nj = j * r + pj;
        SparseRow nrow;
        if (pi == pj) {
          // Shared new element takes alpha; the old row is scaled down.
          nrow.reserve(row.size() + 1);
          for (const auto& [p, value] : row) {
            nrow.emplace_back(p, value * (1.0 - alpha));
          }
          nrow.emplace_back(static_cast<std::uint32_t>(n + pi), alpha);
        } else {
          nrow = row;
        }
        out.s.emplace(std::make_pair(ni, nj), std::move(nrow));
      }
    }
  }
  return out;
}

std::uint32_t cardinality(const ExplicitSystem& sys) {
  if (sys.family.size() == 0) {
    throw EmptyFamily("cardinality of an empty family is undefined");
  }
  std::uint32_t card = 0;
  for (const auto& set : sys.family.sets) {
    card = std::max(card, static_cast<std::uint32_t>(set.size()));
  }
  return card;
}

FamilyProperties family_properties(const SetFamily& family) {
  FamilyProperties props;
  const std::size_t m = family.size();

  props.intersecting = true;
  for (std::size_t i = 0; i < m && props.intersecting; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (intersect_sorted(family.sets[i], family.sets[j]).empty()) {
        props.intersecting = false;
        break;
      }
    }
    if (family.sets[i].empty()) props.intersecting = false;
  }
  if (m == 0) props.intersecting = false;

  props.uniform = true;
  for (std::size_t i = 1; i < m; ++i) {
    if (family.sets[i].size() != family.sets[0].size()) {
      props.uniform = false;
      break;
    }
  }

  std::vector<std::uint32_t> degree(family.n, 0);
  for (const auto& set : family.sets) {
    for (const std::uint32_t p : set) ++degree[p];
  }
  props.regular = true;
  for (const std::uint32_t d : degree) {
    if (d != degree[0]) props.regular = false;
    ++props.degree_histogram[d];
  }
  return props;
}

namespace {

// Family as a sorted multiset of sets, for automorphism comparison.
std::vector<std::vector<std::uint32_t>> family_key(
    const std::vector<std::vector<std::uint32_t>>& sets) {
  auto key = sets;
  std::sort(key.begin(), key.end());
  return key;
}

bool is_automorphism(const SetFamily& family,
                     const std::vector<std::uint32_t>& perm,
                     const std::vector<std::vector<std::uint32_t>>& key) {
  std::vector<std::vector<std::uint32_t>> mapped;
  mapped.reserve(family.size());
  for (const auto& set : family.sets) {
    std::vector<std::uint32_t> img;
    img.reserve(set.size());
    for (const std::uint32_t p : set) img.push_back(perm[p]);
    std::sort(img.begin(), img.end());
    mapped.push_back(std::move(img));
  }
  return family_key(mapped) == key;
}

}  // namespace

bool is_symmetric(const SetFamily& family) {
  if (family.n > 8) {
    throw TooLargeForExhaustive(
        "exhaustive symmetry search requires n <= 8, got n = " +
        std::to_string(family.n));
  }
  if (family.n == 0) return true;
  const auto key = family_key(family.sets);
  std::vector<bool> reachable(family.n, false);
  reachable[0] = true;  // identity
  std::vector<std::uint32_t> perm(family.n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (is_automorphism(family, perm, key)) reachable[perm[0]] = true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  // Transitive iff element 0 can be carried onto every element; arbitrary
  // pairs (p, q) follow by composing one map with another's inverse.
  return std::all_of(reachable.begin(), reachable.end(),
                     [](bool b) { return b; });
}

bool is_symmetric(const SetFamily& family,
                  const std::vector<std::vector<std::uint32_t>>& witnesses) {
  const std::uint32_t n = family.n;
  const auto key = family_key(family.sets);
  for (const auto& perm : witnesses) {
    if (perm.size() != n) {
      throw BadWitness("witness permutation has wrong length");
    }
    std::vector<bool> seen(n, false);
    for (const std::uint32_t v : perm) {
      if (v >= n || seen[v]) {
        throw BadWitness("witness is not a permutation of the ground set");
      }
      seen[v] = true;
    }
    if (!is_automorphism(family, perm, key)) {
      throw BadWitness("witness permutation does not preserve the family");
    }
  }
  if (n == 0) return true;
  // Orbit of element 0 under the generated group; generators of a finite
  // permutation group reach the full orbit without explicit inverses.
  std::vector<bool> in_orbit(n, false);
  std::vector<std::uint32_t> frontier{0};
  in_orbit[0] = true;
  while (!frontier.empty()) {
    const std::uint32_t p = frontier.back();
    frontier.pop_back();
    for (const auto& perm : witnesses) {
      const std::uint32_t q = perm[p];
      if (!in_orbit[q]) {
        in_orbit[q] = true;
        frontier.push_back(q);
      }
    }
  }
  return std::all_of(in_orbit.begin(), in_orbit.end(),
                     [](bool b) { return b; });
}

BalanceFeasibility check_balanceable_given_w(const SetFamily& family,
                                             const std::vector<double>& w,
                                             double tol) {
  const std::uint32_t n = family.n;
  const std::size_t m = family.size();
  if (w.size() != m) {
    throw Error("weight vector length does not match family size");
  }
  double wsum = 0.0;
  for (const double wi : w) {
    if (wi < 0.0) throw Error("weights must be nonnegative");
    wsum += wi;
  }
  if (std::abs(wsum - 1.0) > std::max(tol, 1e-9)) {
    throw Error("weights must sum to 1");
  }
  if (n == 0) throw EmptyFamily("ground set is empty");

  // Integer transportation instance: supplies w_i * w_j, demands 1/n,
  // everything scaled by S. Inputs are small rationals, so rounding error
  // stays far below the feasibility tolerance.
  constexpr double kScale = 1e12;
  struct Pair {
    std::uint32_t i, j;
    std::uint64_t supply;
    std::size_t first_edge = 0;
    std::vector<std::uint32_t> inter;
  };
  std::vector<Pair> pairs;
  std::uint64_t total_supply = 0;
  for (std::uint32_t i = 0; i < m; ++i) {
    for (std::uint32_t j = 0; j < m; ++j) {
      const double supply = w[i] * w[j];
      if (supply <= 0.0) continue;
      auto inter = intersect_sorted(family.sets[i], family.sets[j]);
      if (inter.empty()) throw NotIntersecting(i, j);
      const auto scaled =
          static_cast<std::uint64_t>(std::llround(supply * kScale));
      if (scaled == 0) continue;
      total_supply += scaled;
      pairs.push_back({i, j, scaled, 0, std::move(inter)});
    }
  }

  const std::uint32_t source = 0;
  const std::uint32_t sink = 1;
  const auto pair_node = [&](std::size_t k) {
    return static_cast<std::uint32_t>(2 + k);
  };
  const auto element_node = [&](std::uint32_t p) {
    return static_cast<std::uint32_t>(2 + pairs.size() + p);
  };
  detail::MaxFlow flow(2 + pairs.size() + n);
  const std::uint64_t demand =
      static_cast<std::uint64_t>(std::llround(kScale / n));
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    flow.add_edge(source, pair_node(k), pairs[k].supply);
    bool first = true;
    for (const std::uint32_t p : pairs[k].inter) {
      const std::size_t id =
          flow.add_edge(pair_node(k), element_node(p), pairs[k].supply);
      if (first) {
        pairs[k].first_edge = id;
        first = false;
      }
    }
  }
  for (std::uint32_t p = 0; p < n; ++p) {
    flow.add_edge(element_node(p), sink, demand);
  }

  const std::uint64_t routed = flow.run(source, sink);
  BalanceFeasibility result;
  result.deficit =
      static_cast<double>(total_supply - routed) / kScale;
  result.feasible = result.deficit <= tol;
  if (result.feasible) {
    // Arc edges for a pair are consecutive ids starting at first_edge
    // (forward edges take even positions in insertion order for this pair).
    for (const auto& pair : pairs) {
      SparseRow row;
      std::uint64_t used = 0;
      std::vector<std::pair<std::uint32_t, std::uint64_t>> units;
      for (std::size_t a = 0; a < pair.inter.size(); ++a) {
        const std::uint64_t f = flow.flow_on(pair.first_edge + 2 * a);
        used += f;
        if (f > 0) units.emplace_back(pair.inter[a], f);
      }
      if (used == 0) {
        // Zero routed supply after rounding; fall back to uniform.
        const double v = 1.0 / static_cast<double>(pair.inter.size());
        for (const std::uint32_t p : pair.inter) row.emplace_back(p, v);
      } else {
        for (const auto& [p, f] : units) {
          row.emplace_back(p, static_cast<double>(f) /
                                  static_cast<double>(used));
        }
      }
      result.s.emplace(std::make_pair(pair.i, pair.j), std::move(row));
    }
  }
  return result;
}

bool refute_balanceable(const SetFamily& family,
                        const std::vector<std::uint32_t>& q1,
                        const std::vector<std::uint32_t>& q2) {
  const std::uint32_t n = family.n;
  std::vector<bool> in1(n, false), in2(n, false);
  for (const std::uint32_t p : q1) {
    if (p >= n) throw IndexOutOfRange("q1 element out of range");
    in1[p] = true;
  }
  for (const std::uint32_t p : q2) {
    if (p >= n) throw IndexOutOfRange("q2 element out of range");
    if (in1[p]) throw OverlappingSubsets("q1 and q2 share element " +
                                         std::to_string(p));
    in2[p] = true;
  }
  // Both blocks must demand more than a quarter of the total mass.
  const auto count1 = std::count(in1.begin(), in1.end(), true);
  const auto count2 = std::count(in2.begin(), in2.end(), true);
  if (4 * static_cast<std::uint64_t>(count1) <= n ||
      4 * static_cast<std::uint64_t>(count2) <= n) {
    return false;
  }
  for (const auto& set : family.sets) {
    bool meets1 = false, meets2 = false;
    for (const std::uint32_t p : set) {
      meets1 = meets1 || in1[p];
      meets2 = meets2 || in2[p];
    }
    if (meets1 && meets2) return false;
  }
  return true;
}

}  // namespace bisp
