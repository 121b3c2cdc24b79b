#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "bisp/error.hpp"

namespace bisp {

// A collection of subsets of {0, ..., n-1}. Sets are stored sorted;
// duplicate sets are allowed (they carry independent weights in a system),
// duplicate elements within a set are not.
struct SetFamily {
  std::uint32_t n = 0;
  std::vector<std::vector<std::uint32_t>> sets;

  SetFamily() = default;
  SetFamily(std::uint32_t n, std::vector<std::vector<std::uint32_t>> sets);

  std::size_t size() const { return sets.size(); }
};

// One s row: the conditional distribution over elements for an ordered set
// pair, stored sparse and sorted by element.
using SparseRow = std::vector<std::pair<std::uint32_t, double>>;
using SparseS = std::map<std::pair<std::uint32_t, std::uint32_t>, SparseRow>;

// A system (F, w, s): set family, weight vector over the sets, and
// per-ordered-pair conditional distributions over elements.
struct ExplicitSystem {
  SetFamily family;
  std::vector<double> w;
  SparseS s;

  std::uint32_t n() const { return family.n; }
};

struct SystemReport {
  bool valid = false;         // w and every stored s row are stochastic
  bool intersecting = false;  // every positive entry lies in F_i cap F_j
  bool balanced = false;      // epsilon <= tol
  double epsilon = 0.0;       // max_p (n * A_p - 1)
  std::uint32_t cardinality = 0;
  std::vector<double> per_element_mass;  // A_p = sum_ij w_i w_j s_ijp
};

// Exact summation over stored entries; throws MissingPair if some (i,j)
// with w_i * w_j > 0 has no s row.
SystemReport verify_system(const ExplicitSystem& sys, double tol = 1e-9);

// Uniform w = 1/m and s uniform over each pairwise intersection. For a
// symmetric family this yields a balanced system. Throws NotIntersecting
// with a witness pair when some intersection is empty.
ExplicitSystem from_symmetric_family(const SetFamily& family);

// One extension step: r new elements, every set replicated r times with one
// new element appended (indexed n..n+r-1, new set index = old * r + pick),
// weights scaled by 1/r, and s mixing mass r^2/(n+r) onto the shared new
// element when the picks agree. Requires r^2 <= n + r.
ExplicitSystem extend_system(const ExplicitSystem& sys, std::uint32_t r);

// Size of the largest set; EmptyFamily for m = 0.
std::uint32_t cardinality(const ExplicitSystem& sys);

struct FamilyProperties {
  bool intersecting = false;
  bool uniform = false;
  bool regular = false;
  std::map<std::uint32_t, std::uint32_t> degree_histogram;  // degree -> #elements
};

FamilyProperties family_properties(const SetFamily& family);

// Whether the family's automorphism group is transitive on elements.
// Exhaustive search over all permutations; requires n <= 8.
bool is_symmetric(const SetFamily& family);
// Witness form: verifies each permutation is an automorphism (BadWitness
// otherwise) and checks the orbit of element 0 under the generated group.
bool is_symmetric(const SetFamily& family,
                  const std::vector<std::vector<std::uint32_t>>& witnesses);

struct BalanceFeasibility {
  bool feasible = false;
  SparseS s;              // a witness when feasible
  double deficit = 0.0;   // unroutable supply fraction when infeasible
};

// Fixed-w feasibility: does any s make (family, w, s) balanced? Solved as a
// transportation problem with integer-scaled capacities (supply w_i * w_j at
// each ordered pair, demand 1/n per element, arcs only into F_i cap F_j).
// A deficit below tol counts as feasible. Throws NotIntersecting if a
// positive-supply pair has an empty intersection.
BalanceFeasibility check_balanceable_given_w(const SetFamily& family,
                                             const std::vector<double>& w,
                                             double tol = 1e-9);

// Two-block refutation certificate: true iff no set meets both q1 and q2
// and |q1|/n > 1/4 and |q2|/n > 1/4 (then the lighter side's mass demand
// cannot be covered by any weight split). q1, q2 must be disjoint.
bool refute_balanceable(const SetFamily& family,
                        const std::vector<std::uint32_t>& q1,
                        const std::vector<std::uint32_t>& q2);

}  // namespace bisp
