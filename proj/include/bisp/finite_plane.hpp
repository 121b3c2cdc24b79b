#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "bisp/error.hpp"

namespace bisp {

bool is_prime(std::uint64_t q);

// Arithmetic mod a prime p. Values are always kept reduced in [0, p).
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p);

  std::uint32_t p() const { return p_; }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    const std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
    return a >= b ? a - b : a + p_ - b;
  }
  std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p_ - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>(std::uint64_t{a} * b % p_);
  }
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
  // Multiplicative inverse of a != 0 (Fermat).
  std::uint32_t inv(std::uint32_t a) const;

 private:
  std::uint32_t p_;
};

using Triple = std::array<std::uint32_t, 3>;

// The projective plane PG(2,q) over GF(q), q prime. Points and lines are
// both indexed by the same sorted list of canonical triples (first nonzero
// coordinate 1); point x lies on line L iff <x, L> = 0 mod q. Immutable
// after construction.
class ProjectivePlane {
 public:
  static constexpr std::uint32_t kMaxOrder = std::uint32_t{1} << 15;

  explicit ProjectivePlane(std::uint32_t q);

  std::uint32_t order() const { return q_; }
  // q^2 + q + 1, the shared count of points and lines.
  std::uint32_t size() const {
    return static_cast<std::uint32_t>(reps_.size());
  }
  const std::vector<Triple>& points() const { return reps_; }
  const std::vector<Triple>& lines() const { return reps_; }

  // Sorted indices of the q+1 points on a line.
  std::span<const std::uint32_t> line_points(std::uint32_t line) const;

  // Point indices common to two lines: a singleton for distinct lines, the
  // full q+1 points for a == b.
  std::vector<std::uint32_t> intersect_lines(std::uint32_t a,
                                             std::uint32_t b) const;

  // The unique common point of two distinct lines.
  std::uint32_t meet(std::uint32_t a, std::uint32_t b) const;

  // Scale a nonzero triple so its first nonzero coordinate is 1.
  Triple canonicalize(const Triple& t) const;
  // Index of a canonical triple in the sorted representative list.
  std::uint32_t index_of(const Triple& canonical) const;

 private:
  void check_line(std::uint32_t line) const;

  PrimeField field_;
  std::uint32_t q_;
  std::vector<Triple> reps_;
  std::vector<std::uint32_t> incidence_;  // size() rows of q+1 point indices
};

ProjectivePlane build_plane(std::uint32_t q);

}  // namespace bisp
