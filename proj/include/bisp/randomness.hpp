#pragma once

#include <array>
#include <cstdint>

#include "bisp/error.hpp"

namespace bisp {

// Prime modulus of the production hash family. Mersenne form allows
// reduction by shift-and-add instead of division.
inline constexpr std::uint64_t kHashPrime = (std::uint64_t{1} << 61) - 1;

// Degree-5 polynomial over GF(modulus); a random member of this family is
// 6-independent: evaluations at any 6 distinct keys are jointly uniform over
// the coefficient choice. coeffs[d] multiplies key^d.
struct PolyHash {
  std::uint64_t modulus = kHashPrime;
  std::array<std::uint64_t, 6> coeffs{};
};

// Purpose tag for a randomness stream. Distinct (domain_tag, key) pairs
// behave as independent streams under a fixed seed.
enum Domain : std::uint32_t {
  kDomainVertexLabel = 1,     // key = vertex id, counter = label component
  kDomainEdgeRand = 2,        // key = edge identity, counter = draw ordinal
  kDomainPolyCoeff = 3,       // key = (component << 32) | coefficient index
  kDomainGenerator = 4,       // key = edge index, counter = endpoint slot
  kDomainRandomBaseline = 5,  // key = endpoint digest, counter = edge ordinal
  kDomainGridCell = 6,        // key = vertex id
  kDomainGridPick = 7,        // key = endpoint digest, counter = edge ordinal
};

struct StreamKey {
  std::uint64_t seed = 0;
  std::uint32_t domain_tag = 0;
  std::uint64_t key = 0;
};

// Finalizing mixer (bijective on 64-bit words).
std::uint64_t splitmix64(std::uint64_t x);

// Pure counter-based uniform draw: identical inputs give identical outputs
// on every platform and run.
std::uint64_t draw(const StreamKey& sk, std::uint64_t counter);

// Order-sensitive digest of an id pair, for keying per-edge streams.
std::uint64_t pair_digest(std::uint64_t a, std::uint64_t b);

// x mod 2^61-1 for x < 2^122 (covers any product of two reduced values).
std::uint64_t mod_mersenne61(unsigned __int128 x);

// Horner evaluation of h at key, in [0, h.modulus).
std::uint64_t poly_hash_eval(const PolyHash& h, std::uint64_t key);

// Fixed-point scaling of a hash value in [0, modulus) onto [0, m):
// floor(value * m / modulus). Per-bucket probability deviates from 1/m by at
// most m/modulus. Requires 0 < m <= 2^32.
std::uint64_t to_range(std::uint64_t value, std::uint64_t modulus,
                       std::uint64_t m);

// floor(value * m / 2^64) for a full-width uniform value; same scaling idea
// with the modulus fixed at 2^64. Requires m > 0.
std::uint64_t range64(std::uint64_t value, std::uint64_t m);

// True with probability num/den (quantized to 1/2^64) over a uniform value.
bool coin64(std::uint64_t value, std::uint64_t num, std::uint64_t den);

// The production hash family member for one label component: 6 coefficients
// derived from the seed, independent across components.
PolyHash make_poly_hash(std::uint64_t seed, std::uint32_t component,
                        std::uint64_t modulus = kHashPrime);

// Sequential view over one stream key; next() yields draw(sk, 0), draw(sk, 1), ...
class CounterStream {
 public:
  explicit CounterStream(StreamKey sk) : sk_(sk) {}
  std::uint64_t next() { return draw(sk_, counter_++); }
  std::uint64_t consumed() const { return counter_; }

 private:
  StreamKey sk_;
  std::uint64_t counter_ = 0;
};

}  // namespace bisp
