#include "bisp/randomness.hpp"

namespace bisp {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t draw(const StreamKey& sk, std::uint64_t counter) {
  // Each stage fully mixes before the next input is folded in, so any
  // difference in seed, tag, key, or counter avalanches through the chain.
  std::uint64_t x = splitmix64(sk.seed);
  x = splitmix64(x ^ (std::uint64_t{sk.domain_tag} * 0xd1b54a32d192ed03ull));
  x = splitmix64(x ^ sk.key);
  return splitmix64(x ^ counter);
}

std::uint64_t pair_digest(std::uint64_t a, std::uint64_t b) {
  // Chaining keeps the digest asymmetric: (a, b) and (b, a) differ.
  return splitmix64(splitmix64(a ^ 0x2545f4914f6cdd1dull) ^ b);
}

std::uint64_t mod_mersenne61(unsigned __int128 x) {
  std::uint64_t r = (static_cast<std::uint64_t>(x) & kHashPrime) +
                    static_cast<std::uint64_t>(x >> 61);
  r = (r & kHashPrime) + (r >> 61);
  return r >= kHashPrime ? r - kHashPrime : r;
}

std::uint64_t poly_hash_eval(const PolyHash& h, std::uint64_t key) {
  if (h.modulus == kHashPrime) {
    const std::uint64_t k = mod_mersenne61(key);
    std::uint64_t v = 0;
    for (int d = 5; d >= 0; --d) {
      v = mod_mersenne61(static_cast<unsigned __int128>(v) * k + h.coeffs[d]);
    }
    return v;
  }
  // Generic-modulus path for small-prime test instantiations.
  const std::uint64_t m = h.modulus;
  const std::uint64_t k = key % m;
  std::uint64_t v = 0;
  for (int d = 5; d >= 0; --d) {
    v = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(v) * k + h.coeffs[d]) % m);
  }
  return v;
}

std::uint64_t to_range(std::uint64_t value, std::uint64_t modulus,
                       std::uint64_t m) {
  if (m == 0 || m > (std::uint64_t{1} << 32)) {
    throw BadRange("to_range requires 0 < m <= 2^32, got " +
                   std::to_string(m));
  }
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(value) * m / modulus);
}

std::uint64_t range64(std::uint64_t value, std::uint64_t m) {
  if (m == 0) {
    throw BadRange("range64 requires m > 0");
  }
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(value) * m) >> 64);
}

bool coin64(std::uint64_t value, std::uint64_t num, std::uint64_t den) {
  return static_cast<unsigned __int128>(value) * den <
         (static_cast<unsigned __int128>(num) << 64);
}

PolyHash make_poly_hash(std::uint64_t seed, std::uint32_t component,
                        std::uint64_t modulus) {
  PolyHash h;
  h.modulus = modulus;
  for (std::uint32_t d = 0; d < 6; ++d) {
    const StreamKey sk{seed, kDomainPolyCoeff,
                       (std::uint64_t{component} << 32) | d};
    const std::uint64_t raw = draw(sk, 0);
    // Reduction bias is at most 2^64 mod modulus out of 2^64 draws; for the
    // production Mersenne prime that is 8 / 2^64 per residue.
    h.coeffs[d] = modulus == kHashPrime ? mod_mersenne61(raw) : raw % modulus;
  }
  return h;
}

}  // namespace bisp
