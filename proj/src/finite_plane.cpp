#include "bisp/finite_plane.hpp"

#include <algorithm>
#include <string>

namespace bisp {

bool is_prime(std::uint64_t q) {
  if (q < 2) return false;
  if (q % 2 == 0) return q == 2;
  for (std::uint64_t d = 3; d * d <= q; d += 2) {
    if (q % d == 0) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (!is_prime(p)) {
    throw NotPrime("modulus " + std::to_string(p) + " is not prime");
  }
}

std::uint32_t PrimeField::pow(std::uint32_t a, std::uint64_t e) const {
  std::uint32_t r = 1 % p_;
  while (e > 0) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::uint32_t PrimeField::inv(std::uint32_t a) const { return pow(a, p_ - 2); }

Triple ProjectivePlane::canonicalize(const Triple& t) const {
  for (std::uint32_t c = 0; c < 3; ++c) {
    if (t[c] != 0) {
      const std::uint32_t s = field_.inv(t[c]);
      Triple out{};
      for (std::uint32_t d = 0; d < 3; ++d) out[d] = field_.mul(t[d], s);
      return out;
    }
  }
  throw IndexOutOfRange("cannot canonicalize the zero triple");
}

std::uint32_t ProjectivePlane::index_of(const Triple& canonical) const {
  const auto it = std::lower_bound(reps_.begin(), reps_.end(), canonical);
  if (it == reps_.end() || *it != canonical) {
    throw IndexOutOfRange("triple is not a canonical representative");
  }
  return static_cast<std::uint32_t>(it - reps_.begin());
}

ProjectivePlane::ProjectivePlane(std::uint32_t q) : field_(q), q_(q) {
  if (q > kMaxOrder) {
    throw TooLarge("plane order " + std::to_string(q) + " exceeds cap " +
                   std::to_string(kMaxOrder));
  }
  const std::uint32_t n = q * q + q + 1;
  reps_.reserve(n);
  // One representative per projective class: (1,a,b), (0,1,a), (0,0,1).
  for (std::uint32_t a = 0; a < q; ++a) {
    for (std::uint32_t b = 0; b < q; ++b) reps_.push_back({1, a, b});
  }
  for (std::uint32_t a = 0; a < q; ++a) reps_.push_back({0, 1, a});
  reps_.push_back({0, 0, 1});
  std::sort(reps_.begin(), reps_.end());

  // Enumerate each line's q+1 points directly from the null space of its
  // triple rather than scanning all points.
  incidence_.assign(std::uint64_t{n} * (q + 1), 0);
  std::vector<std::uint32_t> row;
  for (std::uint32_t li = 0; li < n; ++li) {
    const Triple& l = reps_[li];
    row.clear();
    auto push = [&](Triple t) { row.push_back(index_of(canonicalize(t))); };
    if (l[0] != 0) {
      // x = -(b*y + c*z) with l = (1, b, c) after canonicalization.
      push({field_.neg(l[2]), 0, 1});
      for (std::uint32_t t = 0; t < q; ++t) {
        push({field_.neg(field_.add(l[1], field_.mul(l[2], t))), 1, t});
      }
    } else if (l[1] != 0) {
      // l = (0, 1, c): y = -c*z.
      push({1, 0, 0});
      for (std::uint32_t x = 0; x < q; ++x) {
        push({x, field_.neg(l[2]), 1});
      }
    } else {
      // l = (0, 0, 1): z = 0.
      push({0, 1, 0});
      for (std::uint32_t t = 0; t < q; ++t) push({1, t, 0});
    }
    std::sort(row.begin(), row.end());
    std::copy(row.begin(), row.end(),
              incidence_.begin() + std::uint64_t{li} * (q + 1));
  }
}

void ProjectivePlane::check_line(std::uint32_t line) const {
  if (line >= size()) {
    throw IndexOutOfRange("line index " + std::to_string(line) +
                          " out of range for plane of size " +
                          std::to_string(size()));
  }
}

std::span<const std::uint32_t> ProjectivePlane::line_points(
    std::uint32_t line) const {
  check_line(line);
  return {incidence_.data() + std::uint64_t{line} * (q_ + 1), q_ + 1};
}

std::uint32_t ProjectivePlane::meet(std::uint32_t a, std::uint32_t b) const {
  check_line(a);
  check_line(b);
  const Triple& u = reps_[a];
  const Triple& v = reps_[b];
  const Triple cross{
      field_.sub(field_.mul(u[1], v[2]), field_.mul(u[2], v[1])),
      field_.sub(field_.mul(u[2], v[0]), field_.mul(u[0], v[2])),
      field_.sub(field_.mul(u[0], v[1]), field_.mul(u[1], v[0]))};
  return index_of(canonicalize(cross));
}

std::vector<std::uint32_t> ProjectivePlane::intersect_lines(
    std::uint32_t a, std::uint32_t b) const {
  check_line(a);
  check_line(b);
  if (a == b) {
    const auto pts = line_points(a);
    return {pts.begin(), pts.end()};
  }
  return {meet(a, b)};
}

ProjectivePlane build_plane(std::uint32_t q) { return ProjectivePlane(q); }

}  // namespace bisp
