#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "bisp/error.hpp"
#include "bisp/randomness.hpp"

namespace bisp {

struct Edge {
  std::uint64_t src = 0;
  std::uint64_t dst = 0;

  bool operator==(const Edge&) const = default;
};

// Single-pass pull source of directed edges. Duplicates and loops are
// preserved; ids are arbitrary 64-bit values.
class EdgeSource {
 public:
  virtual ~EdgeSource() = default;
  virtual std::optional<Edge> next() = 0;
};

// Text edge lists: one edge per line, two decimal integers separated by
// whitespace; blank lines and lines starting with '#' are skipped.
class EdgeListReader final : public EdgeSource {
 public:
  explicit EdgeListReader(std::istream& in) : in_(&in) {}
  std::optional<Edge> next() override;

 private:
  std::istream* in_;
  std::uint64_t line_ = 0;
};

// All N^2 ordered pairs including loops, row-major.
class CompleteSource final : public EdgeSource {
 public:
  explicit CompleteSource(std::uint64_t nodes) : nodes_(nodes) {}
  std::optional<Edge> next() override;

 private:
  std::uint64_t nodes_;
  std::uint64_t i_ = 0, j_ = 0;
};

// M independent uniform ordered pairs over [0, N)^2; pure in (N, M, seed).
class ErdosRenyiSource final : public EdgeSource {
 public:
  ErdosRenyiSource(std::uint64_t nodes, std::uint64_t edges,
                   std::uint64_t seed);
  std::optional<Edge> next() override;

 private:
  std::uint64_t nodes_, edges_, seed_;
  std::uint64_t k_ = 0;
};

// Chung-Lu style power law: each endpoint sampled independently with
// probability proportional to (v+1)^(-1/(alpha-1)); pure in the parameters.
class PowerLawSource final : public EdgeSource {
 public:
  PowerLawSource(std::uint64_t nodes, std::uint64_t edges, double alpha,
                 std::uint64_t seed);
  std::optional<Edge> next() override;

 private:
  std::uint64_t pick(std::uint64_t value) const;

  std::uint64_t nodes_, edges_, seed_;
  std::uint64_t k_ = 0;
  std::vector<double> cdf_;
};

class VectorSource final : public EdgeSource {
 public:
  explicit VectorSource(std::vector<Edge> edges) : edges_(std::move(edges)) {}
  std::optional<Edge> next() override {
    if (k_ >= edges_.size()) return std::nullopt;
    return edges_[k_++];
  }

 private:
  std::vector<Edge> edges_;
  std::size_t k_ = 0;
};

std::vector<Edge> collect(EdgeSource& source);

// "src dst" lines; read_edge_list round-trips this exactly.
void write_edge_list(std::ostream& out, EdgeSource& source);

std::vector<Edge> star_edges(std::uint64_t leaves);

}  // namespace bisp
