#include "bisp/graphs.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace bisp {

namespace {

bool parse_u64(const std::string& text, std::size_t& pos,
               std::uint64_t& out) {
  while (pos < text.size() &&
         std::isspace(static_cast<unsigned char>(text[pos]))) {
    ++pos;
  }
  const std::size_t start = pos;
  std::uint64_t value = 0;
  while (pos < text.size() &&
         std::isdigit(static_cast<unsigned char>(text[pos]))) {
    const std::uint64_t digit = text[pos] - '0';
    if (value > (UINT64_MAX - digit) / 10) return false;
    value = value * 10 + digit;
    ++pos;
  }
  if (pos == start) return false;
  out = value;
  return true;
}

bool blank_or_comment(const std::string& line) {
  for (const char c : line) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '#';
  }
  return true;
}

}  // namespace

std::optional<Edge> EdgeListReader::next() {
  std::string line;
  while (std::getline(*in_, line)) {
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank_or_comment(line)) continue;
    std::size_t pos = 0;
    Edge e;
    if (!parse_u64(line, pos, e.src) || !parse_u64(line, pos, e.dst)) {
      throw ParseError(line_, "expected two integers, got \"" + line + "\"");
    }
    while (pos < line.size() &&
           std::isspace(static_cast<unsigned char>(line[pos]))) {
      ++pos;
    }
    if (pos != line.size()) {
      throw ParseError(line_, "trailing content after edge: \"" + line + "\"");
    }
    return e;
  }
  if (in_->bad()) throw IoError("read failure on edge list input");
  return std::nullopt;
}

std::optional<Edge> CompleteSource::next() {
  if (i_ >= nodes_) return std::nullopt;
  const Edge e{i_, j_};
  if (++j_ >= nodes_) {
    j_ = 0;
    ++i_;
  }
  return e;
}

ErdosRenyiSource::ErdosRenyiSource(std::uint64_t nodes, std::uint64_t edges,
                                   std::uint64_t seed)
    : nodes_(nodes), edges_(edges), seed_(seed) {
  if (nodes == 0) throw Error("node count must be positive");
}

std::optional<Edge> ErdosRenyiSource::next() {
  if (k_ >= edges_) return std::nullopt;
  const StreamKey sk{seed_, kDomainGenerator, k_};
  const Edge e{range64(draw(sk, 0), nodes_), range64(draw(sk, 1), nodes_)};
  ++k_;
  return e;
}

PowerLawSource::PowerLawSource(std::uint64_t nodes, std::uint64_t edges,
                               double alpha, std::uint64_t seed)
    : nodes_(nodes), edges_(edges), seed_(seed) {
  if (nodes == 0) throw Error("node count must be positive");
  if (!(alpha > 1.0)) throw Error("power-law exponent must exceed 1");
  const double beta = 1.0 / (alpha - 1.0);
  cdf_.reserve(nodes);
  double total = 0.0;
  for (std::uint64_t v = 0; v < nodes; ++v) {
    total += std::pow(static_cast<double>(v + 1), -beta);
    cdf_.push_back(total);
  }
  for (double& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

std::uint64_t PowerLawSource::pick(std::uint64_t value) const {
  // Top 11 bits dropped so the quotient is an exact double in [0, 1).
  const double u =
      static_cast<double>(value >> 11) * 0x1.0p-53;
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<std::uint64_t>(
      std::min<std::ptrdiff_t>(it - cdf_.begin(),
                               static_cast<std::ptrdiff_t>(nodes_) - 1));
}

std::optional<Edge> PowerLawSource::next() {
  if (k_ >= edges_) return std::nullopt;
  const StreamKey sk{seed_, kDomainGenerator, k_};
  const Edge e{pick(draw(sk, 0)), pick(draw(sk, 1))};
  ++k_;
  return e;
}

std::vector<Edge> collect(EdgeSource& source) {
  std::vector<Edge> edges;
  while (auto e = source.next()) edges.push_back(*e);
  return edges;
}

void write_edge_list(std::ostream& out, EdgeSource& source) {
  while (auto e = source.next()) {
    out << e->src << ' ' << e->dst << '\n';
  }
}

std::vector<Edge> star_edges(std::uint64_t leaves) {
  std::vector<Edge> edges;
  edges.reserve(leaves);
  for (std::uint64_t v = 1; v <= leaves; ++v) edges.push_back({0, v});
  return edges;
}

}  // namespace bisp
