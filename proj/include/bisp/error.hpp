#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bisp {

// Base for every failure the library can raise. Subtypes exist so callers
// (the CLI, tests) can map failure classes to exit codes without parsing
// message text.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// finite_plane
struct NotPrime : Error {
  using Error::Error;
};
struct TooLarge : Error {
  using Error::Error;
};
struct IndexOutOfRange : Error {
  using Error::Error;
};

// explicit_system
struct MissingPair : Error {
  MissingPair(std::uint32_t i, std::uint32_t j)
      : Error("no s row stored for positive-weight pair (" + std::to_string(i) +
              ", " + std::to_string(j) + ")"),
        i(i),
        j(j) {}
  std::uint32_t i, j;
};
struct NotIntersecting : Error {
  NotIntersecting(std::uint32_t i, std::uint32_t j)
      : Error("sets " + std::to_string(i) + " and " + std::to_string(j) +
              " have empty intersection"),
        i(i),
        j(j) {}
  std::uint32_t i, j;
};
struct BlockTooLarge : Error {
  using Error::Error;
};
struct EmptyFamily : Error {
  using Error::Error;
};
struct TooLargeForExhaustive : Error {
  using Error::Error;
};
struct BadWitness : Error {
  using Error::Error;
};
struct OverlappingSubsets : Error {
  using Error::Error;
};

// layered_sampler
struct InvalidN : Error {
  using Error::Error;
};
struct LabelMismatch : Error {
  using Error::Error;
};
struct TooLargeToMaterialize : Error {
  using Error::Error;
};

// randomness
struct BadRange : Error {
  using Error::Error;
};

// graphs / analysis / io
struct ParseError : Error {
  ParseError(std::uint64_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::uint64_t line;
};
struct IoError : Error {
  using Error::Error;
};
struct EmptyInput : Error {
  using Error::Error;
};
struct PartitionOutOfRange : Error {
  using Error::Error;
};
struct NotComplete : Error {
  using Error::Error;
};

// partitioner
struct NoGridShape : Error {
  using Error::Error;
};

}  // namespace bisp
