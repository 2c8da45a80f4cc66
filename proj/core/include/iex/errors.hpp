#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace iex {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct NonFiniteError : Error {
  using Error::Error;
};

/// The point lies in the exceptional cone {gauge = 0}; polar coordinates do
/// not exist there.
struct ConeError : Error {
  using Error::Error;
};

/// Every loss in a block is zero, so the implicit argmax is undefined.
struct DegenerateBlockError : Error {
  using Error::Error;
};

/// The normalizing-constant integral fails to stabilize; the pair (f, nu)
/// does not define a valid limit law.
struct DivergenceError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct ParseError : Error {
  std::size_t position;
  ParseError(const std::string& what, std::size_t pos) : Error(what), position(pos) {}
};

}  // namespace iex
