#pragma once

#include <stdexcept>
#include <string>

namespace reachlp {

// Precondition violations and hard domain failures are thrown.
// Solver pathologies (infeasible, unbounded, iteration cap) are reported
// through status flags instead, never as exceptions.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct PivotTooSmall : Error {
  using Error::Error;
};

struct DivisionByZeroInterval : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace reachlp
