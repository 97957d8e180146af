#pragma once

#include <stdexcept>
#include <string>

namespace geomlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its domain (bad sizes, parity, ranges...).
/// The CLI maps this to exit code 2.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A retry loop or size guard ran out of budget. The CLI maps this to exit code 3.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace geomlab
