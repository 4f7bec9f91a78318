#pragma once

#include <stdexcept>
#include <string>

namespace starpack {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed graph text, packing JSON or instance parameters.
class ParseError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its contract (wrong star size, bad constraint, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Iteration, node or size budget exhausted.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace starpack
