#pragma once

#include <stdexcept>
#include <string>

namespace ssg {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad indices, bad exponents, unparsable text.
class InputError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its precondition (e.g. non-normal subgroup).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A configured resource ceiling would be exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace ssg
