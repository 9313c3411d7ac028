#pragma once

#include <stdexcept>
#include <string>

namespace cinorm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two operands live in different groups.
class DescriptorMismatch : public Error {
 public:
  using Error::Error;
};

/// Malformed descriptor, literal, or argument.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Operation requires a finite (or enumerable) group.
class InfiniteGroup : public Error {
 public:
  using Error::Error;
};

/// An enumeration or search budget was exceeded.
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace cinorm
