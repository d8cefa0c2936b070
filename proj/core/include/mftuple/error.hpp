#pragma once

#include <stdexcept>
#include <string>

namespace mft {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (bad targets, duplicate
/// offsets, inadmissible tuple, ...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// A configured resource cap (prime stream, plan size) was reached.
class LimitExceeded : public Error {
public:
  using Error::Error;
};

} // namespace mft
