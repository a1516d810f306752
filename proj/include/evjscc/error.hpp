#pragma once

#include <stdexcept>
#include <string>

namespace evjscc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Raised when an argument violates a documented precondition.
class InvalidArgument : public Error
{
public:
  using Error::Error;
};

} // namespace evjscc
