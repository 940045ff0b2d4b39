#pragma once

#include <stdexcept>
#include <string>

namespace sbc {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its documented domain.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A link has zero average power, so no beam fraction can be formed.
class DegenerateLink : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's precondition (e.g. a beam outside a signature).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// An exhaustive oracle was asked to enumerate more than it is allowed to.
class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

/// Configuration text could not be turned into a valid scenario.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sbc
