#pragma once

#include <stdexcept>
#include <string>

namespace lexcon {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Misconfiguration (e.g. a reference to an undeclared sort). Never used for
/// ordinary unification failure.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Raised by the solver for calls to predicates with no definition.
class SolveError : public Error {
 public:
  using Error::Error;
};

}  // namespace lexcon
