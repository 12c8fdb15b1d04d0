#pragma once

#include <stdexcept>
#include <string>

namespace nogo {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

/// An input violates the invariants of the type it is being turned into.
class ValidationError : public Error {
public:
  using Error::Error;
};

class ConvergenceError : public Error {
public:
  using Error::Error;
};

/// Linear system without a unique solution.
class SingularSystemError : public Error {
public:
  using Error::Error;
};

/// Linear program with an empty feasible set.
class InfeasibleError : public Error {
public:
  using Error::Error;
};

/// Linear program whose objective is unbounded over the feasible set.
class UnboundedError : public Error {
public:
  using Error::Error;
};

/// A checker could not draw a conclusion (no comparable tuples).
class InconclusiveCheck : public Error {
public:
  using Error::Error;
};

} // namespace nogo
