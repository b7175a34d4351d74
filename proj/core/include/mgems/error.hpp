#pragma once

#include <stdexcept>
#include <string>

namespace mgems {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter set or input violates a documented invariant.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A state lies outside the stock bounds by more than the admissibility tolerance.
class InfeasibleStateError : public Error {
 public:
  using Error::Error;
};

/// The LP layer failed (infeasible where feasibility is structural, or numerical trouble).
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Reading or writing an artifact file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mgems
