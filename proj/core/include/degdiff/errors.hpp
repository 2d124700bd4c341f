#pragma once

#include <stdexcept>
#include <string>

namespace degdiff {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (s < 0, t < t0, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// A model parameter violates the constraints of its family (λ ≤ 2, β ≤ 1, ...).
class ParameterError : public Error {
public:
  using Error::Error;
};

/// An improper integral failed to converge. Carries the partial sum reached.
class DivergenceError : public Error {
public:
  DivergenceError(const std::string& what, double partial_sum)
      : Error(what), partial_sum_(partial_sum) {}

  double partial_sum() const noexcept { return partial_sum_; }

private:
  double partial_sum_;
};

/// The explicit time step required by the CFL bound underflowed.
class StiffnessError : public Error {
public:
  using Error::Error;
};

/// A discrete invariant that the scheme guarantees was observed broken.
class InternalInvariantError : public Error {
public:
  using Error::Error;
};

}  // namespace degdiff
