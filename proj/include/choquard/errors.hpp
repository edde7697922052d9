#pragma once

#include <stdexcept>
#include <string>

namespace choquard {

// Invalid parameters or arguments outside an operation's domain.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Base for failures of the numerics themselves.
struct NumericFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The Riesz potential of the input is infinite (the tail is not integrable
// against the kernel).
struct TailDivergence : NumericFailure {
  using NumericFailure::NumericFailure;
};

struct QuadratureFailure : NumericFailure {
  using NumericFailure::NumericFailure;
};

struct StiffnessFailure : NumericFailure {
  using NumericFailure::NumericFailure;
};

// The paper states no decay rate for the requested tuple.
struct NoDecayClaim : DomainError {
  using DomainError::DomainError;
};

}  // namespace choquard

namespace choquard {

// No μ on the search ladder makes the candidate a certified supersolution.
struct NoAdmissibleMu : NumericFailure {
  using NumericFailure::NumericFailure;
};

}  // namespace choquard
