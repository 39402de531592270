#pragma once

#include <stdexcept>
#include <string>

namespace lscan {

// Input problems map to exit code 2, numerical ones to exit code 3.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonFinite : NumericalError {
  using NumericalError::NumericalError;
};
struct ConvergenceFailure : NumericalError {
  using NumericalError::NumericalError;
};
struct NotPositiveDefinite : NumericalError {
  using NumericalError::NumericalError;
};
struct DegenerateRange : NumericalError {
  using NumericalError::NumericalError;
};
struct BudgetExceeded : NumericalError {
  using NumericalError::NumericalError;
};

struct NotHermitian : ValidationError {
  using ValidationError::ValidationError;
};
struct InvalidSpan : ValidationError {
  using ValidationError::ValidationError;
};
struct OutOfDomain : ValidationError {
  using ValidationError::ValidationError;
};
struct ShapeMismatch : ValidationError {
  using ValidationError::ValidationError;
};
struct TooLarge : ValidationError {
  using ValidationError::ValidationError;
};

}  // namespace lscan
