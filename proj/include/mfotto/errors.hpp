#pragma once

#include <stdexcept>
#include <string>

namespace mfotto {

/// Invalid physical or numerical parameters supplied by the caller.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed (non-convergence, non-Hermitian input, ...).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Level tracking could not resolve a crossing at maximal refinement.
class ContinuationError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Two-tangle bracket does not straddle the threshold.
class NoThresholdError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace mfotto
