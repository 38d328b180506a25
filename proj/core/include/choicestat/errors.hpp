#pragma once

#include <stdexcept>
#include <string>

namespace choicestat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent caller input (bad arguments, broken files).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Model specification references something the data does not provide.
class SpecificationError : public InputError {
 public:
  using InputError::InputError;
};

/// A matrix that must be inverted is singular or numerically close to it.
class IdentificationError : public Error {
 public:
  IdentificationError(const std::string& what, double condition_ratio)
      : Error(what), condition_ratio_(condition_ratio) {}

  /// Smallest over largest absolute eigenvalue of the offending matrix.
  double condition_ratio() const noexcept { return condition_ratio_; }

 private:
  double condition_ratio_;
};

/// Optimisation did not produce a usable estimate.
class EstimationError : public Error {
 public:
  using Error::Error;
};

/// A covariance matrix produced an impossible quantity (negative variance).
class CovarianceError : public Error {
 public:
  using Error::Error;
};

/// Evaluation of a user function failed (non-finite value).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Not enough usable draws for a resampling statistic.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// A requested table layout breaks a reporting rule.
class ReportingError : public Error {
 public:
  using Error::Error;
};

}  // namespace choicestat
