#pragma once

#include <string>

#include "choicestat/estimation.hpp"
#include "choicestat/inference.hpp"

namespace choicestat {

/// Wald, LR and LM tests of one parameter restriction (parameter = h0).
struct RestrictionTests {
  std::string parameter;
  double h0_value = 0.0;
  TestResult wald;
  TestResult lr;
  TestResult lm;
  double ll_restricted = 0.0;
  EstimationStatus restricted_status = EstimationStatus::converged;
  /// The general-model Hessian at the restricted estimates was not negative
  /// definite and the BHHH matrix served as information instead.
  bool lm_used_bhhh = false;
};

/// `general` must be the converged estimate of `likelihood`'s model; `wald_se`
/// is the standard error used for the Wald statistic. Throws EstimationError
/// when the restricted model does not converge.
RestrictionTests restriction_tests(const Dataset& data, const SampleLikelihood& likelihood,
                                   const EstimationResult& general, const std::string& parameter,
                                   double h0_value, double wald_se,
                                   const EstimationOptions& options = {});

}  // namespace choicestat
