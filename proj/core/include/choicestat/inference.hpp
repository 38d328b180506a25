#pragma once

#include <string>

#include <Eigen/Dense>

#include "choicestat/model_spec.hpp"

namespace choicestat {

enum class TestMethod { t_ratio, wald, lr, lm };
enum class Sidedness { one_sided_less, one_sided_greater, two_sided, chi_square };

std::string to_string(TestMethod m);
std::string to_string(Sidedness s);
TestMethod test_method_from_string(const std::string& s);
Sidedness sidedness_from_string(const std::string& s);
/// "1-sided", "2-sided" or "chi-square", as used in table annotations.
std::string short_label(Sidedness s);

struct TestResult {
  TestMethod method = TestMethod::t_ratio;
  double statistic = 0.0;
  int df = 1;
  /// Always the resolved direction, never "auto".
  Sidedness sidedness = Sidedness::two_sided;
  double p_value = 1.0;
  std::string h0_description;
  /// The estimate lies on the opposite side of a declared one-sided alternative.
  bool sign_conflict = false;
};

/// Rejects H0 when p < alpha (alpha = 0 never rejects).
inline bool rejects(const TestResult& t, double alpha) { return t.p_value < alpha; }

enum class IntervalMethod {
  asymptotic_classical,
  asymptotic_robust,
  asymptotic_bootstrap_se,
  bootstrap_quantile,
  hpd
};

std::string to_string(IntervalMethod m);
IntervalMethod interval_method_from_string(const std::string& s);

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  IntervalMethod method = IntervalMethod::asymptotic_classical;
  double asymmetry_index = 0.0;
  /// Free-form remark (interpolated quantiles, truncated tails).
  std::string note;

  double width() const { return upper - lower; }
  bool contains(double value) const { return lower <= value && value <= upper; }
};

/// t = (estimate - h0) / se against a normal reference. `automatic` resolves
/// to the one-sided alternative on the side of the estimate.
TestResult t_test(double estimate, double se, double h0_value, Alternative alternative);

/// Scalar Wald test, W = t^2 against chi-square(1).
TestResult wald_test(double estimate, double se, double h0_value);

/// LR = 2 (ll_general - ll_restricted), clamped at zero. Throws InputError
/// when the restricted model fits better by more than 1e-8 (not nested or not
/// converged).
TestResult lr_test(double ll_general, double ll_restricted, int restrictions);

/// LM = G' I^-1 G with the score and information of the general model at the
/// restricted estimates. Throws IdentificationError for a singular I.
TestResult lm_test(const Eigen::VectorXd& score, const Eigen::MatrixXd& information,
                   int restrictions);

/// Two-sided normal critical value for a confidence level.
double critical_value(double level);

ConfidenceInterval asymptotic_ci(double estimate, double se, double level,
                                 IntervalMethod method = IntervalMethod::asymptotic_classical);

struct BoundedParameterTests {
  TestResult at_upper;  // H0: value = upper vs H1: value < upper
  TestResult at_lower;  // H0: value = lower vs H1: value > lower
  /// Asymptotic probability mass outside [lower, upper].
  double p_outside = 0.0;
};

BoundedParameterTests bounded_parameter_test(double estimate, double se, double lower_bound,
                                             double upper_bound);

}  // namespace choicestat
