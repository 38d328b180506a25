#include "choicestat/inference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "choicestat/distributions.hpp"
#include "choicestat/errors.hpp"
#include "choicestat/linalg.hpp"

namespace choicestat {

std::string to_string(TestMethod m) {
  switch (m) {
    case TestMethod::t_ratio: return "t_ratio";
    case TestMethod::wald: return "wald";
    case TestMethod::lr: return "lr";
    case TestMethod::lm: return "lm";
  }
  return "t_ratio";
}

std::string to_string(Sidedness s) {
  switch (s) {
    case Sidedness::one_sided_less: return "one_sided_less";
    case Sidedness::one_sided_greater: return "one_sided_greater";
    case Sidedness::two_sided: return "two_sided";
    case Sidedness::chi_square: return "chi_square";
  }
  return "two_sided";
}

TestMethod test_method_from_string(const std::string& s) {
  for (auto m : {TestMethod::t_ratio, TestMethod::wald, TestMethod::lr, TestMethod::lm}) {
    if (to_string(m) == s) return m;
  }
  throw InputError("unknown test method '" + s + "'");
}

Sidedness sidedness_from_string(const std::string& s) {
  for (auto v : {Sidedness::one_sided_less, Sidedness::one_sided_greater, Sidedness::two_sided,
                 Sidedness::chi_square}) {
    if (to_string(v) == s) return v;
  }
  throw InputError("unknown sidedness '" + s + "'");
}

std::string short_label(Sidedness s) {
  switch (s) {
    case Sidedness::one_sided_less:
    case Sidedness::one_sided_greater: return "1-sided";
    case Sidedness::two_sided: return "2-sided";
    case Sidedness::chi_square: return "chi-square";
  }
  return "2-sided";
}

std::string to_string(IntervalMethod m) {
  switch (m) {
    case IntervalMethod::asymptotic_classical: return "asymptotic_classical";
    case IntervalMethod::asymptotic_robust: return "asymptotic_robust";
    case IntervalMethod::asymptotic_bootstrap_se: return "asymptotic_bootstrap_se";
    case IntervalMethod::bootstrap_quantile: return "bootstrap_quantile";
    case IntervalMethod::hpd: return "hpd";
  }
  return "asymptotic_classical";
}

IntervalMethod interval_method_from_string(const std::string& s) {
  for (auto m : {IntervalMethod::asymptotic_classical, IntervalMethod::asymptotic_robust,
                 IntervalMethod::asymptotic_bootstrap_se, IntervalMethod::bootstrap_quantile,
                 IntervalMethod::hpd}) {
    if (to_string(m) == s) return m;
  }
  throw InputError("unknown interval method '" + s + "'");
}

namespace {

std::string describe_h0(double h0, Sidedness s) {
  std::ostringstream out;
  out << "H0: value = " << h0;
  switch (s) {
    case Sidedness::one_sided_less: out << " vs H1: value < " << h0; break;
    case Sidedness::one_sided_greater: out << " vs H1: value > " << h0; break;
    default: out << " vs H1: value != " << h0; break;
  }
  return out.str();
}

void require_positive_se(double se) {
  if (!(se > 0.0) || !std::isfinite(se)) throw InputError("standard error must be positive and finite");
}

}  // namespace

TestResult t_test(double estimate, double se, double h0_value, Alternative alternative) {
  require_positive_se(se);
  TestResult r;
  r.method = TestMethod::t_ratio;
  r.df = 1;
  r.statistic = (estimate - h0_value) / se;
  const double t = r.statistic;

  switch (alternative) {
    case Alternative::less: r.sidedness = Sidedness::one_sided_less; break;
    case Alternative::greater: r.sidedness = Sidedness::one_sided_greater; break;
    case Alternative::two_sided: r.sidedness = Sidedness::two_sided; break;
    case Alternative::automatic:
      r.sidedness = t < 0.0 ? Sidedness::one_sided_less : Sidedness::one_sided_greater;
      break;
  }
  switch (r.sidedness) {
    case Sidedness::one_sided_less:
      r.p_value = normal_cdf(t);
      r.sign_conflict = t > 0.0;
      break;
    case Sidedness::one_sided_greater:
      r.p_value = normal_cdf(-t);
      r.sign_conflict = t < 0.0;
      break;
    default:
      r.p_value = 2.0 * normal_cdf(-std::abs(t));
      break;
  }
  r.p_value = std::clamp(r.p_value, 0.0, 1.0);
  r.h0_description = describe_h0(h0_value, r.sidedness);
  return r;
}

TestResult wald_test(double estimate, double se, double h0_value) {
  require_positive_se(se);
  TestResult r;
  r.method = TestMethod::wald;
  r.df = 1;
  r.sidedness = Sidedness::chi_square;
  const double t = (estimate - h0_value) / se;
  r.statistic = t * t;
  r.p_value = chisq_sf(r.statistic, 1);
  r.h0_description = describe_h0(h0_value, Sidedness::two_sided);
  return r;
}

TestResult lr_test(double ll_general, double ll_restricted, int restrictions) {
  if (restrictions < 1) throw InputError("LR test needs at least one restriction");
  if (!std::isfinite(ll_general) || !std::isfinite(ll_restricted)) {
    throw InputError("LR test needs finite log-likelihoods");
  }
  if (ll_general < ll_restricted - 1e-8) {
    throw InputError("restricted model fits better than the general model; the models are not "
                     "nested or an estimation did not converge");
  }
  TestResult r;
  r.method = TestMethod::lr;
  r.df = restrictions;
  r.sidedness = Sidedness::chi_square;
  r.statistic = std::max(0.0, 2.0 * (ll_general - ll_restricted));
  r.p_value = chisq_sf(r.statistic, restrictions);
  r.h0_description = "H0: restricted model (" + std::to_string(restrictions) + " restrictions)";
  return r;
}

TestResult lm_test(const Eigen::VectorXd& score, const Eigen::MatrixXd& information,
                   int restrictions) {
  if (restrictions < 1) throw InputError("LM test needs at least one restriction");
  if (information.rows() != score.size() || information.cols() != score.size()) {
    throw InputError("LM score and information dimensions disagree");
  }
  const Eigen::MatrixXd inv = invert_symmetric(information, "information matrix");
  TestResult r;
  r.method = TestMethod::lm;
  r.df = restrictions;
  r.sidedness = Sidedness::chi_square;
  r.statistic = std::max(0.0, score.dot(inv * score));
  r.p_value = chisq_sf(r.statistic, restrictions);
  r.h0_description = "H0: restricted model (" + std::to_string(restrictions) + " restrictions)";
  return r;
}

double critical_value(double level) {
  if (!(level > 0.0 && level < 1.0)) throw InputError("confidence level must lie in (0, 1)");
  return normal_quantile(1.0 - (1.0 - level) / 2.0);
}

ConfidenceInterval asymptotic_ci(double estimate, double se, double level, IntervalMethod method) {
  if (!(se >= 0.0)) throw InputError("standard error must be non-negative");
  const double half = critical_value(level) * se;
  ConfidenceInterval ci;
  ci.lower = estimate - half;
  ci.upper = estimate + half;
  ci.level = level;
  ci.method = method;
  ci.asymmetry_index = 0.0;
  return ci;
}

BoundedParameterTests bounded_parameter_test(double estimate, double se, double lower_bound,
                                             double upper_bound) {
  if (!(lower_bound < upper_bound)) throw InputError("bounds must satisfy lower < upper");
  require_positive_se(se);
  BoundedParameterTests out;
  out.at_upper = t_test(estimate, se, upper_bound, Alternative::less);
  out.at_lower = t_test(estimate, se, lower_bound, Alternative::greater);
  out.p_outside = normal_cdf((lower_bound - estimate) / se) + normal_cdf((estimate - upper_bound) / se);
  return out;
}

}  // namespace choicestat
