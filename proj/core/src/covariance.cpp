#include "choicestat/covariance.hpp"

#include <algorithm>
#include <cmath>

#include "choicestat/errors.hpp"
#include "choicestat/linalg.hpp"

namespace choicestat {

CovarianceSet covariance_set(const Eigen::MatrixXd& hessian, const Eigen::MatrixXd& scores,
                             ScoreGrouping grouping, const std::vector<std::string>& names) {
  if (hessian.rows() != hessian.cols() || scores.cols() != hessian.cols()) {
    throw InputError("Hessian and score matrix dimensions disagree");
  }
  const Eigen::MatrixXd h_inv = invert_symmetric(hessian, "Hessian");
  const Eigen::MatrixXd outer = scores.transpose() * scores;

  CovarianceSet out;
  out.grouping = grouping;
  out.classical = symmetrise(-h_inv);
  out.bhhh = invert_symmetric(outer, "score outer product");
  out.robust = symmetrise(h_inv * outer * h_inv);
  out.se_classical = standard_errors(out.classical, names);
  out.se_bhhh = standard_errors(out.bhhh, names);
  out.se_robust = standard_errors(out.robust, names);
  return out;
}

Eigen::VectorXd standard_errors(const Eigen::MatrixXd& cov, const std::vector<std::string>& names) {
  if (cov.rows() != cov.cols()) throw InputError("covariance matrix must be square");
  Eigen::VectorXd se(cov.rows());
  for (Eigen::Index k = 0; k < cov.rows(); ++k) {
    const double v = cov(k, k);
    if (!(v >= 0.0)) {
      const auto idx = static_cast<std::size_t>(k);
      const std::string name = idx < names.size() ? names[idx] : "#" + std::to_string(k);
      throw CovarianceError("negative variance for parameter '" + name +
                            "'; the Hessian is not negative definite at this point");
    }
    se(k) = std::sqrt(v);
  }
  return se;
}

DeltaMethodResult delta_method(const Eigen::VectorXd& params, const Eigen::MatrixXd& cov,
                               const std::function<double(const Eigen::VectorXd&)>& func) {
  if (cov.rows() != params.size() || cov.cols() != params.size()) {
    throw InputError("covariance dimension does not match the parameter vector");
  }
  DeltaMethodResult out;
  out.value = func(params);
  if (!std::isfinite(out.value)) throw EvaluationError("function is not finite at the estimates");

  Eigen::VectorXd grad(params.size());
  for (Eigen::Index k = 0; k < params.size(); ++k) {
    const double h = 1e-7 * std::max(1.0, std::abs(params(k)));
    Eigen::VectorXd up = params;
    Eigen::VectorXd down = params;
    up(k) += h;
    down(k) -= h;
    const double f_up = func(up);
    const double f_down = func(down);
    if (!std::isfinite(f_up) || !std::isfinite(f_down)) {
      throw EvaluationError("function is not finite near the estimates");
    }
    grad(k) = (f_up - f_down) / (up(k) - down(k));
  }
  const double variance = grad.dot(cov * grad);
  if (variance < -1e-12) {
    throw CovarianceError("delta-method variance is negative; covariance is not positive semi-definite");
  }
  out.se = std::sqrt(std::max(0.0, variance));
  return out;
}

}  // namespace choicestat
