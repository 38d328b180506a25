#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "choicestat/model.hpp"

namespace choicestat {

/// Classical, BHHH and robust (sandwich) covariance estimates at an optimum.
struct CovarianceSet {
  Eigen::MatrixXd classical;  // -H^-1
  Eigen::MatrixXd bhhh;       // O^-1, O = sum_n s_n s_n'
  Eigen::MatrixXd robust;     // H^-1 O H^-1
  Eigen::VectorXd se_classical;
  Eigen::VectorXd se_bhhh;
  Eigen::VectorXd se_robust;
  ScoreGrouping grouping = ScoreGrouping::person;
};

/// `scores` holds one row per grouping unit. Throws IdentificationError when
/// H or O is singular.
CovarianceSet covariance_set(const Eigen::MatrixXd& hessian, const Eigen::MatrixXd& scores,
                             ScoreGrouping grouping = ScoreGrouping::person,
                             const std::vector<std::string>& names = {});

/// Square roots of the diagonal. Throws CovarianceError naming the parameter
/// when a diagonal entry is negative.
Eigen::VectorXd standard_errors(const Eigen::MatrixXd& cov, const std::vector<std::string>& names = {});

struct DeltaMethodResult {
  double value = 0.0;
  double se = 0.0;
};

/// Standard error of func(params) through a central-difference gradient
/// (step 1e-7 * max(1, |param|)) and the supplied covariance.
DeltaMethodResult delta_method(const Eigen::VectorXd& params, const Eigen::MatrixXd& cov,
                               const std::function<double(const Eigen::VectorXd&)>& func);

}  // namespace choicestat
