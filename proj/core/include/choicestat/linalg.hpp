#pragma once

#include <string>

#include <Eigen/Dense>

namespace choicestat {

/// Eigenvalues below this fraction of the largest |eigenvalue| count as zero
/// when inverting.
inline constexpr double kInversionThreshold = 1e-12;

/// Max |a_ij - a_ji| relative to max(1, max |a_ij|).
double asymmetry(const Eigen::MatrixXd& m);

Eigen::MatrixXd symmetrise(const Eigen::MatrixXd& m);

/// Smallest over largest absolute eigenvalue of a symmetric matrix (0 for an
/// all-zero matrix).
double condition_ratio(const Eigen::MatrixXd& symmetric);

/// Inverse of a symmetric matrix through its eigendecomposition. Throws
/// IdentificationError naming `what` when the matrix is numerically singular.
Eigen::MatrixXd invert_symmetric(const Eigen::MatrixXd& symmetric, const std::string& what,
                                 double threshold = kInversionThreshold);

/// Pseudo-inverse of |m| (absolute eigenvalues, near-zero ones dropped).
Eigen::MatrixXd abs_pseudo_inverse(const Eigen::MatrixXd& symmetric,
                                   double threshold = kInversionThreshold);

}  // namespace choicestat
