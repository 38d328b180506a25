#include "choicestat/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "choicestat/errors.hpp"

namespace choicestat {

double asymmetry(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

Eigen::MatrixXd symmetrise(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

double condition_ratio(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd abs_ev = es.eigenvalues().cwiseAbs();
  const double largest = abs_ev.maxCoeff();
  if (!(largest > 0.0)) return 0.0;
  return abs_ev.minCoeff() / largest;
}

Eigen::MatrixXd invert_symmetric(const Eigen::MatrixXd& symmetric, const std::string& what,
                                 double threshold) {
  if (symmetric.rows() != symmetric.cols() || symmetric.rows() == 0) {
    throw InputError(what + " must be a non-empty square matrix");
  }
  if (!symmetric.allFinite()) throw IdentificationError(what + " has non-finite entries", 0.0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrise(symmetric));
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double largest = ev.cwiseAbs().maxCoeff();
  const double ratio = largest > 0.0 ? ev.cwiseAbs().minCoeff() / largest : 0.0;
  if (!(ratio > threshold)) {
    throw IdentificationError(what + " is singular or nearly so (eigenvalue ratio " +
                                  std::to_string(ratio) + ")",
                              ratio);
  }
  const Eigen::MatrixXd& v = es.eigenvectors();
  return symmetrise(v * ev.cwiseInverse().asDiagonal() * v.transpose());
}

Eigen::MatrixXd abs_pseudo_inverse(const Eigen::MatrixXd& symmetric, double threshold) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrise(symmetric));
  const Eigen::VectorXd abs_ev = es.eigenvalues().cwiseAbs();
  const double cutoff = threshold * abs_ev.maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(abs_ev.size());
  for (Eigen::Index i = 0; i < abs_ev.size(); ++i) {
    if (abs_ev(i) > cutoff) inv(i) = 1.0 / abs_ev(i);
  }
  const Eigen::MatrixXd& v = es.eigenvectors();
  return v * inv.asDiagonal() * v.transpose();
}

}  // namespace choicestat
