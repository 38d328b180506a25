#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "choicestat/dataset.hpp"
#include "choicestat/model.hpp"
#include "choicestat/model_spec.hpp"

namespace choicestat {

struct EstimationOptions {
  int max_iterations = 200;
  /// Convergence when the infinity norm of the gradient falls below this.
  double gradient_tolerance = 1e-6;
  int step_halving_max = 25;
  int n_starts = 1;
  double start_perturbation_scale = 1.0;
  std::uint64_t seed = 0;
  /// Worker threads for multi-start; results do not depend on it.
  std::size_t jobs = 1;
  /// Smallest/largest |eigenvalue| ratio below which the Hessian is singular.
  double identification_threshold = 1e-10;
  /// |estimate| beyond this raises a divergence warning.
  double divergence_bound = 50.0;

  void validate() const;
};

enum class EstimationStatus { converged, max_iterations, singular_hessian, line_search_failure };

std::string to_string(EstimationStatus s);
EstimationStatus estimation_status_from_string(const std::string& s);

struct IdentificationReport {
  std::size_t hessian_rank = 0;
  /// Largest over smallest |eigenvalue| (infinite for an exactly singular matrix).
  double condition_number = 0.0;
  bool is_identified = false;
  /// Parameters carrying the most weight in near-null eigenvectors.
  std::vector<std::string> suspect_parameters;
  Eigen::VectorXd eigenvalues;
};

/// Eigen-analysis of a symmetric Hessian. Throws InputError when the matrix
/// is not symmetric within 1e-8. `names` labels the suspects (index labels
/// are used when empty).
IdentificationReport check_identification(const Eigen::MatrixXd& hessian,
                                          double threshold = 1e-10,
                                          const std::vector<std::string>& names = {});

struct EstimationResult {
  std::vector<std::string> param_names;
  Eigen::VectorXd start_values;
  Eigen::VectorXd params_hat;
  double ll_start = 0.0;
  double ll_hat = 0.0;
  double ll_0 = 0.0;
  double gradient_norm = 0.0;
  Eigen::MatrixXd hessian_at_optimum;
  int iterations = 0;
  EstimationStatus status = EstimationStatus::max_iterations;
  std::size_t start_index = 0;
  std::size_t n_observations = 0;
  std::size_t n_persons = 0;
  /// Observations whose chosen probability hit the log floor at the optimum.
  std::size_t floored_observations = 0;
  /// Set when the likelihood keeps rising toward infinity in some direction.
  bool diverging = false;
  std::vector<std::string> warnings;
  IdentificationReport identification;
  /// Log-likelihood after each accepted iteration, starting point first.
  std::vector<double> ll_trace;

  bool converged() const { return status == EstimationStatus::converged; }
};

/// Newton ascent from `start` with step halving; falls back to the BHHH
/// direction when the Hessian is not negative definite. Throws InputError when
/// the log-likelihood is not finite at the start.
EstimationResult estimate(const SampleLikelihood& likelihood, const Eigen::VectorXd& start,
                          const EstimationOptions& options, std::size_t start_index = 0);

/// Single run from the declared start values.
EstimationResult estimate(const Dataset& data, const ModelSpec& spec,
                          const EstimationOptions& options = {});

struct MultiStartResult {
  EstimationResult best;
  std::vector<EstimationResult> all;
  /// Converged runs disagree on ll_hat by more than 1e-4.
  bool disagreement = false;
};

/// Start 0 uses the declared values; later starts add seeded normal noise.
/// Throws EstimationError listing run statuses when no run converges.
MultiStartResult multi_start(const SampleLikelihood& likelihood, const EstimationOptions& options);
MultiStartResult multi_start(const Dataset& data, const ModelSpec& spec,
                             const EstimationOptions& options);

}  // namespace choicestat
