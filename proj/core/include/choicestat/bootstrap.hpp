#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "choicestat/dataset.hpp"
#include "choicestat/estimation.hpp"
#include "choicestat/inference.hpp"
#include "choicestat/model_spec.hpp"

namespace choicestat {

/// Draws persons with replacement until the resample has as many persons as
/// the original. A person drawn m times contributes m copies of all their
/// observations; copies are renamed "<id>#<copy>".
Dataset resample_persons(const Dataset& data, std::uint64_t seed);

struct BootstrapResult {
  std::size_t s_samples = 0;
  std::uint64_t base_seed = 0;
  std::vector<std::string> param_names;
  /// Row s holds the estimates of replicate s (NaN rows for hard failures).
  Eigen::MatrixXd draws;
  std::vector<bool> converged;
  std::vector<std::string> statuses;
  std::size_t n_failed = 0;
  std::vector<std::string> warnings;

  std::size_t n_converged() const { return s_samples - n_failed; }
  /// Converged rows only, in replicate order.
  Eigen::MatrixXd converged_draws() const;
  std::vector<double> converged_column(std::size_t k) const;
};

/// Replicate s resamples with derive_seed(base_seed, {s}) and estimates from
/// the declared start values. Output does not depend on `jobs`.
BootstrapResult bootstrap_run(const Dataset& data, const ModelSpec& spec,
                              const EstimationOptions& options, std::size_t samples,
                              std::uint64_t base_seed, std::size_t jobs = 1);

/// Sample covariance (divisor n - 1) of the converged draws. Throws
/// InsufficientDataError with fewer than two converged draws.
Eigen::MatrixXd bootstrap_covariance(const BootstrapResult& result);

inline constexpr std::size_t kMinIntervalDraws = 10;

/// Empirical quantile interval. With k = (1 - level)/2 * n integral the k-th
/// and (n-k+1)-th order statistics are used; otherwise the same positions are
/// interpolated linearly. The asymmetry index is taken about `center`.
ConfidenceInterval quantile_interval(std::span<const double> draws, double level, double center);

/// Narrowest window of ceil(level * n) consecutive order statistics; ties go
/// to the lowest window.
ConfidenceInterval hpd_interval(std::span<const double> draws, double level, double center);

struct EmpiricalPValue {
  double p_value = 0.0;
  std::size_t crossings = 0;
  std::size_t n = 0;
  /// No draw crossed zero; the p-value is only known to be below 1/n.
  bool below_resolution = false;
};

/// Share of draws on the other side of zero from `mle` (zeros count as
/// crossings). Throws InputError for mle = 0.
EmpiricalPValue empirical_p_value(std::span<const double> draws, double mle);

/// ((U - M) - (M - L)) / (U - L). Throws InputError unless lower < upper.
double asymmetry_index(double lower, double center, double upper);

}  // namespace choicestat
