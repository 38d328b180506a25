#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "choicestat/estimation.hpp"
#include "choicestat/model_spec.hpp"
#include "choicestat/simulate.hpp"

namespace choicestat {

struct ExperimentConfig {
  ModelSpec spec;
  /// Free parameters in spec order.
  Eigen::VectorXd true_params;
  SimulationDesign design;
  std::size_t n_persons = 1000;
  std::size_t obs_per_person = 1;
  std::size_t replications = 1000;
  double alpha = 0.05;
  std::string target_parameter;
  /// Values of the target parameter to simulate; 0 measures size.
  std::vector<double> effect_sizes{0.0};
  double ci_level = 0.95;
  std::uint64_t seed = 0;
  /// Direction of the one-sided t tests of H0: target = 0.
  Alternative one_sided = Alternative::greater;
  /// Run the restricted-model LR and LM tests.
  bool include_lr_lm = true;
  /// Bootstrap samples per replication for coverage (0 disables).
  std::size_t bootstrap_samples = 0;
  EstimationOptions estimation;

  /// Throws InputError on inconsistent settings.
  void validate() const;
};

/// Rejection or coverage frequency with its binomial standard error.
struct Rate {
  std::size_t hits = 0;
  std::size_t trials = 0;
  double rate = 0.0;
  double standard_error = 0.0;
};

Rate make_rate(std::size_t hits, std::size_t trials);

struct SamplingSummary {
  Eigen::VectorXd mean;
  Eigen::VectorXd sd;
  /// Max gap between the standardised empirical CDF and the normal CDF.
  Eigen::VectorXd normality_gap;
};

/// Mean, sd (divisor n - 1) and normality gap per column of replicated
/// estimates. Throws InputError with fewer than 50 rows.
SamplingSummary sampling_distribution_summary(const Eigen::MatrixXd& estimates);

/// Outcome of one simulate-estimate-test replication. Values that were not
/// computed are NaN.
struct ReplicationRecord {
  std::size_t replication = 0;
  double effect = 0.0;
  bool ok = false;
  std::string status;
  double estimate = 0.0;
  double se_classical = 0.0;
  double se_robust = 0.0;
  std::map<std::string, double> p_values;
  std::map<std::string, bool> rejected;
  std::map<std::string, std::pair<double, double>> intervals;
  std::map<std::string, bool> covered;
};

struct EffectSummary {
  double effect = 0.0;
  std::size_t replications_run = 0;
  std::size_t failures = 0;
  std::map<std::string, Rate> rejection;
  std::map<std::string, Rate> coverage;
  /// Distribution of the target estimate across successful replications.
  double estimate_mean = 0.0;
  double estimate_sd = 0.0;
  double normality_gap = 0.0;
  double mean_se_classical = 0.0;
  double mean_se_robust = 0.0;
};

struct MonteCarloReport {
  std::string experiment;  // "size_power" or "coverage"
  std::size_t replications_run = 0;
  std::size_t failures = 0;
  std::vector<EffectSummary> effects;
  std::vector<ReplicationRecord> records;
  std::vector<std::string> warnings;
};

/// Test method keys used in rejection maps.
namespace methods {
inline constexpr const char* t_classical_one_sided = "t_classical_1sided";
inline constexpr const char* t_classical_two_sided = "t_classical_2sided";
inline constexpr const char* t_robust_one_sided = "t_robust_1sided";
inline constexpr const char* t_robust_two_sided = "t_robust_2sided";
inline constexpr const char* wald = "wald";
inline constexpr const char* lr = "lr";
inline constexpr const char* lm = "lm";
}  // namespace methods

/// For every effect size, simulate with the target parameter at that value,
/// estimate and test H0: target = 0 at level alpha.
MonteCarloReport size_and_power_experiment(const ExperimentConfig& config, std::size_t jobs = 1);

/// Share of replications whose intervals contain the true target value.
MonteCarloReport coverage_experiment(const ExperimentConfig& config, std::size_t jobs = 1);

}  // namespace choicestat
