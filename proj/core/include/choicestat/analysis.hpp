#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "choicestat/bootstrap.hpp"
#include "choicestat/covariance.hpp"
#include "choicestat/estimation.hpp"
#include "choicestat/inference.hpp"
#include "choicestat/reporting.hpp"
#include "choicestat/trinity.hpp"

namespace choicestat {

/// Which p-values a rendered table shows. `automatic` shows both.
enum class SidedMode { one, two, automatic };

std::string to_string(SidedMode m);
SidedMode sided_mode_from_string(const std::string& s);

struct AnalysisOptions {
  double ci_level = 0.95;
  SidedMode sided = SidedMode::automatic;
  /// Re-estimate with each parameter fixed at its H0 value for LR and LM.
  bool restriction_tests = true;
  ScoreGrouping grouping = ScoreGrouping::person;
  EstimationOptions estimation;

  void validate() const;
};

struct ParameterInference {
  std::string name;
  double estimate = 0.0;
  double h0_value = 0.0;
  /// Declared alternative of the parameter.
  Alternative declared = Alternative::automatic;
  double se_classical = 0.0;
  double se_bhhh = 0.0;
  double se_robust = 0.0;
  /// One-sided tests follow the declared direction, or the estimate's side
  /// when the declaration is two-sided or automatic.
  TestResult t_classical_one_sided;
  TestResult t_classical_two_sided;
  TestResult t_robust_one_sided;
  TestResult t_robust_two_sided;
  std::optional<RestrictionTests> restriction;
  ConfidenceInterval ci_classical;
  ConfidenceInterval ci_robust;
  /// Robust over classical interval width (equal to the se ratio).
  double width_ratio = 0.0;
};

struct FitStatistics {
  double ll_hat = 0.0;
  double ll_0 = 0.0;
  std::size_t k = 0;
  std::size_t n_observations = 0;
  std::size_t n_persons = 0;
  double rho_bar_squared = 0.0;
  double bic = 0.0;
};

struct AnalysisResults {
  AnalysisOptions options;
  EstimationResult estimation;
  /// Every multi-start run (a single entry without multi-start).
  std::vector<EstimationResult> starts;
  bool start_disagreement = false;
  /// Empty when the estimate is not converged or not identified.
  std::optional<CovarianceSet> covariance;
  std::vector<ParameterInference> parameters;
  FitStatistics fit;
  std::vector<std::string> warnings;

  bool usable() const { return covariance.has_value(); }
};

/// Estimates the model and, when the estimate is converged and identified,
/// computes covariances, tests, intervals and fit statistics. Failures of the
/// estimation itself are reported through `estimation.status` rather than
/// thrown.
AnalysisResults analyse(const Dataset& data, const ModelSpec& spec, const AnalysisOptions& options);

struct BootstrapParameterSummary {
  std::string name;
  double estimate = 0.0;
  double se_bootstrap = 0.0;
  /// t-ratio and asymptotic p-values using the bootstrap standard error.
  TestResult t_one_sided;
  TestResult t_two_sided;
  EmpiricalPValue empirical;
  ConfidenceInterval ci_bootstrap_se;
  ConfidenceInterval ci_quantile;
  ConfidenceInterval ci_hpd;
  /// Bootstrap over classical standard error; NaN without a classical se.
  double width_ratio_classical = 0.0;
};

struct BootstrapSummary {
  double level = 0.95;
  std::size_t s_samples = 0;
  std::size_t n_converged = 0;
  std::size_t n_failed = 0;
  std::uint64_t base_seed = 0;
  Eigen::MatrixXd covariance;
  std::vector<BootstrapParameterSummary> parameters;
  std::vector<std::string> warnings;
};

/// Interval, p-value and asymmetry statistics of bootstrap draws around the
/// full-sample estimates. `classical_se` may be empty.
BootstrapSummary summarise_bootstrap(const BootstrapResult& result, const Eigen::VectorXd& estimates,
                                     const Eigen::VectorXd& classical_se, double level,
                                     const std::vector<Alternative>& declared = {});

/// Which columns an estimation table carries.
struct TableColumns {
  bool se = true;
  bool t = true;
  bool intervals = true;
  bool trinity = false;
};

TableInput estimation_table(const AnalysisResults& results, const TableColumns& columns);
TableInput bootstrap_table(const BootstrapSummary& summary, SidedMode sided);

/// Explains how every p-value in a table was computed.
std::string sidedness_note(SidedMode mode);

}  // namespace choicestat
