#pragma once

#include <iosfwd>

#include <nlohmann/json.hpp>

#include "choicestat/analysis.hpp"
#include "choicestat/montecarlo.hpp"

namespace choicestat {

// JSON documents are ordered and contain no timestamps, so identical inputs
// serialise to identical bytes. Non-finite numbers are written as null.
// Matrices are {"rows", "cols", "data"} with data in row-major order.

using Json = nlohmann::ordered_json;

Json to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);

Json to_json(const TestResult& t);
TestResult test_result_from_json(const nlohmann::json& j);

Json to_json(const ConfidenceInterval& ci);
ConfidenceInterval interval_from_json(const nlohmann::json& j);

Json to_json(const IdentificationReport& r);
Json to_json(const EstimationResult& r);
EstimationResult estimation_result_from_json(const nlohmann::json& j);

Json to_json(const CovarianceSet& c, const std::vector<std::string>& names);

/// The complete estimation results document, including `covariance`.
Json to_json(const AnalysisResults& r);
AnalysisResults analysis_results_from_json(const nlohmann::json& j);

Json to_json(const BootstrapSummary& s);
BootstrapSummary bootstrap_summary_from_json(const nlohmann::json& j);

Json to_json(const EstimationOptions& o);
EstimationOptions estimation_options_from_json(const nlohmann::json& j);

Json to_json(const SimulationDesign& d);
SimulationDesign simulation_design_from_json(const nlohmann::json& j);

/// Experiment config. The document also carries `experiment`
/// ("size_power" or "coverage"), read by the CLI.
Json to_json(const ExperimentConfig& c);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

Json to_json(const MonteCarloReport& r);

/// One row per replication: estimate, standard errors, p-values and
/// rejection flags per test, interval bounds and coverage flags.
void write_replications_csv(std::ostream& out, const MonteCarloReport& r);

}  // namespace choicestat
