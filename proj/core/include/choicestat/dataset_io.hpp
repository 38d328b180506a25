#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "choicestat/bootstrap.hpp"
#include "choicestat/dataset.hpp"
#include "choicestat/model_spec.hpp"

namespace choicestat {

/// Long-format choice data: one row per (observation, alternative) with the
/// columns person_id, obs_id, alt_id, avail, chosen and then one column per
/// attribute. Empty or "NA" cells are missing values. Alternatives keep their
/// order of first appearance; an alternative with no row in an observation is
/// unavailable there. Errors carry the source name and line number.
Dataset read_dataset_csv(std::istream& in, const std::string& source = "<stream>");
Dataset read_dataset_csv_file(const std::string& path);
void write_dataset_csv(std::ostream& out, const Dataset& data);

ModelSpec model_spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json model_spec_to_json(const ModelSpec& spec);
ModelSpec read_model_spec_file(const std::string& path);

/// Bootstrap draws: replicate, converged, then one column per parameter.
void write_draws_csv(std::ostream& out, const BootstrapResult& result);
/// Rebuilds the draws, convergence flags and failure count from a draws file.
BootstrapResult read_draws_csv(std::istream& in, const std::string& source = "<stream>");
BootstrapResult read_draws_csv_file(const std::string& path);

/// Parses a JSON file, reporting the line of a syntax error.
nlohmann::json read_json_file(const std::string& path);

/// Shortest decimal text that parses back to exactly `value` ("NA" for NaN).
std::string format_double(double value);

}  // namespace choicestat
