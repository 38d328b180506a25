#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "choicestat/dataset.hpp"
#include "choicestat/model_spec.hpp"

namespace choicestat {

/// How one attribute column is drawn for each (observation, alternative).
struct AttributeGenerator {
  enum class Kind { normal, uniform, constant };

  std::string attribute;
  Kind kind = Kind::normal;
  double a = 0.0;  // normal: mean, uniform: lower, constant: value
  double b = 1.0;  // normal: sd, uniform: upper
  /// Alternatives that receive generated values; empty means all. Others get 0.
  std::vector<std::string> alternatives;
};

std::string to_string(AttributeGenerator::Kind k);
AttributeGenerator::Kind generator_kind_from_string(const std::string& s);

struct SimulationDesign {
  std::vector<AttributeGenerator> attributes;
  /// Probability that an alternative is available (default 1). Draws with
  /// fewer than two available alternatives are redrawn.
  std::map<std::string, double> availability;
  /// Person-level random taste deviation (sd) per parameter. Non-empty means
  /// the plain MNL is misspecified for the generated data.
  std::map<std::string, double> taste_sd;
};

struct SimulatedData {
  Dataset data;
  /// Identification risks found in the generated design.
  std::vector<std::string> warnings;
};

/// Draws choices from the exact logit probabilities at `true_params` (free
/// parameters, in spec order). Identical seeds give bit-identical datasets.
SimulatedData simulate_dataset(const ModelSpec& spec, const Eigen::VectorXd& true_params,
                               const SimulationDesign& design, std::size_t n_persons,
                               std::size_t obs_per_person, std::uint64_t seed);

}  // namespace choicestat
