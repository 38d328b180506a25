#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "choicestat/dataset.hpp"
#include "choicestat/model_spec.hpp"

namespace choicestat {

/// Which unit the per-row score contributions are summed over.
enum class ScoreGrouping { person, observation };

std::string to_string(ScoreGrouping g);
ScoreGrouping score_grouping_from_string(const std::string& s);

/// Log-likelihood floor applied to chosen probabilities that underflow.
inline const double kDefaultLogFloor = std::log(1e-300);

/// Logit probabilities from raw utilities. Unavailable entries are exactly 0.
/// Uses max-utility subtraction, so any finite utilities are safe.
Eigen::VectorXd logit_probabilities(const Eigen::VectorXd& utilities,
                                    const std::vector<bool>& available);

/// A ModelSpec bound to a concrete attribute layout.
class ChoiceModel {
 public:
  /// Per-observation linear design: utilities = x * params + offset.
  /// Rows of unavailable alternatives are zero.
  struct Design {
    Eigen::MatrixXd x;
    Eigen::VectorXd offset;
  };

  /// Throws InputError for an invalid spec and SpecificationError when a
  /// term references an attribute that is not in `attribute_names`.
  ChoiceModel(ModelSpec spec, const std::vector<std::string>& alternatives,
              const std::vector<std::string>& attribute_names);

  const ModelSpec& spec() const { return spec_; }
  std::size_t n_free() const { return free_names_.size(); }
  const std::vector<std::string>& free_names() const { return free_names_; }

  /// Throws SpecificationError when an available alternative lacks a value
  /// for a referenced attribute.
  Design design(const Observation& obs) const;

  Eigen::VectorXd utilities(const Observation& obs, const Eigen::VectorXd& params) const;
  Eigen::VectorXd probabilities(const Observation& obs, const Eigen::VectorXd& params) const;

 private:
  struct Term {
    std::size_t alternative;
    std::size_t attribute;  // Dataset::npos for a constant
    Eigen::Index free_index;  // -1 when the parameter is fixed
    double fixed_value;
    std::string param;
    std::string attribute_name;
  };

  ModelSpec spec_;
  std::vector<std::string> free_names_;
  std::size_t n_alternatives_;
  std::vector<Term> terms_;
};

struct LogLikelihoodValue {
  double value = 0.0;
  /// Observations whose chosen probability fell below the log floor.
  std::size_t floored = 0;
};

struct LikelihoodEvaluation {
  double log_likelihood = 0.0;
  std::size_t floored = 0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
  Eigen::MatrixXd scores;  // grouping rows x K
};

/// Sample log-likelihood of a dataset under a spec, with analytic derivatives.
/// Designs are compiled once at construction; evaluations are const and
/// thread-safe.
class SampleLikelihood {
 public:
  SampleLikelihood(const Dataset& data, const ModelSpec& spec, double log_floor = kDefaultLogFloor);

  const ChoiceModel& model() const { return model_; }
  std::size_t n_free() const { return model_.n_free(); }
  std::size_t n_persons() const { return n_persons_; }
  std::size_t n_observations() const { return designs_.size(); }

  LogLikelihoodValue log_likelihood(const Eigen::VectorXd& params) const;

  /// Equal probabilities over each observation's available alternatives.
  double null_log_likelihood() const;

  /// Summed log-likelihood of each person's observations.
  Eigen::VectorXd per_person_log_likelihood(const Eigen::VectorXd& params) const;
  Eigen::VectorXd per_observation_log_likelihood(const Eigen::VectorXd& params) const;

  Eigen::VectorXd gradient(const Eigen::VectorXd& params) const;
  Eigen::MatrixXd score_contributions(const Eigen::VectorXd& params,
                                      ScoreGrouping grouping = ScoreGrouping::person) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& params) const;

  LikelihoodEvaluation evaluate(const Eigen::VectorXd& params,
                                ScoreGrouping grouping = ScoreGrouping::person,
                                bool with_hessian = true) const;

 private:
  void check_params(const Eigen::VectorXd& params) const;

  ChoiceModel model_;
  double log_floor_;
  std::size_t n_persons_;
  std::vector<ChoiceModel::Design> designs_;
  std::vector<std::vector<bool>> available_;
  std::vector<std::size_t> chosen_;
  std::vector<std::size_t> person_of_;
};

// Free-function forms of the SampleLikelihood operations.
double log_likelihood(const Dataset& data, const ModelSpec& spec, const Eigen::VectorXd& params);
Eigen::MatrixXd score_contributions(const Dataset& data, const ModelSpec& spec,
                                    const Eigen::VectorXd& params);
Eigen::MatrixXd hessian_analytic(const Dataset& data, const ModelSpec& spec,
                                 const Eigen::VectorXd& params);

}  // namespace choicestat
