#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace choicestat {

/// One choice situation faced by one person.
///
/// `attributes` is an (alternative x attribute) matrix whose columns follow
/// `Dataset::attribute_names`. Cells of unavailable alternatives may hold NaN.
struct Observation {
  std::string person_id;
  std::string obs_id;
  std::size_t chosen = 0;
  std::vector<bool> available;
  Eigen::MatrixXd attributes;

  std::size_t available_count() const;
};

/// A sample of choice observations grouped by person.
struct Dataset {
  std::vector<std::string> alternatives;
  std::vector<std::string> attribute_names;
  std::vector<std::string> persons;
  std::vector<Observation> observations;

  std::size_t n_persons() const { return persons.size(); }
  std::size_t n_observations() const { return observations.size(); }

  /// Column of `name` in the attribute matrices, or npos.
  std::size_t attribute_index(const std::string& name) const;
  std::size_t alternative_index(const std::string& name) const;

  /// For each observation, the position of its person in `persons`.
  std::vector<std::size_t> person_indices() const;

  /// Throws InputError describing the first violated invariant.
  void validate() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

}  // namespace choicestat
