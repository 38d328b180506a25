#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace choicestat {

/// Direction of the alternative hypothesis declared for a parameter.
enum class Alternative { less, greater, two_sided, automatic };

std::string to_string(Alternative a);
Alternative alternative_from_string(const std::string& s);

struct ParameterDef {
  std::string name;
  double start = 0.0;
  bool fixed = false;
  double fixed_value = 0.0;
  double h0_value = 0.0;
  Alternative alternative = Alternative::automatic;
};

/// One linear utility term: parameter times attribute.
/// The attribute name `_const` makes the parameter an alternative-specific constant.
struct UtilityTerm {
  std::string param;
  std::string attribute;
};

inline constexpr const char* kConstantAttribute = "_const";

/// Linear-in-parameters multinomial logit specification.
struct ModelSpec {
  std::vector<std::string> alternatives;
  std::vector<ParameterDef> parameters;
  std::map<std::string, std::vector<UtilityTerm>> utilities;

  /// Throws InputError on duplicate names, unknown parameters or a missing
  /// normalisation (every alternative carrying a constant).
  void validate() const;

  std::vector<std::string> free_parameter_names() const;
  std::size_t n_free() const;

  /// Index into `parameters`, or nullopt.
  std::optional<std::size_t> find_parameter(const std::string& name) const;
  /// Position among the free parameters, or nullopt for fixed/unknown names.
  std::optional<std::size_t> free_index(const std::string& name) const;

  /// Declared start values of the free parameters.
  Eigen::VectorXd start_values() const;

  /// Copy with `name` fixed at `value` (the restricted model of a nested test).
  ModelSpec with_fixed(const std::string& name, double value) const;
};

}  // namespace choicestat
