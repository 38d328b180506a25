#include "choicestat/model_spec.hpp"

#include <algorithm>
#include <set>

#include "choicestat/errors.hpp"

namespace choicestat {

std::string to_string(Alternative a) {
  switch (a) {
    case Alternative::less: return "less";
    case Alternative::greater: return "greater";
    case Alternative::two_sided: return "two_sided";
    case Alternative::automatic: return "auto";
  }
  return "auto";
}

Alternative alternative_from_string(const std::string& s) {
  if (s == "less") return Alternative::less;
  if (s == "greater") return Alternative::greater;
  if (s == "two_sided" || s == "two") return Alternative::two_sided;
  if (s == "auto" || s == "one") return Alternative::automatic;
  throw InputError("unknown alternative hypothesis '" + s + "'");
}

void ModelSpec::validate() const {
  if (alternatives.size() < 2) throw InputError("model needs at least two alternatives");

  std::set<std::string> alt_names(alternatives.begin(), alternatives.end());
  if (alt_names.size() != alternatives.size()) throw InputError("duplicate alternative names");

  std::set<std::string> names;
  for (const auto& p : parameters) {
    if (p.name.empty()) throw InputError("parameter with empty name");
    if (!names.insert(p.name).second) throw InputError("duplicate parameter '" + p.name + "'");
  }

  std::size_t with_constant = 0;
  for (const auto& [alt, terms] : utilities) {
    if (!alt_names.count(alt)) throw InputError("utility for unknown alternative '" + alt + "'");
    bool has_constant = false;
    for (const auto& term : terms) {
      if (!names.count(term.param)) {
        throw InputError("utility of '" + alt + "' references undeclared parameter '" +
                         term.param + "'");
      }
      if (term.attribute.empty()) throw InputError("utility term without attribute in '" + alt + "'");
      has_constant = has_constant || term.attribute == kConstantAttribute;
    }
    if (has_constant) ++with_constant;
  }
  if (with_constant == alternatives.size()) {
    throw InputError("every alternative carries a constant; at least one must be normalised to zero");
  }
}

std::vector<std::string> ModelSpec::free_parameter_names() const {
  std::vector<std::string> out;
  for (const auto& p : parameters) {
    if (!p.fixed) out.push_back(p.name);
  }
  return out;
}

std::size_t ModelSpec::n_free() const {
  return static_cast<std::size_t>(
      std::count_if(parameters.begin(), parameters.end(), [](const auto& p) { return !p.fixed; }));
}

std::optional<std::size_t> ModelSpec::find_parameter(const std::string& name) const {
  for (std::size_t i = 0; i < parameters.size(); ++i) {
    if (parameters[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> ModelSpec::free_index(const std::string& name) const {
  std::size_t k = 0;
  for (const auto& p : parameters) {
    if (p.fixed) continue;
    if (p.name == name) return k;
    ++k;
  }
  return std::nullopt;
}

Eigen::VectorXd ModelSpec::start_values() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(n_free()));
  Eigen::Index k = 0;
  for (const auto& p : parameters) {
    if (!p.fixed) out(k++) = p.start;
  }
  return out;
}

ModelSpec ModelSpec::with_fixed(const std::string& name, double value) const {
  auto idx = find_parameter(name);
  if (!idx) throw InputError("unknown parameter '" + name + "'");
  ModelSpec out = *this;
  out.parameters[*idx].fixed = true;
  out.parameters[*idx].fixed_value = value;
  return out;
}

}  // namespace choicestat
