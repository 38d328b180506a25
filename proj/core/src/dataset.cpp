#include "choicestat/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "choicestat/errors.hpp"

namespace choicestat {

std::size_t Observation::available_count() const {
  return static_cast<std::size_t>(std::count(available.begin(), available.end(), true));
}

std::size_t Dataset::attribute_index(const std::string& name) const {
  auto it = std::find(attribute_names.begin(), attribute_names.end(), name);
  return it == attribute_names.end() ? npos : static_cast<std::size_t>(it - attribute_names.begin());
}

std::size_t Dataset::alternative_index(const std::string& name) const {
  auto it = std::find(alternatives.begin(), alternatives.end(), name);
  return it == alternatives.end() ? npos : static_cast<std::size_t>(it - alternatives.begin());
}

std::vector<std::size_t> Dataset::person_indices() const {
  std::unordered_map<std::string, std::size_t> lookup;
  lookup.reserve(persons.size());
  for (std::size_t i = 0; i < persons.size(); ++i) lookup.emplace(persons[i], i);

  std::vector<std::size_t> out;
  out.reserve(observations.size());
  for (const auto& obs : observations) {
    auto it = lookup.find(obs.person_id);
    if (it == lookup.end()) {
      throw InputError("observation '" + obs.obs_id + "' refers to unknown person '" +
                       obs.person_id + "'");
    }
    out.push_back(it->second);
  }
  return out;
}

void Dataset::validate() const {
  const auto n_alt = static_cast<Eigen::Index>(alternatives.size());
  const auto n_attr = static_cast<Eigen::Index>(attribute_names.size());
  if (alternatives.size() < 2) throw InputError("dataset needs at least two alternatives");

  person_indices();  // throws on unknown persons

  for (const auto& obs : observations) {
    const std::string where = "observation '" + obs.obs_id + "'";
    if (obs.available.size() != alternatives.size() || obs.attributes.rows() != n_alt ||
        obs.attributes.cols() != n_attr) {
      throw InputError(where + " does not match the dataset dimensions");
    }
    if (obs.chosen >= alternatives.size() || !obs.available[obs.chosen]) {
      throw InputError(where + ": chosen alternative is not available");
    }
    if (obs.available_count() < 2) {
      throw InputError(where + " has fewer than two available alternatives");
    }
    for (Eigen::Index j = 0; j < n_alt; ++j) {
      if (!obs.available[static_cast<std::size_t>(j)]) continue;
      for (Eigen::Index a = 0; a < n_attr; ++a) {
        if (std::isinf(obs.attributes(j, a))) {
          throw InputError(where + ": attribute '" + attribute_names[static_cast<std::size_t>(a)] +
                           "' is not finite");
        }
      }
    }
  }
}

}  // namespace choicestat
