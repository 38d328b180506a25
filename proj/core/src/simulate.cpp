#include "choicestat/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "choicestat/errors.hpp"
#include "choicestat/model.hpp"
#include "choicestat/rng.hpp"

namespace choicestat {

std::string to_string(AttributeGenerator::Kind k) {
  switch (k) {
    case AttributeGenerator::Kind::normal: return "normal";
    case AttributeGenerator::Kind::uniform: return "uniform";
    case AttributeGenerator::Kind::constant: return "constant";
  }
  return "normal";
}

AttributeGenerator::Kind generator_kind_from_string(const std::string& s) {
  if (s == "normal") return AttributeGenerator::Kind::normal;
  if (s == "uniform") return AttributeGenerator::Kind::uniform;
  if (s == "constant") return AttributeGenerator::Kind::constant;
  throw InputError("unknown attribute generator kind '" + s + "'");
}

namespace {

std::vector<std::string> attribute_layout(const SimulationDesign& design) {
  std::vector<std::string> names;
  for (const auto& g : design.attributes) {
    if (std::find(names.begin(), names.end(), g.attribute) == names.end()) {
      names.push_back(g.attribute);
    }
  }
  return names;
}

// Free parameters whose design column never varies across the available
// alternatives of any observation cannot be identified from the data.
std::vector<std::string> identification_warnings(const ChoiceModel& model, const Dataset& data) {
  const auto k = static_cast<Eigen::Index>(model.n_free());
  std::vector<bool> varies(static_cast<std::size_t>(k), false);
  for (const auto& obs : data.observations) {
    const auto d = model.design(obs);
    for (Eigen::Index c = 0; c < k; ++c) {
      if (varies[static_cast<std::size_t>(c)]) continue;
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (Eigen::Index j = 0; j < d.x.rows(); ++j) {
        if (!obs.available[static_cast<std::size_t>(j)]) continue;
        lo = std::min(lo, d.x(j, c));
        hi = std::max(hi, d.x(j, c));
      }
      if (hi - lo > 0.0) varies[static_cast<std::size_t>(c)] = true;
    }
  }
  std::vector<std::string> out;
  for (Eigen::Index c = 0; c < k; ++c) {
    if (!varies[static_cast<std::size_t>(c)]) {
      out.push_back("parameter '" + model.free_names()[static_cast<std::size_t>(c)] +
                    "' has no variation across alternatives; it is not identified");
    }
  }
  return out;
}

}  // namespace

SimulatedData simulate_dataset(const ModelSpec& spec, const Eigen::VectorXd& true_params,
                               const SimulationDesign& design, std::size_t n_persons,
                               std::size_t obs_per_person, std::uint64_t seed) {
  if (n_persons < 1) throw InputError("simulation needs at least one person");
  if (obs_per_person < 1) throw InputError("simulation needs at least one observation per person");

  SimulatedData out;
  Dataset& data = out.data;
  data.alternatives = spec.alternatives;
  data.attribute_names = attribute_layout(design);
  const ChoiceModel model(spec, data.alternatives, data.attribute_names);
  if (static_cast<std::size_t>(true_params.size()) != model.n_free()) {
    throw InputError("true parameter vector has the wrong length");
  }

  const auto n_alt = static_cast<Eigen::Index>(data.alternatives.size());
  const auto n_attr = static_cast<Eigen::Index>(data.attribute_names.size());

  // Column/row targets for each generator.
  struct Target {
    const AttributeGenerator* gen;
    Eigen::Index column;
    std::vector<bool> rows;
  };
  std::vector<Target> targets;
  for (const auto& g : design.attributes) {
    if (g.kind == AttributeGenerator::Kind::normal && !(g.b >= 0.0)) {
      throw InputError("normal generator for '" + g.attribute + "' needs sd >= 0");
    }
    if (g.kind == AttributeGenerator::Kind::uniform && !(g.b >= g.a)) {
      throw InputError("uniform generator for '" + g.attribute + "' needs upper >= lower");
    }
    Target t{&g, static_cast<Eigen::Index>(data.attribute_index(g.attribute)),
             std::vector<bool>(data.alternatives.size(), g.alternatives.empty())};
    for (const auto& alt : g.alternatives) {
      const auto j = data.alternative_index(alt);
      if (j == Dataset::npos) throw InputError("generator refers to unknown alternative '" + alt + "'");
      t.rows[j] = true;
    }
    targets.push_back(std::move(t));
  }

  std::vector<double> avail_prob(data.alternatives.size(), 1.0);
  for (const auto& [alt, p] : design.availability) {
    const auto j = data.alternative_index(alt);
    if (j == Dataset::npos) throw InputError("availability for unknown alternative '" + alt + "'");
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("availability probability outside [0,1]");
    avail_prob[j] = p;
  }
  std::size_t can_be_available = 0;
  for (double p : avail_prob) can_be_available += p > 0.0 ? 1 : 0;
  if (can_be_available < 2) throw InputError("design leaves fewer than two alternatives available");

  Eigen::VectorXd taste_sd = Eigen::VectorXd::Zero(true_params.size());
  for (const auto& [name, sd] : design.taste_sd) {
    auto k = spec.free_index(name);
    if (!k) throw InputError("taste heterogeneity for unknown free parameter '" + name + "'");
    taste_sd(static_cast<Eigen::Index>(*k)) = sd;
  }

  Rng rng(seed);
  std::normal_distribution<double> std_normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  data.persons.reserve(n_persons);
  data.observations.reserve(n_persons * obs_per_person);
  std::size_t obs_counter = 0;
  for (std::size_t n = 0; n < n_persons; ++n) {
    const std::string person = "p" + std::to_string(n + 1);
    data.persons.push_back(person);

    Eigen::VectorXd beta = true_params;
    for (Eigen::Index k = 0; k < beta.size(); ++k) {
      if (taste_sd(k) > 0.0) beta(k) += taste_sd(k) * std_normal(rng);
    }

    for (std::size_t t = 0; t < obs_per_person; ++t) {
      Observation obs;
      obs.person_id = person;
      obs.obs_id = std::to_string(++obs_counter);
      obs.attributes = Eigen::MatrixXd::Zero(n_alt, n_attr);
      for (const auto& target : targets) {
        for (Eigen::Index j = 0; j < n_alt; ++j) {
          if (!target.rows[static_cast<std::size_t>(j)]) continue;
          const auto& g = *target.gen;
          double value = g.a;
          if (g.kind == AttributeGenerator::Kind::normal) value = g.a + g.b * std_normal(rng);
          if (g.kind == AttributeGenerator::Kind::uniform) value = g.a + (g.b - g.a) * unit(rng);
          obs.attributes(j, target.column) = value;
        }
      }

      do {
        obs.available.assign(data.alternatives.size(), false);
        for (std::size_t j = 0; j < avail_prob.size(); ++j) {
          obs.available[j] = avail_prob[j] >= 1.0 || unit(rng) < avail_prob[j];
        }
      } while (obs.available_count() < 2);

      const Eigen::VectorXd p = model.probabilities(obs, beta);
      const double u = unit(rng);
      double cumulative = 0.0;
      std::size_t chosen = 0;
      for (Eigen::Index j = 0; j < n_alt; ++j) {
        if (!obs.available[static_cast<std::size_t>(j)]) continue;
        chosen = static_cast<std::size_t>(j);
        cumulative += p(j);
        if (u < cumulative) break;
      }
      obs.chosen = chosen;
      data.observations.push_back(std::move(obs));
    }
  }

  out.warnings = identification_warnings(model, data);
  return out;
}

}  // namespace choicestat
