#include "choicestat/model.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "choicestat/errors.hpp"

namespace choicestat {

std::string to_string(ScoreGrouping g) {
  return g == ScoreGrouping::person ? "person" : "observation";
}

ScoreGrouping score_grouping_from_string(const std::string& s) {
  if (s == "person") return ScoreGrouping::person;
  if (s == "observation") return ScoreGrouping::observation;
  throw InputError("score grouping must be 'person' or 'observation', got '" + s + "'");
}

Eigen::VectorXd logit_probabilities(const Eigen::VectorXd& utilities,
                                    const std::vector<bool>& available) {
  const Eigen::Index n = utilities.size();
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  double vmax = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (available[static_cast<std::size_t>(j)]) vmax = std::max(vmax, utilities(j));
  }
  double sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!available[static_cast<std::size_t>(j)]) continue;
    p(j) = std::exp(utilities(j) - vmax);
    sum += p(j);
  }
  return p / sum;
}

ChoiceModel::ChoiceModel(ModelSpec spec, const std::vector<std::string>& alternatives,
                         const std::vector<std::string>& attribute_names)
    : spec_(std::move(spec)), free_names_(spec_.free_parameter_names()),
      n_alternatives_(alternatives.size()) {
  spec_.validate();

  std::set<std::string> data_alts(alternatives.begin(), alternatives.end());
  std::set<std::string> spec_alts(spec_.alternatives.begin(), spec_.alternatives.end());
  if (data_alts != spec_alts) {
    throw SpecificationError("model alternatives do not match the dataset alternatives");
  }

  for (const auto& [alt, alt_terms] : spec_.utilities) {
    const auto alt_pos = static_cast<std::size_t>(
        std::find(alternatives.begin(), alternatives.end(), alt) - alternatives.begin());
    for (const auto& term : alt_terms) {
      Term t;
      t.alternative = alt_pos;
      t.param = term.param;
      t.attribute_name = term.attribute;
      if (term.attribute == kConstantAttribute) {
        t.attribute = Dataset::npos;
      } else {
        auto it = std::find(attribute_names.begin(), attribute_names.end(), term.attribute);
        if (it == attribute_names.end()) {
          throw SpecificationError("attribute '" + term.attribute + "' used by parameter '" +
                                   term.param + "' is missing from the data");
        }
        t.attribute = static_cast<std::size_t>(it - attribute_names.begin());
      }
      const auto& def = spec_.parameters[*spec_.find_parameter(term.param)];
      auto free = spec_.free_index(term.param);
      t.free_index = free ? static_cast<Eigen::Index>(*free) : -1;
      t.fixed_value = def.fixed_value;
      terms_.push_back(std::move(t));
    }
  }
}

ChoiceModel::Design ChoiceModel::design(const Observation& obs) const {
  const auto n_alt = static_cast<Eigen::Index>(n_alternatives_);
  Design d{Eigen::MatrixXd::Zero(n_alt, static_cast<Eigen::Index>(n_free())),
           Eigen::VectorXd::Zero(n_alt)};
  for (const auto& t : terms_) {
    if (!obs.available[t.alternative]) continue;
    double value = 1.0;
    if (t.attribute != Dataset::npos) {
      if (t.attribute >= static_cast<std::size_t>(obs.attributes.cols())) {
        throw SpecificationError("observation '" + obs.obs_id + "' lacks attribute '" +
                                 t.attribute_name + "'");
      }
      value = obs.attributes(static_cast<Eigen::Index>(t.alternative),
                             static_cast<Eigen::Index>(t.attribute));
      if (!std::isfinite(value)) {
        throw SpecificationError("observation '" + obs.obs_id + "' has no value of '" +
                                 t.attribute_name + "' for an available alternative");
      }
    }
    const auto row = static_cast<Eigen::Index>(t.alternative);
    if (t.free_index >= 0) {
      d.x(row, t.free_index) += value;
    } else {
      d.offset(row) += t.fixed_value * value;
    }
  }
  return d;
}

Eigen::VectorXd ChoiceModel::utilities(const Observation& obs, const Eigen::VectorXd& params) const {
  if (static_cast<std::size_t>(params.size()) != n_free()) {
    throw InputError("parameter vector has the wrong length");
  }
  const Design d = design(obs);
  return d.x * params + d.offset;
}

Eigen::VectorXd ChoiceModel::probabilities(const Observation& obs,
                                           const Eigen::VectorXd& params) const {
  return logit_probabilities(utilities(obs, params), obs.available);
}

SampleLikelihood::SampleLikelihood(const Dataset& data, const ModelSpec& spec, double log_floor)
    : model_(spec, data.alternatives, data.attribute_names), log_floor_(log_floor),
      n_persons_(data.n_persons()) {
  person_of_ = data.person_indices();
  designs_.reserve(data.observations.size());
  for (const auto& obs : data.observations) {
    if (obs.chosen >= obs.available.size() || !obs.available[obs.chosen]) {
      throw InputError("observation '" + obs.obs_id + "': chosen alternative is not available");
    }
    designs_.push_back(model_.design(obs));
    available_.push_back(obs.available);
    chosen_.push_back(obs.chosen);
  }
}

void SampleLikelihood::check_params(const Eigen::VectorXd& params) const {
  if (static_cast<std::size_t>(params.size()) != n_free()) {
    throw InputError("parameter vector has length " + std::to_string(params.size()) +
                     ", expected " + std::to_string(n_free()));
  }
}

namespace {

// Log of the chosen probability plus the probability vector, via log-sum-exp.
double chosen_log_probability(const ChoiceModel::Design& d, const std::vector<bool>& avail,
                              std::size_t chosen, const Eigen::VectorXd& params,
                              Eigen::VectorXd& probs) {
  const Eigen::VectorXd v = d.x * params + d.offset;
  double vmax = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (avail[static_cast<std::size_t>(j)]) vmax = std::max(vmax, v(j));
  }
  probs = Eigen::VectorXd::Zero(v.size());
  double sum = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (!avail[static_cast<std::size_t>(j)]) continue;
    probs(j) = std::exp(v(j) - vmax);
    sum += probs(j);
  }
  probs /= sum;
  return v(static_cast<Eigen::Index>(chosen)) - vmax - std::log(sum);
}

}  // namespace

LikelihoodEvaluation SampleLikelihood::evaluate(const Eigen::VectorXd& params,
                                                ScoreGrouping grouping, bool with_hessian) const {
  check_params(params);
  const auto k = static_cast<Eigen::Index>(n_free());
  const auto rows = static_cast<Eigen::Index>(grouping == ScoreGrouping::person
                                                  ? n_persons_
                                                  : designs_.size());
  LikelihoodEvaluation out;
  out.gradient = Eigen::VectorXd::Zero(k);
  out.scores = Eigen::MatrixXd::Zero(rows, k);
  if (with_hessian) out.hessian = Eigen::MatrixXd::Zero(k, k);

  Eigen::VectorXd probs;
  for (std::size_t n = 0; n < designs_.size(); ++n) {
    const auto& d = designs_[n];
    double lp = chosen_log_probability(d, available_[n], chosen_[n], params, probs);
    if (!(lp >= log_floor_)) {
      lp = log_floor_;
      ++out.floored;
    }
    out.log_likelihood += lp;

    const Eigen::RowVectorXd xbar = probs.transpose() * d.x;
    const Eigen::RowVectorXd score = d.x.row(static_cast<Eigen::Index>(chosen_[n])) - xbar;
    const auto row = static_cast<Eigen::Index>(grouping == ScoreGrouping::person ? person_of_[n] : n);
    out.scores.row(row) += score;

    if (with_hessian) {
      Eigen::MatrixXd centred = d.x.rowwise() - xbar;
      out.hessian.noalias() -= centred.transpose() * probs.asDiagonal() * centred;
    }
  }
  out.gradient = out.scores.colwise().sum().transpose();
  if (with_hessian) out.hessian = 0.5 * (out.hessian + out.hessian.transpose()).eval();
  return out;
}

LogLikelihoodValue SampleLikelihood::log_likelihood(const Eigen::VectorXd& params) const {
  check_params(params);
  LogLikelihoodValue out;
  Eigen::VectorXd probs;
  for (std::size_t n = 0; n < designs_.size(); ++n) {
    double lp = chosen_log_probability(designs_[n], available_[n], chosen_[n], params, probs);
    if (!(lp >= log_floor_)) {
      lp = log_floor_;
      ++out.floored;
    }
    out.value += lp;
  }
  return out;
}

double SampleLikelihood::null_log_likelihood() const {
  double ll = 0.0;
  for (const auto& avail : available_) {
    ll -= std::log(static_cast<double>(std::count(avail.begin(), avail.end(), true)));
  }
  return ll;
}

Eigen::VectorXd SampleLikelihood::per_observation_log_likelihood(const Eigen::VectorXd& params) const {
  check_params(params);
  Eigen::VectorXd out(static_cast<Eigen::Index>(designs_.size()));
  Eigen::VectorXd probs;
  for (std::size_t n = 0; n < designs_.size(); ++n) {
    const double lp = chosen_log_probability(designs_[n], available_[n], chosen_[n], params, probs);
    out(static_cast<Eigen::Index>(n)) = std::max(lp, log_floor_);
  }
  return out;
}

Eigen::VectorXd SampleLikelihood::per_person_log_likelihood(const Eigen::VectorXd& params) const {
  const Eigen::VectorXd per_obs = per_observation_log_likelihood(params);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_persons_));
  for (std::size_t n = 0; n < designs_.size(); ++n) {
    out(static_cast<Eigen::Index>(person_of_[n])) += per_obs(static_cast<Eigen::Index>(n));
  }
  return out;
}

Eigen::VectorXd SampleLikelihood::gradient(const Eigen::VectorXd& params) const {
  return evaluate(params, ScoreGrouping::observation, false).gradient;
}

Eigen::MatrixXd SampleLikelihood::score_contributions(const Eigen::VectorXd& params,
                                                      ScoreGrouping grouping) const {
  return evaluate(params, grouping, false).scores;
}

Eigen::MatrixXd SampleLikelihood::hessian(const Eigen::VectorXd& params) const {
  return evaluate(params, ScoreGrouping::observation, true).hessian;
}

double log_likelihood(const Dataset& data, const ModelSpec& spec, const Eigen::VectorXd& params) {
  return SampleLikelihood(data, spec).log_likelihood(params).value;
}

Eigen::MatrixXd score_contributions(const Dataset& data, const ModelSpec& spec,
                                    const Eigen::VectorXd& params) {
  return SampleLikelihood(data, spec).score_contributions(params);
}

Eigen::MatrixXd hessian_analytic(const Dataset& data, const ModelSpec& spec,
                                 const Eigen::VectorXd& params) {
  return SampleLikelihood(data, spec).hessian(params);
}

}  // namespace choicestat
