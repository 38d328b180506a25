#include "choicestat/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "choicestat/errors.hpp"
#include "choicestat/parallel.hpp"
#include "choicestat/rng.hpp"

namespace choicestat {

Dataset resample_persons(const Dataset& data, std::uint64_t seed) {
  if (data.persons.empty()) throw InputError("cannot resample a dataset without persons");

  std::vector<std::vector<std::size_t>> obs_of(data.persons.size());
  const auto person_of = data.person_indices();
  for (std::size_t n = 0; n < person_of.size(); ++n) obs_of[person_of[n]].push_back(n);

  Dataset out;
  out.alternatives = data.alternatives;
  out.attribute_names = data.attribute_names;
  out.persons.reserve(data.persons.size());

  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, data.persons.size() - 1);
  std::vector<std::size_t> copies(data.persons.size(), 0);
  for (std::size_t i = 0; i < data.persons.size(); ++i) {
    const std::size_t p = pick(rng);
    const std::string id = data.persons[p] + "#" + std::to_string(++copies[p]);
    out.persons.push_back(id);
    for (std::size_t n : obs_of[p]) {
      Observation obs = data.observations[n];
      obs.person_id = id;
      obs.obs_id += "#" + std::to_string(copies[p]);
      out.observations.push_back(std::move(obs));
    }
  }
  return out;
}

Eigen::MatrixXd BootstrapResult::converged_draws() const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n_converged()), draws.cols());
  Eigen::Index r = 0;
  for (std::size_t s = 0; s < s_samples; ++s) {
    if (converged[s]) out.row(r++) = draws.row(static_cast<Eigen::Index>(s));
  }
  return out;
}

std::vector<double> BootstrapResult::converged_column(std::size_t k) const {
  std::vector<double> out;
  out.reserve(n_converged());
  for (std::size_t s = 0; s < s_samples; ++s) {
    if (converged[s]) out.push_back(draws(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(k)));
  }
  return out;
}

BootstrapResult bootstrap_run(const Dataset& data, const ModelSpec& spec,
                              const EstimationOptions& options, std::size_t samples,
                              std::uint64_t base_seed, std::size_t jobs) {
  if (samples < 2) throw InputError("bootstrap needs at least two samples");
  options.validate();

  BootstrapResult out;
  out.s_samples = samples;
  out.base_seed = base_seed;
  out.param_names = spec.free_parameter_names();
  const auto k = static_cast<Eigen::Index>(out.param_names.size());
  out.draws = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(samples), k,
                                        std::numeric_limits<double>::quiet_NaN());
  out.converged.assign(samples, false);
  out.statuses.assign(samples, "");

  EstimationOptions single = options;
  single.n_starts = 1;
  const Eigen::VectorXd start = spec.start_values();

  parallel_for(samples, jobs, [&](std::size_t s) {
    const Dataset resample = resample_persons(data, derive_seed(base_seed, {s}));
    try {
      const SampleLikelihood likelihood(resample, spec);
      const EstimationResult r = estimate(likelihood, start, single, s);
      out.draws.row(static_cast<Eigen::Index>(s)) = r.params_hat.transpose();
      out.converged[s] = r.converged() && !r.diverging;
      out.statuses[s] = r.diverging ? "diverging" : to_string(r.status);
    } catch (const Error& e) {
      out.statuses[s] = std::string("error: ") + e.what();
    }
  });

  for (std::size_t s = 0; s < samples; ++s) {
    if (!out.converged[s]) ++out.n_failed;
  }
  if (out.n_failed * 10 > samples) {
    std::ostringstream msg;
    msg << out.n_failed << " of " << samples << " bootstrap replicates failed:";
    std::map<std::string, std::size_t> tally;
    for (std::size_t s = 0; s < samples; ++s) {
      if (!out.converged[s]) ++tally[out.statuses[s]];
    }
    for (const auto& [status, count] : tally) msg << ' ' << status << " x" << count << ';';
    out.warnings.push_back(msg.str());
  }
  return out;
}

Eigen::MatrixXd bootstrap_covariance(const BootstrapResult& result) {
  const Eigen::MatrixXd d = result.converged_draws();
  if (d.rows() < 2) throw InsufficientDataError("bootstrap covariance needs two converged draws");
  const Eigen::MatrixXd centred = d.rowwise() - d.colwise().mean();
  const Eigen::MatrixXd cov = centred.transpose() * centred / static_cast<double>(d.rows() - 1);
  return 0.5 * (cov + cov.transpose());
}

namespace {

std::vector<double> sorted_draws(std::span<const double> draws, double level) {
  if (!(level > 0.0 && level < 1.0)) throw InputError("interval level must lie in (0, 1)");
  if (draws.size() < kMinIntervalDraws) {
    throw InsufficientDataError("empirical intervals need at least " +
                                std::to_string(kMinIntervalDraws) + " draws, got " +
                                std::to_string(draws.size()));
  }
  std::vector<double> sorted(draws.begin(), draws.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) throw InputError("draws must be finite");
  }
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

// Order statistic at a 1-based, possibly fractional position.
double order_statistic(const std::vector<double>& sorted, double position) {
  const double n = static_cast<double>(sorted.size());
  position = std::clamp(position, 1.0, n);
  const auto lo = static_cast<std::size_t>(std::floor(position));
  const double frac = position - static_cast<double>(lo);
  if (frac == 0.0 || lo >= sorted.size()) return sorted[lo - 1];
  return sorted[lo - 1] + frac * (sorted[lo] - sorted[lo - 1]);
}

double safe_asymmetry(double lower, double center, double upper) {
  return upper > lower ? asymmetry_index(lower, center, upper) : 0.0;
}

}  // namespace

ConfidenceInterval quantile_interval(std::span<const double> draws, double level, double center) {
  const auto sorted = sorted_draws(draws, level);
  const double n = static_cast<double>(sorted.size());
  double k = (1.0 - level) / 2.0 * n;
  const double rounded = std::round(k);
  const bool integral = std::abs(k - rounded) < 1e-9;
  if (integral) k = rounded;

  ConfidenceInterval ci;
  ci.level = level;
  ci.method = IntervalMethod::bootstrap_quantile;
  ci.lower = order_statistic(sorted, k);
  ci.upper = order_statistic(sorted, n - k + 1.0);
  ci.asymmetry_index = safe_asymmetry(ci.lower, center, ci.upper);

  std::ostringstream note;
  if (!integral) {
    note << "(1-level)/2*S = " << k << " is not an integer; order statistics interpolated";
  }
  if (k < 1.0) {
    if (!integral) note << "; ";
    note << "too few draws for this level; tails truncated at the sample extremes";
  }
  ci.note = note.str();
  return ci;
}

ConfidenceInterval hpd_interval(std::span<const double> draws, double level, double center) {
  const auto sorted = sorted_draws(draws, level);
  const std::size_t n = sorted.size();
  const auto m = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::ceil(level * static_cast<double>(n) - 1e-9)));
  const std::size_t span = std::max<std::size_t>(m, 1) - 1;

  std::size_t best = 0;
  double best_width = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + span < n; ++i) {
    const double w = sorted[i + span] - sorted[i];
    if (w < best_width) {
      best_width = w;
      best = i;
    }
  }
  ConfidenceInterval ci;
  ci.level = level;
  ci.method = IntervalMethod::hpd;
  ci.lower = sorted[best];
  ci.upper = sorted[best + span];
  ci.asymmetry_index = safe_asymmetry(ci.lower, center, ci.upper);
  return ci;
}

EmpiricalPValue empirical_p_value(std::span<const double> draws, double mle) {
  if (mle == 0.0 || !std::isfinite(mle)) {
    throw InputError("empirical p-value needs a non-zero estimate to define a direction");
  }
  if (draws.size() < kMinIntervalDraws) {
    throw InsufficientDataError("empirical p-value needs at least " +
                                std::to_string(kMinIntervalDraws) + " draws");
  }
  EmpiricalPValue out;
  out.n = draws.size();
  for (double d : draws) {
    const bool crosses = mle > 0.0 ? d <= 0.0 : d >= 0.0;
    if (crosses) ++out.crossings;
  }
  out.p_value = static_cast<double>(out.crossings) / static_cast<double>(out.n);
  out.below_resolution = out.crossings == 0;
  return out;
}

double asymmetry_index(double lower, double center, double upper) {
  if (!(lower < upper)) throw InputError("asymmetry index needs lower < upper");
  return ((upper - center) - (center - lower)) / (upper - lower);
}

}  // namespace choicestat
