#include "choicestat/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <sstream>

#include "choicestat/bootstrap.hpp"
#include "choicestat/covariance.hpp"
#include "choicestat/distributions.hpp"
#include "choicestat/errors.hpp"
#include "choicestat/inference.hpp"
#include "choicestat/parallel.hpp"
#include "choicestat/rng.hpp"
#include "choicestat/trinity.hpp"

namespace choicestat {

void ExperimentConfig::validate() const {
  spec.validate();
  if (static_cast<std::size_t>(true_params.size()) != spec.n_free()) {
    throw InputError("true_params must list one value per free parameter");
  }
  if (!spec.free_index(target_parameter)) {
    throw InputError("target parameter '" + target_parameter + "' is not a free parameter");
  }
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InputError("alpha must lie in [0, 1)");
  if (!(ci_level > 0.0 && ci_level < 1.0)) throw InputError("ci_level must lie in (0, 1)");
  if (replications < 50) throw InputError("at least 50 replications are required");
  if (n_persons < 1 || obs_per_person < 1) throw InputError("sample size must be positive");
  if (effect_sizes.empty()) throw InputError("at least one effect size is required");
  if (one_sided != Alternative::less && one_sided != Alternative::greater) {
    throw InputError("one_sided must be 'less' or 'greater'");
  }
  if (bootstrap_samples == 1) throw InputError("bootstrap_samples must be 0 or at least 2");
  estimation.validate();
}

Rate make_rate(std::size_t hits, std::size_t trials) {
  Rate r;
  r.hits = hits;
  r.trials = trials;
  if (trials > 0) {
    r.rate = static_cast<double>(hits) / static_cast<double>(trials);
    r.standard_error = std::sqrt(r.rate * (1.0 - r.rate) / static_cast<double>(trials));
  }
  return r;
}

namespace {

double normality_gap(std::vector<double> values, double mean, double sd) {
  if (!(sd > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double gap = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = normal_cdf((values[i] - mean) / sd);
    gap = std::max({gap, std::abs(static_cast<double>(i + 1) / n - f),
                    std::abs(static_cast<double>(i) / n - f)});
  }
  return gap;
}

struct ColumnStats {
  double mean = 0.0;
  double sd = 0.0;
  double gap = std::numeric_limits<double>::quiet_NaN();
};

ColumnStats column_stats(const std::vector<double>& v) {
  ColumnStats s;
  if (v.empty()) return s;
  const double n = static_cast<double>(v.size());
  for (double x : v) s.mean += x;
  s.mean /= n;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / (n - 1.0));
  }
  s.gap = normality_gap(v, s.mean, s.sd);
  return s;
}

enum class Mode { size_power, coverage };

// Keeps coverage replications on a different seed stream from effect 0.
constexpr std::uint64_t kCoverageStream = 0xC0FFEE;

ReplicationRecord run_replication(const ExperimentConfig& cfg, Mode mode, std::size_t replication,
                                  double effect, const Eigen::VectorXd& truth, std::uint64_t seed) {
  ReplicationRecord rec;
  rec.replication = replication;
  rec.effect = effect;
  rec.estimate = rec.se_classical = rec.se_robust = std::numeric_limits<double>::quiet_NaN();

  const auto k = static_cast<Eigen::Index>(*cfg.spec.free_index(cfg.target_parameter));
  const double target_truth = truth(k);
  try {
    const auto sim = simulate_dataset(cfg.spec, truth, cfg.design, cfg.n_persons,
                                      cfg.obs_per_person, derive_seed(seed, {0}));
    const SampleLikelihood likelihood(sim.data, cfg.spec);
    EstimationOptions opts = cfg.estimation;
    opts.n_starts = 1;
    const EstimationResult est = estimate(likelihood, cfg.spec.start_values(), opts);
    if (!est.converged() || est.diverging) {
      rec.status = est.diverging ? "diverging" : to_string(est.status);
      return rec;
    }
    const auto eval = likelihood.evaluate(est.params_hat, ScoreGrouping::person, false);
    const CovarianceSet cov = covariance_set(est.hessian_at_optimum, eval.scores,
                                             ScoreGrouping::person, est.param_names);
    rec.estimate = est.params_hat(k);
    rec.se_classical = cov.se_classical(k);
    rec.se_robust = cov.se_robust(k);

    if (mode == Mode::size_power) {
      const auto record = [&](const char* key, const TestResult& t) {
        rec.p_values[key] = t.p_value;
        rec.rejected[key] = rejects(t, cfg.alpha);
      };
      record(methods::t_classical_one_sided, t_test(rec.estimate, rec.se_classical, 0.0, cfg.one_sided));
      record(methods::t_classical_two_sided,
             t_test(rec.estimate, rec.se_classical, 0.0, Alternative::two_sided));
      record(methods::t_robust_one_sided, t_test(rec.estimate, rec.se_robust, 0.0, cfg.one_sided));
      record(methods::t_robust_two_sided, t_test(rec.estimate, rec.se_robust, 0.0, Alternative::two_sided));
      if (cfg.include_lr_lm) {
        const auto trio = restriction_tests(sim.data, likelihood, est, cfg.target_parameter, 0.0,
                                            rec.se_classical, opts);
        record(methods::wald, trio.wald);
        record(methods::lr, trio.lr);
        record(methods::lm, trio.lm);
      } else {
        record(methods::wald, wald_test(rec.estimate, rec.se_classical, 0.0));
      }
    } else {
      const auto add = [&](const std::string& key, const ConfidenceInterval& ci) {
        rec.intervals[key] = {ci.lower, ci.upper};
        rec.covered[key] = ci.contains(target_truth);
      };
      add(to_string(IntervalMethod::asymptotic_classical),
          asymptotic_ci(rec.estimate, rec.se_classical, cfg.ci_level));
      add(to_string(IntervalMethod::asymptotic_robust),
          asymptotic_ci(rec.estimate, rec.se_robust, cfg.ci_level, IntervalMethod::asymptotic_robust));
      if (cfg.bootstrap_samples >= 2) {
        const auto boot = bootstrap_run(sim.data, cfg.spec, opts, cfg.bootstrap_samples,
                                        derive_seed(seed, {1}), 1);
        const auto column = boot.converged_column(static_cast<std::size_t>(k));
        if (column.size() < kMinIntervalDraws) {
          rec.status = "bootstrap_failed";
          return rec;
        }
        add(to_string(IntervalMethod::bootstrap_quantile),
            quantile_interval(column, cfg.ci_level, rec.estimate));
      }
    }
    rec.ok = true;
    rec.status = "ok";
  } catch (const Error& e) {
    rec.ok = false;
    rec.status = std::string("error: ") + e.what();
  }
  return rec;
}

EffectSummary summarise(const std::vector<ReplicationRecord>& records, double effect) {
  EffectSummary s;
  s.effect = effect;
  std::map<std::string, std::size_t> rejects, covers;
  std::vector<double> estimates;
  double se_c = 0.0, se_r = 0.0;
  for (const auto& r : records) {
    if (!r.ok) {
      ++s.failures;
      continue;
    }
    ++s.replications_run;
    estimates.push_back(r.estimate);
    se_c += r.se_classical;
    se_r += r.se_robust;
    for (const auto& [key, hit] : r.rejected) rejects[key] += hit ? 1 : 0;
    for (const auto& [key, hit] : r.covered) covers[key] += hit ? 1 : 0;
  }
  for (const auto& [key, hits] : rejects) s.rejection[key] = make_rate(hits, s.replications_run);
  for (const auto& [key, hits] : covers) s.coverage[key] = make_rate(hits, s.replications_run);
  const auto stats = column_stats(estimates);
  s.estimate_mean = stats.mean;
  s.estimate_sd = stats.sd;
  s.normality_gap = stats.gap;
  if (s.replications_run > 0) {
    s.mean_se_classical = se_c / static_cast<double>(s.replications_run);
    s.mean_se_robust = se_r / static_cast<double>(s.replications_run);
  }
  return s;
}

void add_failure_warning(MonteCarloReport& report, const EffectSummary& s) {
  const std::size_t total = s.replications_run + s.failures;
  if (s.failures * 10 > total) {
    std::ostringstream msg;
    msg << s.failures << " of " << total << " replications failed at effect " << s.effect;
    report.warnings.push_back(msg.str());
  }
}

}  // namespace

SamplingSummary sampling_distribution_summary(const Eigen::MatrixXd& estimates) {
  if (estimates.rows() < 50) throw InputError("sampling summary needs at least 50 replications");
  SamplingSummary out;
  out.mean.resize(estimates.cols());
  out.sd.resize(estimates.cols());
  out.normality_gap.resize(estimates.cols());
  for (Eigen::Index c = 0; c < estimates.cols(); ++c) {
    std::vector<double> v(estimates.col(c).data(), estimates.col(c).data() + estimates.rows());
    const auto s = column_stats(v);
    out.mean(c) = s.mean;
    out.sd(c) = s.sd;
    out.normality_gap(c) = s.gap;
  }
  return out;
}

MonteCarloReport size_and_power_experiment(const ExperimentConfig& config, std::size_t jobs) {
  config.validate();
  const auto k = static_cast<Eigen::Index>(*config.spec.free_index(config.target_parameter));
  MonteCarloReport report;
  report.experiment = "size_power";

  for (std::size_t e = 0; e < config.effect_sizes.size(); ++e) {
    const double effect = config.effect_sizes[e];
    Eigen::VectorXd truth = config.true_params;
    truth(k) = effect;
    std::vector<ReplicationRecord> records(config.replications);
    parallel_for(config.replications, jobs, [&](std::size_t r) {
      records[r] = run_replication(config, Mode::size_power, r, effect, truth,
                                   derive_seed(config.seed, {e, r}));
    });
    const auto summary = summarise(records, effect);
    report.replications_run += summary.replications_run;
    report.failures += summary.failures;
    add_failure_warning(report, summary);
    report.effects.push_back(summary);
    std::move(records.begin(), records.end(), std::back_inserter(report.records));
  }

  for (std::size_t e = 1; e < report.effects.size(); ++e) {
    const auto& prev = report.effects[e - 1];
    const auto& cur = report.effects[e];
    if (std::abs(cur.effect) > std::abs(prev.effect) &&
        cur.rejection.at(methods::t_classical_two_sided).rate <
            prev.rejection.at(methods::t_classical_two_sided).rate) {
      report.warnings.push_back("two-sided power is not monotone in |effect| between " +
                                std::to_string(prev.effect) + " and " + std::to_string(cur.effect));
    }
  }
  return report;
}

MonteCarloReport coverage_experiment(const ExperimentConfig& config, std::size_t jobs) {
  config.validate();
  MonteCarloReport report;
  report.experiment = "coverage";
  const auto k = static_cast<Eigen::Index>(*config.spec.free_index(config.target_parameter));
  const double truth_value = config.true_params(k);

  std::vector<ReplicationRecord> records(config.replications);
  parallel_for(config.replications, jobs, [&](std::size_t r) {
    records[r] = run_replication(config, Mode::coverage, r, truth_value, config.true_params,
                                 derive_seed(config.seed, {kCoverageStream, r}));
  });
  const auto summary = summarise(records, truth_value);
  report.replications_run = summary.replications_run;
  report.failures = summary.failures;
  add_failure_warning(report, summary);
  report.effects.push_back(summary);
  report.records = std::move(records);
  return report;
}

}  // namespace choicestat
