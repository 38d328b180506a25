#include "choicestat/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "choicestat/errors.hpp"

namespace choicestat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Alternative one_sided_direction(Alternative declared) {
  return declared == Alternative::less || declared == Alternative::greater ? declared
                                                                           : Alternative::automatic;
}

std::vector<Alternative> declared_alternatives(const ModelSpec& spec) {
  std::vector<Alternative> out;
  for (const auto& p : spec.parameters) {
    if (!p.fixed) out.push_back(p.alternative);
  }
  return out;
}

std::string percent_label(double level) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g%%", 100.0 * level);
  return buf;
}

}  // namespace

std::string to_string(SidedMode m) {
  switch (m) {
    case SidedMode::one: return "one";
    case SidedMode::two: return "two";
    case SidedMode::automatic: return "auto";
  }
  return "auto";
}

SidedMode sided_mode_from_string(const std::string& s) {
  if (s == "one") return SidedMode::one;
  if (s == "two") return SidedMode::two;
  if (s == "auto") return SidedMode::automatic;
  throw InputError("sidedness must be one, two or auto, got '" + s + "'");
}

void AnalysisOptions::validate() const {
  if (!(ci_level > 0.0 && ci_level < 1.0)) throw InputError("confidence level must lie in (0, 1)");
  estimation.validate();
}

AnalysisResults analyse(const Dataset& data, const ModelSpec& spec, const AnalysisOptions& options) {
  options.validate();
  AnalysisResults out;
  out.options = options;
  const SampleLikelihood likelihood(data, spec);
  if (likelihood.n_free() == 0) throw InputError("the model has no free parameters to estimate");

  if (options.estimation.n_starts > 1) {
    try {
      auto ms = multi_start(likelihood, options.estimation);
      out.estimation = std::move(ms.best);
      out.starts = std::move(ms.all);
      out.start_disagreement = ms.disagreement;
    } catch (const EstimationError&) {
      // Report the declared start so the caller sees a concrete status.
      out.estimation = estimate(likelihood, spec.start_values(), options.estimation);
      out.starts = {out.estimation};
    }
  } else {
    out.estimation = estimate(likelihood, spec.start_values(), options.estimation);
    out.starts = {out.estimation};
  }
  const EstimationResult& est = out.estimation;
  out.warnings = est.warnings;

  out.fit.ll_hat = est.ll_hat;
  out.fit.ll_0 = est.ll_0;
  out.fit.k = likelihood.n_free();
  out.fit.n_observations = likelihood.n_observations();
  out.fit.n_persons = likelihood.n_persons();
  out.fit.rho_bar_squared = est.ll_0 < 0.0 ? rho_bar_squared(est.ll_hat, est.ll_0, out.fit.k) : kNaN;
  out.fit.bic = bic(est.ll_hat, out.fit.k, out.fit.n_observations);

  if (!est.converged() || !est.identification.is_identified) return out;

  const LikelihoodEvaluation eval = likelihood.evaluate(est.params_hat, options.grouping, false);
  out.covariance = covariance_set(est.hessian_at_optimum, eval.scores, options.grouping, est.param_names);
  const CovarianceSet& cov = *out.covariance;

  const auto declared = declared_alternatives(spec);
  for (std::size_t k = 0; k < est.param_names.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    const ParameterDef& def = spec.parameters[*spec.find_parameter(est.param_names[k])];
    ParameterInference p;
    p.name = def.name;
    p.estimate = est.params_hat(i);
    p.h0_value = def.h0_value;
    p.declared = declared[k];
    p.se_classical = cov.se_classical(i);
    p.se_bhhh = cov.se_bhhh(i);
    p.se_robust = cov.se_robust(i);
    const Alternative one = one_sided_direction(def.alternative);
    p.t_classical_one_sided = t_test(p.estimate, p.se_classical, p.h0_value, one);
    p.t_classical_two_sided = t_test(p.estimate, p.se_classical, p.h0_value, Alternative::two_sided);
    p.t_robust_one_sided = t_test(p.estimate, p.se_robust, p.h0_value, one);
    p.t_robust_two_sided = t_test(p.estimate, p.se_robust, p.h0_value, Alternative::two_sided);
    if (p.t_classical_one_sided.sign_conflict) {
      out.warnings.push_back("estimate of '" + p.name + "' lies on the opposite side of its declared alternative (" +
                             to_string(def.alternative) + ")");
    }
    p.ci_classical = asymptotic_ci(p.estimate, p.se_classical, options.ci_level);
    p.ci_robust = asymptotic_ci(p.estimate, p.se_robust, options.ci_level, IntervalMethod::asymptotic_robust);
    p.width_ratio = p.se_robust / p.se_classical;
    if (options.restriction_tests) {
      try {
        p.restriction = restriction_tests(data, likelihood, est, p.name, p.h0_value, p.se_classical,
                                          options.estimation);
      } catch (const Error& e) {
        out.warnings.push_back("LR/LM tests for '" + p.name + "' unavailable: " + e.what());
      }
    }
    out.parameters.push_back(std::move(p));
  }
  return out;
}

BootstrapSummary summarise_bootstrap(const BootstrapResult& result, const Eigen::VectorXd& estimates,
                                     const Eigen::VectorXd& classical_se, double level,
                                     const std::vector<Alternative>& declared) {
  if (static_cast<std::size_t>(estimates.size()) != result.param_names.size()) {
    throw InputError("estimates do not match the bootstrap parameters");
  }
  BootstrapSummary out;
  out.level = level;
  out.s_samples = result.s_samples;
  out.n_converged = result.n_converged();
  out.n_failed = result.n_failed;
  out.base_seed = result.base_seed;
  out.warnings = result.warnings;
  out.covariance = bootstrap_covariance(result);

  for (std::size_t k = 0; k < result.param_names.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    const auto column = result.converged_column(k);
    BootstrapParameterSummary p;
    p.name = result.param_names[k];
    p.estimate = estimates(i);
    p.se_bootstrap = std::sqrt(out.covariance(i, i));
    const Alternative one = one_sided_direction(k < declared.size() ? declared[k] : Alternative::automatic);
    if (p.se_bootstrap > 0.0) {
      p.t_one_sided = t_test(p.estimate, p.se_bootstrap, 0.0, one);
      p.t_two_sided = t_test(p.estimate, p.se_bootstrap, 0.0, Alternative::two_sided);
    } else {
      p.t_one_sided.p_value = p.t_two_sided.p_value = kNaN;
      p.t_one_sided.statistic = p.t_two_sided.statistic = kNaN;
      out.warnings.push_back("bootstrap draws of '" + p.name + "' do not vary");
    }
    if (p.estimate != 0.0) {
      p.empirical = empirical_p_value(column, p.estimate);
    } else {
      p.empirical.p_value = kNaN;
      p.empirical.n = column.size();
    }
    p.ci_bootstrap_se =
        asymptotic_ci(p.estimate, p.se_bootstrap, level, IntervalMethod::asymptotic_bootstrap_se);
    p.ci_quantile = quantile_interval(column, level, p.estimate);
    p.ci_hpd = hpd_interval(column, level, p.estimate);
    p.width_ratio_classical =
        k < static_cast<std::size_t>(classical_se.size()) && classical_se(i) > 0.0
            ? p.se_bootstrap / classical_se(i)
            : kNaN;
    out.parameters.push_back(std::move(p));
  }
  return out;
}

std::string sidedness_note(SidedMode mode) {
  std::string note =
      "1-sided p-values test H0 against the declared alternative of each parameter, or against the side "
      "of the estimate when none is declared; 2-sided p-values are twice the smaller tail.";
  switch (mode) {
    case SidedMode::one: return note + " Only 1-sided p-values are shown.";
    case SidedMode::two: return note + " Only 2-sided p-values are shown.";
    case SidedMode::automatic: return note;
  }
  return note;
}

TableInput estimation_table(const AnalysisResults& results, const TableColumns& columns) {
  TableInput t;
  const SidedMode mode = results.options.sided;
  const bool one = mode != SidedMode::two;
  const bool two = mode != SidedMode::one;
  TableInput::NumericColumn se_c{"se classical", {}}, se_r{"se robust", {}};
  TableInput::NumericColumn t_c{"t classical", {}}, t_r{"t robust", {}};
  TableInput::PValueColumn p1{"p classical", Sidedness::one_sided_less, {}, {}};
  TableInput::PValueColumn p2{"p classical", Sidedness::two_sided, {}, {}};
  TableInput::PValueColumn p_lr{"p LR", Sidedness::chi_square, {}, {}};
  TableInput::PValueColumn p_lm{"p LM", Sidedness::chi_square, {}, {}};
  const std::string pct = percent_label(results.options.ci_level);
  TableInput::NumericColumn lo_c{"L classical " + pct, {}}, hi_c{"U classical " + pct, {}};
  TableInput::NumericColumn lo_r{"L robust " + pct, {}}, hi_r{"U robust " + pct, {}};
  TableInput::NumericColumn ratio{"width robust/classical", {}};

  for (const auto& p : results.parameters) {
    t.parameters.push_back(p.name);
    t.estimates.push_back(p.estimate);
    se_c.values.push_back(p.se_classical);
    se_r.values.push_back(p.se_robust);
    t_c.values.push_back(p.t_classical_one_sided.statistic);
    t_r.values.push_back(p.t_robust_one_sided.statistic);
    p1.values.push_back(p.t_classical_one_sided.p_value);
    p2.values.push_back(p.t_classical_two_sided.p_value);
    p_lr.values.push_back(p.restriction ? p.restriction->lr.p_value : kNaN);
    p_lm.values.push_back(p.restriction ? p.restriction->lm.p_value : kNaN);
    lo_c.values.push_back(p.ci_classical.lower);
    hi_c.values.push_back(p.ci_classical.upper);
    lo_r.values.push_back(p.ci_robust.lower);
    hi_r.values.push_back(p.ci_robust.upper);
    ratio.values.push_back(p.width_ratio);
  }
  if (columns.se) t.se_columns = {se_c, se_r};
  if (columns.t) t.t_columns = {t_c, t_r};
  if (one) t.p_columns.push_back(p1);
  if (two) t.p_columns.push_back(p2);
  if (columns.trinity) {
    t.p_columns.push_back(p_lr);
    t.p_columns.push_back(p_lm);
  }
  if (columns.intervals) {
    t.interval_columns = {lo_c, hi_c, lo_r, hi_r};
    t.ratio_columns = {ratio};
  }
  const auto& f = results.fit;
  t.notes.push_back("log-likelihood " + format_significant(f.ll_hat, 6) + ", null log-likelihood " +
                    format_significant(f.ll_0, 6) + ", K = " + std::to_string(f.k) +
                    ", observations = " + std::to_string(f.n_observations) +
                    ", persons = " + std::to_string(f.n_persons));
  t.notes.push_back("adjusted rho-squared " + format_fixed(f.rho_bar_squared, 4) + ", BIC " +
                    format_fixed(f.bic, 2));
  t.notes.push_back("robust errors group scores by " + to_string(results.options.grouping));
  for (const auto& w : results.warnings) t.notes.push_back("warning: " + w);
  return t;
}

TableInput bootstrap_table(const BootstrapSummary& summary, SidedMode sided) {
  TableInput t;
  const std::string pct = percent_label(summary.level);
  TableInput::NumericColumn se{"se bootstrap", {}};
  TableInput::NumericColumn tt{"t bootstrap", {}};
  TableInput::PValueColumn p1{"p bootstrap", Sidedness::one_sided_less, {}, {}};
  TableInput::PValueColumn p2{"p bootstrap", Sidedness::two_sided, {}, {}};
  TableInput::PValueColumn pe{"p empirical", Sidedness::one_sided_less, {}, {}};
  TableInput::NumericColumn lq{"L quantile " + pct, {}}, uq{"U quantile " + pct, {}};
  TableInput::NumericColumn lh{"L HPD " + pct, {}}, uh{"U HPD " + pct, {}};
  TableInput::NumericColumn wr{"width bootstrap/classical", {}};
  TableInput::NumericColumn aq{"asymmetry quantile", {}}, ah{"asymmetry HPD", {}};
  for (const auto& p : summary.parameters) {
    t.parameters.push_back(p.name);
    t.estimates.push_back(p.estimate);
    se.values.push_back(p.se_bootstrap);
    tt.values.push_back(p.t_one_sided.statistic);
    p1.values.push_back(p.t_one_sided.p_value);
    p2.values.push_back(p.t_two_sided.p_value);
    pe.values.push_back(p.empirical.p_value);
    pe.upper_bounds.push_back(p.empirical.below_resolution ? 1.0 / static_cast<double>(p.empirical.n) : kNaN);
    lq.values.push_back(p.ci_quantile.lower);
    uq.values.push_back(p.ci_quantile.upper);
    lh.values.push_back(p.ci_hpd.lower);
    uh.values.push_back(p.ci_hpd.upper);
    wr.values.push_back(p.width_ratio_classical);
    aq.values.push_back(p.ci_quantile.asymmetry_index);
    ah.values.push_back(p.ci_hpd.asymmetry_index);
  }
  t.se_columns = {se};
  t.t_columns = {tt};
  if (sided != SidedMode::two) t.p_columns.push_back(p1);
  if (sided != SidedMode::one) t.p_columns.push_back(p2);
  t.p_columns.push_back(pe);
  t.interval_columns = {lq, uq, lh, uh};
  t.ratio_columns = {wr, aq, ah};
  t.notes.push_back(std::to_string(summary.n_converged) + " of " + std::to_string(summary.s_samples) +
                    " bootstrap replicates converged (base seed " + std::to_string(summary.base_seed) + ")");
  t.notes.push_back("empirical p: share of draws on the other side of zero from the estimate, zeros included");
  for (const auto& p : summary.parameters) {
    if (!p.ci_quantile.note.empty()) {
      t.notes.push_back("quantile interval: " + p.ci_quantile.note);
      break;
    }
  }
  for (const auto& w : summary.warnings) t.notes.push_back("warning: " + w);
  return t;
}

}  // namespace choicestat
