#include "choicestat/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "choicestat/errors.hpp"
#include "choicestat/linalg.hpp"
#include "choicestat/parallel.hpp"
#include "choicestat/rng.hpp"

namespace choicestat {

void EstimationOptions::validate() const {
  if (max_iterations < 1 || step_halving_max < 1 || n_starts < 1) {
    throw InputError("estimation counts must be at least 1");
  }
  if (!(gradient_tolerance > 0.0)) throw InputError("gradient tolerance must be positive");
  if (!(start_perturbation_scale >= 0.0)) throw InputError("perturbation scale must be non-negative");
  if (!(identification_threshold > 0.0)) throw InputError("identification threshold must be positive");
}

std::string to_string(EstimationStatus s) {
  switch (s) {
    case EstimationStatus::converged: return "converged";
    case EstimationStatus::max_iterations: return "max_iterations";
    case EstimationStatus::singular_hessian: return "singular_hessian";
    case EstimationStatus::line_search_failure: return "line_search_failure";
  }
  return "max_iterations";
}

EstimationStatus estimation_status_from_string(const std::string& s) {
  if (s == "converged") return EstimationStatus::converged;
  if (s == "max_iterations") return EstimationStatus::max_iterations;
  if (s == "singular_hessian") return EstimationStatus::singular_hessian;
  if (s == "line_search_failure") return EstimationStatus::line_search_failure;
  throw InputError("unknown estimation status '" + s + "'");
}

IdentificationReport check_identification(const Eigen::MatrixXd& hessian, double threshold,
                                          const std::vector<std::string>& names) {
  if (hessian.rows() != hessian.cols() || hessian.rows() == 0) {
    throw InputError("identification check needs a non-empty square matrix");
  }
  if (!hessian.allFinite()) throw InputError("identification check on a non-finite matrix");
  if (asymmetry(hessian) > 1e-8) throw InputError("identification check on a non-symmetric matrix");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrise(hessian));
  const Eigen::VectorXd abs_ev = es.eigenvalues().cwiseAbs();
  const double largest = abs_ev.maxCoeff();
  const double smallest = abs_ev.minCoeff();

  IdentificationReport report;
  report.eigenvalues = es.eigenvalues();
  report.condition_number = smallest > 0.0 ? largest / smallest
                                           : std::numeric_limits<double>::infinity();
  const double ratio = largest > 0.0 ? smallest / largest : 0.0;
  report.is_identified = ratio > threshold;

  std::vector<bool> suspect(static_cast<std::size_t>(hessian.rows()), false);
  for (Eigen::Index i = 0; i < abs_ev.size(); ++i) {
    const bool null_direction = !(largest > 0.0) || abs_ev(i) <= threshold * largest;
    if (!null_direction) {
      ++report.hessian_rank;
      continue;
    }
    const Eigen::VectorXd v = es.eigenvectors().col(i).cwiseAbs();
    const double vmax = v.maxCoeff();
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      if (v(j) >= 0.5 * vmax) suspect[static_cast<std::size_t>(j)] = true;
    }
  }
  for (std::size_t j = 0; j < suspect.size(); ++j) {
    if (!suspect[j]) continue;
    report.suspect_parameters.push_back(j < names.size() ? names[j] : "#" + std::to_string(j));
  }
  return report;
}

namespace {

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

Eigen::VectorXd ascent_direction(const LikelihoodEvaluation& eval) {
  // Newton: solve (-H) d = g when -H is positive definite.
  Eigen::LLT<Eigen::MatrixXd> newton(-eval.hessian);
  if (newton.info() == Eigen::Success) {
    Eigen::VectorXd d = newton.solve(eval.gradient);
    if (d.allFinite()) return d;
  }
  // BHHH: outer product of person-level scores.
  const Eigen::MatrixXd outer = eval.scores.transpose() * eval.scores;
  Eigen::LLT<Eigen::MatrixXd> bhhh(outer);
  if (bhhh.info() == Eigen::Success) {
    Eigen::VectorXd d = bhhh.solve(eval.gradient);
    if (d.allFinite()) return d;
  }
  return abs_pseudo_inverse(eval.hessian) * eval.gradient;
}

// The likelihood of a separated sample keeps rising along some direction
// while a bounded concave likelihood falls far from its maximum. Probe far
// along every eigen-direction of the Hessian; the weakly curved ones are the
// candidates, but with a single parameter "weak" has no relative meaning.
bool likelihood_unbounded(const SampleLikelihood& likelihood, const Eigen::VectorXd& params,
                          double ll, const Eigen::MatrixXd& hessian, double bound) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrise(hessian));
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const Eigen::VectorXd v = es.eigenvectors().col(i);
    for (double sign : {1.0, -1.0}) {
      const double probe = likelihood.log_likelihood(params + sign * bound * v).value;
      if (probe >= ll - 1e-6) return true;
    }
  }
  return false;
}

}  // namespace

EstimationResult estimate(const SampleLikelihood& likelihood, const Eigen::VectorXd& start,
                          const EstimationOptions& options, std::size_t start_index) {
  options.validate();
  if (likelihood.n_free() == 0) throw InputError("model has no free parameters to estimate");

  EstimationResult result;
  result.param_names = likelihood.model().free_names();
  result.start_values = start;
  result.start_index = start_index;
  result.ll_0 = likelihood.null_log_likelihood();
  result.n_observations = likelihood.n_observations();
  result.n_persons = likelihood.n_persons();

  Eigen::VectorXd beta = start;
  LikelihoodEvaluation eval = likelihood.evaluate(beta);
  if (!std::isfinite(eval.log_likelihood)) {
    throw InputError("log-likelihood is not finite at the starting values");
  }
  result.ll_start = eval.log_likelihood;
  result.ll_trace.push_back(eval.log_likelihood);

  result.status = EstimationStatus::max_iterations;
  int iter = 0;
  for (;; ++iter) {
    if (inf_norm(eval.gradient) <= options.gradient_tolerance) {
      result.status = EstimationStatus::converged;
      break;
    }
    if (iter >= options.max_iterations) break;

    const Eigen::VectorXd direction = ascent_direction(eval);
    double step = 1.0;
    bool accepted = false;
    for (int h = 0; h <= options.step_halving_max; ++h, step *= 0.5) {
      const Eigen::VectorXd candidate = beta + step * direction;
      const auto ll = likelihood.log_likelihood(candidate);
      if (std::isfinite(ll.value) && ll.value >= eval.log_likelihood) {
        beta = candidate;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Near the optimum the predicted gain can fall below the rounding noise
      // of the summed log-likelihood; a step that still shrinks the gradient
      // is then taken as progress.
      const double predicted_gain = 0.5 * eval.gradient.dot(direction);
      const double noise = 1e-11 * std::max(1.0, std::abs(eval.log_likelihood));
      if (predicted_gain >= 0.0 && predicted_gain <= noise) {
        const Eigen::VectorXd candidate = beta + direction;
        const auto ll = likelihood.log_likelihood(candidate);
        if (std::isfinite(ll.value) && ll.value >= eval.log_likelihood - noise &&
            inf_norm(likelihood.gradient(candidate)) < inf_norm(eval.gradient)) {
          beta = candidate;
          accepted = true;
        }
      }
    }
    if (!accepted) {
      result.status = EstimationStatus::line_search_failure;
      break;
    }
    eval = likelihood.evaluate(beta);
    result.ll_trace.push_back(eval.log_likelihood);
  }

  result.iterations = iter;
  result.params_hat = beta;
  result.ll_hat = eval.log_likelihood;
  result.gradient_norm = inf_norm(eval.gradient);
  result.hessian_at_optimum = eval.hessian;
  result.floored_observations = eval.floored;
  result.identification =
      check_identification(eval.hessian, options.identification_threshold, result.param_names);

  if (!result.identification.is_identified) {
    result.status = EstimationStatus::singular_hessian;
    std::ostringstream msg;
    msg << "Hessian is singular (condition number " << result.identification.condition_number
        << "); suspect parameters:";
    for (const auto& name : result.identification.suspect_parameters) msg << ' ' << name;
    result.warnings.push_back(msg.str());
  } else if (likelihood_unbounded(likelihood, beta, result.ll_hat, eval.hessian,
                                  options.divergence_bound)) {
    result.diverging = true;
  }
  for (Eigen::Index k = 0; k < beta.size(); ++k) {
    if (std::abs(beta(k)) > options.divergence_bound) result.diverging = true;
  }
  if (result.diverging) {
    result.warnings.push_back(
        "estimates appear to diverge (perfect separation or an unbounded likelihood)");
  }
  if (result.floored_observations > 0) {
    result.warnings.push_back(std::to_string(result.floored_observations) +
                              " chosen probabilities underflowed to the log floor");
  }
  return result;
}

EstimationResult estimate(const Dataset& data, const ModelSpec& spec,
                          const EstimationOptions& options) {
  const SampleLikelihood likelihood(data, spec);
  return estimate(likelihood, spec.start_values(), options);
}

MultiStartResult multi_start(const SampleLikelihood& likelihood, const EstimationOptions& options) {
  options.validate();
  const auto n = static_cast<std::size_t>(options.n_starts);
  const Eigen::VectorXd declared = likelihood.model().spec().start_values();

  std::vector<EstimationResult> runs(n);
  parallel_for(n, options.jobs, [&](std::size_t s) {
    Eigen::VectorXd start = declared;
    if (s > 0) {
      Rng rng(derive_seed(options.seed, {s}));
      std::normal_distribution<double> noise(0.0, 1.0);
      for (Eigen::Index k = 0; k < start.size(); ++k) {
        start(k) += options.start_perturbation_scale * noise(rng);
      }
    }
    runs[s] = estimate(likelihood, start, options, s);
  });

  MultiStartResult out;
  std::optional<std::size_t> best;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t s = 0; s < n; ++s) {
    if (!runs[s].converged()) continue;
    lo = std::min(lo, runs[s].ll_hat);
    hi = std::max(hi, runs[s].ll_hat);
    if (!best || runs[s].ll_hat > runs[*best].ll_hat) best = s;
  }
  if (!best) {
    std::ostringstream msg;
    msg << "no start converged:";
    for (const auto& r : runs) msg << " [" << r.start_index << ": " << to_string(r.status) << ']';
    throw EstimationError(msg.str());
  }
  out.disagreement = hi - lo > 1e-4;
  out.best = runs[*best];
  if (out.disagreement) {
    out.best.warnings.push_back("converged starts disagree on the log-likelihood; local optima likely");
  }
  out.all = std::move(runs);
  return out;
}

MultiStartResult multi_start(const Dataset& data, const ModelSpec& spec,
                             const EstimationOptions& options) {
  const SampleLikelihood likelihood(data, spec);
  return multi_start(likelihood, options);
}

}  // namespace choicestat
