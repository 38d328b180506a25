#include "choicestat/trinity.hpp"

#include "choicestat/errors.hpp"
#include "choicestat/linalg.hpp"

namespace choicestat {

RestrictionTests restriction_tests(const Dataset& data, const SampleLikelihood& likelihood,
                                   const EstimationResult& general, const std::string& parameter,
                                   double h0_value, double wald_se,
                                   const EstimationOptions& options) {
  const ModelSpec& spec = likelihood.model().spec();
  const auto k = spec.free_index(parameter);
  if (!k) throw InputError("cannot restrict '" + parameter + "': not a free parameter");

  RestrictionTests out;
  out.parameter = parameter;
  out.h0_value = h0_value;
  out.wald = wald_test(general.params_hat(static_cast<Eigen::Index>(*k)), wald_se, h0_value);

  const ModelSpec restricted_spec = spec.with_fixed(parameter, h0_value);
  const SampleLikelihood restricted(data, restricted_spec);

  // Restricted estimates, then re-embedded into the general parameter vector.
  Eigen::VectorXd restricted_hat;
  if (restricted.n_free() == 0) {
    restricted_hat = Eigen::VectorXd(0);
    out.ll_restricted = restricted.log_likelihood(restricted_hat).value;
  } else {
    EstimationOptions opts = options;
    opts.n_starts = 1;
    const EstimationResult r = estimate(restricted, restricted_spec.start_values(), opts);
    out.restricted_status = r.status;
    if (!r.converged()) {
      throw EstimationError("restricted model for '" + parameter + "' did not converge (" +
                            to_string(r.status) + ")");
    }
    restricted_hat = r.params_hat;
    out.ll_restricted = r.ll_hat;
  }

  const auto pos = static_cast<Eigen::Index>(*k);
  Eigen::VectorXd embedded(likelihood.n_free());
  embedded.head(pos) = restricted_hat.head(pos);
  embedded(pos) = h0_value;
  embedded.tail(embedded.size() - pos - 1) = restricted_hat.tail(restricted_hat.size() - pos);

  out.lr = lr_test(general.ll_hat, out.ll_restricted, 1);

  const LikelihoodEvaluation eval = likelihood.evaluate(embedded);
  const Eigen::MatrixXd information = -eval.hessian;
  Eigen::LLT<Eigen::MatrixXd> llt(information);
  if (llt.info() == Eigen::Success) {
    out.lm = lm_test(eval.gradient, information, 1);
  } else {
    out.lm_used_bhhh = true;
    out.lm = lm_test(eval.gradient, eval.scores.transpose() * eval.scores, 1);
  }
  return out;
}

}  // namespace choicestat
