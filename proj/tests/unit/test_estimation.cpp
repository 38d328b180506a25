#include <cmath>

#include <gtest/gtest.h>

#include "choicestat/errors.hpp"
#include "choicestat/estimation.hpp"
#include "choicestat/simulate.hpp"
#include "support/fixtures.hpp"

using namespace choicestat;
using namespace fixtures;

namespace {

Dataset recovery_data(std::uint64_t seed, std::size_t persons = 1500) {
  return simulate_dataset(three_mode_spec(), three_mode_truth(), three_mode_design(0.8), persons, 2, seed).data;
}

}  // namespace

TEST(Estimate, StartingAtTheOptimumTakesNoIterations) {
  const Dataset d = recovery_data(1, 300);
  const auto first = estimate(d, three_mode_spec());
  ASSERT_TRUE(first.converged());
  ModelSpec restart = three_mode_spec();
  for (std::size_t k = 0; k < restart.parameters.size(); ++k) restart.parameters[k].start = first.params_hat(static_cast<Eigen::Index>(k));
  const auto second = estimate(d, restart);
  EXPECT_TRUE(second.converged());
  EXPECT_EQ(second.iterations, 0);
  EXPECT_LT((second.params_hat - first.params_hat).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Estimate, RecoversTrueParametersOnLargeSample) {
  const Dataset d = recovery_data(2, 3000);
  const auto r = estimate(d, three_mode_spec());
  ASSERT_TRUE(r.converged());
  EXPECT_TRUE(r.identification.is_identified);
  EXPECT_LT(r.gradient_norm, 1e-6);
  EXPECT_LT((r.params_hat - three_mode_truth()).cwiseAbs().maxCoeff(), 0.2);
  EXPECT_GT(r.ll_hat, r.ll_start);
  EXPECT_GT(r.ll_hat, r.ll_0);
  EXPECT_EQ(r.n_observations, 6000u);
  EXPECT_EQ(r.n_persons, 3000u);
}

TEST(Estimate, LogLikelihoodTraceIsMonotone) {
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    const auto r = estimate(recovery_data(seed, 200), three_mode_spec());
    ASSERT_GE(r.ll_trace.size(), 2u);
    for (std::size_t i = 1; i < r.ll_trace.size(); ++i) EXPECT_GE(r.ll_trace[i], r.ll_trace[i - 1] - 1e-9);
  }
}

TEST(Estimate, ScaledAttributeScalesItsCoefficient) {
  const Dataset d = recovery_data(6, 400);
  Dataset scaled = d;
  const auto col = static_cast<Eigen::Index>(d.attribute_index("cost"));
  for (auto& obs : scaled.observations) obs.attributes.col(col) *= 10.0;
  const auto a = estimate(d, three_mode_spec());
  const auto b = estimate(scaled, three_mode_spec());
  ASSERT_TRUE(a.converged());
  ASSERT_TRUE(b.converged());
  EXPECT_NEAR(b.params_hat(3) * 10.0, a.params_hat(3), 1e-6);
  EXPECT_NEAR(a.ll_hat, b.ll_hat, 1e-8);
}

TEST(Estimate, PerfectSeparationIsFlaggedAsDiverging) {
  Dataset d;
  d.alternatives = {"a", "b"};
  d.attribute_names = {"x"};
  for (int i = 0; i < 20; ++i) {
    d.persons.push_back("p" + std::to_string(i));
    const double x = (i % 2 == 0) ? 1.0 + i : -1.0 - i;
    Eigen::MatrixXd attrs(2, 1);
    attrs << x, 0.0;
    d.observations.push_back(make_obs(d.persons.back(), "1", x > 0 ? 0 : 1, {true, true}, attrs));
  }
  const auto r = estimate(d, binary_spec());
  EXPECT_TRUE(r.diverging || !r.converged());
  EXPECT_FALSE(r.warnings.empty());
}

TEST(Estimate, NonFiniteStartIsRejected) {
  const Dataset d = recovery_data(7, 50);
  const SampleLikelihood ll(d, three_mode_spec());
  Eigen::VectorXd start = Eigen::VectorXd::Zero(5);
  start(0) = std::nan("");
  EXPECT_THROW(estimate(ll, start, EstimationOptions{}), InputError);
}

TEST(Estimate, UnidentifiedConstantIsReported) {
  ModelSpec s = two_param_spec();
  s.parameters.push_back(param("dup"));
  for (const auto& alt : s.alternatives) s.utilities[alt].push_back({"dup", "x1"});
  const Dataset d = simulate_dataset(two_param_spec(), Eigen::Vector2d(0.5, -0.5), two_param_design(), 200, 1, 3).data;
  const auto r = estimate(d, s);
  EXPECT_FALSE(r.identification.is_identified);
  EXPECT_LT(r.identification.hessian_rank, 3u);
  const auto& suspects = r.identification.suspect_parameters;
  EXPECT_NE(std::find(suspects.begin(), suspects.end(), "dup"), suspects.end());
  EXPECT_NE(std::find(suspects.begin(), suspects.end(), "b1"), suspects.end());
}

TEST(Estimate, OptionsValidation) {
  EstimationOptions o;
  o.max_iterations = 0;
  EXPECT_THROW(o.validate(), InputError);
  o = {};
  o.gradient_tolerance = -1.0;
  EXPECT_THROW(o.validate(), InputError);
  o = {};
  o.n_starts = 0;
  EXPECT_THROW(o.validate(), InputError);
}

TEST(Estimate, StatusNamesRoundTrip) {
  for (auto s : {EstimationStatus::converged, EstimationStatus::max_iterations, EstimationStatus::singular_hessian,
                 EstimationStatus::line_search_failure}) {
    EXPECT_EQ(estimation_status_from_string(to_string(s)), s);
  }
  EXPECT_THROW(estimation_status_from_string("bogus"), InputError);
}

TEST(CheckIdentification, FullRankAndSingularExamples) {
  Eigen::Matrix2d h;
  h << -2.0, 0.5, 0.5, -1.0;
  const auto ok = check_identification(h);
  EXPECT_TRUE(ok.is_identified);
  EXPECT_EQ(ok.hessian_rank, 2u);
  EXPECT_TRUE(std::isfinite(ok.condition_number));

  h << -1.0, -1.0, -1.0, -1.0;
  const auto bad = check_identification(h, 1e-10, {"x", "y"});
  EXPECT_FALSE(bad.is_identified);
  EXPECT_EQ(bad.hessian_rank, 1u);
  EXPECT_EQ(bad.suspect_parameters.size(), 2u);
}

TEST(CheckIdentification, NonSymmetricMatrixIsAnInputError) {
  Eigen::Matrix2d h;
  h << -1.0, 0.2, 0.0, -1.0;
  EXPECT_THROW(check_identification(h), InputError);
}

TEST(MultiStart, AgreesWithSingleStartAndIsJobIndependent) {
  const Dataset d = recovery_data(8, 300);
  EstimationOptions o;
  o.n_starts = 4;
  o.seed = 99;
  const auto single = estimate(d, three_mode_spec());
  const auto one = multi_start(d, three_mode_spec(), o);
  o.jobs = 3;
  const auto three = multi_start(d, three_mode_spec(), o);
  ASSERT_EQ(one.all.size(), 4u);
  EXPECT_FALSE(one.disagreement);
  EXPECT_NEAR(one.best.ll_hat, single.ll_hat, 1e-8);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(one.all[i].ll_hat, three.all[i].ll_hat);
    EXPECT_TRUE((one.all[i].params_hat.array() == three.all[i].params_hat.array()).all());
  }
  EXPECT_EQ(one.best.start_index, three.best.start_index);
}

TEST(MultiStart, NoConvergedRunThrows) {
  const Dataset d = recovery_data(9, 100);
  EstimationOptions o;
  o.n_starts = 2;
  o.max_iterations = 1;
  o.gradient_tolerance = 1e-14;
  EXPECT_THROW(multi_start(d, three_mode_spec(), o), EstimationError);
}
