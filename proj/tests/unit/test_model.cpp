#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "choicestat/errors.hpp"
#include "choicestat/model.hpp"
#include "choicestat/simulate.hpp"
#include "support/fixtures.hpp"

using namespace choicestat;
using namespace fixtures;

namespace {

Dataset single_obs_dataset(const Eigen::MatrixXd& x, std::vector<bool> avail, std::size_t chosen) {
  Dataset d;
  d.alternatives = {"a", "b", "c"};
  d.attribute_names = {"x"};
  d.persons = {"p"};
  d.observations.push_back(make_obs("p", "1", chosen, std::move(avail), x));
  return d;
}

ModelSpec constants_only_spec() {
  ModelSpec s;
  s.alternatives = {"a", "b", "c"};
  s.parameters = {param("asc_a"), param("asc_c")};
  s.utilities["a"] = {{"asc_a", "_const"}};
  s.utilities["c"] = {{"asc_c", "_const"}};
  return s;
}

}  // namespace

TEST(ChoiceProbabilities, EqualUtilitiesSplitEvenly) {
  const Eigen::VectorXd p = logit_probabilities(Eigen::Vector2d(0.3, 0.3), {true, true});
  EXPECT_DOUBLE_EQ(p(0), 0.5);
  EXPECT_DOUBLE_EQ(p(1), 0.5);
}

TEST(ChoiceProbabilities, UtilityGapOfOne) {
  const Eigen::VectorXd p = logit_probabilities(Eigen::Vector2d(1.0, 0.0), {true, true});
  const double e = std::exp(1.0);
  EXPECT_NEAR(p(0), e / (1.0 + e), 1e-15);
  EXPECT_NEAR(p(0), 0.73106, 1e-5);
  EXPECT_NEAR(p(1), 0.26894, 1e-5);
}

TEST(ChoiceProbabilities, UnavailableAlternativeGetsExactZero) {
  const Eigen::VectorXd p = logit_probabilities(Eigen::Vector3d(0.0, 0.0, 5.0), {true, true, false});
  EXPECT_DOUBLE_EQ(p(0), 0.5);
  EXPECT_DOUBLE_EQ(p(1), 0.5);
  EXPECT_EQ(p(2), 0.0);
}

TEST(ChoiceProbabilities, HugeUtilitiesDoNotOverflow) {
  const Eigen::VectorXd p = logit_probabilities(Eigen::Vector3d(1e5, 1e5 - 1.0, -1e5), {true, true, true});
  EXPECT_TRUE(p.allFinite());
  EXPECT_NEAR(p.sum(), 1.0, 1e-12);
  EXPECT_NEAR(p(0), std::exp(1.0) / (1.0 + std::exp(1.0)), 1e-12);
}

TEST(ChoiceProbabilities, TranslationInvariance) {
  Rng rng(5);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::VectorXd u(4);
    for (Eigen::Index j = 0; j < 4; ++j) u(j) = n(rng);
    const std::vector<bool> avail{true, rep % 2 == 0, true, true};
    const Eigen::VectorXd p = logit_probabilities(u, avail);
    const Eigen::VectorXd q = logit_probabilities(u.array() + n(rng) * 10.0, avail);
    EXPECT_LT((p - q).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(p.sum(), 1.0, 1e-12);
  }
}

TEST(ChoiceModel, MissingAttributeIsSpecificationMismatch) {
  const ModelSpec spec = two_param_spec();
  EXPECT_THROW(ChoiceModel(spec, spec.alternatives, {"x1"}), SpecificationError);
}

TEST(ChoiceModel, MissingValueOnAvailableAlternativeIsRejected) {
  const ModelSpec spec = binary_spec();
  Dataset d;
  d.alternatives = {"a", "b"};
  d.attribute_names = {"x"};
  d.persons = {"p"};
  Eigen::MatrixXd x(2, 1);
  x << 1.0, std::nan("");
  d.observations.push_back(make_obs("p", "1", 0, {true, true}, x));
  const ChoiceModel model(spec, d.alternatives, d.attribute_names);
  EXPECT_THROW(model.design(d.observations[0]), SpecificationError);
}

TEST(ChoiceModel, MissingValueOnUnavailableAlternativeIsIgnored) {
  const ModelSpec spec = binary_spec();
  Eigen::MatrixXd x(3, 1);
  x << 1.0, 0.0, std::nan("");
  ModelSpec three = spec;
  three.alternatives = {"a", "b", "c"};
  three.utilities["c"] = {{"beta", "x"}};
  const Dataset d = single_obs_dataset(x, {true, true, false}, 0);
  const ChoiceModel model(three, d.alternatives, d.attribute_names);
  const Eigen::VectorXd p = model.probabilities(d.observations[0], Eigen::VectorXd::Constant(1, 1.0));
  EXPECT_NEAR(p(0), 0.73106, 1e-5);
  EXPECT_EQ(p(2), 0.0);
}

TEST(LogLikelihood, SingleObservationAtOneHalf) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(3, 1);
  const Dataset d = single_obs_dataset(x, {true, true, false}, 1);
  ModelSpec s = binary_spec();
  s.alternatives = {"a", "b", "c"};
  s.utilities["c"] = {{"beta", "x"}};
  EXPECT_NEAR(log_likelihood(d, s, Eigen::VectorXd::Constant(1, 0.7)), -0.693147, 1e-6);
}

TEST(LogLikelihood, NullLogLikelihoodOfEqualShares) {
  Dataset d;
  d.alternatives = {"a", "b", "c"};
  d.attribute_names = {"x"};
  const int n = 7;
  for (int i = 0; i < n; ++i) {
    d.persons.push_back("p" + std::to_string(i));
    d.observations.push_back(make_obs(d.persons.back(), "1", 0, {true, true, true}, Eigen::MatrixXd::Zero(3, 1)));
  }
  const SampleLikelihood ll(d, constants_only_spec());
  EXPECT_NEAR(ll.null_log_likelihood(), -n * std::log(3.0), 1e-12);
  // With all parameters at zero the model is the null model.
  EXPECT_NEAR(ll.log_likelihood(Eigen::VectorXd::Zero(2)).value, -n * std::log(3.0), 1e-12);
}

TEST(LogLikelihood, MatchesProductOfProbabilitiesOracle) {
  const Dataset d = random_three_mode_data(17, 5, 1);
  const ModelSpec spec = three_mode_spec();
  const ChoiceModel model(spec, d.alternatives, d.attribute_names);
  const Eigen::VectorXd beta = three_mode_truth();
  double product = 1.0;
  for (const auto& obs : d.observations) product *= model.probabilities(obs, beta)(static_cast<Eigen::Index>(obs.chosen));
  EXPECT_NEAR(log_likelihood(d, spec, beta), std::log(product), 1e-10);
}

TEST(LogLikelihood, UnderflowIsFlooredWithWarningCount) {
  Eigen::MatrixXd x(3, 1);
  x << 1.0, 0.0, 0.0;
  const Dataset d = single_obs_dataset(x, {true, true, true}, 1);
  ModelSpec s = binary_spec();
  s.alternatives = {"a", "b", "c"};
  s.utilities["c"] = {{"beta", "x"}};
  const SampleLikelihood ll(d, s);
  const auto v = ll.log_likelihood(Eigen::VectorXd::Constant(1, 1e4));
  EXPECT_EQ(v.floored, 1u);
  EXPECT_DOUBLE_EQ(v.value, kDefaultLogFloor);
  EXPECT_TRUE(std::isfinite(v.value));
}

TEST(LogLikelihood, NonPositiveAndBoundedBelowByNullAtTruthFit) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Dataset d = random_three_mode_data(seed);
    const SampleLikelihood ll(d, three_mode_spec());
    Rng rng(seed);
    std::normal_distribution<double> n(0.0, 2.0);
    for (int rep = 0; rep < 10; ++rep) {
      Eigen::VectorXd b(5);
      for (Eigen::Index k = 0; k < 5; ++k) b(k) = n(rng);
      EXPECT_LE(ll.log_likelihood(b).value, 0.0);
    }
  }
}

TEST(LogLikelihood, ScaleEquivariance) {
  const Dataset d = random_three_mode_data(8);
  const double c = 3.7;
  Dataset scaled = d;
  const auto col = static_cast<Eigen::Index>(d.attribute_index("cost"));
  for (auto& obs : scaled.observations) obs.attributes.col(col) *= c;
  Eigen::VectorXd b = three_mode_truth();
  Eigen::VectorXd b_scaled = b;
  b_scaled(3) /= c;
  EXPECT_NEAR(log_likelihood(d, three_mode_spec(), b), log_likelihood(scaled, three_mode_spec(), b_scaled), 1e-10);
}

TEST(ScoreContributions, BinaryClosedForm) {
  Dataset d;
  d.alternatives = {"a", "b"};
  d.attribute_names = {"x"};
  d.persons = {"p1", "p2"};
  const double xs[3][2] = {{0.4, -1.0}, {2.0, 0.5}, {-0.3, 0.9}};
  const std::size_t chosen[3] = {0, 1, 1};
  const char* who[3] = {"p1", "p1", "p2"};
  for (int t = 0; t < 3; ++t) {
    Eigen::MatrixXd x(2, 1);
    x << xs[t][0], xs[t][1];
    d.observations.push_back(make_obs(who[t], std::to_string(t), chosen[t], {true, true}, x));
  }
  const double beta = 0.8;
  const Eigen::MatrixXd s = score_contributions(d, binary_spec(), Eigen::VectorXd::Constant(1, beta));
  // Contribution of one observation: sum_j x_j (1{chosen = j} - p_j).
  auto contribution = [&](int t) {
    const double pa = 1.0 / (1.0 + std::exp(-beta * (xs[t][0] - xs[t][1])));
    const double pb = 1.0 - pa;
    return xs[t][0] * ((chosen[t] == 0) - pa) + xs[t][1] * ((chosen[t] == 1) - pb);
  };
  ASSERT_EQ(s.rows(), 2);
  EXPECT_NEAR(s(0, 0), contribution(0) + contribution(1), 1e-12);
  EXPECT_NEAR(s(1, 0), contribution(2), 1e-12);
}

TEST(ScoreContributions, ColumnSumsEqualGradient) {
  const Dataset d = random_three_mode_data(4);
  const SampleLikelihood ll(d, three_mode_spec());
  const Eigen::VectorXd b = three_mode_truth();
  const Eigen::MatrixXd persons = ll.score_contributions(b, ScoreGrouping::person);
  const Eigen::MatrixXd obs = ll.score_contributions(b, ScoreGrouping::observation);
  EXPECT_EQ(persons.rows(), static_cast<Eigen::Index>(d.n_persons()));
  EXPECT_EQ(obs.rows(), static_cast<Eigen::Index>(d.n_observations()));
  EXPECT_LT((persons.colwise().sum().transpose() - ll.gradient(b)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((obs.colwise().sum().transpose() - ll.gradient(b)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ScoreContributions, MatchFiniteDifferencesOfPersonLogLikelihood) {
  const Dataset d = random_three_mode_data(21, 15, 3);
  const SampleLikelihood ll(d, three_mode_spec());
  const Eigen::VectorXd b = three_mode_truth();
  const Eigen::MatrixXd analytic = ll.score_contributions(b);
  const Eigen::MatrixXd numeric =
      fd_jacobian([&](const Eigen::VectorXd& x) { return ll.per_person_log_likelihood(x); }, b);
  for (Eigen::Index i = 0; i < analytic.rows(); ++i) {
    for (Eigen::Index k = 0; k < analytic.cols(); ++k) {
      EXPECT_LT(relative_gap(analytic(i, k), numeric(i, k)), 1e-6) << "person " << i << " param " << k;
    }
  }
}

TEST(Hessian, BinarySingleParameterClosedForm) {
  Dataset d;
  d.alternatives = {"a", "b"};
  d.attribute_names = {"x"};
  d.persons = {"p"};
  const double xa[4] = {0.5, -1.2, 2.0, 0.1};
  for (int t = 0; t < 4; ++t) {
    Eigen::MatrixXd x(2, 1);
    x << xa[t], 0.0;
    d.observations.push_back(make_obs("p", std::to_string(t), static_cast<std::size_t>(t % 2), {true, true}, x));
  }
  const double beta = -0.6;
  double expected = 0.0;
  for (double x : xa) {
    const double p = 1.0 / (1.0 + std::exp(-beta * x));
    expected -= p * (1.0 - p) * x * x;
  }
  EXPECT_NEAR(hessian_analytic(d, binary_spec(), Eigen::VectorXd::Constant(1, beta))(0, 0), expected, 1e-12);
}

TEST(Hessian, SymmetricAndMatchesFiniteDifferencesOfGradient) {
  const Dataset d = random_three_mode_data(31);
  const SampleLikelihood ll(d, three_mode_spec());
  Rng rng(31);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int rep = 0; rep < 5; ++rep) {
    Eigen::VectorXd b(5);
    for (Eigen::Index k = 0; k < 5; ++k) b(k) = n(rng);
    const Eigen::MatrixXd h = ll.hessian(b);
    EXPECT_LT((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-10);
    const Eigen::MatrixXd numeric = fd_jacobian([&](const Eigen::VectorXd& x) { return ll.gradient(x); }, b);
    for (Eigen::Index i = 0; i < 5; ++i) {
      for (Eigen::Index j = 0; j < 5; ++j) EXPECT_LT(relative_gap(h(i, j), numeric(i, j)), 1e-5);
    }
  }
}

TEST(Hessian, NegativeSemiDefinite) {
  const Dataset d = random_three_mode_data(3);
  const SampleLikelihood ll(d, three_mode_spec());
  const Eigen::MatrixXd h = ll.hessian(three_mode_truth());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  EXPECT_LE(es.eigenvalues().maxCoeff(), 1e-10);
}

TEST(Simulate, SameSeedGivesIdenticalData) {
  const auto a = simulate_dataset(three_mode_spec(), three_mode_truth(), three_mode_design(0.6), 30, 2, 42).data;
  const auto b = simulate_dataset(three_mode_spec(), three_mode_truth(), three_mode_design(0.6), 30, 2, 42).data;
  ASSERT_EQ(a.n_observations(), b.n_observations());
  for (std::size_t n = 0; n < a.n_observations(); ++n) {
    EXPECT_EQ(a.observations[n].chosen, b.observations[n].chosen);
    EXPECT_EQ(a.observations[n].available, b.observations[n].available);
    EXPECT_TRUE((a.observations[n].attributes.array() == b.observations[n].attributes.array()).all());
  }
  const auto c = simulate_dataset(three_mode_spec(), three_mode_truth(), three_mode_design(0.6), 30, 2, 43).data;
  bool differs = false;
  for (std::size_t n = 0; n < a.n_observations(); ++n) {
    differs = differs || a.observations[n].chosen != c.observations[n].chosen;
  }
  EXPECT_TRUE(differs);
}

TEST(Simulate, ZeroParametersGiveUniformShares) {
  const std::size_t n = 20000;
  const auto d = simulate_dataset(two_param_spec(), Eigen::VectorXd::Zero(2), two_param_design(), n, 1, 9).data;
  std::vector<double> counts(3, 0.0);
  for (const auto& obs : d.observations) counts[obs.chosen] += 1.0;
  const double p = 1.0 / 3.0;
  for (double c : counts) EXPECT_LT(std::abs(c / n - p), 3.0 * std::sqrt(p * (1 - p) / n));
}

TEST(Simulate, DominantCoefficientChoosesFavouredAlternative) {
  ModelSpec s;
  s.alternatives = {"a", "b", "c"};
  s.parameters = {param("big")};
  s.utilities["a"] = {{"big", "z"}};
  SimulationDesign design;
  design.attributes = {{"z", AttributeGenerator::Kind::constant, 1.0, 0.0, {"a"}}};
  const auto d = simulate_dataset(s, Eigen::VectorXd::Constant(1, 20.0), design, 20000, 1, 3).data;
  std::size_t first = 0;
  for (const auto& obs : d.observations) first += obs.chosen == 0;
  // P(a) = 1 / (1 + 2 e^-20) > 0.99999999.
  EXPECT_GT(static_cast<double>(first) / 20000.0, 0.999);
}

TEST(Simulate, ConstantAttributeOnFreeParameterWarns) {
  SimulationDesign design = two_param_design();
  design.attributes[1] = {"x2", AttributeGenerator::Kind::constant, 2.0, 0.0, {}};
  const auto sim = simulate_dataset(two_param_spec(), Eigen::VectorXd::Zero(2), design, 50, 1, 1);
  ASSERT_EQ(sim.warnings.size(), 1u);
  EXPECT_NE(sim.warnings[0].find("b2"), std::string::npos);
}

TEST(Simulate, AvailabilityKeepsAtLeastTwoAlternatives) {
  SimulationDesign design = three_mode_design();
  design.availability = {{"car", 0.3}, {"bus", 0.3}, {"rail", 0.3}};
  const auto d = simulate_dataset(three_mode_spec(), three_mode_truth(), design, 200, 2, 5).data;
  for (const auto& obs : d.observations) {
    EXPECT_GE(obs.available_count(), 2u);
    EXPECT_TRUE(obs.available[obs.chosen]);
  }
}

TEST(Dataset, ValidateRejectsBrokenObservations) {
  Dataset d;
  d.alternatives = {"a", "b"};
  d.attribute_names = {"x"};
  d.persons = {"p"};
  d.observations.push_back(make_obs("p", "1", 1, {true, false}, Eigen::MatrixXd::Zero(2, 1)));
  EXPECT_THROW(d.validate(), InputError);
  d.observations[0] = make_obs("q", "1", 0, {true, true}, Eigen::MatrixXd::Zero(2, 1));
  EXPECT_THROW(d.validate(), InputError);
  d.observations[0] = make_obs("p", "1", 0, {true, true}, Eigen::MatrixXd::Constant(2, 1, INFINITY));
  EXPECT_THROW(d.validate(), InputError);
}

TEST(ModelSpec, ValidateRejectsInvalidSpecifications) {
  ModelSpec s = two_param_spec();
  s.parameters.push_back(param("b1"));
  EXPECT_THROW(s.validate(), InputError);

  s = two_param_spec();
  s.utilities["a"].push_back({"nope", "x1"});
  EXPECT_THROW(s.validate(), InputError);

  s = constants_only_spec();
  s.parameters.push_back(param("asc_b"));
  s.utilities["b"] = {{"asc_b", "_const"}};
  EXPECT_THROW(s.validate(), InputError);
}

TEST(ModelSpec, FixedParametersLeaveTheFreeCount) {
  ModelSpec s = three_mode_spec();
  EXPECT_EQ(s.n_free(), 5u);
  const ModelSpec r = s.with_fixed("b_cost", -0.4);
  EXPECT_EQ(r.n_free(), 4u);
  EXPECT_FALSE(r.free_index("b_cost").has_value());
  EXPECT_EQ(*r.free_index("b_ovt"), 3u);
}
