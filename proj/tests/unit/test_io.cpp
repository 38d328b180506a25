#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "choicestat/analysis.hpp"
#include "choicestat/bootstrap.hpp"
#include "choicestat/dataset_io.hpp"
#include "choicestat/errors.hpp"
#include "choicestat/serialization.hpp"
#include "support/fixtures.hpp"

using namespace choicestat;
using namespace fixtures;

namespace {

Dataset parse(const std::string& text) {
  std::istringstream in(text);
  return read_dataset_csv(in, "test.csv");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(DatasetCsv, ParsesLongFormatWithMissingAlternative) {
  const Dataset d = parse(
      "person_id,obs_id,alt_id,avail,chosen,time\n"
      "p1,1,car,1,1,2.0\n"
      "p1,1,bus,1,0,3.5\n"
      "p1,2,car,1,0,1.0\n"
      "p1,2,bus,1,0,NA\n"
      "p1,2,rail,1,1,0.5\n");
  ASSERT_EQ(d.n_observations(), 2u);
  EXPECT_EQ(d.alternatives, (std::vector<std::string>{"car", "bus", "rail"}));
  EXPECT_FALSE(d.observations[0].available[2]);
  EXPECT_TRUE(std::isnan(d.observations[1].attributes(1, 0)));
  EXPECT_EQ(d.observations[1].chosen, 2u);
}

TEST(DatasetCsv, ErrorsNameTheLine) {
  EXPECT_NE(error_of("person_id,obs_id,alt_id,avail,chosen,x\np,1,a,1,1,1\np,1,b,1,1,2\n").find("test.csv"),
            std::string::npos);
  EXPECT_NE(error_of("person_id,obs_id,alt_id,avail,chosen,x\np,1,a,1,1,oops\n").find(":2:"), std::string::npos);
  EXPECT_FALSE(error_of("obs_id,person_id,alt_id,avail,chosen\n").empty());
  EXPECT_FALSE(error_of("person_id,obs_id,alt_id,avail,chosen,x\np,1,a,1,1,inf\np,1,b,1,0,1\n").empty());
}

TEST(DatasetCsv, WriteThenReadRoundTrips) {
  const Dataset d = random_three_mode_data(3, 10, 2);
  std::ostringstream out;
  write_dataset_csv(out, d);
  const Dataset back = parse(out.str());
  ASSERT_EQ(back.n_observations(), d.n_observations());
  EXPECT_EQ(back.persons, d.persons);
  for (std::size_t n = 0; n < d.n_observations(); ++n) {
    EXPECT_EQ(back.observations[n].chosen, d.observations[n].chosen);
    EXPECT_EQ(back.observations[n].available, d.observations[n].available);
    for (Eigen::Index j = 0; j < d.observations[n].attributes.rows(); ++j) {
      if (!d.observations[n].available[static_cast<std::size_t>(j)]) continue;
      EXPECT_TRUE((back.observations[n].attributes.row(j).array() == d.observations[n].attributes.row(j).array()).all());
    }
  }
}

TEST(ModelSpecJson, RoundTripsAndAppliesDefaults) {
  const ModelSpec s = three_mode_spec();
  const ModelSpec back = model_spec_from_json(nlohmann::json::parse(model_spec_to_json(s).dump()));
  EXPECT_EQ(model_spec_to_json(back).dump(), model_spec_to_json(s).dump());
  const auto minimal = nlohmann::json::parse(R"({"alternatives":["a","b"],
      "parameters":[{"name":"beta"}], "utilities":{"a":[{"param":"beta","attribute":"x"}]}})");
  const ModelSpec m = model_spec_from_json(minimal);
  EXPECT_EQ(m.parameters[0].start, 0.0);
  EXPECT_FALSE(m.parameters[0].fixed);
  EXPECT_EQ(m.parameters[0].alternative, Alternative::automatic);
}

TEST(FormatDouble, ShortestRoundTrip) {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 6.02e23, 0.0}) EXPECT_EQ(std::stod(format_double(v)), v);
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(std::nan("")), "NA");
}

TEST(DrawsCsv, RoundTripsIncludingFailures) {
  BootstrapResult r;
  r.s_samples = 3;
  r.param_names = {"a", "b"};
  r.draws.resize(3, 2);
  r.draws << 0.1, -2.5, std::nan(""), std::nan(""), 1.0 / 3.0, 4.0;
  r.converged = {true, false, true};
  r.n_failed = 1;
  std::ostringstream out;
  write_draws_csv(out, r);
  std::istringstream in(out.str());
  const BootstrapResult back = read_draws_csv(in);
  EXPECT_EQ(back.param_names, r.param_names);
  EXPECT_EQ(back.converged, r.converged);
  EXPECT_EQ(back.n_failed, 1u);
  EXPECT_EQ(back.draws(2, 0), 1.0 / 3.0);
  std::ostringstream again;
  write_draws_csv(again, back);
  EXPECT_EQ(again.str(), out.str());
}

TEST(Serialization, MatrixWithNaNRoundTrips) {
  Eigen::MatrixXd m(2, 3);
  m << 1, 2, 3, 4, std::nan(""), 6;
  const Json j = to_json(m);
  EXPECT_TRUE(j["data"][4].is_null());
  const Eigen::MatrixXd back = matrix_from_json(j);
  EXPECT_EQ(back.rows(), 2);
  EXPECT_EQ(back(1, 2), 6.0);
  EXPECT_TRUE(std::isnan(back(1, 1)));
}

TEST(Serialization, TestResultAndIntervalRoundTrip) {
  const TestResult t = t_test(-0.4801, 0.3119, 0.0, Alternative::less);
  EXPECT_EQ(to_json(test_result_from_json(to_json(t))).dump(), to_json(t).dump());
  const ConfidenceInterval ci = asymptotic_ci(-0.2230, 1.638e-2, 0.9);
  EXPECT_EQ(to_json(interval_from_json(to_json(ci))).dump(), to_json(ci).dump());
}

TEST(Serialization, AnalysisResultsRoundTripByteForByte) {
  const Dataset d = random_three_mode_data(5, 60, 2);
  AnalysisOptions o;
  o.restriction_tests = true;
  const AnalysisResults r = analyse(d, three_mode_spec(), o);
  ASSERT_TRUE(r.usable());
  const std::string first = to_json(r).dump(2);
  const std::string second = to_json(analysis_results_from_json(nlohmann::json::parse(first))).dump(2);
  EXPECT_EQ(first, second);
}

TEST(Serialization, ExperimentConfigRoundTrip) {
  ExperimentConfig c;
  c.spec = three_mode_spec();
  c.true_params = three_mode_truth();
  c.design = three_mode_design(0.8);
  c.target_parameter = "b_ovt";
  c.effect_sizes = {0.0, -0.1};
  c.one_sided = Alternative::less;
  const std::string first = to_json(c).dump();
  EXPECT_EQ(to_json(experiment_config_from_json(nlohmann::json::parse(first))).dump(), first);
  auto named = nlohmann::json::parse(first);
  named["true_params"] = {{"asc_bus", -0.5}, {"asc_rail", 0.3}, {"b_time", -0.8}, {"b_cost", -0.4}, {"b_ovt", -0.6}};
  EXPECT_EQ(experiment_config_from_json(named).true_params, three_mode_truth());
}
