#pragma once

// Shared models, designs and finite-difference oracles for the test suites.

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "choicestat/dataset.hpp"
#include "choicestat/model_spec.hpp"
#include "choicestat/rng.hpp"
#include "choicestat/simulate.hpp"

namespace fixtures {

using namespace choicestat;

inline ParameterDef param(const std::string& name, double start = 0.0,
                          Alternative alt = Alternative::automatic) {
  ParameterDef p;
  p.name = name;
  p.start = start;
  p.alternative = alt;
  return p;
}

// car / bus / rail with two constants, generic time and cost, and an
// out-of-vehicle time coefficient shared by the public modes. Five parameters.
inline ModelSpec three_mode_spec() {
  ModelSpec s;
  s.alternatives = {"car", "bus", "rail"};
  s.parameters = {param("asc_bus"), param("asc_rail"), param("b_time", 0.0, Alternative::less),
                  param("b_cost", 0.0, Alternative::less), param("b_ovt", 0.0, Alternative::less)};
  s.utilities["car"] = {{"b_time", "time"}, {"b_cost", "cost"}};
  s.utilities["bus"] = {{"asc_bus", "_const"}, {"b_time", "time"}, {"b_cost", "cost"}, {"b_ovt", "ovt"}};
  s.utilities["rail"] = {{"asc_rail", "_const"}, {"b_time", "time"}, {"b_cost", "cost"}, {"b_ovt", "ovt"}};
  return s;
}

inline Eigen::VectorXd three_mode_truth() {
  Eigen::VectorXd b(5);
  b << -0.5, 0.3, -0.8, -0.4, -0.6;
  return b;
}

inline SimulationDesign three_mode_design(double rail_availability = 1.0) {
  SimulationDesign d;
  d.attributes = {{"time", AttributeGenerator::Kind::uniform, 0.5, 2.5, {}},
                  {"cost", AttributeGenerator::Kind::normal, 2.0, 1.0, {}},
                  {"ovt", AttributeGenerator::Kind::uniform, 0.0, 1.5, {"bus", "rail"}}};
  if (rail_availability < 1.0) d.availability["rail"] = rail_availability;
  return d;
}

// Three alternatives, two generic parameters: x1 (all alternatives) and x2.
inline ModelSpec two_param_spec() {
  ModelSpec s;
  s.alternatives = {"a", "b", "c"};
  s.parameters = {param("b1"), param("b2")};
  for (const auto& alt : s.alternatives) s.utilities[alt] = {{"b1", "x1"}, {"b2", "x2"}};
  return s;
}

inline SimulationDesign two_param_design() {
  SimulationDesign d;
  d.attributes = {{"x1", AttributeGenerator::Kind::normal, 0.0, 1.0, {}},
                  {"x2", AttributeGenerator::Kind::normal, 0.0, 1.0, {}}};
  return d;
}

// Binary logit, one generic parameter on x.
inline ModelSpec binary_spec() {
  ModelSpec s;
  s.alternatives = {"a", "b"};
  s.parameters = {param("beta")};
  s.utilities["a"] = {{"beta", "x"}};
  s.utilities["b"] = {{"beta", "x"}};
  return s;
}

inline Observation make_obs(const std::string& person, const std::string& id, std::size_t chosen,
                            std::vector<bool> available, Eigen::MatrixXd attributes) {
  Observation o;
  o.person_id = person;
  o.obs_id = id;
  o.chosen = chosen;
  o.available = std::move(available);
  o.attributes = std::move(attributes);
  return o;
}

// Random dataset for the three-mode model with partial rail availability.
inline Dataset random_three_mode_data(std::uint64_t seed, std::size_t persons = 40, std::size_t obs = 3) {
  Rng rng(seed);
  std::normal_distribution<double> n01(0.0, 0.5);
  Eigen::VectorXd truth = three_mode_truth();
  for (Eigen::Index k = 0; k < truth.size(); ++k) truth(k) += n01(rng);
  return simulate_dataset(three_mode_spec(), truth, three_mode_design(0.7), persons, obs, seed).data;
}

inline double fd_step(double x) { return 1e-6 * std::max(1.0, std::abs(x)); }

// Central-difference gradient of a scalar function.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double h = fd_step(x(k));
    Eigen::VectorXd up = x, down = x;
    up(k) += h;
    down(k) -= h;
    g(k) = (f(up) - f(down)) / (2.0 * h);
  }
  return g;
}

// Central-difference Jacobian of a vector function (columns per parameter).
inline Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x) {
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd j(f0.size(), x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double h = fd_step(x(k));
    Eigen::VectorXd up = x, down = x;
    up(k) += h;
    down(k) -= h;
    j.col(k) = (f(up) - f(down)) / (2.0 * h);
  }
  return j;
}

// Relative gap with an absolute floor so entries near zero compare sensibly.
inline double relative_gap(double a, double b, double floor = 1e-3) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace fixtures
