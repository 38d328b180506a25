#include "choicestat/serialization.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <set>

#include "choicestat/dataset_io.hpp"
#include "choicestat/errors.hpp"

namespace choicestat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double get_num(const nlohmann::json& j, const char* key, double fallback = kNaN) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<double>();
}

Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = j[i].is_null() ? kNaN : j[i].get<double>();
  }
  return v;
}

template <class F>
auto wrap_json_errors(const char* what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

Json to_json(const Eigen::MatrixXd& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(num(m(r, c)));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) throw InputError("matrix data has the wrong length");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& v = data[static_cast<std::size_t>(r * cols + c)];
      m(r, c) = v.is_null() ? kNaN : v.get<double>();
    }
  }
  return m;
}

Json to_json(const TestResult& t) {
  return Json{{"method", to_string(t.method)},       {"statistic", num(t.statistic)},
              {"df", t.df},                          {"sidedness", to_string(t.sidedness)},
              {"p_value", num(t.p_value)},           {"h0", t.h0_description},
              {"sign_conflict", t.sign_conflict}};
}

TestResult test_result_from_json(const nlohmann::json& j) {
  TestResult t;
  t.method = test_method_from_string(j.at("method").get<std::string>());
  t.statistic = get_num(j, "statistic");
  t.df = j.value("df", 1);
  t.sidedness = sidedness_from_string(j.at("sidedness").get<std::string>());
  t.p_value = get_num(j, "p_value");
  t.h0_description = j.value("h0", std::string());
  t.sign_conflict = j.value("sign_conflict", false);
  return t;
}

Json to_json(const ConfidenceInterval& ci) {
  Json j{{"method", to_string(ci.method)}, {"level", ci.level},
         {"lower", num(ci.lower)},         {"upper", num(ci.upper)},
         {"asymmetry_index", num(ci.asymmetry_index)}};
  if (!ci.note.empty()) j["note"] = ci.note;
  return j;
}

ConfidenceInterval interval_from_json(const nlohmann::json& j) {
  ConfidenceInterval ci;
  ci.method = interval_method_from_string(j.at("method").get<std::string>());
  ci.level = j.at("level").get<double>();
  ci.lower = get_num(j, "lower");
  ci.upper = get_num(j, "upper");
  ci.asymmetry_index = get_num(j, "asymmetry_index");
  ci.note = j.value("note", std::string());
  return ci;
}

Json to_json(const IdentificationReport& r) {
  return Json{{"is_identified", r.is_identified},
              {"hessian_rank", r.hessian_rank},
              {"condition_number", num(r.condition_number)},
              {"suspect_parameters", r.suspect_parameters},
              {"eigenvalues", vector_json(r.eigenvalues)}};
}

namespace {

IdentificationReport identification_from_json(const nlohmann::json& j) {
  IdentificationReport r;
  r.is_identified = j.at("is_identified").get<bool>();
  r.hessian_rank = j.at("hessian_rank").get<std::size_t>();
  r.condition_number = get_num(j, "condition_number", std::numeric_limits<double>::infinity());
  r.suspect_parameters = j.at("suspect_parameters").get<std::vector<std::string>>();
  r.eigenvalues = vector_from_json(j.at("eigenvalues"));
  return r;
}

}  // namespace

Json to_json(const EstimationResult& r) {
  return Json{{"status", to_string(r.status)},
              {"converged", r.converged()},
              {"diverging", r.diverging},
              {"start_index", r.start_index},
              {"iterations", r.iterations},
              {"param_names", r.param_names},
              {"start_values", vector_json(r.start_values)},
              {"params_hat", vector_json(r.params_hat)},
              {"ll_start", num(r.ll_start)},
              {"ll_hat", num(r.ll_hat)},
              {"ll_0", num(r.ll_0)},
              {"gradient_norm", num(r.gradient_norm)},
              {"n_observations", r.n_observations},
              {"n_persons", r.n_persons},
              {"floored_observations", r.floored_observations},
              {"hessian_at_optimum", to_json(r.hessian_at_optimum)},
              {"identification", to_json(r.identification)},
              {"ll_trace", r.ll_trace},
              {"warnings", r.warnings}};
}

EstimationResult estimation_result_from_json(const nlohmann::json& j) {
  return wrap_json_errors("estimation result", [&] {
    EstimationResult r;
    r.status = estimation_status_from_string(j.at("status").get<std::string>());
    r.diverging = j.at("diverging").get<bool>();
    r.start_index = j.at("start_index").get<std::size_t>();
    r.iterations = j.at("iterations").get<int>();
    r.param_names = j.at("param_names").get<std::vector<std::string>>();
    r.start_values = vector_from_json(j.at("start_values"));
    r.params_hat = vector_from_json(j.at("params_hat"));
    r.ll_start = get_num(j, "ll_start");
    r.ll_hat = get_num(j, "ll_hat");
    r.ll_0 = get_num(j, "ll_0");
    r.gradient_norm = get_num(j, "gradient_norm");
    r.n_observations = j.at("n_observations").get<std::size_t>();
    r.n_persons = j.at("n_persons").get<std::size_t>();
    r.floored_observations = j.at("floored_observations").get<std::size_t>();
    r.hessian_at_optimum = matrix_from_json(j.at("hessian_at_optimum"));
    r.identification = identification_from_json(j.at("identification"));
    for (const auto& v : j.at("ll_trace")) r.ll_trace.push_back(v.is_null() ? kNaN : v.get<double>());
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
  });
}

Json to_json(const CovarianceSet& c, const std::vector<std::string>& names) {
  return Json{{"grouping", to_string(c.grouping)},
              {"param_names", names},
              {"classical", to_json(c.classical)},
              {"bhhh", to_json(c.bhhh)},
              {"robust", to_json(c.robust)},
              {"se_classical", vector_json(c.se_classical)},
              {"se_bhhh", vector_json(c.se_bhhh)},
              {"se_robust", vector_json(c.se_robust)}};
}

namespace {

CovarianceSet covariance_from_json(const nlohmann::json& j) {
  CovarianceSet c;
  c.grouping = score_grouping_from_string(j.at("grouping").get<std::string>());
  c.classical = matrix_from_json(j.at("classical"));
  c.bhhh = matrix_from_json(j.at("bhhh"));
  c.robust = matrix_from_json(j.at("robust"));
  c.se_classical = vector_from_json(j.at("se_classical"));
  c.se_bhhh = vector_from_json(j.at("se_bhhh"));
  c.se_robust = vector_from_json(j.at("se_robust"));
  return c;
}

Json restriction_json(const RestrictionTests& r) {
  return Json{{"h0_value", r.h0_value},
              {"ll_restricted", num(r.ll_restricted)},
              {"restricted_status", to_string(r.restricted_status)},
              {"lm_information", r.lm_used_bhhh ? "bhhh" : "negative_hessian"},
              {"wald", to_json(r.wald)},
              {"lr", to_json(r.lr)},
              {"lm", to_json(r.lm)}};
}

RestrictionTests restriction_from_json(const nlohmann::json& j, const std::string& name) {
  RestrictionTests r;
  r.parameter = name;
  r.h0_value = j.at("h0_value").get<double>();
  r.ll_restricted = get_num(j, "ll_restricted");
  r.restricted_status = estimation_status_from_string(j.at("restricted_status").get<std::string>());
  r.lm_used_bhhh = j.at("lm_information").get<std::string>() == "bhhh";
  r.wald = test_result_from_json(j.at("wald"));
  r.lr = test_result_from_json(j.at("lr"));
  r.lm = test_result_from_json(j.at("lm"));
  return r;
}

}  // namespace

Json to_json(const EstimationOptions& o) {
  return Json{{"max_iterations", o.max_iterations},
              {"gradient_tolerance", o.gradient_tolerance},
              {"step_halving_max", o.step_halving_max},
              {"n_starts", o.n_starts},
              {"start_perturbation_scale", o.start_perturbation_scale},
              {"seed", o.seed},
              {"identification_threshold", o.identification_threshold},
              {"divergence_bound", o.divergence_bound}};
}

EstimationOptions estimation_options_from_json(const nlohmann::json& j) {
  return wrap_json_errors("estimation options", [&] {
    EstimationOptions o;
    o.max_iterations = j.value("max_iterations", o.max_iterations);
    o.gradient_tolerance = j.value("gradient_tolerance", o.gradient_tolerance);
    o.step_halving_max = j.value("step_halving_max", o.step_halving_max);
    o.n_starts = j.value("n_starts", o.n_starts);
    o.start_perturbation_scale = j.value("start_perturbation_scale", o.start_perturbation_scale);
    o.seed = j.value("seed", o.seed);
    o.identification_threshold = j.value("identification_threshold", o.identification_threshold);
    o.divergence_bound = j.value("divergence_bound", o.divergence_bound);
    o.validate();
    return o;
  });
}

Json to_json(const AnalysisResults& r) {
  Json params = Json::array();
  for (const auto& p : r.parameters) {
    Json pj{{"name", p.name},
            {"estimate", num(p.estimate)},
            {"h0_value", p.h0_value},
            {"declared_alternative", to_string(p.declared)},
            {"se_classical", num(p.se_classical)},
            {"se_bhhh", num(p.se_bhhh)},
            {"se_robust", num(p.se_robust)},
            {"t_classical_one_sided", to_json(p.t_classical_one_sided)},
            {"t_classical_two_sided", to_json(p.t_classical_two_sided)},
            {"t_robust_one_sided", to_json(p.t_robust_one_sided)},
            {"t_robust_two_sided", to_json(p.t_robust_two_sided)},
            {"ci_classical", to_json(p.ci_classical)},
            {"ci_robust", to_json(p.ci_robust)},
            {"width_ratio_robust_classical", num(p.width_ratio)}};
    pj["restriction_tests"] = p.restriction ? restriction_json(*p.restriction) : Json(nullptr);
    params.push_back(pj);
  }
  Json starts = Json::array();
  for (const auto& s : r.starts) {
    starts.push_back({{"start_index", s.start_index},
                      {"status", to_string(s.status)},
                      {"ll_hat", num(s.ll_hat)},
                      {"iterations", s.iterations}});
  }
  const auto& f = r.fit;
  return Json{
      {"options",
       {{"ci_level", r.options.ci_level},
        {"sided", to_string(r.options.sided)},
        {"restriction_tests", r.options.restriction_tests},
        {"grouping", to_string(r.options.grouping)},
        {"estimation", to_json(r.options.estimation)}}},
      {"estimation", to_json(r.estimation)},
      {"starts", starts},
      {"start_disagreement", r.start_disagreement},
      {"covariance", r.covariance ? to_json(*r.covariance, r.estimation.param_names) : Json(nullptr)},
      {"parameters", params},
      {"fit",
       {{"ll_hat", num(f.ll_hat)},
        {"ll_0", num(f.ll_0)},
        {"k", f.k},
        {"n_observations", f.n_observations},
        {"n_persons", f.n_persons},
        {"rho_bar_squared", num(f.rho_bar_squared)},
        {"bic", num(f.bic)}}},
      {"warnings", r.warnings}};
}

AnalysisResults analysis_results_from_json(const nlohmann::json& j) {
  return wrap_json_errors("results document", [&] {
    AnalysisResults r;
    const auto& o = j.at("options");
    r.options.ci_level = o.at("ci_level").get<double>();
    r.options.sided = sided_mode_from_string(o.at("sided").get<std::string>());
    r.options.restriction_tests = o.at("restriction_tests").get<bool>();
    r.options.grouping = score_grouping_from_string(o.at("grouping").get<std::string>());
    r.options.estimation = estimation_options_from_json(o.at("estimation"));
    r.estimation = estimation_result_from_json(j.at("estimation"));
    // Only the per-start summary is stored; the other fields stay default.
    for (const auto& sj : j.at("starts")) {
      EstimationResult start;
      start.start_index = sj.at("start_index").get<std::size_t>();
      start.status = estimation_status_from_string(sj.at("status").get<std::string>());
      start.ll_hat = get_num(sj, "ll_hat");
      start.iterations = sj.at("iterations").get<int>();
      r.starts.push_back(std::move(start));
    }
    r.start_disagreement = j.at("start_disagreement").get<bool>();
    if (!j.at("covariance").is_null()) r.covariance = covariance_from_json(j.at("covariance"));
    for (const auto& pj : j.at("parameters")) {
      ParameterInference p;
      p.name = pj.at("name").get<std::string>();
      p.estimate = get_num(pj, "estimate");
      p.h0_value = pj.at("h0_value").get<double>();
      p.declared = alternative_from_string(pj.at("declared_alternative").get<std::string>());
      p.se_classical = get_num(pj, "se_classical");
      p.se_bhhh = get_num(pj, "se_bhhh");
      p.se_robust = get_num(pj, "se_robust");
      p.t_classical_one_sided = test_result_from_json(pj.at("t_classical_one_sided"));
      p.t_classical_two_sided = test_result_from_json(pj.at("t_classical_two_sided"));
      p.t_robust_one_sided = test_result_from_json(pj.at("t_robust_one_sided"));
      p.t_robust_two_sided = test_result_from_json(pj.at("t_robust_two_sided"));
      p.ci_classical = interval_from_json(pj.at("ci_classical"));
      p.ci_robust = interval_from_json(pj.at("ci_robust"));
      p.width_ratio = get_num(pj, "width_ratio_robust_classical");
      if (!pj.at("restriction_tests").is_null()) {
        p.restriction = restriction_from_json(pj.at("restriction_tests"), p.name);
      }
      r.parameters.push_back(std::move(p));
    }
    const auto& f = j.at("fit");
    r.fit.ll_hat = get_num(f, "ll_hat");
    r.fit.ll_0 = get_num(f, "ll_0");
    r.fit.k = f.at("k").get<std::size_t>();
    r.fit.n_observations = f.at("n_observations").get<std::size_t>();
    r.fit.n_persons = f.at("n_persons").get<std::size_t>();
    r.fit.rho_bar_squared = get_num(f, "rho_bar_squared");
    r.fit.bic = get_num(f, "bic");
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
  });
}

Json to_json(const BootstrapSummary& s) {
  Json params = Json::array();
  for (const auto& p : s.parameters) {
    params.push_back({{"name", p.name},
                      {"estimate", num(p.estimate)},
                      {"se_bootstrap", num(p.se_bootstrap)},
                      {"t_one_sided", to_json(p.t_one_sided)},
                      {"t_two_sided", to_json(p.t_two_sided)},
                      {"empirical_p",
                       {{"p_value", num(p.empirical.p_value)},
                        {"crossings", p.empirical.crossings},
                        {"n", p.empirical.n},
                        {"below_resolution", p.empirical.below_resolution}}},
                      {"ci_bootstrap_se", to_json(p.ci_bootstrap_se)},
                      {"ci_quantile", to_json(p.ci_quantile)},
                      {"ci_hpd", to_json(p.ci_hpd)},
                      {"width_ratio_bootstrap_classical", num(p.width_ratio_classical)}});
  }
  return Json{{"level", s.level},
              {"s_samples", s.s_samples},
              {"n_converged", s.n_converged},
              {"n_failed", s.n_failed},
              {"base_seed", s.base_seed},
              {"covariance", to_json(s.covariance)},
              {"parameters", params},
              {"warnings", s.warnings}};
}

BootstrapSummary bootstrap_summary_from_json(const nlohmann::json& j) {
  return wrap_json_errors("bootstrap summary", [&] {
    BootstrapSummary s;
    s.level = j.at("level").get<double>();
    s.s_samples = j.at("s_samples").get<std::size_t>();
    s.n_converged = j.at("n_converged").get<std::size_t>();
    s.n_failed = j.at("n_failed").get<std::size_t>();
    s.base_seed = j.at("base_seed").get<std::uint64_t>();
    s.covariance = matrix_from_json(j.at("covariance"));
    for (const auto& pj : j.at("parameters")) {
      BootstrapParameterSummary p;
      p.name = pj.at("name").get<std::string>();
      p.estimate = get_num(pj, "estimate");
      p.se_bootstrap = get_num(pj, "se_bootstrap");
      p.t_one_sided = test_result_from_json(pj.at("t_one_sided"));
      p.t_two_sided = test_result_from_json(pj.at("t_two_sided"));
      const auto& e = pj.at("empirical_p");
      p.empirical.p_value = get_num(e, "p_value");
      p.empirical.crossings = e.at("crossings").get<std::size_t>();
      p.empirical.n = e.at("n").get<std::size_t>();
      p.empirical.below_resolution = e.at("below_resolution").get<bool>();
      p.ci_bootstrap_se = interval_from_json(pj.at("ci_bootstrap_se"));
      p.ci_quantile = interval_from_json(pj.at("ci_quantile"));
      p.ci_hpd = interval_from_json(pj.at("ci_hpd"));
      p.width_ratio_classical = get_num(pj, "width_ratio_bootstrap_classical");
      s.parameters.push_back(std::move(p));
    }
    s.warnings = j.at("warnings").get<std::vector<std::string>>();
    return s;
  });
}

Json to_json(const SimulationDesign& d) {
  Json attrs = Json::array();
  for (const auto& g : d.attributes) {
    attrs.push_back({{"attribute", g.attribute},
                     {"kind", to_string(g.kind)},
                     {"a", g.a},
                     {"b", g.b},
                     {"alternatives", g.alternatives}});
  }
  Json avail = Json::object();
  for (const auto& [k, v] : d.availability) avail[k] = v;
  Json taste = Json::object();
  for (const auto& [k, v] : d.taste_sd) taste[k] = v;
  return Json{{"attributes", attrs}, {"availability", avail}, {"taste_sd", taste}};
}

SimulationDesign simulation_design_from_json(const nlohmann::json& j) {
  return wrap_json_errors("simulation design", [&] {
    SimulationDesign d;
    for (const auto& g : j.at("attributes")) {
      AttributeGenerator gen;
      gen.attribute = g.at("attribute").get<std::string>();
      gen.kind = generator_kind_from_string(g.value("kind", std::string("normal")));
      gen.a = g.value("a", gen.a);
      gen.b = g.value("b", gen.b);
      gen.alternatives = g.value("alternatives", std::vector<std::string>{});
      d.attributes.push_back(gen);
    }
    if (j.contains("availability")) d.availability = j.at("availability").get<std::map<std::string, double>>();
    if (j.contains("taste_sd")) d.taste_sd = j.at("taste_sd").get<std::map<std::string, double>>();
    return d;
  });
}

Json to_json(const ExperimentConfig& c) {
  return Json{{"spec", model_spec_to_json(c.spec)},
              {"true_params", vector_json(c.true_params)},
              {"design", to_json(c.design)},
              {"n_persons", c.n_persons},
              {"obs_per_person", c.obs_per_person},
              {"replications", c.replications},
              {"alpha", c.alpha},
              {"target_parameter", c.target_parameter},
              {"effect_sizes", c.effect_sizes},
              {"ci_level", c.ci_level},
              {"seed", c.seed},
              {"one_sided", to_string(c.one_sided)},
              {"include_lr_lm", c.include_lr_lm},
              {"bootstrap_samples", c.bootstrap_samples},
              {"estimation", to_json(c.estimation)}};
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  return wrap_json_errors("experiment config", [&] {
    ExperimentConfig c;
    c.spec = model_spec_from_json(j.at("spec"));
    const auto& tp = j.at("true_params");
    if (tp.is_object()) {
      // Keyed by parameter name; every free parameter must be present.
      const auto names = c.spec.free_parameter_names();
      c.true_params.resize(static_cast<Eigen::Index>(names.size()));
      for (std::size_t k = 0; k < names.size(); ++k) {
        if (!tp.contains(names[k])) throw InputError("true_params lacks '" + names[k] + "'");
        c.true_params(static_cast<Eigen::Index>(k)) = tp.at(names[k]).get<double>();
      }
      for (const auto& [name, value] : tp.items()) {
        (void)value;
        if (!c.spec.free_index(name)) throw InputError("true_params names unknown parameter '" + name + "'");
      }
    } else {
      c.true_params = vector_from_json(tp);
    }
    c.design = simulation_design_from_json(j.at("design"));
    c.n_persons = j.value("n_persons", c.n_persons);
    c.obs_per_person = j.value("obs_per_person", c.obs_per_person);
    c.replications = j.value("replications", c.replications);
    c.alpha = j.value("alpha", c.alpha);
    c.target_parameter = j.at("target_parameter").get<std::string>();
    c.effect_sizes = j.value("effect_sizes", c.effect_sizes);
    c.ci_level = j.value("ci_level", c.ci_level);
    c.seed = j.value("seed", c.seed);
    c.one_sided = alternative_from_string(j.value("one_sided", std::string("greater")));
    c.include_lr_lm = j.value("include_lr_lm", c.include_lr_lm);
    c.bootstrap_samples = j.value("bootstrap_samples", c.bootstrap_samples);
    if (j.contains("estimation")) c.estimation = estimation_options_from_json(j.at("estimation"));
    c.validate();
    return c;
  });
}

namespace {

Json rate_json(const Rate& r) {
  return Json{{"rate", r.rate}, {"standard_error", r.standard_error}, {"hits", r.hits}, {"trials", r.trials}};
}

}  // namespace

Json to_json(const MonteCarloReport& r) {
  Json effects = Json::array();
  for (const auto& e : r.effects) {
    Json rej = Json::object();
    for (const auto& [k, v] : e.rejection) rej[k] = rate_json(v);
    Json cov = Json::object();
    for (const auto& [k, v] : e.coverage) cov[k] = rate_json(v);
    effects.push_back({{"effect", e.effect},
                       {"replications_run", e.replications_run},
                       {"failures", e.failures},
                       {"rejection_rate", rej},
                       {"coverage_rate", cov},
                       {"estimate_mean", num(e.estimate_mean)},
                       {"estimate_sd", num(e.estimate_sd)},
                       {"normality_gap", num(e.normality_gap)},
                       {"mean_se_classical", num(e.mean_se_classical)},
                       {"mean_se_robust", num(e.mean_se_robust)}});
  }
  return Json{{"experiment", r.experiment},
              {"replications_run", r.replications_run},
              {"failures", r.failures},
              {"effects", effects},
              {"warnings", r.warnings}};
}

void write_replications_csv(std::ostream& out, const MonteCarloReport& r) {
  std::set<std::string> tests, intervals;
  for (const auto& rec : r.records) {
    for (const auto& [k, v] : rec.p_values) tests.insert(k);
    for (const auto& [k, v] : rec.intervals) intervals.insert(k);
  }
  out << "replication,effect,ok,status,estimate,se_classical,se_robust";
  for (const auto& t : tests) out << ",p_" << t << ",reject_" << t;
  for (const auto& i : intervals) out << ",lower_" << i << ",upper_" << i << ",covered_" << i;
  out << '\n';
  for (const auto& rec : r.records) {
    std::string status = rec.status;
    for (auto& ch : status) {
      if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
    }
    out << rec.replication << ',' << format_double(rec.effect) << ',' << (rec.ok ? 1 : 0) << ',' << status
        << ',' << format_double(rec.estimate) << ',' << format_double(rec.se_classical) << ','
        << format_double(rec.se_robust);
    for (const auto& t : tests) {
      const auto p = rec.p_values.find(t);
      const auto rj = rec.rejected.find(t);
      out << ',' << (p == rec.p_values.end() ? "NA" : format_double(p->second)) << ','
          << (rj == rec.rejected.end() ? "NA" : (rj->second ? "1" : "0"));
    }
    for (const auto& i : intervals) {
      const auto b = rec.intervals.find(i);
      const auto c = rec.covered.find(i);
      if (b == rec.intervals.end()) {
        out << ",NA,NA,NA";
      } else {
        out << ',' << format_double(b->second.first) << ',' << format_double(b->second.second) << ','
            << (c->second ? 1 : 0);
      }
    }
    out << '\n';
  }
}

}  // namespace choicestat
