// Command-line front end: estimate, bootstrap, montecarlo, report and simulate.
//
// Exit codes: 0 success, 1 input error, 2 identification failure,
// 3 non-convergence.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "choicestat/analysis.hpp"
#include "choicestat/dataset_io.hpp"
#include "choicestat/errors.hpp"
#include "choicestat/serialization.hpp"

namespace fs = std::filesystem;
using namespace choicestat;

namespace {

enum Exit { kOk = 0, kInput = 1, kIdentification = 2, kNonConvergence = 3 };

struct CommonFlags {
  std::string out_dir;
  std::string format = "text";
  std::size_t jobs = 1;
  bool se = false;
  bool t = false;
  bool stars = false;
};

struct EstimateFlags {
  std::string data;
  std::string spec;
  double ci_level = 0.95;
  std::string sided = "auto";
  int starts = 1;
  std::uint64_t seed = 0;
  std::string grouping = "person";
  bool no_trinity = false;
  int max_iterations = 200;
  double tolerance = 1e-6;
};

struct BootstrapFlags {
  std::size_t samples = 400;
  double level = 0.95;
};

struct MonteCarloFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replications;
};

struct ReportFlags {
  std::string results;
  std::string draws;
  std::string bootstrap;
  std::optional<double> level;
  std::optional<std::string> sided;
};

class Run {
 public:
  Run(std::string command, const CommonFlags& common, int argc, char** argv)
      : command_(std::move(command)), dir_(common.out_dir) {
    for (int i = 1; i < argc; ++i) argv_.push_back(argv[i]);
    fs::create_directories(dir_);
  }

  fs::path path(const std::string& name) const { return dir_ / name; }

  void write(const std::string& name, const std::string& content) {
    const fs::path p = path(name);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw InputError("cannot write '" + p.string() + "'");
    out << content;
    outputs_.push_back(p.string());
  }

  void manifest(Json options, std::uint64_t seed) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::ostringstream ts;
    ts << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
    Json m{{"command", command_},
           {"argv", argv_},
           {"options", std::move(options)},
           {"seed", seed},
           {"tool_version", CHOICESTAT_VERSION},
           {"timestamp", ts.str()},
           {"output_paths", outputs_}};
    std::ofstream out(path("manifest.json"), std::ios::binary);
    out << m.dump(2) << '\n';
  }

 private:
  std::string command_;
  fs::path dir_;
  std::vector<std::string> argv_;
  std::vector<std::string> outputs_;
};

std::string default_out_dir() {
  const char* env = std::getenv("CHOICESTAT_OUTPUT_DIR");
  return env && *env ? env : ".";
}

std::string extension(TableFormat f) {
  switch (f) {
    case TableFormat::text: return "txt";
    case TableFormat::csv: return "csv";
    case TableFormat::json: return "json";
  }
  return "txt";
}

ReportOptions report_options(const CommonFlags& c, SidedMode sided) {
  if (c.stars && !c.se && !c.t) {
    throw ReportingError("--stars requires --se or --t: significance stars are only meaningful next to "
                         "the standard errors or t-ratios they summarise");
  }
  ReportOptions o;
  o.include_stars = c.stars;
  o.sidedness_note = sidedness_note(sided);
  return o;
}

TableColumns table_columns(const CommonFlags& c, bool trinity) {
  TableColumns cols;
  // Without an explicit choice both columns are shown.
  if (c.se || c.t) {
    cols.se = c.se;
    cols.t = c.t;
  }
  cols.trinity = trinity;
  return cols;
}

AnalysisOptions analysis_options(const EstimateFlags& f, std::size_t jobs) {
  AnalysisOptions o;
  o.ci_level = f.ci_level;
  o.sided = sided_mode_from_string(f.sided);
  o.restriction_tests = !f.no_trinity;
  o.grouping = score_grouping_from_string(f.grouping);
  o.estimation.n_starts = f.starts;
  o.estimation.seed = f.seed;
  o.estimation.jobs = jobs;
  o.estimation.max_iterations = f.max_iterations;
  o.estimation.gradient_tolerance = f.tolerance;
  o.validate();
  return o;
}

Json estimate_flags_json(const EstimateFlags& f) {
  return Json{{"data", f.data},         {"spec", f.spec},
              {"ci_level", f.ci_level}, {"sided", f.sided},
              {"starts", f.starts},     {"seed", f.seed},
              {"grouping", f.grouping}, {"restriction_tests", !f.no_trinity},
              {"max_iterations", f.max_iterations}, {"tolerance", f.tolerance}};
}

Json common_flags_json(const CommonFlags& c) {
  return Json{{"out_dir", c.out_dir}, {"format", c.format}, {"jobs", c.jobs},
              {"se", c.se},           {"t", c.t},           {"stars", c.stars}};
}

void print_identification(const EstimationResult& est) {
  const auto& id = est.identification;
  std::cerr << "identification failure: Hessian rank " << id.hessian_rank << " of " << est.param_names.size()
            << ", condition number " << std::setprecision(4) << id.condition_number << '\n';
  if (!id.suspect_parameters.empty()) {
    std::cerr << "parameters involved:";
    for (const auto& s : id.suspect_parameters) std::cerr << ' ' << s;
    std::cerr << '\n';
  }
  if (est.diverging) {
    std::cerr << "the log-likelihood keeps increasing along some direction (perfect prediction); "
                 "the affected estimates tend to infinity\n";
  }
}

// Maps the estimation outcome to an exit code, printing diagnostics.
int estimation_exit(const AnalysisResults& r) {
  const auto& est = r.estimation;
  if (!est.identification.is_identified || est.diverging) {
    print_identification(est);
    return kIdentification;
  }
  if (!est.converged()) {
    std::cerr << "estimation did not converge: " << to_string(est.status) << " after " << est.iterations
              << " iterations (gradient norm " << est.gradient_norm << ")\n";
    return kNonConvergence;
  }
  return kOk;
}

int cmd_estimate(const CommonFlags& common, const EstimateFlags& flags, int argc, char** argv) {
  const AnalysisOptions options = analysis_options(flags, common.jobs);
  const TableFormat format = table_format_from_string(common.format);
  const ReportOptions report = report_options(common, options.sided);
  const Dataset data = read_dataset_csv_file(flags.data);
  const ModelSpec spec = read_model_spec_file(flags.spec);

  Run run("estimate", common, argc, argv);
  const AnalysisResults results = analyse(data, spec, options);
  run.write("results.json", to_json(results).dump(2) + "\n");
  const int code = estimation_exit(results);
  if (code == kOk) {
    const std::string table =
        format_table(estimation_table(results, table_columns(common, options.restriction_tests)), report, format);
    run.write("estimates." + extension(format), table);
    std::cout << table;
  }
  run.manifest(Json{{"estimate", estimate_flags_json(flags)}, {"common", common_flags_json(common)}},
               flags.seed);
  return code;
}

int cmd_bootstrap(const CommonFlags& common, const EstimateFlags& flags, const BootstrapFlags& boot,
                  int argc, char** argv) {
  EstimateFlags est_flags = flags;
  est_flags.ci_level = boot.level;
  AnalysisOptions options = analysis_options(est_flags, common.jobs);
  options.restriction_tests = false;
  const TableFormat format = table_format_from_string(common.format);
  const ReportOptions report = report_options(common, options.sided);
  if (boot.samples < 2) throw InputError("--S must be at least 2");
  const Dataset data = read_dataset_csv_file(flags.data);
  const ModelSpec spec = read_model_spec_file(flags.spec);

  Run run("bootstrap", common, argc, argv);
  const AnalysisResults results = analyse(data, spec, options);
  run.write("results.json", to_json(results).dump(2) + "\n");
  const int code = estimation_exit(results);
  if (code != kOk) {
    std::cerr << "the full-sample estimation must succeed before bootstrapping\n";
    run.manifest(Json{{"estimate", estimate_flags_json(flags)}, {"common", common_flags_json(common)}},
                 flags.seed);
    return code;
  }

  EstimationOptions single = options.estimation;
  single.n_starts = 1;
  const BootstrapResult draws = bootstrap_run(data, spec, single, boot.samples, flags.seed, common.jobs);
  std::ostringstream csv;
  write_draws_csv(csv, draws);
  run.write("draws.csv", csv.str());
  for (const auto& w : draws.warnings) std::cerr << "warning: " << w << '\n';

  std::vector<Alternative> declared;
  for (const auto& p : results.parameters) declared.push_back(p.declared);
  const BootstrapSummary summary = summarise_bootstrap(draws, results.estimation.params_hat,
                                                       results.covariance->se_classical, boot.level, declared);
  run.write("bootstrap.json", to_json(summary).dump(2) + "\n");
  const std::string table = format_table(bootstrap_table(summary, options.sided), report, format);
  run.write("intervals." + extension(format), table);
  std::cout << table;
  run.manifest(Json{{"estimate", estimate_flags_json(flags)},
                    {"bootstrap", {{"S", boot.samples}, {"level", boot.level}}},
                    {"common", common_flags_json(common)}},
               flags.seed);
  return kOk;
}

std::string montecarlo_table(const MonteCarloReport& r, TableFormat format) {
  std::vector<std::string> header{"effect", "runs", "failures"};
  std::vector<std::string> keys;
  const auto& first = r.effects.front();
  const auto& rates = r.experiment == "coverage" ? first.coverage : first.rejection;
  for (const auto& [k, v] : rates) {
    (void)v;
    keys.push_back(k);
    header.push_back(k);
  }
  header.push_back("mean estimate");
  header.push_back("sd estimate");
  header.push_back("mean se classical");
  std::vector<std::vector<std::string>> rows;
  for (const auto& e : r.effects) {
    std::vector<std::string> row{format_significant(e.effect, 4), std::to_string(e.replications_run),
                                 std::to_string(e.failures)};
    const auto& m = r.experiment == "coverage" ? e.coverage : e.rejection;
    for (const auto& k : keys) {
      const auto it = m.find(k);
      row.push_back(it == m.end() ? "NA"
                                  : format_fixed(it->second.rate, 3) + " (" +
                                        format_fixed(it->second.standard_error, 3) + ")");
    }
    row.push_back(format_significant(e.estimate_mean, 4));
    row.push_back(format_significant(e.estimate_sd, 4));
    row.push_back(format_significant(e.mean_se_classical, 4));
    rows.push_back(std::move(row));
  }
  const std::string what = r.experiment == "coverage" ? "coverage rate" : "rejection rate";
  std::ostringstream out;
  if (format == TableFormat::json) {
    Json j{{"columns", header}, {"rows", rows}, {"note", what + " with its binomial standard error"}};
    return j.dump(2) + "\n";
  }
  if (format == TableFormat::csv) {
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << '"' << row[c] << '"';
      out << '\n';
    }
    return out.str();
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out << (c ? "  " : "") << std::setw(static_cast<int>(width[c])) << cells[c];
    }
    out << '\n';
  };
  emit(header);
  for (const auto& row : rows) emit(row);
  out << '\n' << what << " per method, binomial standard error in parentheses\n";
  for (const auto& w : r.warnings) out << "warning: " << w << '\n';
  return out.str();
}

int cmd_montecarlo(const CommonFlags& common, const MonteCarloFlags& flags, int argc, char** argv) {
  const TableFormat format = table_format_from_string(common.format);
  const auto doc = read_json_file(flags.config);
  const std::string experiment = doc.value("experiment", std::string("size_power"));
  if (experiment != "size_power" && experiment != "coverage") {
    throw InputError(flags.config + ": experiment must be 'size_power' or 'coverage'");
  }
  ExperimentConfig config = experiment_config_from_json(doc);
  if (flags.seed) config.seed = *flags.seed;
  if (flags.replications) config.replications = *flags.replications;
  config.validate();

  Run run("montecarlo", common, argc, argv);
  const MonteCarloReport report = experiment == "coverage" ? coverage_experiment(config, common.jobs)
                                                           : size_and_power_experiment(config, common.jobs);
  Json j{{"config", to_json(config)}, {"report", to_json(report)}};
  j["config"]["experiment"] = experiment;
  run.write("montecarlo.json", j.dump(2) + "\n");
  std::ostringstream csv;
  write_replications_csv(csv, report);
  run.write("replications.csv", csv.str());
  const std::string table = montecarlo_table(report, format);
  run.write("montecarlo." + extension(format), table);
  std::cout << table;
  run.manifest(Json{{"config", flags.config},
                    {"experiment", experiment},
                    {"resolved_config", to_json(config)},
                    {"common", common_flags_json(common)}},
               config.seed);
  return kOk;
}

int cmd_report(const CommonFlags& common, const ReportFlags& flags, int argc, char** argv) {
  const TableFormat format = table_format_from_string(common.format);
  if (flags.results.empty() && flags.bootstrap.empty()) {
    throw InputError("report needs --results and/or --bootstrap");
  }
  Run run("report", common, argc, argv);
  std::string output;

  std::optional<AnalysisResults> results;
  if (!flags.results.empty()) {
    results = analysis_results_from_json(read_json_file(flags.results));
    if (flags.sided) results->options.sided = sided_mode_from_string(*flags.sided);
  }
  const SidedMode sided = results ? results->options.sided
                                  : (flags.sided ? sided_mode_from_string(*flags.sided) : SidedMode::automatic);
  const ReportOptions report = report_options(common, sided);

  if (results) {
    if (!results->usable()) throw InputError(flags.results + ": the stored estimation did not succeed");
    output += format_table(estimation_table(*results, table_columns(common, results->options.restriction_tests)),
                           report, format);
  }

  std::optional<BootstrapSummary> summary;
  if (!flags.draws.empty()) {
    // Recompute intervals from stored draws without re-estimating.
    if (!results) throw InputError("--draws needs --results for the full-sample estimates");
    const BootstrapResult draws = read_draws_csv_file(flags.draws);
    const double level = flags.level.value_or(results->options.ci_level);
    std::vector<Alternative> declared;
    for (const auto& p : results->parameters) declared.push_back(p.declared);
    summary = summarise_bootstrap(draws, results->estimation.params_hat, results->covariance->se_classical,
                                  level, declared);
    run.write("bootstrap.json", to_json(*summary).dump(2) + "\n");
  } else if (!flags.bootstrap.empty()) {
    summary = bootstrap_summary_from_json(read_json_file(flags.bootstrap));
  }
  if (summary) {
    if (!output.empty()) output += "\n";
    output += format_table(bootstrap_table(*summary, sided), report, format);
  }
  run.write("report." + extension(format), output);
  std::cout << output;
  run.manifest(Json{{"results", flags.results},
                    {"draws", flags.draws},
                    {"bootstrap", flags.bootstrap},
                    {"level", flags.level ? Json(*flags.level) : Json(nullptr)},
                    {"common", common_flags_json(common)}},
               0);
  return kOk;
}

int cmd_simulate(const CommonFlags& common, const MonteCarloFlags& flags, int argc, char** argv) {
  ExperimentConfig config = experiment_config_from_json(read_json_file(flags.config));
  if (flags.seed) config.seed = *flags.seed;
  Run run("simulate", common, argc, argv);
  const SimulatedData sim = simulate_dataset(config.spec, config.true_params, config.design, config.n_persons,
                                             config.obs_per_person, config.seed);
  for (const auto& w : sim.warnings) std::cerr << "warning: " << w << '\n';
  std::ostringstream csv;
  write_dataset_csv(csv, sim.data);
  run.write("data.csv", csv.str());
  run.write("spec.json", model_spec_to_json(config.spec).dump(2) + "\n");
  run.manifest(Json{{"config", flags.config}, {"common", common_flags_json(common)}}, config.seed);
  std::cout << "wrote " << sim.data.n_observations() << " observations of " << sim.data.n_persons()
            << " persons to " << run.path("data.csv").string() << '\n';
  return kOk;
}

void add_common(CLI::App* cmd, CommonFlags& c) {
  cmd->add_option("--out-dir", c.out_dir, "Directory for result files (default: $CHOICESTAT_OUTPUT_DIR or .)");
  cmd->add_option("--format", c.format, "Table format")->check(CLI::IsMember({"text", "csv", "json"}));
  cmd->add_option("--jobs", c.jobs, "Worker threads; results do not depend on it")->check(CLI::PositiveNumber);
  cmd->add_flag("--se", c.se, "Show standard-error columns");
  cmd->add_flag("--t", c.t, "Show t-ratio columns");
  cmd->add_flag("--stars", c.stars, "Append significance stars (requires --se or --t)");
}

void add_estimate(CLI::App* cmd, EstimateFlags& f) {
  cmd->add_option("--data", f.data, "Long-format choice data (CSV)")->required();
  cmd->add_option("--spec", f.spec, "Model specification (JSON)")->required();
  cmd->add_option("--sided", f.sided, "p-values to show")->check(CLI::IsMember({"one", "two", "auto"}));
  cmd->add_option("--starts", f.starts, "Number of estimation starts")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "Seed for all randomness");
  cmd->add_option("--grouping", f.grouping, "Score grouping for BHHH and robust errors")
      ->check(CLI::IsMember({"person", "observation"}));
  cmd->add_option("--max-iterations", f.max_iterations)->check(CLI::PositiveNumber);
  cmd->add_option("--tolerance", f.tolerance, "Gradient infinity-norm tolerance")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multinomial logit estimation and inference"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CHOICESTAT_VERSION);

  CommonFlags common;
  common.out_dir = default_out_dir();
  EstimateFlags est;
  BootstrapFlags boot;
  MonteCarloFlags mc;
  ReportFlags rep;

  auto* estimate_cmd = app.add_subcommand("estimate", "Estimate, test and report a model");
  add_estimate(estimate_cmd, est);
  estimate_cmd->add_option("--ci-level", est.ci_level, "Confidence level")->check(CLI::Range(0.0, 1.0));
  estimate_cmd->add_flag("--no-trinity", est.no_trinity, "Skip the restricted re-estimations for LR and LM");
  add_common(estimate_cmd, common);

  auto* boot_cmd = app.add_subcommand("bootstrap", "Person-level bootstrap intervals and p-values");
  add_estimate(boot_cmd, est);
  boot_cmd->add_option("--S", boot.samples, "Bootstrap samples")->check(CLI::PositiveNumber);
  boot_cmd->add_option("--level", boot.level, "Interval level")->check(CLI::Range(0.0, 1.0));
  add_common(boot_cmd, common);

  auto* mc_cmd = app.add_subcommand("montecarlo", "Size, power or coverage experiment");
  mc_cmd->add_option("--config", mc.config, "Experiment config (JSON)")->required();
  mc_cmd->add_option("--seed", mc.seed, "Override the config seed");
  mc_cmd->add_option("--replications", mc.replications, "Override the replication count");
  add_common(mc_cmd, common);

  auto* report_cmd = app.add_subcommand("report", "Re-render tables from stored results");
  report_cmd->add_option("--results", rep.results, "results.json from estimate or bootstrap");
  report_cmd->add_option("--draws", rep.draws, "draws.csv to recompute bootstrap statistics");
  report_cmd->add_option("--bootstrap", rep.bootstrap, "bootstrap.json to re-render");
  report_cmd->add_option("--level", rep.level, "Interval level for --draws")->check(CLI::Range(0.0, 1.0));
  report_cmd->add_option("--sided", rep.sided, "p-values to show")->check(CLI::IsMember({"one", "two", "auto"}));
  add_common(report_cmd, common);

  auto* sim_cmd = app.add_subcommand("simulate", "Write a dataset simulated from an experiment config");
  sim_cmd->add_option("--config", mc.config, "Experiment config (JSON)")->required();
  sim_cmd->add_option("--seed", mc.seed, "Override the config seed");
  sim_cmd->add_option("--out-dir", common.out_dir, "Directory for data.csv and spec.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*estimate_cmd) return cmd_estimate(common, est, argc, argv);
    if (*boot_cmd) return cmd_bootstrap(common, est, boot, argc, argv);
    if (*mc_cmd) return cmd_montecarlo(common, mc, argc, argv);
    if (*report_cmd) return cmd_report(common, rep, argc, argv);
    if (*sim_cmd) return cmd_simulate(common, mc, argc, argv);
  } catch (const IdentificationError& e) {
    std::cerr << "identification failure: " << e.what() << " (eigenvalue ratio " << e.condition_ratio() << ")\n";
    return kIdentification;
  } catch (const EstimationError& e) {
    std::cerr << "estimation failure: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
  return kInput;
}
