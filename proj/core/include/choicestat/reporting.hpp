#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "choicestat/inference.hpp"

namespace choicestat {

// ---------------------------------------------------------------------------
// Fit metrics

/// 1 - (ll_hat - k) / ll_0. Throws InputError unless ll_0 < 0.
double rho_bar_squared(double ll_hat, double ll_0, std::size_t k);

/// -2 ll_hat + k ln(n_obs). Throws InputError for n_obs = 0.
double bic(double ll_hat, std::size_t k, std::size_t n_obs);

struct PredictionGain {
  double value = 0.0;
  /// The uncapped value exceeded 1 and was capped.
  bool capped = false;
};

/// Average probability of a correct prediction after a log-likelihood gain
/// spread equally over observations: base * exp(delta_ll / n_obs), capped at 1.
PredictionGain prediction_gain(double delta_ll, std::size_t n_obs, double base_avg_prob);

// ---------------------------------------------------------------------------
// Number formatting

struct StarThresholds {
  double strong = 0.01;  // ***
  double medium = 0.05;  // **
  double weak = 0.10;    // *
};

std::string star_code(double p, const StarThresholds& thresholds = {});

/// `digits` significant figures (leading zeros never count). Values with
/// 0 < |v| < 0.01 switch to scientific notation.
std::string format_significant(double value, int digits);

/// `digits` significant figures in d.dddE+xx form.
std::string format_scientific(double value, int digits);

std::string format_fixed(double value, int decimals);

/// "< .001" below the APA floor, otherwise `p_digits` decimals. Never "0".
std::string format_p_value(double p, int p_digits = 3, double apa_floor = 0.001);

/// p-value followed by its sidedness, e.g. "0.124 (2-sided)".
std::string format_p_with_sidedness(double p, Sidedness sidedness, int p_digits = 3,
                                    double apa_floor = 0.001);

// ---------------------------------------------------------------------------
// Tables

struct ReportOptions {
  int significant_digits = 4;
  int p_digits = 3;
  double apa_floor = 0.001;
  StarThresholds star_thresholds;
  bool include_stars = false;
  /// Appended to every rendering; describes how p-values were computed.
  std::string sidedness_note;

  void validate() const;
};

enum class TableFormat { text, csv, json };

TableFormat table_format_from_string(const std::string& s);

/// Column-oriented description of a parameter table. Every vector is indexed
/// like `parameters`.
struct TableInput {
  struct NumericColumn {
    std::string label;
    std::vector<double> values;
  };
  struct PValueColumn {
    std::string label;
    Sidedness sidedness = Sidedness::two_sided;
    std::vector<double> values;
    /// Entries known only as "< 1/n" (empirical p with no crossings).
    std::vector<double> upper_bounds;
  };

  std::vector<std::string> parameters;
  std::vector<double> estimates;
  /// Standard errors and interval limits: scientific notation.
  std::vector<NumericColumn> se_columns;
  /// t-ratios: two decimals.
  std::vector<NumericColumn> t_columns;
  std::vector<PValueColumn> p_columns;
  std::vector<NumericColumn> interval_columns;
  /// Ratios and indices: two decimals.
  std::vector<NumericColumn> ratio_columns;
  std::vector<std::string> notes;
};

/// Renders the table. Throws ReportingError when stars are requested without
/// an se or t column, and InputError for ragged columns.
std::string format_table(const TableInput& table, const ReportOptions& options, TableFormat format);

}  // namespace choicestat
