#include "choicestat/reporting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "choicestat/errors.hpp"

namespace choicestat {

double rho_bar_squared(double ll_hat, double ll_0, std::size_t k) {
  if (!(ll_0 < 0.0)) throw InputError("rho-bar-squared needs a negative null log-likelihood");
  return 1.0 - (ll_hat - static_cast<double>(k)) / ll_0;
}

double bic(double ll_hat, std::size_t k, std::size_t n_obs) {
  if (n_obs < 1) throw InputError("BIC needs at least one observation");
  return -2.0 * ll_hat + static_cast<double>(k) * std::log(static_cast<double>(n_obs));
}

PredictionGain prediction_gain(double delta_ll, std::size_t n_obs, double base_avg_prob) {
  if (!(base_avg_prob > 0.0 && base_avg_prob < 1.0)) {
    throw InputError("base average probability must lie in (0, 1)");
  }
  if (!(delta_ll >= 0.0)) throw InputError("log-likelihood gain must be non-negative");
  if (n_obs < 1) throw InputError("prediction gain needs at least one observation");
  PredictionGain out;
  out.value = base_avg_prob * std::exp(delta_ll / static_cast<double>(n_obs));
  if (out.value > 1.0) {
    out.value = 1.0;
    out.capped = true;
  }
  return out;
}

std::string star_code(double p, const StarThresholds& t) {
  if (p <= t.strong) return "***";
  if (p <= t.medium) return "**";
  if (p <= t.weak) return "*";
  return "";
}

namespace {

std::string printf_string(const char* fmt, int precision, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, precision, value);
  return buf;
}

std::string non_finite(double value) {
  if (std::isnan(value)) return "NA";
  return value > 0 ? "Inf" : "-Inf";
}

}  // namespace

std::string format_scientific(double value, int digits) {
  if (!std::isfinite(value)) return non_finite(value);
  return printf_string("%.*E", std::max(1, digits) - 1, value);
}

std::string format_fixed(double value, int decimals) {
  if (!std::isfinite(value)) return non_finite(value);
  return printf_string("%.*f", std::max(0, decimals), value);
}

std::string format_significant(double value, int digits) {
  if (!std::isfinite(value)) return non_finite(value);
  digits = std::max(1, digits);
  if (value == 0.0) return format_fixed(0.0, digits - 1);
  if (std::abs(value) < 0.01) return format_scientific(value, digits);
  // Exponent after rounding to `digits` figures (9.9996 -> 1.000e+01).
  const std::string sci = printf_string("%.*e", digits - 1, value);
  const int exponent = std::stoi(sci.substr(sci.find('e') + 1));
  if (exponent >= digits) return format_scientific(value, digits);
  return format_fixed(value, digits - 1 - exponent);
}

std::string format_p_value(double p, int p_digits, double apa_floor) {
  if (!std::isfinite(p)) return non_finite(p);
  std::string floor_label = printf_string("%.*g", 6, apa_floor);
  if (floor_label.rfind("0.", 0) == 0) floor_label.erase(0, 1);
  if (p < apa_floor) return "< " + floor_label;
  const std::string fixed = format_fixed(p, p_digits);
  if (fixed.find_first_not_of("0.") == std::string::npos) {
    // Rounds to zero at this precision; report the resolution instead.
    std::string bound = format_fixed(std::pow(10.0, -p_digits), p_digits);
    return "< " + bound.erase(0, 1);
  }
  return fixed;
}

std::string format_p_with_sidedness(double p, Sidedness sidedness, int p_digits, double apa_floor) {
  return format_p_value(p, p_digits, apa_floor) + " (" + short_label(sidedness) + ")";
}

void ReportOptions::validate() const {
  if (significant_digits < 2) throw InputError("at least two significant digits are required");
  if (p_digits < 1) throw InputError("p-values need at least one decimal");
  if (!(apa_floor > 0.0 && apa_floor < 1.0)) throw InputError("APA floor must lie in (0, 1)");
  const auto& t = star_thresholds;
  if (!(0.0 < t.strong && t.strong < t.medium && t.medium < t.weak && t.weak < 1.0)) {
    throw InputError("star thresholds must be strictly increasing within (0, 1)");
  }
}

TableFormat table_format_from_string(const std::string& s) {
  if (s == "text") return TableFormat::text;
  if (s == "csv") return TableFormat::csv;
  if (s == "json") return TableFormat::json;
  throw InputError("unknown table format '" + s + "'");
}

namespace {

struct Grid {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> footer;
};

void check_length(std::size_t got, std::size_t want, const std::string& label) {
  if (got != want) throw InputError("column '" + label + "' has the wrong number of entries");
}

std::string p_label(const TableInput::PValueColumn& col) {
  return col.label + " (" + short_label(col.sidedness) + ")";
}

Grid build_grid(const TableInput& table, const ReportOptions& options) {
  options.validate();
  const bool has_se_or_t = !table.se_columns.empty() || !table.t_columns.empty();
  if (options.include_stars && !has_se_or_t) {
    throw ReportingError("significance stars may only be shown alongside standard errors or "
                         "t-ratios; add an se or t column");
  }

  const std::size_t n = table.parameters.size();
  check_length(table.estimates.size(), n, "estimate");
  for (const auto& c : table.se_columns) check_length(c.values.size(), n, c.label);
  for (const auto& c : table.t_columns) check_length(c.values.size(), n, c.label);
  for (const auto& c : table.interval_columns) check_length(c.values.size(), n, c.label);
  for (const auto& c : table.ratio_columns) check_length(c.values.size(), n, c.label);
  for (const auto& c : table.p_columns) {
    check_length(c.values.size(), n, c.label);
    if (!c.upper_bounds.empty()) check_length(c.upper_bounds.size(), n, c.label);
  }

  const int sig = options.significant_digits;
  Grid g;
  g.header.push_back("parameter");
  g.header.push_back("estimate");
  for (const auto& c : table.se_columns) g.header.push_back(c.label);
  for (const auto& c : table.t_columns) g.header.push_back(c.label);
  for (const auto& c : table.p_columns) g.header.push_back(p_label(c));
  for (const auto& c : table.interval_columns) g.header.push_back(c.label);
  for (const auto& c : table.ratio_columns) g.header.push_back(c.label);

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> row;
    row.push_back(table.parameters[i]);
    row.push_back(format_significant(table.estimates[i], sig));
    for (const auto& c : table.se_columns) row.push_back(format_scientific(c.values[i], sig));
    for (const auto& c : table.t_columns) row.push_back(format_fixed(c.values[i], 2));
    for (const auto& c : table.p_columns) {
      const bool bounded = !c.upper_bounds.empty() && std::isfinite(c.upper_bounds[i]);
      std::string cell;
      double p_for_stars = c.values[i];
      if (bounded) {
        const double bound = c.upper_bounds[i];
        cell = "< 1/" + std::to_string(static_cast<long long>(std::llround(1.0 / bound)));
        p_for_stars = bound;
      } else {
        cell = format_p_value(c.values[i], options.p_digits, options.apa_floor);
      }
      if (options.include_stars && std::isfinite(p_for_stars)) {
        const std::string stars = star_code(p_for_stars, options.star_thresholds);
        if (!stars.empty()) cell += " " + stars;
      }
      row.push_back(cell);
    }
    for (const auto& c : table.interval_columns) row.push_back(format_scientific(c.values[i], sig));
    for (const auto& c : table.ratio_columns) row.push_back(format_fixed(c.values[i], 2));
    g.rows.push_back(std::move(row));
  }

  g.footer = table.notes;
  std::ostringstream sided;
  sided << "p-value sidedness:";
  if (table.p_columns.empty()) sided << " no p-values shown";
  // Columns sharing a label (one- and two-sided versions) share one entry.
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& c : table.p_columns) {
    const auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.first == c.label; });
    if (it == entries.end()) {
      entries.emplace_back(c.label, short_label(c.sidedness));
    } else {
      it->second += " and " + short_label(c.sidedness);
    }
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    sided << (i == 0 ? " " : "; ") << entries[i].first << ' ' << entries[i].second;
  }
  g.footer.push_back(sided.str());
  if (!options.sidedness_note.empty()) g.footer.push_back(options.sidedness_note);
  if (options.include_stars) {
    const auto& t = options.star_thresholds;
    std::ostringstream legend;
    legend << "***: p <= " << t.strong << "; **: p <= " << t.medium << "; *: p <= " << t.weak;
    g.footer.push_back(legend.str());
  }
  return g;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render_text(const Grid& g) {
  std::vector<std::size_t> width(g.header.size(), 0);
  for (std::size_t c = 0; c < g.header.size(); ++c) width[c] = g.header[c].size();
  for (const auto& row : g.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) out << "  ";
      const std::size_t pad = width[c] - cells[c].size();
      if (c == 0) {
        out << cells[c] << std::string(pad, ' ');
      } else {
        out << std::string(pad, ' ') << cells[c];
      }
    }
    out << '\n';
  };
  emit(g.header);
  std::size_t total = 0;
  for (auto w : width) total += w + 2;
  out << std::string(total > 2 ? total - 2 : total, '-') << '\n';
  for (const auto& row : g.rows) emit(row);
  out << '\n';
  for (const auto& line : g.footer) out << line << '\n';
  return out.str();
}

std::string render_csv(const Grid& g) {
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) out << (c ? "," : "") << csv_escape(cells[c]);
    out << '\n';
  };
  emit(g.header);
  for (const auto& row : g.rows) emit(row);
  for (const auto& line : g.footer) out << "# " << line << '\n';
  return out.str();
}

std::string render_json(const Grid& g) {
  nlohmann::ordered_json doc;
  doc["columns"] = g.header;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : g.rows) {
    nlohmann::ordered_json r;
    for (std::size_t c = 0; c < row.size(); ++c) r[g.header[c]] = row[c];
    doc["rows"].push_back(r);
  }
  doc["notes"] = g.footer;
  return doc.dump(2) + "\n";
}

}  // namespace

std::string format_table(const TableInput& table, const ReportOptions& options, TableFormat format) {
  const Grid g = build_grid(table, options);
  switch (format) {
    case TableFormat::text: return render_text(g);
    case TableFormat::csv: return render_csv(g);
    case TableFormat::json: return render_json(g);
  }
  return render_text(g);
}

}  // namespace choicestat
