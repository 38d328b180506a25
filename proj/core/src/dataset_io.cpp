#include "choicestat/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "choicestat/errors.hpp"

namespace choicestat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string at_line(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

// Splits one CSV record; double quotes may wrap fields containing commas.
std::vector<std::string> split_csv(const std::string& line, const std::string& where) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw InputError(where + "unterminated quoted field");
  fields.push_back(cur);
  for (auto& f : fields) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return fields;
}

bool read_record(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (line.find_first_not_of(" \t") != std::string::npos) return true;
  }
  return false;
}

double parse_number(const std::string& s, const std::string& where, const std::string& column) {
  if (s.empty() || s == "NA" || s == "NaN" || s == "nan") return kNaN;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError(where + "column '" + column + "': '" + s + "' is not a number");
  }
  return v;
}

bool parse_flag(const std::string& s, const std::string& where, const std::string& column) {
  if (s == "1") return true;
  if (s == "0") return false;
  throw InputError(where + "column '" + column + "' must be 0 or 1, got '" + s + "'");
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "NA";
  if (std::isinf(value)) return value > 0 ? "Inf" : "-Inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

Dataset read_dataset_csv(std::istream& in, const std::string& source) {
  static const std::vector<std::string> kFixed = {"person_id", "obs_id", "alt_id", "avail", "chosen"};
  std::string line;
  std::size_t line_no = 0;
  if (!read_record(in, line, line_no)) throw InputError(source + ": empty file, header row expected");
  const auto header = split_csv(line, at_line(source, line_no));
  if (header.size() < kFixed.size()) {
    throw InputError(at_line(source, line_no) + "header must start with person_id,obs_id,alt_id,avail,chosen");
  }
  for (std::size_t c = 0; c < kFixed.size(); ++c) {
    if (header[c] != kFixed[c]) {
      throw InputError(at_line(source, line_no) + "expected column '" + kFixed[c] + "' at position " +
                       std::to_string(c + 1) + ", found '" + header[c] + "'");
    }
  }
  Dataset data;
  data.attribute_names.assign(header.begin() + static_cast<std::ptrdiff_t>(kFixed.size()), header.end());
  for (std::size_t a = 0; a < data.attribute_names.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      if (data.attribute_names[a] == data.attribute_names[b]) {
        throw InputError(at_line(source, line_no) + "duplicate attribute column '" + data.attribute_names[a] + "'");
      }
    }
  }

  struct Row {
    std::size_t line;
    std::size_t alt;
    bool avail;
    bool chosen;
    std::vector<double> values;
  };
  struct PendingObs {
    std::string person;
    std::string obs;
    std::size_t first_line;
    std::vector<Row> rows;
  };
  std::vector<PendingObs> pending;
  std::map<std::pair<std::string, std::string>, std::size_t> obs_index;
  std::map<std::string, std::size_t> alt_index;
  std::map<std::string, bool> person_seen;

  while (read_record(in, line, line_no)) {
    const std::string where = at_line(source, line_no);
    const auto f = split_csv(line, where);
    if (f.size() != header.size()) {
      throw InputError(where + "expected " + std::to_string(header.size()) + " fields, found " +
                       std::to_string(f.size()));
    }
    if (f[0].empty() || f[1].empty() || f[2].empty()) {
      throw InputError(where + "person_id, obs_id and alt_id must be non-empty");
    }
    auto [ait, new_alt] = alt_index.emplace(f[2], data.alternatives.size());
    if (new_alt) data.alternatives.push_back(f[2]);
    if (!person_seen.count(f[0])) {
      person_seen[f[0]] = true;
      data.persons.push_back(f[0]);
    }
    Row row{line_no, ait->second, parse_flag(f[3], where, "avail"), parse_flag(f[4], where, "chosen"), {}};
    for (std::size_t c = kFixed.size(); c < f.size(); ++c) {
      const double v = parse_number(f[c], where, header[c]);
      if (std::isinf(v)) throw InputError(where + "column '" + header[c] + "' is not finite");
      row.values.push_back(v);
    }
    if (row.chosen && !row.avail) throw InputError(where + "chosen alternative is marked unavailable");
    const auto key = std::make_pair(f[0], f[1]);
    auto [oit, new_obs] = obs_index.emplace(key, pending.size());
    if (new_obs) pending.push_back({f[0], f[1], line_no, {}});
    for (const auto& r : pending[oit->second].rows) {
      if (r.alt == row.alt) {
        throw InputError(where + "alternative '" + f[2] + "' repeated in observation '" + f[1] + "'");
      }
    }
    pending[oit->second].rows.push_back(std::move(row));
  }
  if (pending.empty()) throw InputError(source + ": no data rows");

  const auto n_alt = static_cast<Eigen::Index>(data.alternatives.size());
  const auto n_attr = static_cast<Eigen::Index>(data.attribute_names.size());
  for (const auto& p : pending) {
    Observation obs;
    obs.person_id = p.person;
    obs.obs_id = p.obs;
    obs.available.assign(data.alternatives.size(), false);
    obs.attributes = Eigen::MatrixXd::Constant(n_alt, n_attr, kNaN);
    std::size_t n_chosen = 0;
    for (const auto& r : p.rows) {
      obs.available[r.alt] = r.avail;
      for (Eigen::Index a = 0; a < n_attr; ++a) {
        obs.attributes(static_cast<Eigen::Index>(r.alt), a) = r.values[static_cast<std::size_t>(a)];
      }
      if (r.chosen) {
        obs.chosen = r.alt;
        ++n_chosen;
      }
    }
    const std::string where = at_line(source, p.first_line) + "observation '" + p.obs + "' of person '" + p.person + "': ";
    if (n_chosen != 1) {
      throw InputError(where + "exactly one chosen row required, found " + std::to_string(n_chosen));
    }
    if (obs.available_count() < 2) throw InputError(where + "fewer than two available alternatives");
    data.observations.push_back(std::move(obs));
  }
  data.validate();
  return data;
}

Dataset read_dataset_csv_file(const std::string& path) {
  auto in = open_input(path);
  return read_dataset_csv(in, path);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  out << "person_id,obs_id,alt_id,avail,chosen";
  for (const auto& a : data.attribute_names) out << ',' << a;
  out << '\n';
  for (const auto& obs : data.observations) {
    for (std::size_t j = 0; j < data.alternatives.size(); ++j) {
      out << obs.person_id << ',' << obs.obs_id << ',' << data.alternatives[j] << ','
          << (obs.available[j] ? 1 : 0) << ',' << (obs.chosen == j ? 1 : 0);
      for (Eigen::Index a = 0; a < obs.attributes.cols(); ++a) {
        out << ',' << format_double(obs.attributes(static_cast<Eigen::Index>(j), a));
      }
      out << '\n';
    }
  }
}

ModelSpec model_spec_from_json(const nlohmann::json& j) {
  try {
    ModelSpec spec;
    spec.alternatives = j.at("alternatives").get<std::vector<std::string>>();
    for (const auto& p : j.at("parameters")) {
      ParameterDef def;
      def.name = p.at("name").get<std::string>();
      def.start = p.value("start", 0.0);
      def.fixed = p.value("fixed", false);
      def.fixed_value = p.value("fixed_value", 0.0);
      def.h0_value = p.value("h0_value", 0.0);
      def.alternative = alternative_from_string(p.value("alternative", std::string("auto")));
      spec.parameters.push_back(def);
    }
    for (const auto& [alt, terms] : j.at("utilities").items()) {
      auto& list = spec.utilities[alt];
      for (const auto& t : terms) {
        list.push_back({t.at("param").get<std::string>(), t.at("attribute").get<std::string>()});
      }
    }
    spec.validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("model spec: ") + e.what());
  }
}

nlohmann::ordered_json model_spec_to_json(const ModelSpec& spec) {
  nlohmann::ordered_json j;
  j["alternatives"] = spec.alternatives;
  j["parameters"] = nlohmann::ordered_json::array();
  for (const auto& p : spec.parameters) {
    j["parameters"].push_back({{"name", p.name},
                               {"start", p.start},
                               {"fixed", p.fixed},
                               {"fixed_value", p.fixed_value},
                               {"h0_value", p.h0_value},
                               {"alternative", to_string(p.alternative)}});
  }
  j["utilities"] = nlohmann::ordered_json::object();
  for (const auto& alt : spec.alternatives) {
    auto list = nlohmann::ordered_json::array();
    const auto it = spec.utilities.find(alt);
    if (it != spec.utilities.end()) {
      for (const auto& t : it->second) list.push_back({{"param", t.param}, {"attribute", t.attribute}});
    }
    j["utilities"][alt] = list;
  }
  return j;
}

nlohmann::json read_json_file(const std::string& path) {
  auto in = open_input(path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw InputError(path + ":" + std::to_string(line) + ": invalid JSON: " + e.what());
  }
}

ModelSpec read_model_spec_file(const std::string& path) {
  const auto j = read_json_file(path);
  try {
    return model_spec_from_json(j);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_draws_csv(std::ostream& out, const BootstrapResult& result) {
  out << "replicate,converged";
  for (const auto& n : result.param_names) out << ',' << n;
  out << '\n';
  for (std::size_t s = 0; s < result.s_samples; ++s) {
    out << s << ',' << (result.converged[s] ? 1 : 0);
    for (Eigen::Index k = 0; k < result.draws.cols(); ++k) {
      out << ',' << format_double(result.draws(static_cast<Eigen::Index>(s), k));
    }
    out << '\n';
  }
}

BootstrapResult read_draws_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  if (!read_record(in, line, line_no)) throw InputError(source + ": empty draws file");
  const auto header = split_csv(line, at_line(source, line_no));
  if (header.size() < 3 || header[0] != "replicate" || header[1] != "converged") {
    throw InputError(at_line(source, line_no) + "header must be replicate,converged,<parameters...>");
  }
  BootstrapResult r;
  r.param_names.assign(header.begin() + 2, header.end());
  std::vector<std::vector<double>> rows;
  while (read_record(in, line, line_no)) {
    const std::string where = at_line(source, line_no);
    const auto f = split_csv(line, where);
    if (f.size() != header.size()) throw InputError(where + "wrong number of fields");
    if (parse_number(f[0], where, "replicate") != static_cast<double>(rows.size())) {
      throw InputError(where + "replicates must be numbered 0, 1, 2, ... in order");
    }
    r.converged.push_back(parse_flag(f[1], where, "converged"));
    std::vector<double> v;
    for (std::size_t c = 2; c < f.size(); ++c) v.push_back(parse_number(f[c], where, header[c]));
    rows.push_back(std::move(v));
    r.statuses.push_back(r.converged.back() ? "converged" : "failed");
  }
  r.s_samples = rows.size();
  r.draws.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(r.param_names.size()));
  for (std::size_t s = 0; s < rows.size(); ++s) {
    for (std::size_t k = 0; k < rows[s].size(); ++k) {
      r.draws(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(k)) = rows[s][k];
    }
    if (!r.converged[s]) ++r.n_failed;
  }
  return r;
}

BootstrapResult read_draws_csv_file(const std::string& path) {
  auto in = open_input(path);
  return read_draws_csv(in, path);
}

}  // namespace choicestat
