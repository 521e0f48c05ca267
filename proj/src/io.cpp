#include "mctrend/io.hpp"

#include "mctrend/correlation.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace mctrend {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream stream(s);
  while (std::getline(stream, field, sep)) out.push_back(field);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

bool parse_double(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_int64(const std::string& text, long long& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  return in;
}

}  // namespace

Dataset parse_csv(const std::string& input_path,
                  const std::vector<std::string>& dose_order) {
  std::ifstream in = open_or_throw(input_path);
  return parse_csv_stream(in, input_path, dose_order);
}

Dataset parse_csv_stream(std::istream& in, const std::string& source_name,
                         const std::vector<std::string>& dose_order) {
  const auto fail = [&](int line_no, const std::string& what) -> void {
    throw DataError(source_name + ", row " + std::to_string(line_no) + ": " + what);
  };

  std::string line;
  int line_no = 0;

  // Header.
  if (!std::getline(in, line)) throw DataError(source_name + ": empty file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    const auto fields = split(line, ',');
    if (fields.size() != 2 || trim(fields[0]) != "dose" ||
        trim(fields[1]) != "response")
      fail(line_no, "expected header 'dose,response', got '" + line + "'");
  }

  std::vector<std::string> dose_label;  // per observation
  std::vector<double> response;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 2)
      fail(line_no, "expected 2 comma-separated fields, got " +
                        std::to_string(fields.size()));
    const std::string dose = trim(fields[0]);
    if (dose.empty()) fail(line_no, "empty dose label");
    double y = 0.0;
    if (!parse_double(fields[1], y))
      fail(line_no, "non-numeric response '" + trim(fields[1]) + "'");
    if (!std::isfinite(y)) fail(line_no, "non-finite response");
    dose_label.push_back(dose);
    response.push_back(y);
  }
  if (dose_label.empty()) throw DataError(source_name + ": no data rows");

  // Establish the group order: explicit override or lexical.
  std::vector<std::string> labels;
  {
    std::vector<std::string> seen = dose_label;
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    if (dose_order.empty()) {
      labels = seen;
    } else {
      labels = dose_order;
      std::vector<std::string> ordered = labels;
      std::sort(ordered.begin(), ordered.end());
      if (std::adjacent_find(ordered.begin(), ordered.end()) != ordered.end())
        throw DataError(source_name + ": duplicate label in dose order");
      if (ordered != seen) {
        std::string msg = source_name +
                          ": dose order must list exactly the labels in the "
                          "file (file has";
        for (const auto& s : seen) msg += " '" + s + "'";
        msg += ")";
        throw DataError(msg);
      }
    }
  }
  if (labels.size() < 2)
    throw DataError(source_name + ": need at least 2 dose groups, found " +
                    std::to_string(labels.size()));

  std::map<std::string, int> index;
  for (std::size_t i = 0; i < labels.size(); ++i)
    index[labels[i]] = static_cast<int>(i);

  Dataset data;
  data.labels = labels;
  data.group.reserve(dose_label.size());
  data.response = std::move(response);
  std::vector<int> counts(labels.size(), 0);
  for (const auto& dose : dose_label) {
    const int g = index.at(dose);
    data.group.push_back(g);
    ++counts[static_cast<std::size_t>(g)];
  }
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] < 2)
      throw DataError(source_name + ": group '" + labels[i] + "' has " +
                      std::to_string(counts[i]) +
                      " observation(s); need at least 2");
  return data;
}

CorrelationMatrix read_correlation_file(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    std::istringstream fields(line);
    std::vector<double> row;
    std::string tok;
    while (fields >> tok) {
      double v = 0.0;
      if (!parse_double(tok, v))
        throw DataError(path + ", line " + std::to_string(line_no) +
                        ": non-numeric entry '" + tok + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw DataError(path + ", line " + std::to_string(line_no) +
                      ": expected " + std::to_string(rows.front().size()) +
                      " entries, got " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError(path + ": no matrix rows");
  if (rows.size() != rows.front().size())
    throw DataError(path + ": matrix is " + std::to_string(rows.size()) +
                    "x" + std::to_string(rows.front().size()) +
                    ", expected square");
  const auto q = static_cast<Eigen::Index>(rows.size());
  Matrix m(q, q);
  for (Eigen::Index i = 0; i < q; ++i)
    for (Eigen::Index j = 0; j < q; ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  try {
    return CorrelationMatrix::from_matrix(m);
  } catch (const std::domain_error& e) {
    throw DataError(path + ": " + e.what());
  } catch (const NumericError& e) {
    // a bad input file is a data problem, not an engine failure
    throw DataError(path + ": " + e.what());
  }
}

SimConfig parse_sim_config(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  return parse_sim_config_stream(in, path);
}

SimConfig parse_sim_config_stream(std::istream& in,
                                  const std::string& source_name) {
  SimConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError(source_name + ", line " + std::to_string(line_no) +
                      ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto bad_value = [&]() -> DataError {
      return DataError(source_name + ", line " + std::to_string(line_no) +
                       ": invalid value '" + value + "' for key '" + key + "'");
    };
    const auto as_double = [&]() {
      double v = 0.0;
      if (!parse_double(value, v)) throw bad_value();
      return v;
    };
    const auto as_count = [&]() {
      long long v = 0;
      if (!parse_int64(value, v) || v < 0) throw bad_value();
      return v;
    };
    if (key == "k") {
      cfg.k = static_cast<int>(as_count());
    } else if (key == "n_per_group") {
      cfg.n_per_group = static_cast<int>(as_count());
    } else if (key == "sigma") {
      cfg.sigma = as_double();
    } else if (key == "alpha") {
      cfg.alpha = as_double();
    } else if (key == "delta") {
      if (value == "auto")
        cfg.delta = 0.0;
      else
        cfg.delta = as_double();
    } else if (key == "target_power") {
      cfg.target_power = as_double();
    } else if (key == "replications") {
      cfg.replications = static_cast<int>(as_count());
    } else if (key == "seed") {
      long long v = 0;
      if (!parse_int64(value, v) || v < 0) throw bad_value();
      cfg.seed = static_cast<std::uint64_t>(v);
    } else if (key == "methods") {
      cfg.methods.clear();
      for (const auto& m : split(value, ',')) {
        const std::string name = trim(m);
        if (!name.empty()) cfg.methods.push_back(name);
      }
    } else {
      throw DataError(source_name + ", line " + std::to_string(line_no) +
                      ": unknown key '" + key + "'");
    }
  }
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw DataError(source_name + ": " + e.what());
  }
  return cfg;
}

std::string power_table_csv(const PowerTable& table) {
  std::ostringstream out;
  out << "shape,method,comparison,estimate,mc_se\n";
  out.precision(17);
  for (const auto& e : table.entries)
    out << e.shape << ',' << e.method << ',' << e.comparison << ','
        << e.estimate << ',' << e.mc_se << '\n';
  return out.str();
}

std::string power_table_json(const PowerTable& table) {
  nlohmann::json doc;
  doc["config"] = {{"k", table.config.k},
                   {"n_per_group", table.config.n_per_group},
                   {"sigma", table.config.sigma},
                   {"alpha", table.config.alpha},
                   {"delta", table.config.delta},
                   {"target_power", table.config.target_power},
                   {"replications", table.config.replications},
                   {"seed", table.config.seed},
                   {"methods", table.config.methods}};
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : table.entries)
    entries.push_back({{"shape", e.shape},
                       {"method", e.method},
                       {"comparison", e.comparison},
                       {"estimate", e.estimate},
                       {"mc_se", e.mc_se}});
  doc["entries"] = std::move(entries);
  return doc.dump(2) + "\n";
}

}  // namespace mctrend
