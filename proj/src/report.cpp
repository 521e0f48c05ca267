#include "mctrend/report.hpp"

#include "mctrend/ctp.hpp"
#include "mctrend/distributions.hpp"
#include "mctrend/io.hpp"
#include "mctrend/mct.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

namespace mctrend {

namespace {

const std::vector<std::string> kKnownMethods{"dunnett", "williams", "cw", "cp"};

std::vector<std::string> comparison_labels(const std::vector<std::string>& labels) {
  // Top dose first, mirroring the usual presentation of many-to-one tables.
  std::vector<std::string> out;
  for (std::size_t i = labels.size() - 1; i >= 1; --i)
    out.push_back(labels[i] + "-" + labels[0]);
  return out;
}

std::vector<std::string> group_labels_or_default(const Dataset& data, int k) {
  if (static_cast<int>(data.labels.size()) == k + 1) return data.labels;
  std::vector<std::string> labels{"C"};
  for (int i = 1; i <= k; ++i) labels.push_back("D" + std::to_string(i));
  return labels;
}

}  // namespace

void AnalysisRequest::validate() const {
  if (methods.empty()) throw DataError("analysis request: no methods selected");
  for (const auto& m : methods)
    if (std::find(kKnownMethods.begin(), kKnownMethods.end(), m) ==
        kKnownMethods.end())
      throw DataError("analysis request: unknown method '" + m + "'");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DataError("analysis request: alpha must lie in (0, 1)");
  if (output_format != "table" && output_format != "json" &&
      output_format != "csv")
    throw DataError("analysis request: unknown output format '" +
                    output_format + "'");
}

AnalysisReport run_analysis(const Dataset& data, const AnalysisRequest& req) {
  req.validate();
  const ModelFit fit = fit_oneway(data);
  const int k = fit.k();
  const std::vector<std::string> labels = group_labels_or_default(data, k);
  const std::vector<std::string> comparisons = comparison_labels(labels);

  AnalysisReport rep;
  rep.direction = req.direction;
  rep.alpha = req.alpha;
  rep.seed = req.seed;
  rep.methods = req.methods;
  rep.group_labels = labels;
  for (const auto& g : fit.groups) {
    rep.group_sizes.push_back(g.n);
    rep.group_means.push_back(g.mean);
  }
  rep.pooled_sd = fit.s();
  rep.df = fit.df;

  // Method seed streams are fixed so that adding/removing methods does not
  // change the numbers of the others.  Williams and CW share a stream: the
  // closed Williams chain's top subset *is* the Williams trend test, and
  // sharing makes the reported values identical rather than merely equal
  // within QMC noise.
  const std::uint64_t seed_dunnett = derive_seed(req.seed, 1);
  const std::uint64_t seed_williams = derive_seed(req.seed, 2);

  const auto decide = [&](double p) { return p <= req.alpha; };

  for (const auto& method : req.methods) {
    if (method == "dunnett") {
      const MaxTReport d = dunnett_test(fit, req.direction, seed_dunnett);
      for (int i = k; i >= 1; --i) {
        ComparisonResult r;
        r.comparison = comparisons[static_cast<std::size_t>(k - i)];
        r.method = method;
        const auto& row = d.rows[static_cast<std::size_t>(i - 1)];
        r.statistic = row.statistic;
        r.raw_p = row.raw_p;
        r.adj_p = row.adj_p;
        r.error_bound = row.error_bound;
        r.reject = decide(row.adj_p);
        rep.rows.push_back(std::move(r));
      }
    } else if (method == "williams") {
      const MaxTReport w = williams_test(fit, req.direction, seed_williams);
      // The Williams-type test makes one elementary claim (the top dose);
      // report the p-value of the winning contrast, NA elsewhere.
      std::size_t best = 0;
      for (std::size_t j = 1; j < w.rows.size(); ++j)
        if (w.rows[j].adj_p < w.rows[best].adj_p) best = j;
      for (int i = k; i >= 1; --i) {
        ComparisonResult r;
        r.comparison = comparisons[static_cast<std::size_t>(k - i)];
        r.method = method;
        if (i == k) {
          r.statistic = w.rows[best].statistic;
          r.raw_p = w.rows[best].raw_p;
          r.adj_p = w.global_p;
          r.error_bound = w.rows[best].error_bound;
          r.reject = decide(w.global_p);
        }
        rep.rows.push_back(std::move(r));
      }
    } else if (method == "cw") {
      const CtpReport c = ctp_cw(fit, req.direction, seed_williams);
      for (int i = k; i >= 1; --i) {
        ComparisonResult r;
        r.comparison = comparisons[static_cast<std::size_t>(k - i)];
        r.method = method;
        r.adj_p = c.elementary_adj_p[static_cast<std::size_t>(i - 1)];
        r.error_bound = c.elementary_error[static_cast<std::size_t>(i - 1)];
        r.reject = decide(*r.adj_p);
        rep.rows.push_back(std::move(r));
      }
    } else {  // cp
      const CtpReport c = ctp_cp(fit, req.direction);
      Vector t = contrast_statistics(fit, dunnett_contrasts(fit.design()));
      if (req.direction == Direction::lesser) t = -t;
      for (int i = k; i >= 1; --i) {
        ComparisonResult r;
        r.comparison = comparisons[static_cast<std::size_t>(k - i)];
        r.method = method;
        r.statistic = t(i - 1);
        r.raw_p = c.subset_p[static_cast<std::size_t>(i - 1)];
        r.adj_p = c.elementary_adj_p[static_cast<std::size_t>(i - 1)];
        r.error_bound = 0.0;
        r.reject = decide(*r.adj_p);
        rep.rows.push_back(std::move(r));
      }
    }
  }
  return rep;
}

AnalysisReport run_analysis(const AnalysisRequest& req) {
  req.validate();
  const Dataset data = parse_csv(req.input_path, req.dose_order);
  return run_analysis(data, req);
}

std::string format_pvalue(double p) {
  char buf[48];
  if (p == 0.0) return "0";
  if (p < 1e-12) {
    std::snprintf(buf, sizeof(buf), "%.1e", p);
  } else if (p < 1e-3) {
    std::snprintf(buf, sizeof(buf), "%.2e", p);
  } else {
    std::snprintf(buf, sizeof(buf), "%.4f", p);
  }
  return buf;
}

namespace {

std::string format_optional_p(const std::optional<double>& p) {
  return p ? format_pvalue(*p) : "NA";
}

std::string format_statistic(const std::optional<double>& s) {
  if (!s) return "NA";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.4f", *s);
  return buf;
}

std::string full_precision(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

}  // namespace

std::string render_table(const AnalysisReport& report) {
  std::ostringstream out;
  out << "Many-to-one comparisons, direction = " << to_string(report.direction)
      << ", alpha = " << format_pvalue(report.alpha)
      << ", seed = " << report.seed << "\n";
  out << "Groups (control first):";
  for (std::size_t i = 0; i < report.group_labels.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), " %s(n=%d, mean=%.4f)",
                  report.group_labels[i].c_str(), report.group_sizes[i],
                  report.group_means[i]);
    out << buf;
  }
  out << "\n";
  {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "Pooled SD = %.6f on %d df\n\n",
                  report.pooled_sd, report.df);
    out << buf;
  }

  constexpr int w_cmp = 12, w_method = 9, w_num = 11, w_dec = 7;
  const auto pad = [&](const std::string& s, int w) {
    std::string t = s;
    if (static_cast<int>(t.size()) < w) t.append(static_cast<std::size_t>(w) - t.size(), ' ');
    return t;
  };
  out << pad("comparison", w_cmp) << pad("method", w_method)
      << pad("statistic", w_num) << pad("raw p", w_num) << pad("adj p", w_num)
      << pad("error", w_num) << pad("reject", w_dec) << "\n";
  for (const auto& r : report.rows) {
    out << pad(r.comparison, w_cmp) << pad(r.method, w_method)
        << pad(format_statistic(r.statistic), w_num)
        << pad(format_optional_p(r.raw_p), w_num)
        << pad(format_optional_p(r.adj_p), w_num)
        << pad(!r.adj_p ? "NA"
                        : (r.error_bound > 0.0 ? format_pvalue(r.error_bound)
                                               : "0"),
               w_num)
        << (r.reject ? (*r.reject ? "yes" : "no") : "NA") << "\n";
  }
  return out.str();
}

std::string render_csv(const AnalysisReport& report) {
  std::ostringstream out;
  out << "comparison,method,statistic,raw_p,adj_p,error_bound,reject\n";
  for (const auto& r : report.rows) {
    out << r.comparison << ',' << r.method << ','
        << (r.statistic ? full_precision(*r.statistic) : "NA") << ','
        << (r.raw_p ? full_precision(*r.raw_p) : "NA") << ','
        << (r.adj_p ? full_precision(*r.adj_p) : "NA") << ','
        << full_precision(r.error_bound) << ','
        << (r.reject ? (*r.reject ? "true" : "false") : "NA") << '\n';
  }
  return out.str();
}

namespace {

nlohmann::json optional_to_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

std::optional<double> optional_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

std::string render_json(const AnalysisReport& report) {
  nlohmann::json doc;
  doc["direction"] = to_string(report.direction);
  doc["alpha"] = report.alpha;
  doc["seed"] = report.seed;
  doc["methods"] = report.methods;
  doc["group_labels"] = report.group_labels;
  doc["group_sizes"] = report.group_sizes;
  doc["group_means"] = report.group_means;
  doc["pooled_sd"] = report.pooled_sd;
  doc["df"] = report.df;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    nlohmann::json row;
    row["comparison"] = r.comparison;
    row["method"] = r.method;
    row["statistic"] = optional_to_json(r.statistic);
    row["raw_p"] = optional_to_json(r.raw_p);
    row["adj_p"] = optional_to_json(r.adj_p);
    row["error_bound"] = r.error_bound;
    if (r.reject)
      row["reject"] = *r.reject;
    else
      row["reject"] = nullptr;
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

AnalysisReport parse_report_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("report JSON: ") + e.what());
  }
  try {
    AnalysisReport rep;
    rep.direction = direction_from_string(doc.at("direction").get<std::string>());
    rep.alpha = doc.at("alpha").get<double>();
    rep.seed = doc.at("seed").get<std::uint64_t>();
    rep.methods = doc.at("methods").get<std::vector<std::string>>();
    rep.group_labels = doc.at("group_labels").get<std::vector<std::string>>();
    rep.group_sizes = doc.at("group_sizes").get<std::vector<int>>();
    rep.group_means = doc.at("group_means").get<std::vector<double>>();
    rep.pooled_sd = doc.at("pooled_sd").get<double>();
    rep.df = doc.at("df").get<int>();
    for (const auto& row : doc.at("rows")) {
      ComparisonResult r;
      r.comparison = row.at("comparison").get<std::string>();
      r.method = row.at("method").get<std::string>();
      r.statistic = optional_from_json(row.at("statistic"));
      r.raw_p = optional_from_json(row.at("raw_p"));
      r.adj_p = optional_from_json(row.at("adj_p"));
      r.error_bound = row.at("error_bound").get<double>();
      if (row.at("reject").is_null())
        r.reject = std::nullopt;
      else
        r.reject = row.at("reject").get<bool>();
      rep.rows.push_back(std::move(r));
    }
    return rep;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("report JSON: ") + e.what());
  }
}

}  // namespace mctrend
