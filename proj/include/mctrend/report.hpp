#pragma once

#include "mctrend/model.hpp"
#include "mctrend/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mctrend {

/// Everything the `analyze` front end needs to produce a report.
struct AnalysisRequest {
  std::string input_path;
  Direction direction = Direction::greater;
  std::vector<std::string> methods{"dunnett", "williams", "cw", "cp"};
  double alpha = 0.05;
  std::uint64_t seed = 42;
  std::vector<std::string> dose_order;  ///< empty = lexical label order
  std::string output_format = "table";  ///< table | json | csv

  void validate() const;  ///< throws DataError on bad fields
};

/// One (comparison, method) cell of the report.  `adj_p` is nullopt where
/// the method defines no elementary p-value for that comparison (printed
/// as NA); `reject` is the decision at the request's alpha.
struct ComparisonResult {
  std::string comparison;  ///< "<dose label>-<control label>"
  std::string method;
  std::optional<double> statistic;
  std::optional<double> raw_p;
  std::optional<double> adj_p;
  double error_bound = 0.0;  ///< QMC bound on adj_p (0 for exact paths)
  std::optional<bool> reject;

  bool operator==(const ComparisonResult&) const = default;
};

struct AnalysisReport {
  Direction direction = Direction::greater;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::vector<std::string> methods;
  std::vector<std::string> group_labels;  ///< control first
  std::vector<int> group_sizes;
  std::vector<double> group_means;
  double pooled_sd = 0.0;
  int df = 0;
  std::vector<ComparisonResult> rows;  ///< comparisons (top dose first) x methods

  bool operator==(const AnalysisReport&) const = default;
};

/// Runs the requested methods on an already-parsed dataset.
AnalysisReport run_analysis(const Dataset& data, const AnalysisRequest& req);

/// Parses req.input_path (honouring req.dose_order) and analyzes it.
AnalysisReport run_analysis(const AnalysisRequest& req);

/// Human-readable fixed-width table (NA for undefined cells).
std::string render_table(const AnalysisReport& report);

/// Machine-readable long-format CSV with full-precision numbers.
std::string render_csv(const AnalysisReport& report);

/// JSON document; parse_report_json(render_json(r)) == r exactly.
std::string render_json(const AnalysisReport& report);
AnalysisReport parse_report_json(const std::string& text);

/// p-value display rule: fixed 4 decimals down to 1e-3, scientific with 3
/// significant digits below that, 2 significant digits below 1e-12.
std::string format_pvalue(double p);

}  // namespace mctrend
