#include "mctrend/correlation.hpp"
#include "mctrend/io.hpp"
#include "mctrend/mvt.hpp"
#include "mctrend/report.hpp"
#include "mctrend/sim.hpp"
#include "mctrend/types.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace mctrend;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream stream(s);
  while (std::getline(stream, item, ',')) {
    // trim
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

double parse_df(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "infinity") return kInf;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw DataError("mvt: cannot parse --df value '" + text + "'");
  }
}

int run_analyze(const std::string& input, const std::string& methods,
                const std::string& direction, double alpha,
                std::uint64_t seed, const std::string& dose_order,
                const std::string& output_format) {
  AnalysisRequest req;
  req.input_path = input;
  req.direction = direction_from_string(direction);
  if (!methods.empty()) req.methods = split_list(methods);
  req.alpha = alpha;
  req.seed = seed;
  req.dose_order = split_list(dose_order);
  req.output_format = output_format;

  const AnalysisReport report = run_analysis(req);
  if (req.output_format == "json")
    std::cout << render_json(report);
  else if (req.output_format == "csv")
    std::cout << render_csv(report);
  else
    std::cout << render_table(report);
  return 0;
}

std::string short_method(const std::string& m) {
  if (m == "dunnett") return "D";
  if (m == "williams") return "W";
  if (m == "cw") return "CW";
  return "CP";
}

void print_power_summary(const PowerTable& table) {
  const SimConfig& cfg = table.config;
  std::printf(
      "Power study: k=%d, n=%d per group, sigma=%g, alpha=%g, delta=%.6f, "
      "replications=%d, seed=%llu\n",
      cfg.k, cfg.n_per_group, cfg.sigma, cfg.alpha, cfg.delta,
      cfg.replications, static_cast<unsigned long long>(cfg.seed));

  // Column order: per method, comparisons as emitted (1..k then "any").
  std::vector<std::string> columns;
  std::vector<std::string> shape_order;
  std::map<std::string, std::map<std::string, double>> by_shape;
  for (const auto& e : table.entries) {
    if (by_shape.find(e.shape) == by_shape.end()) shape_order.push_back(e.shape);
    const std::string col =
        short_method(e.method) + (e.comparison == "any" ? "any" : e.comparison);
    if (std::find(columns.begin(), columns.end(), col) == columns.end())
      columns.push_back(col);
    by_shape[e.shape][col] = e.estimate;
  }

  std::printf("%-12s", "shape");
  for (const auto& c : columns) std::printf(" %6s", c.c_str());
  std::printf("\n");
  for (const auto& shape : shape_order) {
    std::printf("%-12s", shape.c_str());
    const auto& row = by_shape[shape];
    for (const auto& c : columns) {
      const auto it = row.find(c);
      if (it == row.end())
        std::printf(" %6s", "-");
      else
        std::printf(" %6.3f", it->second);
    }
    std::printf("\n");
  }
}

int run_simulate(const std::string& config_path, const std::string& out_dir) {
  SimConfig cfg = parse_sim_config(config_path);
  if (cfg.delta <= 0.0) {
    cfg.delta = calibrate_delta(cfg, cfg.target_power);
    std::printf("Calibrated delta = %.10f (target power %g)\n", cfg.delta,
                cfg.target_power);
  }
  const PowerTable table = run_power_study(cfg);

  std::filesystem::create_directories(out_dir);
  const auto write_file = [&](const std::string& name, const std::string& body) {
    const std::filesystem::path path = std::filesystem::path(out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << body;
  };
  write_file("power_table.csv", power_table_csv(table));
  write_file("power_table.json", power_table_json(table));

  print_power_summary(table);
  std::printf("Wrote %s/power_table.csv and %s/power_table.json\n",
              out_dir.c_str(), out_dir.c_str());
  return 0;
}

int run_mvt(const std::string& upper_text, const std::string& corr_path,
            const std::string& df_text, std::uint64_t seed, double tol) {
  const std::vector<std::string> parts = split_list(upper_text);
  if (parts.empty()) throw DataError("mvt: --upper needs at least one bound");
  Vector upper(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    try {
      std::size_t used = 0;
      upper(static_cast<Eigen::Index>(i)) = std::stod(parts[i], &used);
      if (used != parts[i].size()) throw std::invalid_argument(parts[i]);
    } catch (const std::exception&) {
      throw DataError("mvt: cannot parse upper bound '" + parts[i] + "'");
    }
  }
  const CorrelationMatrix corr = read_correlation_file(corr_path);
  const double df = parse_df(df_text);

  MvtOptions opt;
  opt.tol = tol;
  const MvtProbResult res = mvt_cdf(upper, corr, df, seed, opt);
  std::printf("value %.17g\n", res.value);
  std::printf("error_bound %.6g\n", res.error_bound);
  std::printf("n_samples %lld\n", res.n_samples);
  std::printf("converged %s\n", res.converged ? "true" : "false");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Order-restricted many-to-one comparisons: Dunnett and Williams "
      "multiple contrast tests, closed testing procedures, and a power "
      "simulation harness."};
  app.require_subcommand(1);

  // analyze
  std::string input, methods, direction = "greater", dose_order,
              output_format = "table";
  double alpha = 0.05;
  std::uint64_t seed = 42;
  auto* analyze = app.add_subcommand(
      "analyze", "Run many-to-one tests on a dose,response CSV");
  analyze->add_option("--input", input, "CSV file with header dose,response")
      ->required();
  analyze->add_option("--methods", methods,
                      "Comma list from: dunnett,williams,cw,cp");
  analyze->add_option("--direction", direction, "Alternative direction")
      ->check(CLI::IsMember({"greater", "lesser"}));
  analyze->add_option("--alpha", alpha, "One-sided significance level");
  analyze->add_option("--seed", seed, "QMC seed");
  analyze->add_option("--dose-order", dose_order,
                      "Comma list of dose labels, control first "
                      "(default: lexical order)");
  analyze->add_option("--output-format", output_format, "Output format")
      ->check(CLI::IsMember({"table", "json", "csv"}));

  // simulate
  std::string config_path, out_dir;
  auto* simulate =
      app.add_subcommand("simulate", "Run the power/size simulation study");
  simulate->add_option("--config", config_path, "key = value config file")
      ->required();
  simulate->add_option("--out", out_dir, "Output directory")->required();

  // mvt
  std::string upper_text, corr_path, df_text;
  std::uint64_t mvt_seed = 42;
  double mvt_tol = 1e-5;
  auto* mvt = app.add_subcommand(
      "mvt", "Evaluate the multivariate t CDF (kernel diagnostic)");
  mvt->add_option("--upper", upper_text, "Comma list of upper bounds")
      ->required();
  mvt->add_option("--corr", corr_path, "Correlation matrix file")->required();
  mvt->add_option("--df", df_text, "Degrees of freedom (number or 'inf')")
      ->required();
  mvt->add_option("--seed", mvt_seed, "QMC seed");
  mvt->add_option("--tol", mvt_tol, "Requested absolute error bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (analyze->parsed())
      return run_analyze(input, methods, direction, alpha, seed, dose_order,
                         output_format);
    if (simulate->parsed()) return run_simulate(config_path, out_dir);
    return run_mvt(upper_text, corr_path, df_text, mvt_seed, mvt_tol);
  } catch (const NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
