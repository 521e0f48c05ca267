// Regression coverage for the bundled liver-toxicity example dataset: the
// full analysis pipeline (CSV -> fit -> all four methods) against frozen
// results, plus the printed-table windows those results are quoted to.
#include "mctrend/io.hpp"
#include "mctrend/report.hpp"

#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

using namespace mctrend;

namespace {

const ComparisonResult& find_row(const AnalysisReport& rep,
                                 const std::string& method,
                                 const std::string& comparison) {
  for (const auto& r : rep.rows)
    if (r.method == method && r.comparison == comparison) return r;
  REQUIRE_MESSAGE(false, "row not found: ", method, " ", comparison);
  static ComparisonResult dummy;
  return dummy;
}

// Half a unit in the second significant digit — the implied precision of a
// value quoted to two significant figures.
double half_unit(double x) {
  return 0.5 * std::pow(10.0, std::floor(std::log10(std::fabs(x))) - 1);
}

}  // namespace

TEST_CASE("liver dataset: one-way fit") {
  const Dataset data =
      parse_csv(std::string(MCTREND_TEST_DATA_DIR) + "/liver.csv");
  REQUIRE(data.labels ==
          std::vector<std::string>{"1", "2", "3", "4", "5"});
  REQUIRE(data.size() == 26);

  const ModelFit fit = fit_oneway(data);
  REQUIRE(fit.k() == 4);
  CHECK(fit.df == 21);
  CHECK(fit.groups[0].n == 5);
  CHECK(fit.groups[1].n == 4);
  CHECK(fit.groups[2].n == 4);
  CHECK(fit.groups[3].n == 9);
  CHECK(fit.groups[4].n == 4);
  CHECK(fit.groups[0].mean == doctest::Approx(3.2).epsilon(1e-9));
  CHECK(fit.s() == doctest::Approx(0.15).epsilon(1e-5));
}

TEST_CASE("liver dataset: full analysis regression") {
  const Dataset data =
      parse_csv(std::string(MCTREND_TEST_DATA_DIR) + "/liver.csv");
  AnalysisRequest req;  // defaults: all methods, greater, alpha .05, seed 42
  const AnalysisReport rep = run_analysis(data, req);

  CHECK(rep.df == 21);
  CHECK(rep.group_sizes == std::vector<int>{5, 4, 4, 9, 4});
  CHECK(rep.rows.size() == 16);  // 4 comparisons x 4 methods

  // Shared t statistics and raw one-sided p-values (analytic, so tight).
  struct Raw {
    const char* comparison;
    double statistic;
    double raw_p;
  };
  const std::vector<Raw> raws{
      {"5-1", 6.830699450894507, 4.700009326175092e-07},
      {"4-1", 3.885189568636075, 4.2729836890564865e-04},
      {"3-1", 0.674037967997863, 0.253819728671},
      {"2-1", 0.23723194801344816, 0.4073879372886049}};
  for (const auto& w : raws) {
    for (const char* method : {"dunnett", "cp"}) {
      const auto& row = find_row(rep, method, w.comparison);
      REQUIRE(row.statistic.has_value());
      REQUIRE(row.raw_p.has_value());
      CHECK(*row.statistic == doctest::Approx(w.statistic).epsilon(1e-9));
      CHECK(*row.raw_p == doctest::Approx(w.raw_p).epsilon(1e-9));
    }
  }

  // Adjusted p-values.  The QMC-based ones are deterministic for the fixed
  // seed; 1e-6 relative slack absorbs floating-point drift across builds
  // while still catching any change to the integration path.
  struct Adj {
    const char* method;
    const char* comparison;
    double adj_p;
  };
  const std::vector<Adj> adjs{
      {"dunnett", "5-1", 1.8738669587126111e-06},
      {"dunnett", "4-1", 1.5386580620002643e-03},
      {"dunnett", "3-1", 0.5284114431774523},
      {"dunnett", "2-1", 0.7179907905253732},
      {"williams", "5-1", 7.382282141144003e-07},
      {"cw", "5-1", 7.382282141144003e-07},
      {"cw", "4-1", 7.156209724331619e-04},
      {"cw", "3-1", 0.32397227166293985},
      {"cw", "2-1", 0.4073879372886049},
      {"cp", "5-1", 4.700009326175092e-07},
      {"cp", "4-1", 4.2729836890564865e-04},
      {"cp", "3-1", 0.253819728671},
      {"cp", "2-1", 0.4073879372886049}};
  for (const auto& w : adjs) {
    const auto& row = find_row(rep, w.method, w.comparison);
    REQUIRE(row.adj_p.has_value());
    CHECK(*row.adj_p == doctest::Approx(w.adj_p).epsilon(1e-6));
  }

  // The closed Williams chain for the top dose is the Williams test itself.
  CHECK(*find_row(rep, "cw", "5-1").adj_p ==
        *find_row(rep, "williams", "5-1").adj_p);
  // Closed pairwise elementary p-values coincide with the raw ones here
  // (the subset p-values happen to be increasing along every chain).
  for (const auto& w : raws)
    CHECK(*find_row(rep, "cp", w.comparison).adj_p ==
          doctest::Approx(w.raw_p).epsilon(1e-12));

  // Williams reports a single elementary p-value (top dose); other cells NA.
  for (const char* c : {"4-1", "3-1", "2-1"})
    CHECK_FALSE(find_row(rep, "williams", c).adj_p.has_value());

  // Decisions at alpha = 0.05, one-sided greater.
  for (const char* m : {"dunnett", "williams", "cw", "cp"})
    CHECK(find_row(rep, m, "5-1").reject == true);
  for (const char* m : {"dunnett", "cw", "cp"})
    CHECK(find_row(rep, m, "2-1").reject == false);
  CHECK(find_row(rep, "dunnett", "4-1").reject == true);
  CHECK(find_row(rep, "cw", "4-1").reject == true);

  // The dataset is tuned so every cell reproduces its two-significant-figure
  // quoted value within print precision (or the 3x QMC error bound where
  // that is wider).
  const std::vector<Adj> quoted{
      {"dunnett", "5-1", 1.99e-6}, {"dunnett", "4-1", 1.51e-3},
      {"dunnett", "3-1", 0.531},   {"dunnett", "2-1", 0.719},
      {"williams", "5-1", 8.8e-7}, {"cw", "5-1", 8.8e-7},
      {"cw", "4-1", 7.1e-4},       {"cw", "3-1", 0.322},
      {"cw", "2-1", 0.406},        {"cp", "5-1", 4.7e-7},
      {"cp", "4-1", 4.3e-4},       {"cp", "3-1", 0.253},
      {"cp", "2-1", 0.406}};
  for (const auto& w : quoted) {
    const auto& row = find_row(rep, w.method, w.comparison);
    const double tol = std::max(half_unit(w.adj_p), 3.0 * row.error_bound);
    CHECK_MESSAGE(std::fabs(*row.adj_p - w.adj_p) <= tol, w.method, " ",
                  w.comparison, ": ", *row.adj_p, " vs quoted ", w.adj_p);
  }
}
