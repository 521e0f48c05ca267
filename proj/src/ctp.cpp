#include "mctrend/ctp.hpp"

#include "mctrend/distributions.hpp"

#include <algorithm>

namespace mctrend {

ClosurePlan build_closure_plan(int k) {
  if (k < 1) throw std::domain_error("build_closure_plan: k must be >= 1");
  ClosurePlan plan;
  plan.k = k;
  plan.chain.resize(k);
  for (int i = 1; i <= k; ++i)
    for (int j = i; j <= k; ++j) plan.chain[i - 1].push_back(j);
  return plan;
}

std::vector<double> elementary_from_subsets(const ClosurePlan& plan,
                                            const std::vector<double>& subset_p) {
  if (static_cast<int>(subset_p.size()) != plan.k)
    throw std::domain_error("elementary_from_subsets: need one p-value per subset");
  std::vector<double> elementary(plan.k);
  // Suffix running maximum: elementary(i) = max_{j >= i} subset_p(j).
  double running = 0.0;
  for (int i = plan.k; i >= 1; --i) {
    running = std::max(running, subset_p[i - 1]);
    elementary[i - 1] = running;
  }
  return elementary;
}

namespace {

CtpReport assemble(CtpMethod method, const ModelFit& fit,
                   std::vector<double> subset_p, std::vector<double> subset_err) {
  const int k = fit.k();
  const ClosurePlan plan = build_closure_plan(k);
  CtpReport report;
  report.method = method;
  report.df = fit.df;
  report.subset_p = std::move(subset_p);
  report.subset_error = std::move(subset_err);
  report.elementary_adj_p = elementary_from_subsets(plan, report.subset_p);
  report.elementary_error.resize(k);
  double running = 0.0;
  for (int i = k; i >= 1; --i) {
    running = std::max(running, report.subset_error[i - 1]);
    report.elementary_error[i - 1] = running;
  }
  return report;
}

}  // namespace

CtpReport ctp_cw(const ModelFit& fit, Direction direction, std::uint64_t seed,
                 const MvtOptions& opt) {
  const int k = fit.k();
  const Design d = fit.design();
  std::vector<double> subset_p(k), subset_err(k);
  for (int j = 1; j <= k; ++j) {
    // The full-family subset (j == k) reuses `seed` itself so its p-value is
    // bit-identical to williams_test(fit, direction, seed).
    const std::uint64_t subset_seed =
        (j == k) ? seed : derive_seed(seed, 0xC10Dull + static_cast<std::uint64_t>(j));
    const MaxTReport rpt =
        max_t_test(fit, sub_williams_contrasts(d, j), direction, subset_seed, opt);
    subset_p[j - 1] = rpt.global_p;
    double err = 0.0;
    for (const auto& row : rpt.rows) err = std::max(err, row.error_bound);
    subset_err[j - 1] = err;
  }
  return assemble(CtpMethod::cw, fit, std::move(subset_p), std::move(subset_err));
}

CtpReport ctp_cp(const ModelFit& fit, Direction direction) {
  const int k = fit.k();
  const Design d = fit.design();
  std::vector<double> subset_p(k), subset_err(k, 0.0);
  for (int j = 1; j <= k; ++j) {
    Vector t = contrast_statistics(fit, pairwise_contrast(d, j));
    double stat = t(0);
    if (direction == Direction::lesser) stat = -stat;
    subset_p[j - 1] = std::min(1.0, std::max(0.0, 1.0 - t_cdf(stat, fit.df)));
  }
  return assemble(CtpMethod::cp, fit, std::move(subset_p), std::move(subset_err));
}

}  // namespace mctrend
