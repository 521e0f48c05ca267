#include "mctrend/mct.hpp"

#include "mctrend/distributions.hpp"

#include <algorithm>
#include <cmath>

namespace mctrend {

Vector contrast_statistics(const ModelFit& fit, const ContrastMatrix& cm) {
  const Design d = fit.design();
  if (cm.rows.cols() != d.groups())
    throw std::domain_error("contrast_statistics: contrast/design size mismatch");
  const Vector m = fit.means();
  const Vector inv_n = d.n.cast<double>().cwiseInverse();
  const double s = fit.s();

  Vector t(cm.q());
  for (int q = 0; q < cm.q(); ++q) {
    const double num = cm.rows.row(q).dot(m);
    const double den2 = cm.rows.row(q).array().square().matrix().dot(inv_n);
    if (!(den2 > 0.0))
      throw std::domain_error("contrast_statistics: zero contrast row");
    t(q) = num / (s * std::sqrt(den2));
  }
  return t;
}

MaxTReport max_t_test(const ModelFit& fit, const ContrastMatrix& cm,
                      Direction direction, std::uint64_t seed,
                      const MvtOptions& opt) {
  Vector t = contrast_statistics(fit, cm);
  if (direction == Direction::lesser) t = -t;
  const CorrelationMatrix corr = contrast_correlation(cm, fit.design());
  const int q = cm.q();
  const double df = fit.df;

  MaxTReport report;
  report.df = fit.df;
  report.rows.reserve(q);
  for (int i = 0; i < q; ++i) {
    ContrastTestResult row;
    row.label = cm.labels.at(i);
    row.statistic = t(i);
    row.raw_p = std::min(1.0, std::max(0.0, 1.0 - t_cdf(t(i), df)));
    if (q == 1) {
      row.adj_p = row.raw_p;  // single contrast: no multiplicity
      row.error_bound = 0.0;
    } else {
      const Vector upper = Vector::Constant(q, t(i));
      const MvtProbResult pr =
          mvt_cdf(upper, corr, df, derive_seed(seed, static_cast<std::uint64_t>(i)), opt);
      // A result that missed the tolerance still carries an honest error
      // bound and stays usable; only give up when the bound is so wide that
      // decisions at conventional levels would be meaningless.
      if (pr.error_bound > 1e-3)
        throw NumericError(
            "max_t_test: QMC error bound exceeds usable accuracy");
      row.adj_p = std::min(1.0, std::max(0.0, 1.0 - pr.value));
      row.error_bound = pr.error_bound;
    }
    report.rows.push_back(std::move(row));
  }
  report.global_p = 1.0;
  for (const auto& row : report.rows)
    report.global_p = std::min(report.global_p, row.adj_p);
  return report;
}

MaxTReport dunnett_test(const ModelFit& fit, Direction direction,
                        std::uint64_t seed, const MvtOptions& opt) {
  return max_t_test(fit, dunnett_contrasts(fit.design()), direction, seed, opt);
}

MaxTReport williams_test(const ModelFit& fit, Direction direction,
                         std::uint64_t seed, const MvtOptions& opt) {
  return max_t_test(fit, williams_contrasts(fit.design()), direction, seed, opt);
}

}  // namespace mctrend
