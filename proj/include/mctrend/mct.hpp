#pragma once

#include "mctrend/contrasts.hpp"
#include "mctrend/model.hpp"
#include "mctrend/mvt.hpp"
#include "mctrend/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mctrend {

/// Per-contrast outcome of a multiple contrast test.
struct ContrastTestResult {
  std::string label;
  double statistic = 0.0;
  double raw_p = 1.0;        ///< unadjusted one-sided p-value
  double adj_p = 1.0;        ///< single-step (max-T) adjusted p-value
  double error_bound = 0.0;  ///< QMC error bound of adj_p (0 for exact paths)
};

/// Result of a max-T multiple contrast test.
struct MaxTReport {
  std::vector<ContrastTestResult> rows;
  double global_p = 1.0;  ///< min of the adjusted p-values
  int df = 0;

  const ContrastTestResult& row(int i) const { return rows.at(i); }
};

/// t statistics of the contrast rows under the pooled one-way fit:
///   t_q = sum_i c_q[i] * mean_i / (s * sqrt(sum_i c_q[i]^2 / n_i)).
Vector contrast_statistics(const ModelFit& fit, const ContrastMatrix& cm);

/// Max-T multiple contrast test.  Each row's adjusted p-value is
///   1 - P(T_1 <= t_row, ..., T_q <= t_row)
/// under the central multivariate t implied by the contrast correlation and
/// the pooled df; raw p-values are one-sided Student-t tails.  `direction`
/// flips the statistics for "lesser" alternatives.  With a single contrast
/// row the adjusted p-value equals the raw one exactly.  Rows keep the QMC
/// error bound actually achieved; NumericError is thrown only when a bound
/// exceeds 1e-3 (integration failed to reach usable accuracy).
MaxTReport max_t_test(const ModelFit& fit, const ContrastMatrix& cm,
                      Direction direction, std::uint64_t seed,
                      const MvtOptions& opt = {});

/// Dunnett test: max-T over all pairwise dose-versus-control contrasts.
MaxTReport dunnett_test(const ModelFit& fit, Direction direction,
                        std::uint64_t seed, const MvtOptions& opt = {});

/// Williams-type multiple contrast test.  `rows[0]` is the top-dose
/// pairwise contrast (the only elementary dose-versus-control claim the
/// procedure reports); `global_p` is the trend test's p-value.
MaxTReport williams_test(const ModelFit& fit, Direction direction,
                         std::uint64_t seed, const MvtOptions& opt = {});

}  // namespace mctrend
