#pragma once

#include "mctrend/correlation.hpp"
#include "mctrend/types.hpp"

#include <string>
#include <vector>

namespace mctrend {

/// A one-way layout with a control group (index 0) and k >= 1 increasing
/// dose groups (indices 1..k).  `n(i)` is the sample size of group i.
struct Design {
  IntVector n;  ///< size k+1, each entry >= 2

  int k() const { return static_cast<int>(n.size()) - 1; }
  int groups() const { return static_cast<int>(n.size()); }
  int total() const { return n.sum(); }
  void validate() const;
};

/// A set of contrast rows over the k+1 group means.  Every row sums to
/// zero and has a negative control coefficient, so positive statistics
/// point in the "dose above control" direction.
struct ContrastMatrix {
  Matrix rows;                      ///< q x (k+1)
  std::vector<std::string> labels;  ///< one label per row

  int q() const { return static_cast<int>(rows.rows()); }
};

/// Dunnett many-to-one contrasts: row i compares dose i against control.
ContrastMatrix dunnett_contrasts(const Design& d);

/// Williams-type contrasts: row q compares the sample-size weighted mean of
/// the top q dose groups against control (row 1 is the top dose alone, row
/// k pools all doses).
ContrastMatrix williams_contrasts(const Design& d);

/// Williams-type contrasts restricted to groups 0..j, zero-padded back to
/// all k+1 columns.  `sub_williams_contrasts(d, k)` equals
/// `williams_contrasts(d)`.  Throws std::domain_error unless 1 <= j <= k.
ContrastMatrix sub_williams_contrasts(const Design& d, int j);

/// The single pairwise contrast mu_i - mu_0 (1 <= i <= k).
ContrastMatrix pairwise_contrast(const Design& d, int i);

/// Correlation matrix of the contrast statistics under the one-way model:
/// R[q,r] = sum_i(c_q[i] c_r[i] / n_i) normalized to unit diagonal.
/// Throws std::domain_error if a contrast row is all zero.
CorrelationMatrix contrast_correlation(const ContrastMatrix& cm, const Design& d);

}  // namespace mctrend
