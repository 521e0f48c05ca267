#pragma once

#include "mctrend/mct.hpp"

#include <cstdint>
#include <vector>

namespace mctrend {

/// Closed testing plan for the ordered family
///   H_j : mu_0 = mu_1 = ... = mu_j        (j = 1..k).
/// Any intersection of these hypotheses equals the one with the largest
/// index, so the closure collapses: the hypotheses involving dose i are
/// exactly H_i, ..., H_k, giving the chain chain(i) = {i, i+1, ..., k}.
struct ClosurePlan {
  int k = 0;
  std::vector<std::vector<int>> chain;  ///< chain[i-1] = {i, ..., k}
};

/// Builds the reduced closure for k >= 1 doses.
ClosurePlan build_closure_plan(int k);

enum class CtpMethod { cw, cp };

/// Result of a closed testing procedure.  Entries are indexed by dose:
/// subset_p[j-1] is the p-value of the test for H_j (groups 0..j), and
/// elementary_adj_p[i-1] = max over chain(i) of subset_p — the closed
/// testing adjusted p-value for the comparison dose i versus control.
struct CtpReport {
  CtpMethod method = CtpMethod::cw;
  std::vector<double> subset_p;
  std::vector<double> subset_error;       ///< QMC error bound per subset test
  std::vector<double> elementary_adj_p;
  std::vector<double> elementary_error;   ///< max subset error over the chain
  int df = 0;
};

/// Running-maximum reduction of subset p-values along the chain
/// (exposed separately so the plan logic is testable in isolation).
std::vector<double> elementary_from_subsets(const ClosurePlan& plan,
                                            const std::vector<double>& subset_p);

/// Closed Williams procedure: H_j is tested with the Williams-type multiple
/// contrast test restricted to groups 0..j, reusing the full-model pooled
/// variance and df for every subset.
CtpReport ctp_cw(const ModelFit& fit, Direction direction, std::uint64_t seed,
                 const MvtOptions& opt = {});

/// Closed pairwise procedure: H_j is tested with the raw one-sided pairwise
/// t test of dose j against control (again with the full-model fit).
CtpReport ctp_cp(const ModelFit& fit, Direction direction);

}  // namespace mctrend
