#pragma once

#include "mctrend/contrasts.hpp"
#include "mctrend/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace mctrend {

/// Observations from a one-way layout.  `group[r]` is the 0-based group
/// index of observation r (0 = control); `labels` optionally carries the
/// original dose labels (size k+1) for reporting.
struct Dataset {
  std::vector<int> group;
  std::vector<double> response;
  std::vector<std::string> labels;

  std::size_t size() const { return response.size(); }
};

struct GroupSummary {
  int n = 0;
  double mean = 0.0;
  double ss_within = 0.0;  ///< sum of squared deviations from the group mean
};

/// Pooled one-way ANOVA fit shared by all tests on a dataset.
struct ModelFit {
  std::vector<GroupSummary> groups;  ///< size k+1, control first
  double s2_pooled = 0.0;            ///< pooled error variance
  int df = 0;                        ///< N - (k+1)

  int k() const { return static_cast<int>(groups.size()) - 1; }
  double s() const;
  Design design() const;
  Vector means() const;
};

/// Fits the one-way model: group means and the pooled error variance with
/// df = N - (k+1).  Requires every group 0..k present with at least two
/// observations (else DataError) and a positive pooled variance (else
/// DataError for the fully degenerate case).
ModelFit fit_oneway(const Dataset& data);

/// Convenience overload for (group_index, response) pairs.
ModelFit fit_oneway(const std::vector<std::pair<int, double>>& observations);

}  // namespace mctrend
