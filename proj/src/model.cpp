#include "mctrend/model.hpp"

#include <cmath>

namespace mctrend {

std::string to_string(Direction d) {
  return d == Direction::greater ? "greater" : "lesser";
}

Direction direction_from_string(const std::string& s) {
  if (s == "greater") return Direction::greater;
  if (s == "lesser") return Direction::lesser;
  throw DataError("unknown direction '" + s + "' (expected greater|lesser)");
}

double ModelFit::s() const { return std::sqrt(s2_pooled); }

Design ModelFit::design() const {
  Design d;
  d.n.resize(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i)
    d.n(static_cast<Eigen::Index>(i)) = groups[i].n;
  return d;
}

Vector ModelFit::means() const {
  Vector m(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i)
    m(static_cast<Eigen::Index>(i)) = groups[i].mean;
  return m;
}

ModelFit fit_oneway(const Dataset& data) {
  if (data.group.size() != data.response.size())
    throw DataError("fit_oneway: group/response length mismatch");
  if (data.response.empty()) throw DataError("fit_oneway: empty dataset");

  int k = 0;
  for (int g : data.group) {
    if (g < 0) throw DataError("fit_oneway: negative group index");
    k = std::max(k, g);
  }
  if (k < 1) throw DataError("fit_oneway: need a control and at least one dose group");

  std::vector<GroupSummary> groups(k + 1);
  for (std::size_t r = 0; r < data.size(); ++r) {
    if (!std::isfinite(data.response[r]))
      throw DataError("fit_oneway: non-finite response");
    auto& g = groups[data.group[r]];
    g.n += 1;
    g.mean += data.response[r];
  }
  for (int i = 0; i <= k; ++i) {
    if (groups[i].n < 2)
      throw DataError("fit_oneway: group " + std::to_string(i) +
                      " needs at least 2 observations");
    groups[i].mean /= groups[i].n;
  }
  for (std::size_t r = 0; r < data.size(); ++r) {
    const double dev = data.response[r] - groups[data.group[r]].mean;
    groups[data.group[r]].ss_within += dev * dev;
  }

  ModelFit fit;
  fit.groups = std::move(groups);
  const int total = static_cast<int>(data.size());
  fit.df = total - (k + 1);
  double ss = 0.0;
  for (const auto& g : fit.groups) ss += g.ss_within;
  fit.s2_pooled = ss / fit.df;
  if (!(fit.s2_pooled > 0.0))
    throw DataError("fit_oneway: zero within-group variation (degenerate data)");
  return fit;
}

ModelFit fit_oneway(const std::vector<std::pair<int, double>>& observations) {
  Dataset data;
  data.group.reserve(observations.size());
  data.response.reserve(observations.size());
  for (const auto& [g, y] : observations) {
    data.group.push_back(g);
    data.response.push_back(y);
  }
  return fit_oneway(data);
}

}  // namespace mctrend
