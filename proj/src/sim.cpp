#include "mctrend/sim.hpp"

#include "mctrend/ctp.hpp"
#include "mctrend/distributions.hpp"
#include "mctrend/mct.hpp"
#include "mctrend/mvt.hpp"
#include "mctrend/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mctrend {

namespace {

const std::vector<std::string> kMethods{"dunnett", "williams", "cw", "cp"};

ShapeSpec make_shape(const std::string& name, const std::string& family,
                     std::initializer_list<double> mult, double delta) {
  ShapeSpec s;
  s.name = name;
  s.family = family;
  s.mu.resize(static_cast<Eigen::Index>(mult.size()));
  Eigen::Index i = 0;
  for (double m : mult) s.mu(i++) = m * delta;
  return s;
}

}  // namespace

std::vector<ShapeSpec> study_shapes(double delta) {
  if (!(delta >= 0.0)) throw std::domain_error("study_shapes: delta must be >= 0");
  std::vector<ShapeSpec> shapes;
  shapes.push_back(make_shape("h0", "null", {0, 0, 0, 0}, delta));
  shapes.push_back(make_shape("m_0_1_3_3", "monotone", {0, 1, 3, 3}, delta));
  shapes.push_back(make_shape("m_0_2_3_3", "monotone", {0, 2, 3, 3}, delta));
  shapes.push_back(make_shape("m_0_0_0_3", "monotone", {0, 0, 0, 3}, delta));
  shapes.push_back(make_shape("m_0_3_3_3", "monotone", {0, 3, 3, 3}, delta));
  shapes.push_back(make_shape("m_0_0_3_3", "monotone", {0, 0, 3, 3}, delta));
  shapes.push_back(make_shape("m_0_1_2_3", "monotone", {0, 1, 2, 3}, delta));
  shapes.push_back(make_shape("d_0_0_3_2", "downturn", {0, 0, 3, 2}, delta));
  shapes.push_back(make_shape("d_0_0_3_1", "downturn", {0, 0, 3, 1}, delta));
  return shapes;
}

void SimConfig::validate() const {
  if (k < 1) throw std::domain_error("sim config: k must be >= 1");
  if (n_per_group < 2) throw std::domain_error("sim config: n_per_group must be >= 2");
  if (!(sigma > 0.0)) throw std::domain_error("sim config: sigma must be positive");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("sim config: alpha must lie in (0, 1)");
  if (replications < 1) throw std::domain_error("sim config: replications must be >= 1");
  if (!(target_power > 0.0 && target_power < 1.0))
    throw std::domain_error("sim config: target_power must lie in (0, 1)");
  if (methods.empty()) throw std::domain_error("sim config: no methods selected");
  for (const auto& m : methods)
    if (std::find(kMethods.begin(), kMethods.end(), m) == kMethods.end())
      throw DataError("sim config: unknown method '" + m + "'");
}

Dataset generate_dataset(const ShapeSpec& shape, const SimConfig& cfg,
                         int rep_index) {
  if (rep_index < 0) throw std::domain_error("generate_dataset: rep_index must be >= 0");
  const int groups = static_cast<int>(shape.mu.size());
  Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(rep_index)));
  Dataset data;
  data.group.reserve(static_cast<std::size_t>(groups) * cfg.n_per_group);
  data.response.reserve(data.group.capacity());
  for (int g = 0; g < groups; ++g) {
    for (int r = 0; r < cfg.n_per_group; ++r) {
      data.group.push_back(g);
      data.response.push_back(shape.mu(g) + cfg.sigma * rng.normal());
    }
  }
  return data;
}

namespace {

struct CriticalValues {
  double t = 0.0;                 // univariate one-sided t quantile
  double dunnett = 0.0;           // equicoordinate Dunnett quantile
  double williams = 0.0;          // equicoordinate Williams quantile
  std::vector<double> cw;         // per-subset Williams quantiles, index j-1
};

CriticalValues critical_values(const SimConfig& cfg, const Design& d, int df) {
  CriticalValues cv;
  const double level = 1.0 - cfg.alpha;
  cv.t = t_quantile(level, df);
  cv.dunnett = mvt_quantile_1sided(
      level, contrast_correlation(dunnett_contrasts(d), d), df,
      derive_seed(cfg.seed, 0xD0u));
  cv.cw.resize(d.k());
  for (int j = 1; j <= d.k(); ++j) {
    if (j == 1) {
      cv.cw[0] = cv.t;
      continue;
    }
    cv.cw[j - 1] = mvt_quantile_1sided(
        level, contrast_correlation(sub_williams_contrasts(d, j), d), df,
        derive_seed(cfg.seed, 0xC0u + static_cast<std::uint64_t>(j)));
  }
  cv.williams = cv.cw[d.k() - 1];
  return cv;
}

}  // namespace

double calibrate_delta(const SimConfig& cfg, double target_power) {
  cfg.validate();
  if (!(target_power > 0.0 && target_power < 1.0))
    throw std::domain_error("calibrate_delta: target power must lie in (0, 1)");

  const int k = cfg.k;
  Design d;
  d.n = IntVector::Constant(k + 1, cfg.n_per_group);
  const int df = d.total() - (k + 1);
  const double c_d = mvt_quantile_1sided(
      1.0 - cfg.alpha, contrast_correlation(dunnett_contrasts(d), d), df,
      derive_seed(cfg.seed, 0xD0u));
  // Per-pair power of the top-dose Dunnett comparison at mean difference
  // 3*delta: its statistic is marginally noncentral t.
  const double se_factor = std::sqrt(2.0 / cfg.n_per_group);
  const auto power = [&](double delta) {
    const double ncp = 3.0 * delta / (cfg.sigma * se_factor);
    return 1.0 - noncentral_t_cdf(c_d, df, ncp);
  };

  // At delta = 0 the comparison still rejects with the marginal probability of
  // one statistic exceeding the joint critical value; targets at or below that
  // floor cannot be reached by any nonnegative effect size.
  const double floor_power = power(0.0);
  if (!(target_power > floor_power))
    throw NumericError("calibrate_delta: target power is not bracketed (at or "
                       "below the power at delta = 0)");

  double hi = 1.0;
  int expansions = 0;
  while (power(hi) < target_power) {
    hi *= 2.0;
    if (++expansions > 60)
      throw NumericError("calibrate_delta: target power not bracketed");
  }
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double p = power(mid);
    if (std::fabs(p - target_power) <= 1e-10 || hi - lo < 1e-13 * std::max(1.0, hi))
      return mid;
    if (p < target_power)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

PowerTable run_power_study(const SimConfig& cfg) {
  cfg.validate();
  if (cfg.k != 3)
    throw std::domain_error("run_power_study: the standard shape set requires k = 3");
  if (!(cfg.delta > 0.0))
    throw std::domain_error("run_power_study: delta must be positive (calibrate first)");

  const int k = cfg.k;
  Design d;
  d.n = IntVector::Constant(k + 1, cfg.n_per_group);
  const int df = d.total() - (k + 1);

  const ContrastMatrix cm_dunnett = dunnett_contrasts(d);
  const ContrastMatrix cm_williams = williams_contrasts(d);
  std::vector<ContrastMatrix> cm_sub;  // sub-Williams families for j = 2..k-1
  for (int j = 2; j < k; ++j) cm_sub.push_back(sub_williams_contrasts(d, j));

  const CriticalValues cv = critical_values(cfg, d, df);
  const std::vector<ShapeSpec> shapes = study_shapes(cfg.delta);

  // counts[shape][method] -> per-comparison counts plus "any" at index k.
  std::map<std::string, std::map<std::string, std::vector<long long>>> counts;
  for (const auto& s : shapes)
    for (const auto& m : kMethods)
      counts[s.name][m].assign(k + 1, 0);

  std::vector<char> cw_subset(k + 1, 0);
  for (const auto& shape : shapes) {
    auto& shape_counts = counts[shape.name];
    for (int rep = 0; rep < cfg.replications; ++rep) {
      const Dataset data = generate_dataset(shape, cfg, rep);
      const ModelFit fit = fit_oneway(data);
      const Vector t_pair = contrast_statistics(fit, cm_dunnett);
      const Vector t_will = contrast_statistics(fit, cm_williams);

      // Dunnett: per-dose single-step decisions.
      {
        auto& c = shape_counts["dunnett"];
        bool any = false;
        for (int i = 1; i <= k; ++i) {
          if (t_pair(i - 1) >= cv.dunnett) {
            c[i - 1] += 1;
            any = true;
          }
        }
        if (any) c[k] += 1;
      }
      // Williams: the top-dose row is the procedure's elementary claim;
      // "any" is the global trend test.
      {
        auto& c = shape_counts["williams"];
        if (t_will(0) >= cv.williams) c[k - 1] += 1;
        if (t_will.maxCoeff() >= cv.williams) c[k] += 1;
      }
      // Closed procedures: subset j rejects when its max statistic clears
      // the subset critical value; dose i needs all subsets j >= i.
      {
        for (int j = 1; j <= k; ++j) {
          double max_stat;
          if (j == 1)
            max_stat = t_pair(0);
          else if (j == k)
            max_stat = t_will.maxCoeff();
          else
            max_stat = contrast_statistics(fit, cm_sub[j - 2]).maxCoeff();
          cw_subset[j] = max_stat >= cv.cw[j - 1] ? 1 : 0;
        }
        auto& c = shape_counts["cw"];
        bool all_above = true;
        for (int i = k; i >= 1; --i) {
          all_above = all_above && cw_subset[i];
          if (all_above) c[i - 1] += 1;
        }
        if (cw_subset[k]) c[k] += 1;
      }
      {
        auto& c = shape_counts["cp"];
        bool all_above = true;
        for (int i = k; i >= 1; --i) {
          all_above = all_above && (t_pair(i - 1) >= cv.t);
          if (all_above) c[i - 1] += 1;
        }
        if (t_pair(k - 1) >= cv.t) c[k] += 1;
      }
    }
  }

  PowerTable table;
  table.config = cfg;
  const double reps = cfg.replications;
  for (const auto& shape : shapes) {
    for (const auto& method : cfg.methods) {
      const auto& c = counts[shape.name][method];
      for (int i = 1; i <= k + 1; ++i) {
        // The Williams procedure makes only the top-dose elementary claim.
        if (method == "williams" && i < k) continue;
        PowerEntry e;
        e.shape = shape.name;
        e.method = method;
        e.comparison = (i == k + 1) ? "any" : std::to_string(i);
        e.estimate = static_cast<double>(c[i - 1]) / reps;
        e.mc_se = std::sqrt(e.estimate * (1.0 - e.estimate) / reps);
        table.entries.push_back(std::move(e));
      }
    }
  }
  return table;
}

}  // namespace mctrend
