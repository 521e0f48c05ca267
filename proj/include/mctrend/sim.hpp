#pragma once

#include "mctrend/model.hpp"
#include "mctrend/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mctrend {

/// A mean configuration for the simulation study.  `family` is one of
/// "null", "monotone", "downturn"; `mu` holds the k+1 group means.
struct ShapeSpec {
  std::string name;
  std::string family;
  Vector mu;
};

/// The nine standard shapes for k = 3 doses, parameterized by the effect
/// unit `delta`: the complete null, six monotone configurations and two
/// downturn configurations with a high plateau followed by a drop.
std::vector<ShapeSpec> study_shapes(double delta);

/// Configuration of a power/size study.
struct SimConfig {
  int k = 3;                 ///< number of dose groups (shapes require 3)
  int n_per_group = 10;
  double sigma = 1.0;
  double alpha = 0.05;       ///< one-sided level
  double delta = 0.0;        ///< effect unit; <= 0 means "calibrate first"
  double target_power = 0.81;///< calibration target for the auto delta
  int replications = 10000;
  std::uint64_t seed = 42;
  std::vector<std::string> methods{"dunnett", "williams", "cw", "cp"};

  void validate() const;
};

/// One normal dataset for a shape: group i has n_per_group observations
/// N(mu_i, sigma^2).  Deterministic per (cfg.seed, rep_index); the noise
/// stream does not depend on the shape, so shapes share common random
/// numbers across replications.
Dataset generate_dataset(const ShapeSpec& shape, const SimConfig& cfg,
                         int rep_index);

/// Smallest delta for which the Dunnett test's per-pair power for the top
/// dose under the shape (0, 3d, 3d, 3d) reaches `target_power`, found by
/// bisection with the analytic noncentral-t power as the inner oracle.
/// Throws std::domain_error when `target_power` is outside (0, 1) and
/// NumericError when it is not bracketed: at delta = 0 the comparison already
/// rejects with the marginal probability that one statistic exceeds the joint
/// critical value, so targets at or below that floor are unreachable.
double calibrate_delta(const SimConfig& cfg, double target_power);

/// One power/size estimate: fraction of replications in which `method`
/// rejected `comparison` ("1".."k" for dose-versus-control claims, "any"
/// for at least one claim — the familywise error rate under the null shape).
struct PowerEntry {
  std::string shape;
  std::string method;
  std::string comparison;
  double estimate = 0.0;
  double mc_se = 0.0;  ///< sqrt(p(1-p)/replications)
};

struct PowerTable {
  SimConfig config;
  std::vector<PowerEntry> entries;
};

/// Monte Carlo power study over the nine standard shapes.  Decisions use
/// each method's critical value at level alpha (computed once per method
/// from the equicoordinate multivariate-t quantile), which is equivalent to
/// thresholding the adjusted p-values at alpha.  Requires cfg.delta > 0.
PowerTable run_power_study(const SimConfig& cfg);

}  // namespace mctrend
