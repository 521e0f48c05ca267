#pragma once

#include "mctrend/distributions.hpp"
#include "mctrend/types.hpp"

#include <random>

namespace mctrend {

/// Seeded uniform/normal generator used for data simulation and for the
/// QMC shift vectors.  Normal variates go through the inverse-CDF so the
/// stream is fully pinned by the seed (no reliance on the standard
/// library's unspecified normal_distribution algorithm).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform draw in the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal draw.
  double normal() { return normal_quantile(uniform()); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace mctrend
