#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace mctrend {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// One-sided test direction: `greater` tests for dose means above the
/// control mean, `lesser` for dose means below it.
enum class Direction { greater, lesser };

std::string to_string(Direction d);
Direction direction_from_string(const std::string& s);

/// Malformed or degenerate input data (bad CSV rows, missing groups,
/// zero within-group variation, invalid configuration keys, ...).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numerical routine could not deliver a reliable result
/// (non-PSD correlation, failed convergence, non-bracketing search, ...).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// SplitMix64 mixing step; used to derive independent substream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministically derives the seed of substream `stream` from a master
/// seed.  Distinct streams give (statistically) independent generators.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream ^ 0x632be59bd9b4e019ULL));
}

}  // namespace mctrend
