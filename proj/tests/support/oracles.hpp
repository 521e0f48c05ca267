#pragma once

#include "mctrend/types.hpp"

#include <cstdint>
#include <functional>

// Slow, independent reference implementations used only by tests.  They
// deliberately avoid the library's numerical kernels: probabilities come
// from libm (erfc/lgamma), quadrature is adaptive Simpson, and sampling
// uses the standard <random> distributions.
namespace oracles {

/// Adaptive Simpson integration of f over [a, b] to absolute tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol);

/// Standard normal CDF via erfc.
double phi(double x);

/// P(Z_i <= upper_i, i=1..q) for the one-factor normal model
/// Z_i = gamma_i * X + sqrt(1 - gamma_i^2) * E_i with X, E_i iid N(0,1);
/// computed by quadrature over X.  Covers every Dunnett correlation
/// (gamma_i = sqrt(n_i / (n_0 + n_i))) and any 2x2 correlation.
double mvn_onefactor(const mctrend::Vector& upper,
                     const mctrend::Vector& gamma, double tol = 1e-11);

/// One-factor multivariate t probability: mixes mvn_onefactor over the
/// chi_df / sqrt(df) scale by an outer quadrature.
double mvt_onefactor(const mctrend::Vector& upper,
                     const mctrend::Vector& gamma, double df,
                     double tol = 1e-10);

/// Plain Monte Carlo estimate of P(T_i <= upper_i) for t with correlation
/// matrix `corr` (df = inf gives the normal), using std::mt19937_64 and
/// std <random> distributions.  `se_out` receives a binomial standard
/// error estimate.
double mvt_mc(const mctrend::Vector& upper, const mctrend::Matrix& corr,
              double df, long long n_draws, std::uint64_t seed,
              double* se_out = nullptr);

/// Random full-rank correlation matrix (normalized Gram matrix of a
/// q x (q + 3) standard normal matrix).
mctrend::Matrix random_correlation(int q, std::uint64_t seed);

}  // namespace oracles
