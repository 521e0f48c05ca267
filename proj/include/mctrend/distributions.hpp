#pragma once

#include "mctrend/types.hpp"

namespace mctrend {

/// Standard normal density.
double normal_pdf(double x);

/// Standard normal CDF, accurate to machine precision (via erfc).
double normal_cdf(double x);

/// Standard normal quantile (Wichura's AS 241, PPND16 precision).
/// Throws std::domain_error unless 0 < p < 1.
double normal_quantile(double p);

/// Student-t density with `df` degrees of freedom (df > 0, real).
double t_pdf(double x, double df);

/// Student-t CDF.  Absolute accuracy <= 1e-10 over the whole real line.
/// `df` may be any positive real (or +inf, giving the normal CDF).
/// Throws std::domain_error for df <= 0.
double t_cdf(double x, double df);

/// Student-t quantile; satisfies |t_cdf(t_quantile(p, df), df) - p| <= 1e-8.
/// Throws std::domain_error for df <= 0 or p outside (0, 1).
double t_quantile(double p, double df);

/// Regularized incomplete beta function I_x(a, b) (continued fraction).
double incomplete_beta(double a, double b, double x);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

/// Inverse of gamma_p in x: returns x with gamma_p(a, x) = p.
double gamma_p_inverse(double a, double p);

/// CDF of the noncentral t distribution with `df` degrees of freedom and
/// noncentrality `ncp` (Lenth's algorithm, AS 243).  Used as the analytic
/// power oracle for the simulation calibration.
double noncentral_t_cdf(double x, double df, double ncp);

}  // namespace mctrend
