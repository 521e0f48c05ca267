#include "mctrend/mvt.hpp"

#include "mctrend/distributions.hpp"
#include "mctrend/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace mctrend {

namespace {

constexpr double kRidge = 1e-12;
constexpr double kPivotTol = 1e-10;
// Degrees of freedom beyond which the radial (chi) factor is numerically
// indistinguishable from 1 at the supported tolerances.
constexpr double kNormalDfLimit = 1e7;

double clamp01(double p) { return std::min(1.0, std::max(0.0, p)); }

constexpr int kMaxLatticeDim = 256;

// ---- rank-1 Korobov lattice rules -----------------------------------------
//
// The integration rule is a ladder of randomly shifted rank-1 lattices with
// prime sizes that roughly double per rung.  Each rung is evaluated in full
// (prefixes of a lattice rule are not themselves well distributed), so when a
// rung misses the tolerance the next one starts over with twice the points.

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

const std::vector<long long>& rung_sizes() {
  static const std::vector<long long> sizes = [] {
    std::vector<long long> s;
    for (int k = 5; k <= 24; ++k) {
      long long n = (1LL << k) + 1;
      while (!is_prime(n)) ++n;
      s.push_back(n);
    }
    return s;
  }();
  return sizes;
}

// Worst-case-error criterion for the Korobov generator z = (1, a, a^2, ...)
// in a product-weighted space: smaller is better.  omega is the standard
// 2*pi^2*B_2(x) kernel; the weights decay so that the early coordinates
// (which carry most of the variance after the variable reordering) dominate.
double korobov_score(long long n, int dim, long long a) {
  std::vector<long long> z(dim);
  std::vector<double> weight(dim);
  z[0] = 1;
  weight[0] = 1.0;
  for (int c = 1; c < dim; ++c) {
    z[c] = (z[c - 1] * a) % n;
    weight[c] = 0.5 * weight[c - 1];
  }
  constexpr double two_pi_sq = 2.0 * M_PI * M_PI;
  double total = 0.0;
  for (long long j = 0; j < n; ++j) {
    double prod = 1.0;
    for (int c = 0; c < dim; ++c) {
      const double x =
          static_cast<double>((j * z[c]) % n) / static_cast<double>(n);
      prod *= 1.0 + weight[c] * two_pi_sq * (x * (x - 1.0) + 1.0 / 6.0);
    }
    total += prod;
  }
  return total / static_cast<double>(n) - 1.0;
}

// Best multiplier among a fixed deterministic candidate set, cached per
// (size, dimension).  The random-shift error estimate stays honest for any
// multiplier; the search only buys a smaller variance constant.
long long korobov_multiplier(long long n, int dim) {
  if (dim <= 1 || n <= 3) return 1;
  static std::map<std::pair<long long, int>, long long> cache;
  static std::mutex mutex;
  const std::pair<long long, int> key{n, dim};
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::uint64_t state = derive_seed(0x4B4F524Full, static_cast<std::uint64_t>(n));
  long long best_a = 2;
  double best_score = kInf;
  for (int c = 0; c < 32; ++c) {
    state = derive_seed(state, static_cast<std::uint64_t>(c));
    const long long a = 2 + static_cast<long long>(state % (n - 3));
    const double score = korobov_score(n, dim, a);
    if (score < best_score) {
      best_score = score;
      best_a = a;
    }
  }
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(key, best_a);
  return best_a;
}

struct OrderedFactor {
  Matrix L;      // lower-triangular Cholesky factor, variables reordered
  Vector upper;  // bounds in the reordered variable order
  bool ridged = false;
};

// Expected value of a standard normal truncated to (-inf, z].
double truncated_normal_mean(double z) {
  if (std::isinf(z)) return z > 0.0 ? 0.0 : -kInf;
  const double f = normal_cdf(z);
  if (f > 1e-300) return -normal_pdf(z) / f;
  return z - 1.0 / z;  // asymptotic tail mean
}

// Cholesky factorization interleaved with the Genz-Bretz variable ordering:
// at each step the remaining variable with the smallest conditional
// probability (evaluated at the truncated-normal means of the previous
// coordinates) is pivoted next, which tends to minimize the integrand's
// variance.  Retries once with a small diagonal ridge when the matrix is
// numerically rank-deficient.
OrderedFactor ordered_cholesky(const Matrix& corr, const Vector& b) {
  const int q = static_cast<int>(corr.rows());
  for (int attempt = 0; attempt < 2; ++attempt) {
    const bool ridged = attempt == 1;
    Matrix c = corr;
    if (ridged) c.diagonal().array() += kRidge;
    Vector bb = b;
    Matrix L = Matrix::Zero(q, q);
    Vector y = Vector::Zero(q);
    bool failed = false;

    for (int i = 0; i < q && !failed; ++i) {
      // Pick the remaining variable with the smallest conditional probability.
      int best = i;
      double best_p = 2.0;
      for (int j = i; j < q; ++j) {
        double s = 0.0, sq = 0.0;
        for (int m = 0; m < i; ++m) {
          s += L(j, m) * y(m);
          sq += L(j, m) * L(j, m);
        }
        const double v = std::max(c(j, j) - sq, 0.0);
        double z;
        if (std::isinf(bb(j)))
          z = bb(j);
        else
          z = (bb(j) - s) / std::sqrt(std::max(v, 1e-300));
        const double pj = normal_cdf(z);
        if (pj < best_p) {
          best_p = pj;
          best = j;
        }
      }
      if (best != i) {
        c.row(i).swap(c.row(best));
        c.col(i).swap(c.col(best));
        L.row(i).swap(L.row(best));
        std::swap(bb(i), bb(best));
      }

      double d = c(i, i);
      for (int m = 0; m < i; ++m) d -= L(i, m) * L(i, m);
      if (d < kPivotTol) {
        if (!ridged) { failed = true; break; }
        if (d < -kPivotTol)
          throw NumericError("mvt_cdf: correlation matrix is not positive semidefinite");
        d = std::max(d, 1e-14);
      }
      L(i, i) = std::sqrt(d);
      for (int j = i + 1; j < q; ++j) {
        double v = c(j, i);
        for (int m = 0; m < i; ++m) v -= L(j, m) * L(i, m);
        L(j, i) = v / L(i, i);
      }

      double s = 0.0;
      for (int m = 0; m < i; ++m) s += L(i, m) * y(m);
      const double z = std::isinf(bb(i)) ? bb(i) : (bb(i) - s) / L(i, i);
      y(i) = truncated_normal_mean(z);
    }

    if (!failed) return {std::move(L), std::move(bb), ridged};
  }
  throw NumericError("mvt_cdf: factorization failed");  // unreachable
}

// One integrand evaluation: returns the complement 1 - prod_i e_i at the
// lattice point `u`.  Accumulating the complement keeps tail probabilities
// (values very close to 0 or 1) free of cancellation.
double integrand_complement(const double* u, const OrderedFactor& f,
                            double half_df, double inv_df, int q,
                            std::vector<double>& y) {
  double scale = 1.0;
  int idx = 0;
  if (half_df > 0.0) {
    // chi_nu / sqrt(nu) quantile transform for the radial variable
    const double g = gamma_p_inverse(half_df, u[0]);
    scale = std::sqrt(2.0 * g * inv_df);
    idx = 1;
  }

  const double b0 = f.upper(0);
  double z = std::isinf(b0) ? b0 : scale * b0 / f.L(0, 0);
  double e_prev = normal_cdf(z);
  double prod = e_prev;
  for (int i = 1; i < q; ++i) {
    if (prod == 0.0) return 1.0;
    double t = u[idx + i - 1] * e_prev;
    t = std::min(std::max(t, 1e-300), 1.0 - 1e-16);
    y[i - 1] = normal_quantile(t);
    double s = 0.0;
    for (int m = 0; m < i; ++m) s += f.L(i, m) * y[m];
    const double bi = f.upper(i);
    z = std::isinf(bi) ? bi : (scale * bi - s) / f.L(i, i);
    e_prev = normal_cdf(z);
    prod *= e_prev;
  }
  return 1.0 - prod;
}

MvtProbResult qmc_integrate(const OrderedFactor& factor, int q, double df,
                            std::uint64_t seed, const MvtOptions& opt,
                            long long fixed_points_per_shift = 0) {
  const bool finite_df = std::isfinite(df) && df <= kNormalDfLimit;
  const double half_df = finite_df ? 0.5 * df : 0.0;
  const double inv_df = finite_df ? 1.0 / df : 0.0;
  const int du = (q - 1) + (finite_df ? 1 : 0);
  if (du > kMaxLatticeDim)
    throw std::domain_error("mvt_cdf: dimension exceeds the supported limit");

  const int n_shifts = std::max(2, opt.shifts);
  std::vector<Vector> shift(n_shifts);
  for (int s = 0; s < n_shifts; ++s) {
    Rng rng(derive_seed(seed, 0x51ECull + static_cast<std::uint64_t>(s)));
    shift[s].resize(du);
    for (int c = 0; c < du; ++c) shift[s](c) = rng.uniform();
  }

  const std::vector<long long>& rungs = rung_sizes();
  const long long first =
      fixed_points_per_shift > 0 ? fixed_points_per_shift : opt.first_batch;
  std::size_t rung = 0;
  while (rung + 1 < rungs.size() && rungs[rung] < first) ++rung;

  std::vector<double> point(du);
  std::vector<double> x(du);
  std::vector<double> zfrac(du);
  std::vector<double> y(std::max(q - 1, 1));
  std::vector<double> shift_mean(n_shifts);
  double value = 0.0, err = 0.0;
  long long used = 0;
  int attempts = 0;

  while (true) {
    const long long n = rungs[rung];
    const long long a = korobov_multiplier(n, du);
    long long zc = 1;
    for (int c = 0; c < du; ++c) {
      zfrac[c] = static_cast<double>(zc) / static_cast<double>(n);
      zc = (zc * a) % n;
    }

    for (int s = 0; s < n_shifts; ++s) {
      for (int c = 0; c < du; ++c) x[c] = shift[s](c);
      double sum = 0.0;
      for (long long j = 0; j < n; ++j) {
        for (int c = 0; c < du; ++c) {
          point[c] = std::fabs(2.0 * x[c] - 1.0);  // baker transform
          x[c] += zfrac[c];
          if (x[c] >= 1.0) x[c] -= 1.0;
        }
        sum += integrand_complement(point.data(), factor, half_df, inv_df, q, y);
      }
      shift_mean[s] = sum / static_cast<double>(n);
    }
    used += n * n_shifts;
    ++attempts;

    double mean = 0.0;
    for (int s = 0; s < n_shifts; ++s) mean += shift_mean[s];
    mean /= n_shifts;
    double var = 0.0;
    for (int s = 0; s < n_shifts; ++s) {
      const double d = shift_mean[s] - mean;
      var += d * d;
    }
    var /= (n_shifts - 1);
    err = 3.0 * std::sqrt(var / n_shifts);
    value = clamp01(1.0 - mean);

    if (fixed_points_per_shift > 0) break;
    // Tail probabilities are refined beyond the absolute tolerance (best
    // effort within the budget): a p-value of order 1e-6 is only useful when
    // its bound is a few percent of the value, and the integrand variance is
    // small there, so the extra rungs are cheap.
    const double small_side = std::min(value, 1.0 - value);
    const double stop_target =
        std::min(opt.tol, std::max(0.05 * small_side, 5e-8));
    if (err <= stop_target) break;
    // First retry scales the rung by the miss ratio (capped, assuming ~1/N
    // decay); later retries jump straight to the largest rung the remaining
    // budget affords, so slowly converging cases get one full-strength shot
    // instead of exhausting the budget on intermediate rungs.
    std::size_t next = rung;
    if (attempts == 1) {
      const double growth =
          std::min(err / stop_target, 64.0) * static_cast<double>(n);
      next = rung + 1;
      while (next + 1 < rungs.size() &&
             static_cast<double>(rungs[next]) < growth)
        ++next;
      while (next > rung && used + rungs[next] * n_shifts > opt.max_points)
        --next;
    } else {
      for (std::size_t r = rung + 1; r < rungs.size(); ++r)
        if (used + rungs[r] * n_shifts <= opt.max_points) next = r;
    }
    if (next == rung) break;
    rung = next;
  }

  MvtProbResult res;
  res.value = value;
  res.error_bound = err;
  res.n_samples = used;
  res.converged = fixed_points_per_shift > 0 || err <= opt.tol;
  res.ridge_applied = factor.ridged;
  return res;
}

}  // namespace

MvtProbResult mvt_cdf(const Vector& upper, const CorrelationMatrix& R,
                      double df, std::uint64_t seed, const MvtOptions& opt) {
  const int q = R.dim();
  if (static_cast<int>(upper.size()) != q)
    throw std::domain_error("mvt_cdf: bound vector and correlation dimension differ");
  if (!(df > 0.0))
    throw std::domain_error("mvt_cdf: df must be positive (or +inf)");
  if (!(opt.tol > 0.0)) throw std::domain_error("mvt_cdf: tol must be positive");

  for (int i = 0; i < q; ++i) {
    if (std::isnan(upper(i))) throw std::domain_error("mvt_cdf: NaN bound");
    if (upper(i) == -kInf) return {0.0, 0.0, 0, true, false};
  }

  const bool finite_df = std::isfinite(df) && df <= kNormalDfLimit;
  if (q == 1) {
    const double v = finite_df ? t_cdf(upper(0), df) : normal_cdf(upper(0));
    return {clamp01(v), 0.0, 0, true, false};
  }

  OrderedFactor factor = ordered_cholesky(R.matrix(), upper);
  return qmc_integrate(factor, q, df, seed, opt);
}

MvtProbResult mvt_cdf(const Vector& upper, const CorrelationMatrix& R,
                      double df, std::uint64_t seed, double tol) {
  MvtOptions opt;
  opt.tol = tol;
  return mvt_cdf(upper, R, df, seed, opt);
}

double mvt_quantile_1sided(double level, const CorrelationMatrix& R,
                           double df, std::uint64_t seed) {
  if (!(level > 0.0 && level < 1.0))
    throw std::domain_error("mvt_quantile_1sided: level must lie in (0, 1)");
  if (!(df > 0.0))
    throw std::domain_error("mvt_quantile_1sided: df must be positive (or +inf)");
  const int q = R.dim();
  const bool finite_df = std::isfinite(df) && df <= kNormalDfLimit;
  const auto uni_quantile = [&](double p) {
    return finite_df ? t_quantile(p, df) : normal_quantile(p);
  };
  if (q == 1) return uni_quantile(level);

  // Exact analytic bracket: the equicoordinate quantile lies between the
  // univariate quantile and the Bonferroni-corrected one.
  double lo = uni_quantile(level);
  double hi = uni_quantile(1.0 - (1.0 - level) / q);

  // Fixed-budget evaluation keeps the estimated CDF pointwise monotone in c,
  // so plain bisection is safe.
  MvtOptions opt;
  opt.max_points = 1LL << 30;
  const long long budget = 8192;
  const auto eval = [&](double c) {
    Vector b = Vector::Constant(q, c);
    OrderedFactor factor = ordered_cholesky(R.matrix(), b);
    return qmc_integrate(factor, q, df, seed, opt, budget).value;
  };

  // The analytic bracket is exact for the true CDF; widen it slightly in
  // case QMC noise moves the estimated CDF across the level at an endpoint.
  while (eval(lo) > level && lo > -1e10) lo -= 0.5;
  while (eval(hi) < level && hi < 1e10) hi += 0.5;

  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo < 1e-8 * std::max(1.0, std::fabs(mid))) return mid;
    if (eval(mid) < level)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace mctrend
