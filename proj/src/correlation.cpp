#include "mctrend/correlation.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace mctrend {

namespace {
constexpr double kSymTol = 1e-10;
constexpr double kPsdTol = 1e-10;
}  // namespace

CorrelationMatrix CorrelationMatrix::from_matrix(Matrix m) {
  if (m.rows() == 0 || m.rows() != m.cols())
    throw std::domain_error("correlation matrix must be square and non-empty");
  const auto q = m.rows();
  for (Eigen::Index i = 0; i < q; ++i) {
    if (!std::isfinite(m(i, i)) || std::fabs(m(i, i) - 1.0) > kSymTol)
      throw std::domain_error("correlation matrix must have a unit diagonal");
    for (Eigen::Index j = i + 1; j < q; ++j) {
      if (!std::isfinite(m(i, j)) || !std::isfinite(m(j, i)))
        throw std::domain_error("correlation matrix entries must be finite");
      if (std::fabs(m(i, j) - m(j, i)) > kSymTol)
        throw std::domain_error("correlation matrix must be symmetric");
      double v = 0.5 * (m(i, j) + m(j, i));
      if (std::fabs(v) > 1.0 + kSymTol)
        throw std::domain_error("correlation entries must lie in [-1, 1]");
      v = std::min(1.0, std::max(-1.0, v));
      m(i, j) = v;
      m(j, i) = v;
    }
    m(i, i) = 1.0;
  }
  if (q > 1) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw NumericError("correlation matrix eigendecomposition failed");
    if (es.eigenvalues().minCoeff() < -kPsdTol)
      throw NumericError("correlation matrix is not positive semidefinite");
  }
  return CorrelationMatrix(std::move(m));
}

CorrelationMatrix CorrelationMatrix::identity(int q) {
  if (q < 1) throw std::domain_error("correlation dimension must be >= 1");
  return CorrelationMatrix(Matrix::Identity(q, q));
}

}  // namespace mctrend
