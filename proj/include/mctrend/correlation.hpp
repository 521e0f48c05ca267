#pragma once

#include "mctrend/types.hpp"

namespace mctrend {

/// A validated correlation matrix: square, symmetric, unit diagonal,
/// entries in [-1, 1] and positive semidefinite (eigenvalues >= -1e-10).
/// Construction normalizes harmless rounding noise (symmetrizes, snaps the
/// diagonal to exactly 1) and throws on genuine violations.
class CorrelationMatrix {
 public:
  /// Validates `m` and returns the wrapped matrix.
  /// Throws std::domain_error for shape/entry violations and
  /// NumericError if `m` is not positive semidefinite.
  static CorrelationMatrix from_matrix(Matrix m);

  /// Identity correlation of dimension `q`.
  static CorrelationMatrix identity(int q);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

 private:
  explicit CorrelationMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

}  // namespace mctrend
