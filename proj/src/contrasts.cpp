#include "mctrend/contrasts.hpp"

#include <cmath>

namespace mctrend {

void Design::validate() const {
  if (n.size() < 2)
    throw std::domain_error("design needs a control and at least one dose group");
  for (Eigen::Index i = 0; i < n.size(); ++i)
    if (n(i) < 2)
      throw std::domain_error("every group needs at least 2 observations");
}

ContrastMatrix dunnett_contrasts(const Design& d) {
  d.validate();
  const int k = d.k();
  ContrastMatrix cm;
  cm.rows = Matrix::Zero(k, k + 1);
  cm.labels.reserve(k);
  for (int i = 1; i <= k; ++i) {
    cm.rows(i - 1, 0) = -1.0;
    cm.rows(i - 1, i) = 1.0;
    cm.labels.push_back("D" + std::to_string(i) + "-C");
  }
  return cm;
}

ContrastMatrix williams_contrasts(const Design& d) {
  d.validate();
  return sub_williams_contrasts(d, d.k());
}

ContrastMatrix sub_williams_contrasts(const Design& d, int j) {
  d.validate();
  const int k = d.k();
  if (j < 1 || j > k)
    throw std::domain_error("sub_williams_contrasts: subset index out of range");
  ContrastMatrix cm;
  cm.rows = Matrix::Zero(j, k + 1);
  cm.labels.reserve(j);
  // Row q averages the highest q of the doses 1..j (weighted by sample
  // size) against control; doses above j get zero weight.
  for (int q = 1; q <= j; ++q) {
    double total = 0.0;
    for (int i = j - q + 1; i <= j; ++i) total += d.n(i);
    cm.rows(q - 1, 0) = -1.0;
    for (int i = j - q + 1; i <= j; ++i)
      cm.rows(q - 1, i) = static_cast<double>(d.n(i)) / total;
    if (q == 1)
      cm.labels.push_back("D" + std::to_string(j) + "-C");
    else
      cm.labels.push_back("mean(D" + std::to_string(j - q + 1) + "..D" +
                          std::to_string(j) + ")-C");
  }
  return cm;
}

ContrastMatrix pairwise_contrast(const Design& d, int i) {
  d.validate();
  if (i < 1 || i > d.k())
    throw std::domain_error("pairwise_contrast: dose index out of range");
  ContrastMatrix cm;
  cm.rows = Matrix::Zero(1, d.groups());
  cm.rows(0, 0) = -1.0;
  cm.rows(0, i) = 1.0;
  cm.labels.push_back("D" + std::to_string(i) + "-C");
  return cm;
}

CorrelationMatrix contrast_correlation(const ContrastMatrix& cm, const Design& d) {
  d.validate();
  if (cm.rows.cols() != d.groups())
    throw std::domain_error("contrast_correlation: contrast/design size mismatch");
  const int q = cm.q();
  if (q < 1) throw std::domain_error("contrast_correlation: no contrast rows");

  const Vector inv_n = d.n.cast<double>().cwiseInverse();
  Matrix cov = cm.rows * inv_n.asDiagonal() * cm.rows.transpose();
  Vector scale(q);
  for (int i = 0; i < q; ++i) {
    if (!(cov(i, i) > 0.0))
      throw std::domain_error("contrast_correlation: zero contrast row");
    scale(i) = 1.0 / std::sqrt(cov(i, i));
  }
  Matrix corr = scale.asDiagonal() * cov * scale.asDiagonal();
  corr.diagonal().setOnes();
  return CorrelationMatrix::from_matrix(std::move(corr));
}

}  // namespace mctrend
