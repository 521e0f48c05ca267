#include "mctrend/contrasts.hpp"
#include "mctrend/model.hpp"
#include "mctrend/mct.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace mctrend;

namespace {

Design design(std::initializer_list<int> ns) {
  Design d;
  d.n.resize(static_cast<Eigen::Index>(ns.size()));
  Eigen::Index i = 0;
  for (int n : ns) d.n(i++) = n;
  return d;
}

}  // namespace

TEST_CASE("Dunnett contrasts are pairwise dose-versus-control") {
  const ContrastMatrix cm = dunnett_contrasts(design({10, 10, 10, 10}));
  REQUIRE(cm.rows.rows() == 3);
  REQUIRE(cm.rows.cols() == 4);
  for (int q = 0; q < 3; ++q) {
    CHECK(cm.rows(q, 0) == -1.0);
    for (int j = 1; j < 4; ++j)
      CHECK(cm.rows(q, j) == (j == q + 1 ? 1.0 : 0.0));
    CHECK(std::fabs(cm.rows.row(q).sum()) < 1e-15);
  }
  CHECK(cm.labels[0] == "D1-C");
  CHECK(cm.labels[2] == "D3-C");
}

TEST_CASE("Williams contrasts pool the top doses with n-weights") {
  SUBCASE("balanced") {
    const ContrastMatrix cm = williams_contrasts(design({10, 10, 10, 10}));
    REQUIRE(cm.rows.rows() == 3);
    // row 0: top dose only
    CHECK(cm.rows(0, 0) == -1.0);
    CHECK(cm.rows(0, 1) == 0.0);
    CHECK(cm.rows(0, 2) == 0.0);
    CHECK(cm.rows(0, 3) == 1.0);
    // row 1: top two doses, equal weights
    CHECK(cm.rows(1, 0) == -1.0);
    CHECK(cm.rows(1, 1) == 0.0);
    CHECK(cm.rows(1, 2) == doctest::Approx(0.5));
    CHECK(cm.rows(1, 3) == doctest::Approx(0.5));
    // row 2: all doses
    CHECK(cm.rows(2, 0) == -1.0);
    for (int j = 1; j < 4; ++j)
      CHECK(cm.rows(2, j) == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("unbalanced weights are sample-size proportions") {
    const ContrastMatrix cm = williams_contrasts(design({8, 4, 6, 10}));
    CHECK(cm.rows(1, 2) == doctest::Approx(6.0 / 16.0));
    CHECK(cm.rows(1, 3) == doctest::Approx(10.0 / 16.0));
    CHECK(cm.rows(2, 1) == doctest::Approx(4.0 / 20.0));
    CHECK(cm.rows(2, 2) == doctest::Approx(6.0 / 20.0));
    CHECK(cm.rows(2, 3) == doctest::Approx(10.0 / 20.0));
    for (int q = 0; q < 3; ++q)
      CHECK(std::fabs(cm.rows.row(q).sum()) < 1e-14);
  }
}

TEST_CASE("sub-family Williams contrasts zero-pad the excluded doses") {
  const ContrastMatrix cm = sub_williams_contrasts(design({10, 10, 10, 10}), 2);
  REQUIRE(cm.rows.rows() == 2);
  REQUIRE(cm.rows.cols() == 4);
  CHECK(cm.rows(0, 3) == 0.0);
  CHECK(cm.rows(1, 3) == 0.0);
  CHECK(cm.rows(0, 2) == 1.0);
  CHECK(cm.rows(1, 1) == doctest::Approx(0.5));
  CHECK(cm.rows(1, 2) == doctest::Approx(0.5));
  CHECK_THROWS_AS(sub_williams_contrasts(design({10, 10}), 2),
                  std::domain_error);
  CHECK_THROWS_AS(sub_williams_contrasts(design({10, 10}), 0),
                  std::domain_error);
}

TEST_CASE("contrast correlations match hand-derived constants") {
  const Design d = design({10, 10, 10, 10});
  SUBCASE("Dunnett balanced: all correlations 1/2") {
    const CorrelationMatrix r = contrast_correlation(dunnett_contrasts(d), d);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(r.matrix()(i, j) == doctest::Approx(i == j ? 1.0 : 0.5));
  }
  SUBCASE("Williams balanced k=3") {
    // c1=(-1,0,0,1), c2=(-1,0,1/2,1/2), c3=(-1,1/3,1/3,1/3) give
    // r12 = 1.5/sqrt(3), r13 = sqrt(2/3), r23 = (4/3)/sqrt(2).
    const CorrelationMatrix r = contrast_correlation(williams_contrasts(d), d);
    CHECK(std::fabs(r.matrix()(0, 1) - 0.8660254037844387) < 1e-12);
    CHECK(std::fabs(r.matrix()(0, 2) - 0.8164965809277261) < 1e-12);
    CHECK(std::fabs(r.matrix()(1, 2) - 0.9428090415820634) < 1e-12);
  }
}

TEST_CASE("contrast correlation equals the empirical statistic correlation") {
  // Simulate the Williams statistics under H0 and compare their sample
  // correlation matrix with the analytic one.
  const Design d = design({6, 8, 5, 9});
  const ContrastMatrix cm = williams_contrasts(d);
  const CorrelationMatrix analytic = contrast_correlation(cm, d);

  std::mt19937_64 eng(2024);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int reps = 200000;
  Matrix stats(reps, 3);
  for (int r = 0; r < reps; ++r) {
    // Group means under H0 have variance 1/n_i; skip the data layer and
    // draw them directly (the statistic correlation only involves means).
    Vector means(4);
    for (int i = 0; i < 4; ++i)
      means(i) = normal(eng) / std::sqrt(static_cast<double>(d.n(i)));
    for (int q = 0; q < 3; ++q) {
      double num = cm.rows.row(q).dot(means);
      double den = 0.0;
      for (int i = 0; i < 4; ++i)
        den += cm.rows(q, i) * cm.rows(q, i) / d.n(i);
      stats(r, q) = num / std::sqrt(den);
    }
  }
  Matrix centered = stats.rowwise() - stats.colwise().mean();
  Matrix cov = centered.transpose() * centered / (reps - 1);
  Vector isd = cov.diagonal().array().rsqrt();
  Matrix emp = isd.asDiagonal() * cov * isd.asDiagonal();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(std::fabs(emp(i, j) - analytic.matrix()(i, j)) < 0.01);
}

TEST_CASE("degenerate designs and contrasts are rejected") {
  CHECK_THROWS_AS(design({10}).validate(), std::domain_error);
  CHECK_THROWS_AS(design({10, 1}).validate(), std::domain_error);

  ContrastMatrix zero_row;
  zero_row.rows = Matrix::Zero(1, 3);
  zero_row.labels = {"zero"};
  CHECK_THROWS_AS(contrast_correlation(zero_row, design({5, 5, 5})),
                  std::domain_error);
}
