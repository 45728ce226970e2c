#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "nsplab/errors.hpp"
#include "nsplab/numerics.hpp"
#include "oracles.hpp"

using namespace nsplab;

namespace {

Matrix random_matrix(Index rows, Index cols, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) a(i, j) = normal(gen);
  return a;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST(Rearrangement, Examples) {
  EXPECT_EQ(nonincreasing_rearrangement(vec({3, -5, 1})), vec({5, 3, 1}));
  EXPECT_EQ(nonincreasing_rearrangement(vec({0, 0, 0})), vec({0, 0, 0}));
  EXPECT_EQ(nonincreasing_rearrangement(vec({-2, 2})), vec({2, 2}));
}

TEST(Rearrangement, SortedPermutationOfMagnitudes) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Vector x = random_matrix(1 + trial % 17, 1, gen).col(0);
    const Vector r = nonincreasing_rearrangement(x);
    std::vector<double> a(r.data(), r.data() + r.size());
    std::vector<double> b;
    for (Index i = 0; i < x.size(); ++i) b.push_back(std::abs(x(i)));
    EXPECT_TRUE(std::is_sorted(a.begin(), a.end(), std::greater<>()));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
  }
}

TEST(SoftThreshold, Examples) {
  EXPECT_DOUBLE_EQ(soft_threshold(5, 2), 3);
  EXPECT_DOUBLE_EQ(soft_threshold(-1, 2), 0);
  EXPECT_DOUBLE_EQ(soft_threshold(-3, 2), -1);
  EXPECT_THROW(soft_threshold(1, -0.5), DomainError);
}

TEST(SoftThreshold, OddAndNonexpansive) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-5, 5), t(0, 3);
  for (int k = 0; k < 10000; ++k) {
    const double a = u(gen), b = u(gen), th = t(gen);
    EXPECT_DOUBLE_EQ(soft_threshold(-a, th), -soft_threshold(a, th));
    EXPECT_LE(std::abs(soft_threshold(a, th) - soft_threshold(b, th)), std::abs(a - b) + 1e-15);
  }
}

TEST(OperatorNorm, Examples) {
  EXPECT_NEAR(operator_norm(Matrix::Identity(3, 3)), 1.0, 1e-12);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2;
  d(1, 1) = 1;
  EXPECT_NEAR(operator_norm(d), 2.0, 1e-10);
  EXPECT_NEAR(operator_norm(Matrix::Ones(2, 2)), 2.0, 1e-12);
  EXPECT_EQ(operator_norm(Matrix::Zero(3, 4)), 0.0);
}

TEST(OperatorNorm, DominatesSampledDirectionsAndMatchesSvd) {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix a = random_matrix(5, 8, gen);
    const double reported = operator_norm(a);
    double sampled = 0.0;
    for (int k = 0; k < 10000; ++k) {
      Vector v(8);
      for (Index i = 0; i < 8; ++i) v(i) = normal(gen);
      sampled = std::max(sampled, (a * v.normalized()).norm());
    }
    EXPECT_LE(sampled, reported * (1 + 1e-12));
    const double svd_top = Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
    EXPECT_NEAR(reported, svd_top, 1e-6 * svd_top);
  }
}

TEST(KernelBasis, Examples) {
  Matrix a(1, 2);
  a << 1, 1;
  const Matrix n = kernel_basis(a);
  ASSERT_EQ(n.cols(), 1);
  EXPECT_NEAR(std::abs(n(0, 0)), 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(n(0, 0), -n(1, 0), 1e-12);
  EXPECT_EQ(kernel_basis(Matrix::Identity(2, 2)).cols(), 0);
  EXPECT_EQ(kernel_basis(Matrix::Identity(2, 2)).rows(), 2);
  EXPECT_EQ(kernel_basis(Matrix::Zero(2, 3)).cols(), 3);
}

TEST(KernelBasis, OrthonormalAnnihilatingRankComplement) {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 50; ++trial) {
    const Index m = 1 + trial % 6, n = 2 + trial % 9;
    Matrix a = random_matrix(m, n, gen);
    if (trial % 3 == 0 && m > 1) a.row(m - 1) = a.row(0) * 2.0;  // force a rank drop
    const Matrix basis = kernel_basis(a);
    const double tol = 1e-10;
    for (Index j = 0; j < basis.cols(); ++j) EXPECT_LE((a * basis.col(j)).norm(), tol * operator_norm(a) * 10);
    EXPECT_TRUE((basis.transpose() * basis).isApprox(Matrix::Identity(basis.cols(), basis.cols()), 1e-10) ||
                basis.cols() == 0);
    EXPECT_EQ(numerical_rank(a) + basis.cols(), n);
    EXPECT_EQ(basis.cols(), oracle::kernel(a).cols());
  }
}

TEST(GammaFn, ExamplesAndErrors) {
  EXPECT_NEAR(gamma_fn(1.0), 1.0, 1e-14);
  EXPECT_NEAR(gamma_fn(0.5), 1.7724538509055159, 1e-13);
  EXPECT_NEAR(gamma_fn(5.0), 24.0, 1e-12);
  EXPECT_THROW(gamma_fn(0.0), DomainError);
  EXPECT_THROW(gamma_fn(-1.5), DomainError);
}

TEST(GammaFn, RelativeAccuracyOnGrid) {
  // Integer and half-integer closed forms, then the recurrence in between.
  double fact = 1.0;
  for (int k = 1; k <= 100; ++k) {
    if (k > 1) fact *= (k - 1);
    EXPECT_NEAR(gamma_fn(k) / fact, 1.0, 1e-10) << k;
  }
  double half = std::sqrt(M_PI);
  for (int k = 0; k < 99; ++k) {
    EXPECT_NEAR(gamma_fn(k + 0.5) / half, 1.0, 1e-10) << k;
    half *= (k + 0.5);
  }
  for (double x = 0.013; x < 99.0; x += 0.37) EXPECT_NEAR(gamma_fn(x + 1) / (x * gamma_fn(x)), 1.0, 1e-10);
}

TEST(UnitBallWidth, MatchesGammaRatio) {
  EXPECT_NEAR(unit_ball_width(2), 1.2533141373155003, 1e-13);
  for (Index n = 1; n < 60; ++n)
    EXPECT_NEAR(unit_ball_width(n), std::sqrt(2.0) * gamma_fn((n + 1) / 2.0) / gamma_fn(n / 2.0), 1e-10 * std::sqrt(n));
}

TEST(Subsets, CountAndOrder) {
  std::vector<std::vector<Index>> seen;
  for_each_subset(5, 2, [&](const std::vector<Index>& s) {
    seen.push_back(s);
    return true;
  });
  EXPECT_EQ(seen.size(), 10U);
  EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
  EXPECT_EQ(binomial(14, 3), 364.0);
  EXPECT_EQ(binomial(3, 5), 0.0);
  int calls = 0;
  for_each_subset(6, 3, [&](const std::vector<Index>&) { return ++calls < 4; });
  EXPECT_EQ(calls, 4);
}

TEST(RunningStats, MergeEqualsSequential) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal(3.0, 2.0);
  RunningStats all, left, right;
  for (int k = 0; k < 1000; ++k) {
    const double x = normal(gen);
    all.add(x);
    (k < 377 ? left : right).add(x);
  }
  left.merge(right);
  EXPECT_EQ(left.count(), all.count());
  EXPECT_NEAR(left.mean(), all.mean(), 1e-12);
  EXPECT_NEAR(left.variance(), all.variance(), 1e-10);
  EXPECT_NEAR(all.std_error(), all.stddev() / std::sqrt(1000.0), 1e-15);
}
