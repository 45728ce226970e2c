#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nsplab/errors.hpp"
#include "nsplab/width.hpp"
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

bool in_cone(const Vector& u, const ConeParams& c, double tol) {
  if (u.minCoeff() < -tol) return false;
  return u.head(c.s).sum() >= c.gamma * u.tail(c.n - c.s).sum() - tol;
}

// Random point of K_{gamma,s}.
Vector random_feasible(const ConeParams& c, std::mt19937_64& gen) {
  Vector u = random_matrix(c.n, 1, gen).col(0).cwiseAbs();
  const double head = u.head(c.s).sum(), tail = u.tail(c.n - c.s).sum();
  if (head < c.gamma * tail) u.tail(c.n - c.s) *= head / (c.gamma * tail);
  return u;
}

}  // namespace

TEST(ProjectOntoCone, Examples) {
  const ConeParams c{1.0, 1, 2};
  const Vector inside = vec({2, 1});
  EXPECT_TRUE(project_onto_cone(inside, c).isApprox(inside, 1e-12));
  EXPECT_LE(project_onto_cone(vec({-1, -1}), c).norm(), 1e-12);
  EXPECT_TRUE(project_onto_cone(vec({0, 1}), c).isApprox(vec({0.5, 0.5}), 1e-8));
  EXPECT_TRUE(project_onto_cone_exact(vec({0, 1}), c).isApprox(vec({0.5, 0.5}), 1e-12));
}

TEST(ProjectOntoCone, KktAndOptimality) {
  std::mt19937_64 gen(71);
  std::uniform_real_distribution<double> g(0.1, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = 2 + trial % 9;
    const ConeParams c{g(gen), 1 + trial % n, n};
    const Vector h = random_matrix(n, 1, gen).col(0) * 2.0;
    const Vector u = project_onto_cone(h, c);
    const Vector exact = project_onto_cone_exact(h, c);
    const double tol = 1e-8 * std::max(1.0, h.norm());
    EXPECT_TRUE(in_cone(u, c, tol));
    EXPECT_TRUE(in_cone(exact, c, 1e-12));
    EXPECT_NEAR((h - u).dot(u), 0.0, tol);
    EXPECT_NEAR((h - exact).dot(exact), 0.0, 1e-10 * std::max(1.0, h.squaredNorm()));
    EXPECT_LE((u - exact).norm(), 1e-6 * std::max(1.0, h.norm()));
    for (int k = 0; k < 1000; ++k) {
      const Vector v = random_feasible(c, gen) * std::abs(g(gen) * 3);
      EXPECT_LE((h - exact).norm(), (h - v).norm() + 1e-12);
    }
  }
}

TEST(ConeSup, MatchesDirectMaximization) {
  // sup of <h, u> over the cone cap the sphere equals ||P_K(h)||.
  std::mt19937_64 gen(73);
  for (int trial = 0; trial < 8; ++trial) {
    const Index n = 2 + trial % 3;
    const ConeParams c{trial % 2 ? 1.0 : 0.5, 1, n};
    const Vector h = nonincreasing_rearrangement(random_matrix(n, 1, gen).col(0));
    const double sup = cone_sup(h, c);
    const double sampled = oracle::cone_sup_by_sampling(h, c.gamma, 1, 1000000, gen);
    EXPECT_LE(sampled, sup + 1e-9);
    EXPECT_NEAR(sampled, sup, 1e-2 * sup);
  }
}

TEST(DualConeValue, Examples) {
  EXPECT_EQ(dual_cone_value(Vector::Zero(4), {0.5, 2, 4}), 0.0);
  const Vector h = vec({3, 2, 0.5});
  EXPECT_NEAR(dual_cone_value(h, {0.7, 3, 3}), h.norm(), 1e-12);
}

TEST(DualConeValue, DominatesConeSupOnEveryDraw) {
  std::mt19937_64 gen(79);
  std::uniform_real_distribution<double> g(0.1, 1.0);
  for (int trial = 0; trial < 5000; ++trial) {
    const Index n = 2 + trial % 15;
    const ConeParams c{g(gen), 1 + trial % n, n};
    const Vector h = nonincreasing_rearrangement(random_matrix(n, 1, gen).col(0));
    EXPECT_LE(cone_sup(h, c), dual_cone_value(h, c) + 1e-9) << trial;
  }
}

TEST(WidthMc, IdentityFullSphereMatchesUnitBallWidth) {
  RngStream rng(3, 0);
  const WidthEstimate w = width_DS_gamma_mc(Dictionary(Matrix::Identity(2, 2)), {1.0, 2, 2}, 100000, rng);
  EXPECT_NEAR(w.mean, 1.2533141373155002512, 3 * w.std_error);
  EXPECT_EQ(w.samples, 100000);
  EXPECT_EQ(w.estimator, WidthEstimator::kConeProjectionExact);
}

TEST(WidthMc, ZeroDictionaryAndErrors) {
  RngStream rng(3, 0);
  const WidthEstimate w = width_DS_gamma_mc(Dictionary(Matrix::Zero(3, 5)), {0.5, 1, 5}, 200, rng);
  EXPECT_EQ(w.mean, 0.0);
  EXPECT_EQ(w.theory_bound, 0.0);
  EXPECT_THROW(width_DS_gamma_mc(Dictionary(Matrix::Identity(3, 3)), {0.5, 1, 3}, 99, rng), DomainError);
  EXPECT_THROW(width_DS_gamma_mc(Dictionary(Matrix::Identity(3, 3)), {0.5, 1, 4}, 200, rng), DomainError);
  EXPECT_THROW(width_DS_gamma_dual(Dictionary(Matrix::Identity(3, 3)), {1.5, 1, 3}, 200, rng), DomainError);
}

TEST(WidthMc, BelowTheoryBound) {
  RngStream rng(4, 0);
  const WidthEstimate w = width_DS_gamma_mc(Dictionary(Matrix::Identity(10, 10)), {1.0, 1, 10}, 20000, rng);
  EXPECT_NEAR(w.theory_bound, 9.76574178431237553, 1e-12);
  EXPECT_LE(w.mean, w.theory_bound + 3 * w.std_error);
}

TEST(WidthDual, DominatesMcOnSharedRandomness) {
  std::mt19937_64 gen(83);
  const Dictionary d(random_matrix(5, 10, gen));
  const ConeParams c{0.5, 2, 10};
  RngStream a(9, 1), b(9, 1);
  const WidthEstimate mc = width_DS_gamma_mc(d, c, 5000, a);
  const WidthEstimate dual = width_DS_gamma_dual(d, c, 5000, b);
  EXPECT_GE(dual.mean, mc.mean - 1e-9);  // strong duality often makes them equal
  EXPECT_EQ(dual.estimator, WidthEstimator::kDualUpperBound);
}

TEST(WidthMc, MonotoneInSAndGammaAtFixedRandomness) {
  std::mt19937_64 gen(89);
  const Dictionary d(random_matrix(6, 12, gen));
  double prev = 0.0;
  for (Index s = 1; s <= 4; ++s) {
    RngStream rng(2, 2);
    const double w = width_DS_gamma_mc(d, {0.7, s, 12}, 2000, rng).mean;
    EXPECT_GE(w, prev - 1e-9);
    prev = w;
  }
  prev = std::numeric_limits<double>::infinity();
  for (double gamma : {0.2, 0.5, 0.8, 1.0}) {
    RngStream rng(2, 2);
    const double w = width_DS_gamma_mc(d, {gamma, 2, 12}, 2000, rng).mean;
    EXPECT_LE(w, prev + 1e-9);
    prev = w;
  }
}

TEST(TheoryWidthBound, Examples) {
  EXPECT_NEAR(theory_width_bound({1.0, 1, 10}, 1.0), 9.76574178431237553, 1e-12);
  EXPECT_NEAR(theory_width_bound({0.5, 1, 10}, 1.0), 2 * 9.76574178431237553, 1e-11);
  EXPECT_NEAR(theory_width_bound({1.0, 2, 10}, 4.0), 23.7346015930677259, 1e-11);
  EXPECT_THROW(theory_width_bound({1.0, 1, 10}, 0.0), DomainError);
}

TEST(CrudeWidthBound, Examples) {
  EXPECT_NEAR(crude_width_bound(Dictionary(Matrix::Identity(2, 2)), 2), 2 * 1.2533141373155002512, 1e-10);
  EXPECT_EQ(crude_width_bound(Dictionary(Matrix::Zero(2, 2)), 2), 0.0);
  EXPECT_NEAR(crude_width_bound(Dictionary(3 * Matrix::Identity(2, 2)), 2), 6 * 1.2533141373155002512, 1e-9);
}

TEST(SoftMoment, MatchesQuadratureAndBound) {
  RngStream rng(5, 0);
  const MomentCheck m = check_soft_moment(1.0, 1.0, 1000000, rng);
  EXPECT_NEAR(oracle::soft_moment(1.0, 1.0), 0.150679566687541506, 1e-12);
  EXPECT_NEAR(m.empirical, 0.150679566687541506, 3 * m.std_error);
  EXPECT_NEAR(m.bound, 0.293525326347479799, 1e-15);
  EXPECT_TRUE(m.holds());
}

TEST(SoftMoment, ScaleLawAndDeadZone) {
  // S_t(sigma a) = sigma S_{t/sigma}(a): same draws give sigma^2 times the value.
  RngStream a(6, 0), b(6, 0);
  const MomentCheck big = check_soft_moment(2.0, 2.0, 20000, a);
  const MomentCheck unit = check_soft_moment(1.0, 1.0, 20000, b);
  EXPECT_NEAR(big.empirical, 4.0 * unit.empirical, 1e-12);
  RngStream c(7, 0);
  EXPECT_EQ(check_soft_moment(1.0, 50.0, 20000, c).empirical, 0.0);
  EXPECT_THROW(check_soft_moment(0.0, 1.0, 100, c), DomainError);
}

TEST(LemmaKey, IdentityGivesExpectedMaxAbs) {
  RngStream rng(8, 0);
  const MomentCheck m = check_lemma_key(Dictionary(Matrix::Identity(10, 10)), 1, 200000, rng);
  const double exact = oracle::expected_max_abs_normal(10);
  EXPECT_NEAR(exact, 1.88071569382116, 1e-10);
  EXPECT_NEAR(m.empirical, exact, 4 * m.std_error);
  EXPECT_NEAR(m.bound, std::sqrt(4 * std::log(std::sqrt(2.0) * 10)), 1e-12);
  EXPECT_TRUE(m.holds());
}

TEST(LemmaKey, ZeroAndHomogeneity) {
  RngStream rng(8, 1);
  EXPECT_EQ(check_lemma_key(Dictionary(Matrix::Zero(3, 6)), 2, 1000, rng).empirical, 0.0);
  std::mt19937_64 gen(97);
  const Matrix d = random_matrix(4, 8, gen);
  RngStream a(1, 1), b(1, 1);
  const MomentCheck one = check_lemma_key(Dictionary(d), 2, 5000, a);
  const MomentCheck two = check_lemma_key(Dictionary(2 * d), 2, 5000, b);
  EXPECT_NEAR(two.empirical, 2 * one.empirical, 1e-12 * one.empirical);
  EXPECT_NEAR(two.bound, 2 * one.bound, 1e-12 * one.bound);
}

TEST(Slepian, IdentityAndScaling) {
  std::mt19937_64 gen(101);
  Matrix pts = random_matrix(4, 10, gen);
  for (Index j = 0; j < pts.cols(); ++j) pts.col(j).normalize();
  RngStream a(2, 0);
  const SlepianCheck id = check_slepian_contraction(Matrix::Identity(4, 4), pts, 2000, a);
  EXPECT_NEAR(id.lhs, id.rhs, 1e-12);
  EXPECT_LE(id.max_pointwise_excess, 1e-12);
  RngStream b(2, 0);
  const SlepianCheck two = check_slepian_contraction(2 * Matrix::Identity(4, 4), pts, 2000, b);
  EXPECT_NEAR(two.lhs, 2 * id.lhs, 1e-9);
  EXPECT_NEAR(two.rhs, 2 * id.rhs, 1e-9);
}

TEST(Slepian, RandomContraction) {
  std::mt19937_64 gen(103);
  const Matrix f = random_matrix(3, 5, gen);
  Matrix pts = random_matrix(5, 20, gen);
  for (Index j = 0; j < pts.cols(); ++j) pts.col(j).normalize();
  RngStream rng(3, 0);
  const SlepianCheck c = check_slepian_contraction(f, pts, 100000, rng);
  EXPECT_TRUE(c.holds()) << c.lhs << " vs " << c.rhs;
}
