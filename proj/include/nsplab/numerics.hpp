#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace nsplab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace defaults {
inline constexpr double kRankTol = 1e-10;
inline constexpr double kPowerIterationTol = 1e-12;
inline constexpr int kPowerIterationMaxIter = 100000;
inline constexpr double kLpTol = 1e-9;
}  // namespace defaults

/// |x| sorted nonincreasing.
Vector nonincreasing_rearrangement(const Vector& x);

/// Soft thresholding S_t(u). Throws DomainError for t < 0.
double soft_threshold(double u, double t);

/// Largest singular value of A by power iteration on A^T A, started from a
/// fixed seed-0 Gaussian vector. Returns 0 for the zero matrix.
double operator_norm(const Matrix& a, double tol = defaults::kPowerIterationTol,
                     int max_iter = defaults::kPowerIterationMaxIter);

/// Orthonormal basis (as columns) of ker(A), n x (n - rank). Singular values
/// at or below tol * sigma_max count as zero.
Matrix kernel_basis(const Matrix& a, double tol = defaults::kRankTol);

/// Numerical rank with the same convention as kernel_basis.
Index numerical_rank(const Matrix& a, double tol = defaults::kRankTol);

/// Gamma function on x > 0.
double gamma_fn(double x);

/// E||g||_2 for g ~ N(0, I_n), i.e. sqrt(2) Gamma((n+1)/2) / Gamma(n/2).
double unit_ball_width(Index n);

bool all_finite(const Matrix& a);

/// Binomial coefficient as a double (exact for the sizes we enumerate).
double binomial(Index n, Index k);

/// Calls fn(subset) for every k-subset of {0..n-1} in lexicographic order.
/// Stops early if fn returns false.
template <typename Fn>
void for_each_subset(Index n, Index k, Fn&& fn) {
  if (k < 0 || k > n) return;
  std::vector<Index> subset(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) subset[static_cast<std::size_t>(i)] = i;
  for (;;) {
    if (!fn(static_cast<const std::vector<Index>&>(subset))) return;
    Index i = k - 1;
    while (i >= 0 && subset[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++subset[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j)
      subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
  }
}

/// Welford accumulator; mergeable so parallel partial sums combine exactly
/// the same way regardless of thread count.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);

  std::int64_t count() const { return count_; }
  double mean() const { return mean_; }
  /// Sample variance (n - 1 denominator); 0 for fewer than two samples.
  double variance() const;
  double stddev() const;
  double std_error() const;

 private:
  std::int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace nsplab
