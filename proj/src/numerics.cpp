#include "nsplab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "nsplab/errors.hpp"
#include "nsplab/rng.hpp"

namespace nsplab {

Vector nonincreasing_rearrangement(const Vector& x) {
  Vector out = x.cwiseAbs();
  std::sort(out.data(), out.data() + out.size(), std::greater<>());
  return out;
}

double soft_threshold(double u, double t) {
  require(t >= 0.0, "soft_threshold: threshold must be nonnegative");
  if (u > t) return u - t;
  if (u < -t) return u + t;
  return 0.0;
}

double operator_norm(const Matrix& a, double tol, int max_iter) {
  require(tol > 0.0, "operator_norm: tol must be positive");
  if (a.size() == 0 || a.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  RngStream rng(0, 0);
  Vector v(a.cols());
  double lambda = 0.0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    for (Index i = 0; i < v.size(); ++i) v(i) = rng.gaussian();
    v.normalize();
    lambda = 0.0;
    bool degenerate = false;
    for (int it = 0; it < max_iter; ++it) {
      const Vector av = a * v;
      Vector u = a.transpose() * av;
      const double next = av.squaredNorm();
      const double unorm = u.norm();
      if (unorm == 0.0) {
        degenerate = true;  // start vector landed in ker(A); perturb and retry
        break;
      }
      v = u / unorm;
      const bool done = std::abs(next - lambda) <= tol * next;
      lambda = next;
      if (done) break;
    }
    if (!degenerate) break;
  }
  return std::sqrt(std::max(lambda, (a * v).squaredNorm()));
}

Matrix kernel_basis(const Matrix& a, double tol) {
  const Index n = a.cols();
  if (a.rows() == 0 || n == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? tol * sv(0) : 0.0;
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

Index numerical_rank(const Matrix& a, double tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& sv = svd.singularValues();
  const double cutoff = tol * sv(0);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return rank;
}

double gamma_fn(double x) {
  require(x > 0.0 && std::isfinite(x), "gamma_fn: argument must be positive");
  return std::tgamma(x);
}

double unit_ball_width(Index n) {
  require(n >= 1, "unit_ball_width: dimension must be positive");
  const double dn = static_cast<double>(n);
  return std::sqrt(2.0) * std::exp(std::lgamma((dn + 1.0) / 2.0) - std::lgamma(dn / 2.0));
}

bool all_finite(const Matrix& a) { return a.allFinite(); }

double binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double out = 1.0;
  for (Index i = 1; i <= k; ++i) out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(out);
}

void RunningStats::add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double total = static_cast<double>(count_ + other.count_);
  const double delta = other.mean_ - mean_;
  mean_ += delta * static_cast<double>(other.count_) / total;
  m2_ += other.m2_ + delta * delta * static_cast<double>(count_) * static_cast<double>(other.count_) / total;
  count_ += other.count_;
}

double RunningStats::variance() const {
  return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
}

double RunningStats::stddev() const { return std::sqrt(variance()); }

double RunningStats::std_error() const {
  return count_ > 0 ? stddev() / std::sqrt(static_cast<double>(count_)) : 0.0;
}

}  // namespace nsplab
