#include "nsplab/width.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nsplab/errors.hpp"

namespace nsplab {

void validate(const ConeParams& c) {
  require(c.n >= 1, "cone: n must be positive");
  require(c.s >= 1 && c.s <= c.n, "cone: sparsity must satisfy 1 <= s <= n");
  require(c.gamma > 0.0 && c.gamma <= 1.0, "cone: gamma must lie in (0, 1]");
}

const char* to_string(WidthEstimator e) {
  return e == WidthEstimator::kConeProjectionExact ? "cone_projection_exact" : "dual_upper_bound";
}

namespace {

Vector cone_normal(const ConeParams& c) {
  Vector a = Vector::Constant(c.n, -c.gamma);
  a.head(c.s).setOnes();
  return a;
}

double phi_at(const Vector& h, const Vector& a, double lambda) {
  double acc = 0.0;
  for (Index i = 0; i < h.size(); ++i) acc += a(i) * std::max(h(i) + lambda * a(i), 0.0);
  return acc;
}

}  // namespace

Vector project_onto_cone(const Vector& h, const ConeParams& c, double tol) {
  validate(c);
  require(h.size() == c.n, "project_onto_cone: dimension mismatch");
  require(tol > 0.0, "project_onto_cone: tol must be positive");
  const Vector a = cone_normal(c);
  const double a_sq = a.squaredNorm();

  Vector x = h;
  Vector p = Vector::Zero(c.n);
  Vector q = Vector::Zero(c.n);
  for (int sweep = 0; sweep < kDykstraMaxSweeps; ++sweep) {
    const Vector y = (x + p).cwiseMax(0.0);
    p = x + p - y;
    Vector next = y + q;
    const double slack = a.dot(next);
    if (slack < 0.0) next -= (slack / a_sq) * a;
    q = y + q - next;
    const double moved = (next - x).norm();
    x = std::move(next);
    if (moved < tol) break;
  }
  return x;
}

Vector project_onto_cone_exact(const Vector& h, const ConeParams& c) {
  validate(c);
  require(h.size() == c.n, "project_onto_cone_exact: dimension mismatch");
  const Vector a = cone_normal(c);
  if (phi_at(h, a, 0.0) >= 0.0) return h.cwiseMax(0.0);

  // Coordinate i switches state where h_i + lambda a_i = 0.
  std::vector<double> breaks;
  breaks.reserve(static_cast<std::size_t>(c.n));
  for (Index i = 0; i < c.n; ++i) {
    const double b = -h(i) / a(i);
    if (b > 0.0) breaks.push_back(b);
  }
  std::sort(breaks.begin(), breaks.end());
  double lo = 0.0;
  double hi = -1.0;
  for (double b : breaks) {
    if (phi_at(h, a, b) >= 0.0) {
      hi = b;
      break;
    }
    lo = b;
  }
  // phi is linear on [lo, hi]; solve it from the active set at the midpoint.
  const double probe = hi < 0.0 ? lo + 1.0 : 0.5 * (lo + hi);
  double num = 0.0, den = 0.0;
  for (Index i = 0; i < c.n; ++i) {
    if (h(i) + probe * a(i) > 0.0) {
      num += a(i) * h(i);
      den += a(i) * a(i);
    }
  }
  double lambda = den > 0.0 ? -num / den : lo;
  if (hi >= 0.0) lambda = std::clamp(lambda, lo, hi);
  else lambda = std::max(lambda, lo);
  return (h + lambda * a).cwiseMax(0.0);
}

double cone_sup(const Vector& h_sorted, const ConeParams& c) { return project_onto_cone_exact(h_sorted, c).norm(); }

double dual_cone_value(const Vector& h_sorted, const ConeParams& c) {
  validate(c);
  require(h_sorted.size() == c.n, "dual_cone_value: dimension mismatch");
  const auto objective = [&](double t) {
    double acc = 0.0;
    for (Index l = 0; l < c.s; ++l) acc += (h_sorted(l) + t) * (h_sorted(l) + t);
    for (Index l = c.s; l < c.n; ++l) {
      const double v = soft_threshold(h_sorted(l), c.gamma * t);
      acc += v * v;
    }
    return acc;
  };
  const double max_h = h_sorted.size() > 0 ? h_sorted.maxCoeff() : 0.0;
  double lo = 0.0;
  double hi = std::max(max_h, 0.0) / c.gamma + 1.0;
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > 1e-8) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = objective(x2);
    }
  }
  const double best = std::min({objective(0.0), f1, f2, objective(0.5 * (lo + hi))});
  return std::sqrt(std::max(best, 0.0));
}

namespace {

template <typename Value>
WidthEstimate width_estimate(const Dictionary& dict, const ConeParams& c, std::int64_t samples, RngStream& rng,
                             WidthEstimator kind, Value&& value) {
  validate(c);
  require(c.n == dict.size(), "width: cone dimension must equal the number of atoms");
  require(samples >= 100, "width: need at least 100 samples");
  const Matrix dt = dict.matrix().transpose();
  RunningStats stats;
  Vector g(dict.dim());
  for (std::int64_t k = 0; k < samples; ++k) {
    for (Index i = 0; i < g.size(); ++i) g(i) = rng.gaussian();
    stats.add(value(nonincreasing_rearrangement(dt * g)));
  }
  WidthEstimate out;
  out.mean = stats.mean();
  out.std_error = stats.std_error();
  out.samples = samples;
  out.estimator = kind;
  out.theory_bound = dict.rho() > 0.0 ? theory_width_bound(c, dict.rho()) : 0.0;
  return out;
}

}  // namespace

WidthEstimate width_DS_gamma_mc(const Dictionary& dict, const ConeParams& c, std::int64_t samples, RngStream& rng) {
  return width_estimate(dict, c, samples, rng, WidthEstimator::kConeProjectionExact,
                        [&](const Vector& h) { return cone_sup(h, c); });
}

WidthEstimate width_DS_gamma_dual(const Dictionary& dict, const ConeParams& c, std::int64_t samples, RngStream& rng) {
  return width_estimate(dict, c, samples, rng, WidthEstimator::kDualUpperBound,
                        [&](const Vector& h) { return dual_cone_value(h, c); });
}

double theory_width_bound(const ConeParams& c, double rho) {
  validate(c);
  require(rho > 0.0, "theory_width_bound: rho must be positive");
  const double arg = std::sqrt(2.0) * static_cast<double>(c.n) / static_cast<double>(c.s);
  require(arg > 1.0, "theory_width_bound: sqrt(2) n / s must exceed 1");
  return 6.0 / c.gamma * std::sqrt(static_cast<double>(c.s) * rho * std::log(arg));
}

double crude_width_bound(const Dictionary& dict, Index n) { return 2.0 * dict.op_norm() * unit_ball_width(n); }

MomentCheck check_soft_moment(double sigma, double t, std::int64_t samples, RngStream& rng) {
  require(sigma > 0.0 && t > 0.0, "check_soft_moment: sigma and t must be positive");
  require(samples >= 2, "check_soft_moment: need at least two samples");
  RunningStats stats;
  for (std::int64_t k = 0; k < samples; ++k) {
    const double v = soft_threshold(sigma * rng.gaussian(), t);
    stats.add(v * v);
  }
  MomentCheck out;
  out.empirical = stats.mean();
  out.std_error = stats.std_error();
  const double pi = std::acos(-1.0);
  out.bound = std::pow(sigma, 4) * std::sqrt(2.0 / (pi * std::exp(1.0))) / (t * t) *
              std::exp(-t * t / (2.0 * sigma * sigma));
  return out;
}

MomentCheck check_lemma_key(const Dictionary& dict, Index s, std::int64_t samples, RngStream& rng) {
  const Index n = dict.size();
  require(s >= 1 && s <= n, "check_lemma_key: sparsity must satisfy 1 <= s <= n");
  require(samples >= 2, "check_lemma_key: need at least two samples");
  const Matrix dt = dict.matrix().transpose();
  RunningStats stats;
  Vector g(dict.dim());
  for (std::int64_t k = 0; k < samples; ++k) {
    for (Index i = 0; i < g.size(); ++i) g(i) = rng.gaussian();
    const Vector h = nonincreasing_rearrangement(dt * g);
    stats.add(std::sqrt(h.head(s).squaredNorm() / static_cast<double>(s)));
  }
  MomentCheck out;
  out.empirical = stats.mean();
  out.std_error = stats.std_error();
  out.bound = std::sqrt(4.0 * dict.rho() * std::log(std::sqrt(2.0) * static_cast<double>(n) / static_cast<double>(s)));
  return out;
}

SlepianCheck check_slepian_contraction(const Matrix& f, const Matrix& points, std::int64_t samples, RngStream& rng) {
  require(points.rows() == f.cols(), "check_slepian_contraction: points must live in the domain of F");
  require(points.cols() >= 1, "check_slepian_contraction: need at least one point");
  require(samples >= 2, "check_slepian_contraction: need at least two samples");
  const Matrix image = f * points;
  const double norm = operator_norm(f);
  const Index len = std::max(f.rows(), f.cols());
  RunningStats lhs, rhs, diff;
  SlepianCheck out;
  out.max_pointwise_excess = -std::numeric_limits<double>::infinity();
  Vector g(len);
  for (std::int64_t k = 0; k < samples; ++k) {
    for (Index i = 0; i < len; ++i) g(i) = rng.gaussian();
    // The set is symmetric, so the sup of <g, x> is the largest |<g, x_j>|.
    const double a = (g.head(f.rows()).transpose() * image).cwiseAbs().maxCoeff();
    const double b = norm * (g.head(f.cols()).transpose() * points).cwiseAbs().maxCoeff();
    lhs.add(a);
    rhs.add(b);
    diff.add(a - b);
    out.max_pointwise_excess = std::max(out.max_pointwise_excess, a - b);
  }
  out.lhs = lhs.mean();
  out.rhs = rhs.mean();
  out.lhs_se = lhs.std_error();
  out.rhs_se = rhs.std_error();
  out.diff_se = diff.std_error();
  return out;
}

}  // namespace nsplab
