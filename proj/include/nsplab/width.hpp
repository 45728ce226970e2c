#pragma once

#include <cstdint>
#include <string>

#include "nsplab/dictionary.hpp"
#include "nsplab/numerics.hpp"
#include "nsplab/rng.hpp"

namespace nsplab {

/// K_{gamma,s} = { u >= 0 : sum_{l<=s} u_l >= gamma sum_{l>s} u_l } in R^n.
struct ConeParams {
  double gamma = 1.0;
  Index s = 1;
  Index n = 1;
};

void validate(const ConeParams& c);

enum class WidthEstimator { kConeProjectionExact, kDualUpperBound };
const char* to_string(WidthEstimator e);

struct WidthEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
  WidthEstimator estimator = WidthEstimator::kConeProjectionExact;
  double theory_bound = 0.0;  // 0 when not applicable (e.g. zero dictionary)
};

inline constexpr double kDykstraTol = 1e-10;
inline constexpr int kDykstraMaxSweeps = 100000;

/// Euclidean projection onto K_{gamma,s} by Dykstra's alternating projections
/// between the orthant and the halfspace a.u >= 0, a = (1,..,1, -gamma,..,-gamma).
Vector project_onto_cone(const Vector& h, const ConeParams& c, double tol = kDykstraTol);

/// Same projection solved in closed form from the KKT system:
/// u = max(h + lambda a, 0), with lambda >= 0 the root of the nondecreasing
/// piecewise-linear a.max(h + lambda a, 0) (or 0 if that is already >= 0).
Vector project_onto_cone_exact(const Vector& h, const ConeParams& c);

/// sup over K_{gamma,s} cap S^{n-1} of <h*, u> = ||P_K(h*)||_2 for a sorted,
/// nonnegative h*.
double cone_sup(const Vector& h_sorted, const ConeParams& c);

/// min over t >= 0 of sqrt(sum_{l<=s}(h*_l + t)^2 + sum_{l>s} S_{gamma t}(h*_l)^2).
double dual_cone_value(const Vector& h_sorted, const ConeParams& c);

/// Monte Carlo w(D S_gamma): mean over g ~ N(0, I_d) of cone_sup((D^T g)*).
WidthEstimate width_DS_gamma_mc(const Dictionary& dict, const ConeParams& c, std::int64_t samples, RngStream& rng);

/// Monte Carlo mean of dual_cone_value((D^T g)*), an upper bound on the above.
WidthEstimate width_DS_gamma_dual(const Dictionary& dict, const ConeParams& c, std::int64_t samples, RngStream& rng);

/// 6 gamma^{-1} sqrt(s rho log(sqrt(2) n / s)).
double theory_width_bound(const ConeParams& c, double rho);

/// 2 ||D||_2 w(B_2^n), w(B_2^n) = sqrt(2) Gamma((n+1)/2) / Gamma(n/2).
double crude_width_bound(const Dictionary& dict, Index n);

struct MomentCheck {
  double empirical = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
  bool holds() const { return empirical <= bound + 3.0 * std_error; }
};

/// E S_t(a)^2 for a ~ N(0, sigma^2) versus sigma^4 sqrt(2/(pi e)) t^-2 exp(-t^2/(2 sigma^2)).
MomentCheck check_soft_moment(double sigma, double t, std::int64_t samples, RngStream& rng);

/// E sqrt((1/s) sum_{l<=s} ((D^T g)*_l)^2) versus sqrt(4 rho log(sqrt(2) n / s)).
MomentCheck check_lemma_key(const Dictionary& dict, Index s, std::int64_t samples, RngStream& rng);

struct SlepianCheck {
  double lhs = 0.0;      // w(F S)
  double rhs = 0.0;      // ||F||_2 w(S)
  double lhs_se = 0.0;
  double rhs_se = 0.0;
  double diff_se = 0.0;  // standard error of the paired difference lhs - rhs
  double max_pointwise_excess = 0.0;  // largest per-draw lhs - rhs
  bool holds() const { return lhs <= rhs + 3.0 * diff_se; }
};

/// w(F S) <= ||F||_2 w(S) on the finite symmetric set S = {+-points.col(j)}.
/// Each draw uses one Gaussian vector of length max(rows(F), cols(F)); its
/// prefixes feed both sides.
SlepianCheck check_slepian_contraction(const Matrix& f, const Matrix& points, std::int64_t samples, RngStream& rng);

}  // namespace nsplab
