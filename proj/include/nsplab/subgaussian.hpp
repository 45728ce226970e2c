#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nsplab/numerics.hpp"
#include "nsplab/rng.hpp"

namespace nsplab {

enum class SubgaussianKind { kStdGaussian, kGaussianSigma, kRademacher };

const char* to_string(SubgaussianKind kind);
SubgaussianKind parse_subgaussian_kind(const std::string& name);

/// A row distribution phi in R^d with subgaussian parameters (alpha, sigma):
///   E|<phi, z>| >= alpha  and  P(|<phi, z>| >= t) <= 2 exp(-t^2 / (2 sigma^2))
/// for unit z, plus the empirical-width constant C with W_m(S) <= C sigma w(S).
///
/// Parameter choices per kind:
///   std_gaussian   alpha = sqrt(2/pi), sigma = 1, C = 1
///   gaussian_sigma alpha = sigma_min sqrt(2/pi), sigma = sigma_max, C = 1,
///                  where sigma_min^2, sigma_max^2 are the extreme eigenvalues
///                  of the covariance
///   rademacher     alpha = 1/sqrt(2) (Khintchine's sharp lower constant, our
///                  choice; the distribution has no published pair), sigma = 1,
///                  C must be supplied by the caller
struct SubgaussianSpec {
  SubgaussianKind kind = SubgaussianKind::kStdGaussian;
  Index dim = 0;
  double alpha = 0.0;
  double sigma = 0.0;
  double width_constant = 1.0;
  /// Covariance condition number sigma_max^2 / sigma_min^2 (1 unless gaussian_sigma).
  double kappa = 1.0;
  std::optional<Matrix> covariance;
  std::optional<Matrix> covariance_sqrt;  // symmetric square root
  std::string covariance_path;            // provenance only, for serialization
};

inline constexpr double kEigenvalueFloor = 1e-12;

/// Throws DomainError when the covariance is missing/unexpected, not
/// symmetric, not positive definite, or when C is missing for rademacher.
SubgaussianSpec make_spec(SubgaussianKind kind, Index d, const std::optional<Matrix>& covariance = std::nullopt,
                          std::optional<double> width_constant = std::nullopt);

/// One draw of phi.
Vector sample_row(const SubgaussianSpec& spec, RngStream& rng);

/// m x d matrix with i.i.d. rows drawn from spec.
Matrix sample_measurement_matrix(const SubgaussianSpec& spec, Index m, Index d, RngStream& rng);

/// (alpha - t)^2 / (4 sigma^2), a lower bound on P(|<phi, z>| >= t), 0 < t < alpha.
double small_ball_lower_bound(const SubgaussianSpec& spec, double t);

struct TailRow {
  double t = 0.0;
  double empirical = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
  bool flagged = false;  // empirical > bound + 3 std errors
};

struct TailReport {
  std::vector<TailRow> rows;
  std::int64_t samples = 0;
  bool passed() const;
};

/// Empirical P(|<phi, z>| >= t) over a grid of t versus 2 exp(-t^2/(2 sigma^2)).
TailReport verify_tail(const SubgaussianSpec& spec, const Vector& z, const Vector& t_grid, std::int64_t samples,
                       RngStream& rng);

/// Monte Carlo E|<phi, z>| (mean and standard error).
RunningStats mean_abs_projection(const SubgaussianSpec& spec, const Vector& z, std::int64_t samples, RngStream& rng);

}  // namespace nsplab
