#include "nsplab/subgaussian.hpp"

#include <cmath>
#include <numbers>

#include "nsplab/errors.hpp"

namespace nsplab {

namespace {
const double kSqrt2OverPi = std::sqrt(2.0 / std::numbers::pi);
}

const char* to_string(SubgaussianKind kind) {
  switch (kind) {
    case SubgaussianKind::kStdGaussian: return "std_gaussian";
    case SubgaussianKind::kGaussianSigma: return "gaussian_sigma";
    case SubgaussianKind::kRademacher: return "rademacher";
  }
  return "unknown";
}

SubgaussianKind parse_subgaussian_kind(const std::string& name) {
  if (name == "std_gaussian") return SubgaussianKind::kStdGaussian;
  if (name == "gaussian_sigma") return SubgaussianKind::kGaussianSigma;
  if (name == "rademacher") return SubgaussianKind::kRademacher;
  throw DomainError("unknown subgaussian kind: " + name);
}

SubgaussianSpec make_spec(SubgaussianKind kind, Index d, const std::optional<Matrix>& covariance,
                          std::optional<double> width_constant) {
  require(d >= 1, "make_spec: dimension must be positive");
  require(covariance.has_value() == (kind == SubgaussianKind::kGaussianSigma),
          "make_spec: a covariance is required for gaussian_sigma and only for it");
  if (width_constant) require(*width_constant > 0.0, "make_spec: width constant C must be positive");

  SubgaussianSpec spec;
  spec.kind = kind;
  spec.dim = d;
  switch (kind) {
    case SubgaussianKind::kStdGaussian:
      spec.alpha = kSqrt2OverPi;
      spec.sigma = 1.0;
      spec.width_constant = width_constant.value_or(1.0);
      break;
    case SubgaussianKind::kRademacher:
      require(width_constant.has_value(), "make_spec: rademacher rows need an explicit width constant C");
      spec.alpha = 1.0 / std::sqrt(2.0);
      spec.sigma = 1.0;
      spec.width_constant = *width_constant;
      break;
    case SubgaussianKind::kGaussianSigma: {
      const Matrix& cov = *covariance;
      require(cov.rows() == d && cov.cols() == d, "make_spec: covariance must be d x d");
      require(cov.allFinite(), "make_spec: covariance entries must be finite");
      const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
      require((cov - cov.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale, "make_spec: covariance must be symmetric");
      Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
      const Vector& lambda = eig.eigenvalues();  // ascending
      require(lambda(0) > kEigenvalueFloor, "make_spec: covariance must be positive definite");
      spec.alpha = std::sqrt(lambda(0)) * kSqrt2OverPi;
      spec.sigma = std::sqrt(lambda(d - 1));
      spec.kappa = lambda(d - 1) / lambda(0);
      spec.width_constant = width_constant.value_or(1.0);
      spec.covariance = cov;
      spec.covariance_sqrt =
          Matrix(eig.eigenvectors() * lambda.cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose());
      break;
    }
  }
  return spec;
}

Vector sample_row(const SubgaussianSpec& spec, RngStream& rng) {
  Vector row(spec.dim);
  if (spec.kind == SubgaussianKind::kRademacher) {
    for (Index i = 0; i < spec.dim; ++i) row(i) = rng.rademacher();
    return row;
  }
  for (Index i = 0; i < spec.dim; ++i) row(i) = rng.gaussian();
  if (spec.kind == SubgaussianKind::kGaussianSigma) return *spec.covariance_sqrt * row;
  return row;
}

Matrix sample_measurement_matrix(const SubgaussianSpec& spec, Index m, Index d, RngStream& rng) {
  require(m >= 1 && d >= 1, "sample_measurement_matrix: dimensions must be positive");
  require(d == spec.dim, "sample_measurement_matrix: spec dimension does not match d");
  Matrix phi(m, d);
  for (Index i = 0; i < m; ++i) phi.row(i) = sample_row(spec, rng).transpose();
  return phi;
}

double small_ball_lower_bound(const SubgaussianSpec& spec, double t) {
  require(t > 0.0 && t < spec.alpha, "small_ball_lower_bound: t must lie in (0, alpha)");
  const double gap = spec.alpha - t;
  return gap * gap / (4.0 * spec.sigma * spec.sigma);
}

bool TailReport::passed() const {
  for (const auto& row : rows)
    if (row.flagged) return false;
  return true;
}

namespace {

void require_unit(const Vector& z, Index d) {
  require(z.size() == d, "unit vector has the wrong dimension");
  require(std::abs(z.norm() - 1.0) <= 1e-10, "z must be a unit vector (within 1e-10)");
}

}  // namespace

TailReport verify_tail(const SubgaussianSpec& spec, const Vector& z, const Vector& t_grid, std::int64_t samples,
                       RngStream& rng) {
  require_unit(z, spec.dim);
  require(samples >= 1, "verify_tail: need at least one sample");
  std::vector<std::int64_t> hits(static_cast<std::size_t>(t_grid.size()), 0);
  for (std::int64_t k = 0; k < samples; ++k) {
    const double proj = std::abs(sample_row(spec, rng).dot(z));
    for (Index i = 0; i < t_grid.size(); ++i)
      if (proj >= t_grid(i)) ++hits[static_cast<std::size_t>(i)];
  }
  TailReport report;
  report.samples = samples;
  const double ns = static_cast<double>(samples);
  for (Index i = 0; i < t_grid.size(); ++i) {
    TailRow row;
    row.t = t_grid(i);
    row.empirical = static_cast<double>(hits[static_cast<std::size_t>(i)]) / ns;
    row.std_error = std::sqrt(row.empirical * (1.0 - row.empirical) / ns);
    row.bound = 2.0 * std::exp(-row.t * row.t / (2.0 * spec.sigma * spec.sigma));
    row.flagged = row.empirical > row.bound + 3.0 * row.std_error;
    report.rows.push_back(row);
  }
  return report;
}

RunningStats mean_abs_projection(const SubgaussianSpec& spec, const Vector& z, std::int64_t samples, RngStream& rng) {
  require_unit(z, spec.dim);
  RunningStats stats;
  for (std::int64_t k = 0; k < samples; ++k) stats.add(std::abs(sample_row(spec, rng).dot(z)));
  return stats;
}

}  // namespace nsplab
