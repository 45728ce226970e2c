#include "nsplab/smallball.hpp"

#include <cmath>

#include "nsplab/errors.hpp"

namespace nsplab {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kE = 2.718281828459045235360287471352662498;
}  // namespace

void validate(const BoundInputs& b) {
  require(b.eta > 0.0, "bounds: eta must be positive");
  require(b.gamma > 0.0 && b.gamma < 1.0, "bounds: gamma must lie in (0, 1)");
  require(b.rho > 0.0, "bounds: rho must be positive");
  require(b.alpha > 0.0, "bounds: alpha must be positive");
  require(b.sigma > 0.0, "bounds: sigma must be positive");
  require(b.C > 0.0, "bounds: C must be positive");
  require(b.s >= 1 && b.s <= b.n, "bounds: sparsity must satisfy 1 <= s <= n");
  require(b.d >= 1, "bounds: d must be positive");
  require(!b.kappa || *b.kappa >= 1.0, "bounds: kappa must be at least 1");
}

const char* to_string(FormulaId id) {
  switch (id) {
    case FormulaId::kThmS: return "thm_S";
    case FormulaId::kThmMain: return "thm_main";
    case FormulaId::kCorNon: return "cor_non";
    case FormulaId::kCorSgauss: return "cor_sgauss";
    case FormulaId::kThmMainGauss: return "thm_main_gauss";
  }
  return "unknown";
}

FormulaId parse_formula_id(const std::string& name) {
  for (FormulaId id : kAllFormulas)
    if (name == to_string(id)) return id;
  throw DomainError("unknown formula id: " + name);
}

namespace {

double sparse_log(const BoundInputs& b) {
  const double arg = std::sqrt(2.0) * static_cast<double>(b.n) / static_cast<double>(b.s);
  require(arg > 1.0, "bounds: sqrt(2) n / s must exceed 1");
  return static_cast<double>(b.s) * std::log(arg);
}

double require_kappa(const BoundInputs& b, FormulaId id) {
  if (!b.kappa) throw DomainError(std::string("bounds: ") + to_string(id) + " needs kappa");
  return *b.kappa;
}

}  // namespace

double m_min(FormulaId id, const BoundInputs& b, std::optional<double> width) {
  validate(b);
  const double eta_sq = b.eta * b.eta;
  const double ratio6 = std::pow(b.sigma / b.alpha, 6);
  const double gamma_sq = b.gamma * b.gamma;
  switch (id) {
    case FormulaId::kThmS: {
      if (!width) throw DomainError("bounds: thm_S needs the width w(D S)");
      require(*width >= 0.0, "bounds: width must be nonnegative");
      return std::pow(4.0, 8) / eta_sq * ratio6 * b.C * b.C * (*width) * (*width);
    }
    case FormulaId::kThmMain:
      return 36.0 * std::pow(4.0, 8) / eta_sq * ratio6 * (b.rho / gamma_sq) * b.C * b.C * sparse_log(b);
    case FormulaId::kCorNon: {
      const double kappa = require_kappa(b, id);
      return 9.0 * std::pow(2.0, 15) * kPi * kPi * kPi / eta_sq * (b.rho * kappa * kappa * kappa / gamma_sq) *
             sparse_log(b);
    }
    case FormulaId::kCorSgauss:
      return 9.0 * std::pow(2.0, 15) * kPi * kPi * kPi / eta_sq * (b.rho / gamma_sq) * sparse_log(b);
    case FormulaId::kThmMainGauss: {
      const double kappa = require_kappa(b, id);
      return 18.0 * std::pow(2.0, 9) * kPi * kE / eta_sq * (b.rho * kappa / gamma_sq) * static_cast<double>(b.s) *
             std::log(2.0 * static_cast<double>(b.n));
    }
  }
  throw DomainError("bounds: unknown formula");
}

double success_rate(FormulaId id, const BoundInputs& b) {
  validate(b);
  switch (id) {
    case FormulaId::kThmS:
    case FormulaId::kThmMain:
      return std::pow(b.alpha, 4) / (64.0 * 64.0 * std::pow(b.sigma, 4));
    case FormulaId::kCorNon: {
      const double kappa = require_kappa(b, id);
      return kappa * kappa / (std::pow(4.0, 5) * kPi * kPi);
    }
    case FormulaId::kCorSgauss:
      return 1.0 / (std::pow(4.0, 5) * kPi * kPi);
    case FormulaId::kThmMainGauss:
      return 1.0 / (128.0 * kE * kPi);
  }
  throw DomainError("bounds: unknown formula");
}

double success_probability(FormulaId id, const BoundInputs& b, double m) {
  require(m >= 0.0, "success_probability: m must be nonnegative");
  return -std::expm1(-m * success_rate(id, b));
}

MeasurementBound measurement_bound(FormulaId id, const BoundInputs& b, std::optional<double> width) {
  return MeasurementBound{id, m_min(id, b, width), success_rate(id, b)};
}

double estimate_Q(const SubgaussianSpec& spec, const Dictionary& dict, const SgammaParams& p,
                  const std::vector<Vector>& probes, double xi, std::int64_t samples, RngStream& rng) {
  require(xi >= 0.0, "estimate_Q: xi must be nonnegative");
  require(samples >= 1, "estimate_Q: need at least one sample");
  require(!probes.empty(), "estimate_Q: need at least one probe");
  require(spec.dim == dict.dim(), "estimate_Q: row dimension must match the dictionary");
  validate(p, dict.size());
  Matrix images(dict.dim(), static_cast<Index>(probes.size()));
  for (std::size_t j = 0; j < probes.size(); ++j) {
    require(probes[j].size() == dict.size() && in_S_gamma(probes[j], p), "estimate_Q: probe is not in S_gamma");
    images.col(static_cast<Index>(j)) = dict.matrix() * probes[j];
  }
  std::vector<std::int64_t> hits(probes.size(), 0);
  for (std::int64_t k = 0; k < samples; ++k) {
    const Vector phi = sample_row(spec, rng);
    const Vector proj = images.transpose() * phi;
    for (std::size_t j = 0; j < probes.size(); ++j)
      if (std::abs(proj(static_cast<Index>(j))) >= xi) ++hits[j];
  }
  std::int64_t fewest = hits.front();
  for (std::int64_t h : hits) fewest = std::min(fewest, h);
  return static_cast<double>(fewest) / static_cast<double>(samples);
}

WidthEstimate estimate_W(const SubgaussianSpec& spec, const Dictionary& dict, const ConeParams& c, Index m,
                         std::int64_t samples, RngStream& rng) {
  validate(c);
  require(m >= 1, "estimate_W: m must be positive");
  require(samples >= 2, "estimate_W: need at least two samples");
  require(c.n == dict.size(), "estimate_W: cone dimension must equal the number of atoms");
  require(spec.dim == dict.dim(), "estimate_W: row dimension must match the dictionary");
  const Matrix dt = dict.matrix().transpose();
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  RunningStats stats;
  for (std::int64_t k = 0; k < samples; ++k) {
    Vector acc = Vector::Zero(dict.dim());
    for (Index i = 0; i < m; ++i) {
      const double sign = rng.rademacher();
      acc += sign * sample_row(spec, rng);
    }
    stats.add(cone_sup(nonincreasing_rearrangement(scale * (dt * acc)), c));
  }
  WidthEstimate out;
  out.mean = stats.mean();
  out.std_error = stats.std_error();
  out.samples = samples;
  out.estimator = WidthEstimator::kConeProjectionExact;
  out.theory_bound = dict.rho() > 0.0 ? spec.width_constant * spec.sigma * theory_width_bound(c, dict.rho()) : 0.0;
  return out;
}

MendelsonBound mendelson_lower_bound(const BoundInputs& b, double width, double m, double t) {
  require(t > 0.0, "mendelson_lower_bound: t must be positive");
  require(m >= 0.0, "mendelson_lower_bound: m must be nonnegative");
  require(width >= 0.0, "mendelson_lower_bound: width must be nonnegative");
  require(b.alpha > 0.0 && b.sigma > 0.0 && b.eta > 0.0 && b.C > 0.0, "mendelson_lower_bound: invalid inputs");
  const double ratio = b.alpha / b.sigma;
  MendelsonBound out;
  out.value = b.alpha * b.eta / 64.0 * ratio * ratio * std::sqrt(m) - 2.0 * b.C * b.sigma * width -
              b.alpha * b.eta / 4.0 * t;
  out.probability = -std::expm1(-t * t / 2.0);
  return out;
}

}  // namespace nsplab
