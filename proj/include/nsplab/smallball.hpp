#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nsplab/dictionary.hpp"
#include "nsplab/nsp.hpp"
#include "nsplab/subgaussian.hpp"
#include "nsplab/width.hpp"

namespace nsplab {

struct BoundInputs {
  double eta = 1.0;
  double gamma = 0.5;
  double rho = 1.0;
  double alpha = 0.79788456080286536;  // sqrt(2 / pi)
  double sigma = 1.0;
  double C = 1.0;
  Index s = 1;
  Index n = 1;
  Index d = 1;
  std::optional<double> kappa;  // covariance condition number, >= 1
};

/// Throws DomainError unless all quantities are positive, gamma in (0, 1),
/// 1 <= s <= n and kappa (if present) >= 1.
void validate(const BoundInputs& b);

enum class FormulaId { kThmS, kThmMain, kCorNon, kCorSgauss, kThmMainGauss };
const char* to_string(FormulaId id);
FormulaId parse_formula_id(const std::string& name);
inline constexpr std::array<FormulaId, 5> kAllFormulas = {FormulaId::kThmS, FormulaId::kThmMain, FormulaId::kCorNon,
                                                          FormulaId::kCorSgauss, FormulaId::kThmMainGauss};

/// Measurement count formulas (natural log):
///   thm_S          (4^8/eta^2)(sigma/alpha)^6 C^2 w^2
///   thm_main       (36 4^8/eta^2)(sigma/alpha)^6 (rho/gamma^2) C^2 s log(sqrt2 n/s)
///   cor_non        (9 2^15 pi^3/eta^2)(rho kappa^3/gamma^2) s log(sqrt2 n/s)
///   cor_sgauss     cor_non with kappa = 1
///   thm_main_gauss (18 2^9 pi e/eta^2)(rho kappa/gamma^2) s log(2n)
/// `width` is required for thm_S; kappa for cor_non and thm_main_gauss.
double m_min(FormulaId id, const BoundInputs& b, std::optional<double> width = std::nullopt);

/// Exponential rate r in the success probability 1 - exp(-m r):
///   thm_S, thm_main  alpha^4 / (64^2 sigma^4)
///   cor_non          kappa^2 / (4^5 pi^2)   (implemented exactly as printed)
///   cor_sgauss       1 / (4^5 pi^2)
///   thm_main_gauss   1 / (128 e pi)
double success_rate(FormulaId id, const BoundInputs& b);

double success_probability(FormulaId id, const BoundInputs& b, double m);

struct MeasurementBound {
  FormulaId formula = FormulaId::kThmS;
  double m_min = 0.0;
  double rate = 0.0;
};

MeasurementBound measurement_bound(FormulaId id, const BoundInputs& b, std::optional<double> width = std::nullopt);

/// min over probes x of the empirical frequency of |<D x, phi>| >= xi. The
/// same phi draws are shared by all probes. Because the true quantity is an
/// infimum over all of S_gamma, the result is an upper bound on it.
double estimate_Q(const SubgaussianSpec& spec, const Dictionary& dict, const SgammaParams& p,
                  const std::vector<Vector>& probes, double xi, std::int64_t samples, RngStream& rng);

/// Mean empirical width W_m(D S_gamma): per sample, h = D^T (1/sqrt m) sum eps_i phi_i
/// and value = sup_{S_gamma} <h, x> = cone_sup(h*).
WidthEstimate estimate_W(const SubgaussianSpec& spec, const Dictionary& dict, const ConeParams& c, Index m,
                         std::int64_t samples, RngStream& rng);

struct MendelsonBound {
  double value = 0.0;
  double probability = 0.0;  // 1 - exp(-t^2 / 2)
};

/// (alpha eta / 64)(alpha / sigma)^2 sqrt(m) - 2 C sigma width - (alpha eta / 4) t.
MendelsonBound mendelson_lower_bound(const BoundInputs& b, double width, double m, double t);

}  // namespace nsplab
