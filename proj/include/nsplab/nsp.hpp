#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "nsplab/dictionary.hpp"
#include "nsplab/numerics.hpp"
#include "nsplab/rng.hpp"

namespace nsplab {

/// Parameters of S_gamma = { x on the unit sphere : ||x_T||_1 >= gamma ||x_{T^c}||_1 for some |T| <= s }.
struct SgammaParams {
  double gamma = 1.0;
  Index s = 1;
};

void validate(const SgammaParams& p, Index n);

/// Membership in S_gamma. It suffices to test T = indices of the s largest
/// |x_i| (ties to the lowest index), since that support maximizes ||x_T||_1.
bool in_S_gamma(const Vector& x, const SgammaParams& p, double tol = 1e-9);

/// Indices of the s largest |x_i|, ties broken by lowest index, sorted ascending.
std::vector<Index> largest_support(const Vector& x, Index s);

/// Uniformly random s-subset of {0, ..., n-1}, sorted ascending.
std::vector<Index> random_support(Index n, Index s, RngStream& rng);

enum class NspVerdict { kHolds, kFails };
const char* to_string(NspVerdict v);

struct SupportValue {
  std::vector<Index> support;
  double value = 0.0;  // sup over ker(A) of ||x_T||_1 / ||x_{T^c}||_1
};

/// Result of exact stable-NSP certification.
///
/// gamma_star = sup over nonzero kernel vectors x and |T| = s of
/// ||x_T||_1 / ||x_{T^c}||_1 (+inf when some kernel vector lives on T).
/// The NSP holds iff gamma_star < 1; a tie at 1 is a failure.
struct NspCertificate {
  double gamma_star = 0.0;
  NspVerdict verdict = NspVerdict::kHolds;
  Index s = 0;
  double tol = 0.0;
  Index kernel_dim = 0;
  /// Support and kernel vector attaining gamma_star, normalized so that
  /// ||x_{T^c}||_1 = 1 (or ||x||_2 = 1 when gamma_star is infinite).
  std::optional<std::vector<Index>> witness_support;
  std::optional<Vector> witness;
  std::vector<SupportValue> per_support_values;

  bool holds() const { return verdict == NspVerdict::kHolds; }
};

inline constexpr double kNspBudget = 1e6;

/// Exact certification via one LP per (support, sign pattern); the number of
/// LPs C(n, s) * 2^s must stay within kNspBudget (else BudgetExceeded).
NspCertificate certify_nsp(const Matrix& a, Index s, double tol = 1e-9);

/// Multistart local search result for inf { ||D x||_2 : x in S_gamma }.
/// eta_upper is the best value *found*, hence an upper bound on the infimum.
struct EtaEstimate {
  double eta_upper = std::numeric_limits<double>::infinity();
  std::int64_t probes = 0;  // objective evaluations
  Index restarts = 0;
  Vector witness;
};

struct EtaSearchOptions {
  double initial_step = 1e-2;
  int max_iter = 10000;
  double rel_tol = 1e-9;
};

/// Projected gradient descent of ||D x||_2^2 on the unit sphere intersected
/// with the cone {||x_T||_1 >= gamma ||x_{T^c}||_1} for random supports T.
/// Any vectors in `starts` (must be in S_gamma) are used as extra starting
/// points, so the result never exceeds ||D x||_2 for those x.
EtaEstimate estimate_eta(const Dictionary& dict, const SgammaParams& p, Index restarts, RngStream& rng,
                         const std::vector<Vector>& starts = {}, const EtaSearchOptions& options = {});

/// Rigorous lower bound on inf { ||A x||_2 : x in S_gamma } for any gamma in
/// (cert.gamma_star, 1]:  sigma_min+(A) (gamma - gamma_star) / ((1 + gamma) sqrt(n)),
/// where sigma_min+ is the smallest nonzero singular value. Every x in S_gamma
/// is at l2-distance at least (gamma - gamma_star) / ((1 + gamma) sqrt(n))
/// from ker(A). Returns 0 when gamma <= gamma_star.
double certified_eta_lower_bound(const Matrix& a, const NspCertificate& cert, double gamma);

/// ((2 gamma + 2) / (1 - gamma)) sigma_s(x) + 2 eps / eta.
double recovery_error_bound(double gamma, double eta, double sigma_s_x, double eps);

enum class DnspRoute { kFullSparkEquivalence };
const char* to_string(DnspRoute r);

struct DnspResult {
  NspVerdict verdict = NspVerdict::kFails;
  DnspRoute route = DnspRoute::kFullSparkEquivalence;
  NspCertificate certificate;  // of Phi * D
};

/// D-NSP of Phi for a full-spark D, decided as the NSP of Phi * D.
/// Refuses (DomainError) when D is not full spark.
DnspResult d_nsp_check(const Dictionary& dict, const Matrix& phi, Index s, double tol = 1e-9);

}  // namespace nsplab
