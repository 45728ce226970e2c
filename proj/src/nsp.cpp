#include "nsplab/nsp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "nsplab/errors.hpp"
#include "nsplab/lp.hpp"

namespace nsplab {

void validate(const SgammaParams& p, Index n) {
  require(p.gamma > 0.0 && p.gamma <= 1.0, "S_gamma: gamma must lie in (0, 1]");
  require(p.s >= 1 && p.s <= n, "S_gamma: sparsity must satisfy 1 <= s <= n");
}

std::vector<Index> largest_support(const Vector& x, Index s) {
  std::vector<Index> order(static_cast<std::size_t>(x.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return std::abs(x(a)) > std::abs(x(b)); });
  order.resize(static_cast<std::size_t>(std::min<Index>(s, x.size())));
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<Index> random_support(Index n, Index s, RngStream& rng) {
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  for (Index i = 0; i < s; ++i) {
    const Index j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(s));
  std::sort(idx.begin(), idx.end());
  return idx;
}

bool in_S_gamma(const Vector& x, const SgammaParams& p, double tol) {
  if (x.size() == 0 || std::abs(x.norm() - 1.0) > tol) return false;
  const auto support = largest_support(x, p.s);
  double head = 0.0;
  for (Index i : support) head += std::abs(x(i));
  const double tail = x.lpNorm<1>() - head;
  return head >= p.gamma * tail - tol;
}

const char* to_string(NspVerdict v) { return v == NspVerdict::kHolds ? "holds" : "fails"; }

const char* to_string(DnspRoute) { return "full_spark_equivalence"; }

namespace {

std::vector<Index> complement(const std::vector<Index>& support, Index n) {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(n) - support.size());
  std::size_t k = 0;
  for (Index i = 0; i < n; ++i) {
    if (k < support.size() && support[k] == i) {
      ++k;
      continue;
    }
    out.push_back(i);
  }
  return out;
}

Matrix select_rows(const Matrix& a, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), a.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = a.row(rows[r]);
  return out;
}

double l1_on(const Vector& x, const std::vector<Index>& idx) {
  double acc = 0.0;
  for (Index i : idx) acc += std::abs(x(i));
  return acc;
}

struct SupportSolve {
  double value = 0.0;
  Vector x;  // kernel vector attaining value (unnormalized)
};

// sup { ||x_T||_1 : x = N c, ||x_{T^c}||_1 <= 1 }, assuming N_{T^c} injective.
SupportSolve solve_support(const Matrix& basis, const std::vector<Index>& support, const std::vector<Index>& rest,
                           double tol) {
  const Index k = basis.cols();
  const Index tail = static_cast<Index>(rest.size());
  // Variables: c (free, k) then t (>= 0, one per off-support index).
  LpProblem lp;
  lp.objective = Vector::Zero(k + tail);
  lp.constraints = Matrix::Zero(2 * tail + 1, k + tail);
  lp.rhs = Vector::Zero(2 * tail + 1);
  lp.sense.assign(static_cast<std::size_t>(2 * tail + 1), ConstraintSense::kLessEqual);
  lp.lower = Vector::Zero(k + tail);
  lp.upper = Vector::Constant(k + tail, std::numeric_limits<double>::infinity());
  lp.lower.head(k).setConstant(-std::numeric_limits<double>::infinity());
  for (Index j = 0; j < tail; ++j) {
    const auto row = basis.row(rest[static_cast<std::size_t>(j)]);
    lp.constraints.block(2 * j, 0, 1, k) = row;
    lp.constraints(2 * j, k + j) = -1.0;
    lp.constraints.block(2 * j + 1, 0, 1, k) = -row;
    lp.constraints(2 * j + 1, k + j) = -1.0;
    lp.constraints(2 * tail, k + j) = 1.0;
  }
  lp.rhs(2 * tail) = 1.0;

  SupportSolve best;
  const Index s = static_cast<Index>(support.size());
  // Flipping c flips every sign, so the first sign can stay +1.
  const std::uint64_t patterns = std::uint64_t{1} << (s - 1);
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    lp.objective.head(k).setZero();
    for (Index i = 0; i < s; ++i) {
      const double sign = (i > 0 && ((mask >> (i - 1)) & 1U)) ? -1.0 : 1.0;
      lp.objective.head(k) += sign * basis.row(support[static_cast<std::size_t>(i)]).transpose();
    }
    const LpResult r = solve_lp(lp, tol);
    if (r.status == LpStatus::kUnbounded) {
      best.value = std::numeric_limits<double>::infinity();
      best.x = Vector();
      return best;
    }
    if (r.status != LpStatus::kOptimal) continue;  // c = 0, t = 0 is always feasible
    if (best.x.size() == 0 || r.value > best.value) {
      best.value = r.value;
      best.x = basis * r.x.head(k);
    }
  }
  return best;
}

}  // namespace

NspCertificate certify_nsp(const Matrix& a, Index s, double tol) {
  const Index n = a.cols();
  require(n >= 1, "certify_nsp: matrix needs at least one column");
  require(s >= 1 && s <= n, "certify_nsp: sparsity must satisfy 1 <= s <= n");
  require(tol > 0.0, "certify_nsp: tol must be positive");
  const double lp_count = binomial(n, s) * std::ldexp(1.0, static_cast<int>(s));
  if (lp_count > kNspBudget)
    throw BudgetExceeded("certify_nsp: C(n, s) * 2^s = " + std::to_string(lp_count) + " LPs exceed the budget of 1e6");

  NspCertificate cert;
  cert.s = s;
  cert.tol = tol;
  const Matrix basis = kernel_basis(a);
  cert.kernel_dim = basis.cols();
  if (cert.kernel_dim == 0) {
    cert.gamma_star = 0.0;
    cert.verdict = NspVerdict::kHolds;
    return cert;
  }

  double best = -1.0;
  for_each_subset(n, s, [&](const std::vector<Index>& support) {
    const auto rest = complement(support, n);
    SupportValue entry{support, 0.0};
    Vector x;
    const Matrix tail_rows = select_rows(basis, rest);
    const Matrix tail_kernel = kernel_basis(tail_rows);
    if (tail_kernel.cols() > 0) {
      // Some kernel vector vanishes off T: the ratio is unbounded.
      entry.value = std::numeric_limits<double>::infinity();
      x = (basis * tail_kernel.col(0)).normalized();
    } else {
      SupportSolve solved = solve_support(basis, support, rest, tol);
      entry.value = solved.value;
      x = std::move(solved.x);
      if (std::isfinite(entry.value) && x.size() > 0) {
        const double tail_mass = l1_on(x, rest);
        if (tail_mass > 0.0) x /= tail_mass;
      }
    }
    if (entry.value > best) {
      best = entry.value;
      if (x.size() > 0 && (std::isinf(entry.value) || entry.value > 0.0)) {
        cert.witness_support = support;
        cert.witness = x;
      }
    }
    cert.per_support_values.push_back(std::move(entry));
    return true;
  });
  cert.gamma_star = std::max(best, 0.0);
  cert.verdict = cert.gamma_star < 1.0 - tol ? NspVerdict::kHolds : NspVerdict::kFails;
  return cert;
}

namespace {

// Pulls x back into {||x_T||_1 >= gamma ||x_{T^c}||_1} by shrinking the tail,
// then renormalizes onto the sphere.
Vector restore(Vector x, const std::vector<bool>& on_support, double gamma) {
  double head = 0.0, tail = 0.0;
  for (Index i = 0; i < x.size(); ++i) (on_support[static_cast<std::size_t>(i)] ? head : tail) += std::abs(x(i));
  if (head <= 1e-300) {
    for (Index i = 0; i < x.size(); ++i) {
      if (on_support[static_cast<std::size_t>(i)]) {
        x.setZero();
        x(i) = 1.0;
        return x;
      }
    }
  }
  if (head < gamma * tail) {
    const double shrink = head / (gamma * tail);
    for (Index i = 0; i < x.size(); ++i)
      if (!on_support[static_cast<std::size_t>(i)]) x(i) *= shrink;
  }
  return x / x.norm();
}

}  // namespace

EtaEstimate estimate_eta(const Dictionary& dict, const SgammaParams& p, Index restarts, RngStream& rng,
                         const std::vector<Vector>& starts, const EtaSearchOptions& options) {
  const Index n = dict.size();
  validate(p, n);
  require(restarts >= 1, "estimate_eta: need at least one restart");
  const Matrix gram = dict.matrix().transpose() * dict.matrix();

  EtaEstimate est;
  double best_sq = std::numeric_limits<double>::infinity();
  const std::size_t total = starts.size() + static_cast<std::size_t>(restarts);
  for (std::size_t run = 0; run < total; ++run) {
    std::vector<Index> support;
    Vector x(n);
    if (run < starts.size()) {
      x = starts[run];
      require(x.size() == n && in_S_gamma(x, p), "estimate_eta: supplied start is not in S_gamma");
      support = largest_support(x, p.s);
    } else {
      support = random_support(n, p.s, rng);
      for (Index i = 0; i < n; ++i) x(i) = rng.gaussian();
    }
    std::vector<bool> on_support(static_cast<std::size_t>(n), false);
    for (Index i : support) on_support[static_cast<std::size_t>(i)] = true;
    if (run >= starts.size()) x = restore(x, on_support, p.gamma);

    double f = x.dot(gram * x);
    ++est.probes;
    double step = options.initial_step;
    for (int it = 0; it < options.max_iter; ++it) {
      const Vector grad = 2.0 * (gram * x);
      bool accepted = false;
      bool first_try = true;
      Vector y;
      double fy = f;
      while (step > 1e-16) {
        y = restore(x - step * grad, on_support, p.gamma);
        fy = y.dot(gram * y);
        ++est.probes;
        if (fy <= f) {
          accepted = true;
          break;
        }
        step *= 0.5;
        first_try = false;
      }
      if (!accepted) break;
      const double moved = (y - x).norm();
      x = std::move(y);
      f = fy;
      if (moved < options.rel_tol) break;
      if (first_try) step = std::min(step * 1.25, 1e6);
    }
    if (f < best_sq) {
      best_sq = f;
      est.witness = x;
    }
  }
  est.restarts = restarts;
  est.eta_upper = std::sqrt(std::max(best_sq, 0.0));
  return est;
}

double certified_eta_lower_bound(const Matrix& a, const NspCertificate& cert, double gamma) {
  require(gamma > 0.0 && gamma <= 1.0, "certified_eta_lower_bound: gamma must lie in (0, 1]");
  if (!std::isfinite(cert.gamma_star) || gamma <= cert.gamma_star) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0.0;
  const double cutoff = defaults::kRankTol * sv(0);
  double smallest = sv(0);
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) smallest = sv(i);
  if (cert.kernel_dim == 0 && sv.size() == a.cols()) return smallest;  // injective: ||Ax|| >= sigma_min
  const double n = static_cast<double>(a.cols());
  return smallest * (gamma - cert.gamma_star) / ((1.0 + gamma) * std::sqrt(n));
}

double recovery_error_bound(double gamma, double eta, double sigma_s_x, double eps) {
  require(gamma > 0.0 && gamma < 1.0, "recovery_error_bound: gamma must lie in (0, 1)");
  require(eta > 0.0, "recovery_error_bound: eta must be positive");
  require(sigma_s_x >= 0.0 && eps >= 0.0, "recovery_error_bound: sigma_s and eps must be nonnegative");
  return (2.0 * gamma + 2.0) / (1.0 - gamma) * sigma_s_x + 2.0 * eps / eta;
}

DnspResult d_nsp_check(const Dictionary& dict, const Matrix& phi, Index s, double tol) {
  require(phi.cols() == dict.dim(), "d_nsp_check: Phi must have d columns");
  if (!full_spark_check(dict))
    throw DomainError("d_nsp_check: dictionary is not full spark; only the full-spark equivalence route is supported");
  DnspResult out;
  out.certificate = certify_nsp(phi * dict.matrix(), s, tol);
  out.verdict = out.certificate.verdict;
  out.route = DnspRoute::kFullSparkEquivalence;
  return out;
}

}  // namespace nsplab
