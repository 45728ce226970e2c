#include "nsplab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "nsplab/errors.hpp"
#include "nsplab/lp.hpp"

namespace nsplab {

const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::kConverged: return "converged";
    case SolverStatus::kMaxIter: return "max_iter";
    case SolverStatus::kInfeasible: return "infeasible";
  }
  return "unknown";
}

double best_s_term_error(const Vector& x, Index s) {
  require(s >= 0 && s <= x.size(), "best_s_term_error: need 0 <= s <= n");
  const Vector sorted = nonincreasing_rearrangement(x);
  return sorted.tail(x.size() - s).sum();
}

namespace {

void finish(RecoveryResult& r, const Matrix& b, const Vector& y, const std::optional<Dictionary>& dict) {
  r.objective = r.x_hat.lpNorm<1>();
  r.residual_norm = (y - b * r.x_hat).norm();
  if (dict) r.z_hat = dict->matrix() * r.x_hat;
}

}  // namespace

RecoveryResult solve_bp_lp(const Matrix& b, const Vector& y, double tol) {
  require(b.rows() == y.size(), "solve_bp_lp: dimension mismatch between B and y");
  const Index n = b.cols();
  LpProblem lp = LpProblem::nonnegative(2 * n);
  lp.objective = -Vector::Ones(2 * n);
  lp.constraints.resize(b.rows(), 2 * n);
  lp.constraints << b, -b;
  lp.rhs = y;
  lp.sense.assign(static_cast<std::size_t>(b.rows()), ConstraintSense::kEqual);
  const LpResult sol = solve_lp(lp, tol);

  RecoveryResult r;
  r.iterations = sol.iterations;
  if (sol.status != LpStatus::kOptimal) {
    r.status = SolverStatus::kInfeasible;
    r.x_hat = Vector::Zero(n);
  } else {
    r.status = SolverStatus::kConverged;
    r.x_hat = sol.x.head(n) - sol.x.tail(n);
  }
  finish(r, b, y, std::nullopt);
  return r;
}

namespace {

Vector project_ball(const Vector& v, double radius) {
  const double norm = v.norm();
  if (norm <= radius) return v;
  return v * (radius / norm);
}

// Solve B_S x_S = y on the support S of z. Empty when the system is singular,
// inconsistent or the signs disagree with z.
std::optional<Vector> support_solve(const Matrix& b, const Vector& y, const Vector& z, std::vector<Index>& support,
                                    double cutoff) {
  support.clear();
  for (Index i = 0; i < z.size(); ++i)
    if (std::abs(z(i)) > cutoff) support.push_back(i);
  if (support.empty() || static_cast<Index>(support.size()) > b.rows()) return std::nullopt;
  Matrix sub(b.rows(), static_cast<Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) sub.col(static_cast<Index>(k)) = b.col(support[k]);
  Eigen::ColPivHouseholderQR<Matrix> qr(sub);
  if (qr.rank() < sub.cols()) return std::nullopt;
  const Vector coef = qr.solve(y);
  if ((sub * coef - y).norm() > 1e-10 * std::max(1.0, y.norm())) return std::nullopt;
  Vector candidate = Vector::Zero(z.size());
  for (std::size_t k = 0; k < support.size(); ++k) {
    const double v = coef(static_cast<Index>(k));
    if (v * z(support[k]) <= 0.0) return std::nullopt;
    candidate(support[k]) = v;
  }
  return candidate;
}

// Used only in the noiseless case.
bool polish(const Matrix& b, const Vector& y, const Vector& z, Vector& x) {
  std::vector<Index> support;
  const double scale = std::max(1.0, z.cwiseAbs().maxCoeff());
  auto candidate = support_solve(b, y, z, support, 1e-8 * scale);
  if (!candidate) return false;
  if (candidate->lpNorm<1>() > x.lpNorm<1>() + 1e-7 * std::max(1.0, x.lpNorm<1>())) return false;
  x = std::move(*candidate);
  return true;
}

// Optimality certificate for basis pursuit. x is optimal when some lambda has
// B_S^T lambda = sign(x_S) and ||B^T lambda||_inf <= 1; then ||x||_1 = <lambda, y>
// bounds every feasible point from below. lambda is taken as the closest such
// point to the running dual estimate, so this is cheap once ADMM is near the
// right support. Certified up to a relative 1e-9 slack.
bool certified_polish(const Matrix& b, const Vector& y, const Vector& z, const Vector& lambda0, Vector& x) {
  std::vector<Index> support;
  auto candidate = support_solve(b, y, z, support, 0.0);
  if (!candidate) return false;
  const Index k = static_cast<Index>(support.size());
  Matrix sub(b.rows(), k);
  Vector sign(k);
  for (Index j = 0; j < k; ++j) {
    sub.col(j) = b.col(support[static_cast<std::size_t>(j)]);
    sign(j) = (*candidate)(support[static_cast<std::size_t>(j)]) > 0.0 ? 1.0 : -1.0;
  }
  const Eigen::LDLT<Matrix> gram(sub.transpose() * sub);
  const Vector lambda = lambda0 - sub * gram.solve(sub.transpose() * lambda0 - sign);
  if ((sub.transpose() * lambda - sign).cwiseAbs().maxCoeff() > 1e-9) return false;
  if ((b.transpose() * lambda).cwiseAbs().maxCoeff() > 1.0 + 1e-9) return false;
  x = std::move(*candidate);
  return true;
}

}  // namespace

RecoveryResult solve_l1_synthesis(const RecoveryProblem& p, const AdmmParams& params) {
  const Matrix& b = p.B;
  const Vector& y = p.y;
  require(b.rows() == y.size(), "solve_l1_synthesis: dimension mismatch between B and y");
  require(p.eps >= 0.0, "solve_l1_synthesis: eps must be nonnegative");
  require(params.rho > 0.0 && params.max_iter >= 1, "solve_l1_synthesis: invalid parameters");
  if (p.D) require(p.D->size() == b.cols(), "solve_l1_synthesis: dictionary does not match B");
  const Index n = b.cols();
  const Index m = b.rows();

  RecoveryResult r;
  if (y.norm() <= p.eps) {
    r.x_hat = Vector::Zero(n);
    r.status = SolverStatus::kConverged;
    finish(r, b, y, p.D);
    return r;
  }

  // Distance from y to range(B) decides feasibility.
  const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(b);
  const Vector ls = cod.solve(y);
  const double gap = (b * ls - y).norm();
  if (gap > p.eps + 1e-8 * std::max(1.0, y.norm())) {
    r.x_hat = ls;
    r.status = SolverStatus::kInfeasible;
    finish(r, b, y, p.D);
    return r;
  }

  const Eigen::LLT<Matrix> chol(Matrix::Identity(n, n) + b.transpose() * b);
  double rho = params.rho;
  Vector x = ls;
  Vector z = x;
  Vector w = project_ball(b * x - y, p.eps);
  Vector u1 = Vector::Zero(n);
  Vector u2 = Vector::Zero(m);
  const double root_dim = std::sqrt(static_cast<double>(n + m));
  const double root_n = std::sqrt(static_cast<double>(n));

  int it = 0;
  bool converged = false;
  bool certified = false;
  for (; it < params.max_iter; ++it) {
    x = chol.solve((z - u1) + b.transpose() * (y + w - u2));
    const Vector bx = b * x;
    const Vector z_old = z;
    const Vector w_old = w;
    const double thresh = 1.0 / rho;
    for (Index i = 0; i < n; ++i) z(i) = soft_threshold(x(i) + u1(i), thresh);
    w = project_ball(bx - y + u2, p.eps);
    const Vector r1 = x - z;
    const Vector r2 = bx - y - w;
    u1 += r1;
    u2 += r2;

    const double primal = std::sqrt(r1.squaredNorm() + r2.squaredNorm());
    const double dual = rho * ((z - z_old) + b.transpose() * (w - w_old)).norm();
    const double pri_scale =
        std::max({std::sqrt(x.squaredNorm() + bx.squaredNorm()), std::sqrt(z.squaredNorm() + w.squaredNorm()), y.norm()});
    const double dual_scale = rho * (u1 + b.transpose() * u2).norm();
    r.primal_residual = primal;
    r.dual_residual = dual;
    if (primal <= root_dim * params.abs_tol + params.rel_tol * pri_scale &&
        dual <= root_n * params.abs_tol + params.rel_tol * dual_scale) {
      converged = true;
      ++it;
      break;
    }
    if (it % 10 == 9) {
      if (p.eps == 0.0 && params.polish && certified_polish(b, y, z, -rho * u2, x)) {
        converged = certified = true;
        ++it;
        break;
      }
      if (primal > 10.0 * dual) {
        rho *= 2.0;
        u1 /= 2.0;
        u2 /= 2.0;
      } else if (dual > 10.0 * primal) {
        rho /= 2.0;
        u1 *= 2.0;
        u2 *= 2.0;
      }
    }
  }

  r.iterations = it;
  r.status = converged ? SolverStatus::kConverged : SolverStatus::kMaxIter;
  r.x_hat = x;
  r.polished = certified;
  if (converged && !certified && p.eps == 0.0 && params.polish) r.polished = polish(b, y, z, r.x_hat);
  finish(r, b, y, p.D);
  return r;
}

RecoveryReport evaluate_recovery(const Vector& x0, const RecoveryResult& result, const Dictionary& dict, Index s,
                                 const RecoveryBoundInputs& in, double slack) {
  require(in.gamma > 0.0 && in.gamma < 1.0, "evaluate_recovery: gamma must lie in (0, 1)");
  require(in.eta > 0.0 && in.C > 0.0 && in.sigma > 0.0, "evaluate_recovery: eta, C and sigma must be positive");
  require(in.eps >= 0.0, "evaluate_recovery: eps must be nonnegative");
  require(x0.size() == result.x_hat.size() && x0.size() == dict.size(), "evaluate_recovery: dimension mismatch");
  RecoveryReport rep;
  rep.sigma_s = best_s_term_error(x0, s);
  rep.err_x = (result.x_hat - x0).norm();
  rep.err_z = (dict.matrix() * (result.x_hat - x0)).norm();
  rep.coef_bound = (2.0 * in.gamma + 2.0) / (1.0 - in.gamma) * rep.sigma_s + 2.0 * in.eps / (in.C * in.sigma * in.eta);
  rep.signal_bound = dict.op_norm() * rep.coef_bound;
  rep.violated_x = rep.err_x > rep.coef_bound + slack;
  rep.violated_z = rep.err_z > rep.signal_bound + slack;
  return rep;
}

}  // namespace nsplab
