#pragma once

#include <optional>

#include "nsplab/dictionary.hpp"
#include "nsplab/numerics.hpp"

namespace nsplab {

/// min ||x||_1 subject to ||y - B x||_2 <= eps, with B = Phi D.
struct RecoveryProblem {
  Matrix B;
  Vector y;
  double eps = 0.0;
  std::optional<Dictionary> D;  // when present, z_hat = D x_hat is reported
};

enum class SolverStatus { kConverged, kMaxIter, kInfeasible };
const char* to_string(SolverStatus s);

struct RecoveryResult {
  Vector x_hat;
  std::optional<Vector> z_hat;
  double objective = 0.0;  // ||x_hat||_1
  double residual_norm = 0.0;  // ||y - B x_hat||_2
  int iterations = 0;
  SolverStatus status = SolverStatus::kConverged;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool polished = false;
};

struct AdmmParams {
  double rho = 1.0;
  int max_iter = 50000;
  double abs_tol = 1e-9;
  double rel_tol = 1e-7;
  /// For eps = 0, re-solve B_S x_S = y on the detected support and keep it
  /// when it is feasible, sign-consistent and no worse in l1. Every tenth
  /// iteration the same re-solve is also tried with a dual certificate; when
  /// the certificate holds the run stops early as converged.
  bool polish = true;
};

/// sigma_s(x): the sum of the n - s smallest |x_i|.
double best_s_term_error(const Vector& x, Index s);

/// Basis pursuit (eps = 0) as an LP in (x+, x-) solved by the dense simplex.
RecoveryResult solve_bp_lp(const Matrix& b, const Vector& y, double tol = defaults::kLpTol);

/// ADMM on  x - z = 0,  B x - y - w = 0,  with ||z||_1 and the indicator of
/// the eps-ball on w. The x-update solves (I + B^T B) x = rhs through one
/// cached Cholesky factor, which does not depend on the penalty parameter, so
/// residual balancing never refactors.
RecoveryResult solve_l1_synthesis(const RecoveryProblem& p, const AdmmParams& params = {});

struct RecoveryBoundInputs {
  double gamma = 0.5;
  double eta = 1.0;
  double eps = 0.0;
  double C = 1.0;
  double sigma = 1.0;
};

struct RecoveryReport {
  double err_x = 0.0;
  double err_z = 0.0;
  double sigma_s = 0.0;
  double coef_bound = 0.0;    // (2 gamma + 2)/(1 - gamma) sigma_s(x0) + 2 eps / (C sigma eta)
  double signal_bound = 0.0;  // ||D||_2 * coef_bound
  bool violated_x = false;
  bool violated_z = false;
  bool violated() const { return violated_x || violated_z; }
};

/// Compares a recovery with the stable-recovery error bounds. `slack` absorbs
/// solver tolerance when flagging violations.
RecoveryReport evaluate_recovery(const Vector& x0, const RecoveryResult& result, const Dictionary& dict, Index s,
                                 const RecoveryBoundInputs& in, double slack = 1e-6);

}  // namespace nsplab
