#pragma once

#include <limits>
#include <vector>

#include "nsplab/numerics.hpp"

namespace nsplab {

enum class ConstraintSense { kLessEqual, kEqual, kGreaterEqual };

/// maximize objective . x
/// subject to  constraints.row(i) . x  (sense[i])  rhs(i)
///             lower(j) <= x(j) <= upper(j)   (either side may be infinite)
struct LpProblem {
  Vector objective;
  Matrix constraints;
  Vector rhs;
  std::vector<ConstraintSense> sense;
  Vector lower;
  Vector upper;

  /// n variables with bounds [0, +inf) and no constraints yet.
  static LpProblem nonnegative(Index num_vars);
  void add_constraint(const Vector& row, ConstraintSense s, double b);
  Index num_vars() const { return objective.size(); }
  Index num_constraints() const { return constraints.rows(); }
};

enum class LpStatus { kOptimal, kUnbounded, kInfeasible };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Vector x;
  double value = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
};

const char* to_string(LpStatus status);

/// Two-phase dense simplex with Bland's smallest-index rule. Deterministic:
/// the same problem always yields the same vertex.
LpResult solve_lp(const LpProblem& problem, double tol = defaults::kLpTol);

}  // namespace nsplab
