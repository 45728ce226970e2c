#include "nsplab/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nsplab/errors.hpp"

namespace nsplab {

LpProblem LpProblem::nonnegative(Index num_vars) {
  LpProblem p;
  p.objective = Vector::Zero(num_vars);
  p.constraints = Matrix(0, num_vars);
  p.rhs = Vector(0);
  p.lower = Vector::Zero(num_vars);
  p.upper = Vector::Constant(num_vars, std::numeric_limits<double>::infinity());
  return p;
}

void LpProblem::add_constraint(const Vector& row, ConstraintSense s, double b) {
  require(row.size() == num_vars(), "LpProblem::add_constraint: row length mismatch");
  constraints.conservativeResize(constraints.rows() + 1, num_vars());
  constraints.row(constraints.rows() - 1) = row.transpose();
  rhs.conservativeResize(rhs.size() + 1);
  rhs(rhs.size() - 1) = b;
  sense.push_back(s);
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kInfeasible: return "infeasible";
  }
  return "unknown";
}

namespace {

// x_original(j) = offset(j) + sum_k coef * y(k), y >= 0.
struct VariableMap {
  struct Term {
    Index y;
    double coef;
  };
  std::vector<std::vector<Term>> terms;
  Vector offset;
  Index num_y = 0;
};

class Tableau {
 public:
  Tableau(Index rows, Index cols) : t_(Matrix::Zero(rows, cols + 1)), basis_(static_cast<std::size_t>(rows), -1) {}

  Index rows() const { return t_.rows(); }
  Index cols() const { return t_.cols() - 1; }
  double& at(Index r, Index c) { return t_(r, c); }
  double at(Index r, Index c) const { return t_(r, c); }
  double& rhs(Index r) { return t_(r, t_.cols() - 1); }
  double rhs(Index r) const { return t_(r, t_.cols() - 1); }
  Index& basic(Index r) { return basis_[static_cast<std::size_t>(r)]; }
  Index basic(Index r) const { return basis_[static_cast<std::size_t>(r)]; }

  void pivot(Index pr, Index pc) {
    const double p = t_(pr, pc);
    t_.row(pr) /= p;
    for (Index r = 0; r < t_.rows(); ++r) {
      if (r == pr) continue;
      const double f = t_(r, pc);
      if (f != 0.0) t_.row(r) -= f * t_.row(pr);
    }
    basic(pr) = pc;
  }

  void drop_row(Index r) {
    const Index last = t_.rows() - 1;
    if (r != last) {
      t_.row(r) = t_.row(last);
      basis_[static_cast<std::size_t>(r)] = basis_[static_cast<std::size_t>(last)];
    }
    t_.conservativeResize(last, Eigen::NoChange);
    basis_.pop_back();
  }

 private:
  Matrix t_;
  std::vector<Index> basis_;
};

enum class PhaseOutcome { kOptimal, kUnbounded };

// Maximizes cost . z over the current tableau, only letting columns with
// allowed[c] enter. Bland's rule for both entering and leaving variables.
PhaseOutcome run_phase(Tableau& tab, const Vector& cost, const std::vector<bool>& allowed, double tol,
                       int& iterations) {
  const Index cols = tab.cols();
  const long cap = 200000L + 100L * static_cast<long>(tab.rows() + cols);
  for (long guard = 0;; ++guard) {
    if (guard > cap) throw std::runtime_error("solve_lp: iteration cap exceeded");
    Index entering = -1;
    for (Index c = 0; c < cols && entering < 0; ++c) {
      if (!allowed[static_cast<std::size_t>(c)]) continue;
      double reduced = -cost(c);
      for (Index r = 0; r < tab.rows(); ++r) reduced += cost(tab.basic(r)) * tab.at(r, c);
      if (reduced < -tol) entering = c;
    }
    if (entering < 0) return PhaseOutcome::kOptimal;

    Index leaving = -1;
    double best_ratio = 0.0;
    for (Index r = 0; r < tab.rows(); ++r) {
      const double a = tab.at(r, entering);
      if (a <= tol) continue;
      const double ratio = tab.rhs(r) / a;
      if (leaving < 0 || ratio < best_ratio - tol ||
          (std::abs(ratio - best_ratio) <= tol && tab.basic(r) < tab.basic(leaving))) {
        leaving = r;
        best_ratio = ratio;
      }
    }
    if (leaving < 0) return PhaseOutcome::kUnbounded;
    tab.pivot(leaving, entering);
    ++iterations;
  }
}

}  // namespace

LpResult solve_lp(const LpProblem& p, double tol) {
  const Index n = p.num_vars();
  const Index m = p.num_constraints();
  require(tol > 0.0, "solve_lp: tol must be positive");
  require(p.constraints.cols() == n && p.rhs.size() == m && static_cast<Index>(p.sense.size()) == m,
          "solve_lp: inconsistent constraint dimensions");
  require(p.lower.size() == n && p.upper.size() == n, "solve_lp: bound vectors must match variable count");

  // Substitute bounded variables by nonnegative ones.
  VariableMap vars;
  vars.terms.resize(static_cast<std::size_t>(n));
  vars.offset = Vector::Zero(n);
  std::vector<std::pair<Index, double>> upper_rows;  // y index, width
  for (Index j = 0; j < n; ++j) {
    const double lo = p.lower(j), hi = p.upper(j);
    auto& t = vars.terms[static_cast<std::size_t>(j)];
    if (std::isfinite(lo)) {
      vars.offset(j) = lo;
      t.push_back({vars.num_y, 1.0});
      if (std::isfinite(hi)) upper_rows.emplace_back(vars.num_y, hi - lo);
      ++vars.num_y;
    } else if (std::isfinite(hi)) {
      vars.offset(j) = hi;
      t.push_back({vars.num_y++, -1.0});
    } else {
      t.push_back({vars.num_y++, 1.0});
      t.push_back({vars.num_y++, -1.0});
    }
  }
  const Index ny = vars.num_y;
  const Index rows = m + static_cast<Index>(upper_rows.size());

  Matrix a = Matrix::Zero(rows, ny);
  Vector b(rows);
  std::vector<ConstraintSense> sense(static_cast<std::size_t>(rows));
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j)
      for (const auto& term : vars.terms[static_cast<std::size_t>(j)]) a(i, term.y) += p.constraints(i, j) * term.coef;
    b(i) = p.rhs(i) - p.constraints.row(i).dot(vars.offset);
    sense[static_cast<std::size_t>(i)] = p.sense[static_cast<std::size_t>(i)];
  }
  for (std::size_t k = 0; k < upper_rows.size(); ++k) {
    const Index i = m + static_cast<Index>(k);
    a(i, upper_rows[k].first) = 1.0;
    b(i) = upper_rows[k].second;
    sense[static_cast<std::size_t>(i)] = ConstraintSense::kLessEqual;
  }
  for (Index i = 0; i < rows; ++i) {
    if (b(i) < 0.0) {
      a.row(i) *= -1.0;
      b(i) = -b(i);
      auto& s = sense[static_cast<std::size_t>(i)];
      if (s == ConstraintSense::kLessEqual) s = ConstraintSense::kGreaterEqual;
      else if (s == ConstraintSense::kGreaterEqual) s = ConstraintSense::kLessEqual;
    }
  }

  // Column layout: [y | slack/surplus | artificial].
  Index num_slack = 0, num_art = 0;
  for (auto s : sense) {
    if (s != ConstraintSense::kEqual) ++num_slack;
    if (s != ConstraintSense::kLessEqual) ++num_art;
  }
  const Index total = ny + num_slack + num_art;
  Matrix standard = Matrix::Zero(rows, total);
  standard.leftCols(ny) = a;
  Tableau tab(rows, total);
  {
    Index slack = ny, art = ny + num_slack;
    for (Index i = 0; i < rows; ++i) {
      const auto s = sense[static_cast<std::size_t>(i)];
      if (s == ConstraintSense::kLessEqual) {
        standard(i, slack) = 1.0;
        tab.basic(i) = slack++;
      } else {
        if (s == ConstraintSense::kGreaterEqual) standard(i, slack++) = -1.0;
        standard(i, art) = 1.0;
        tab.basic(i) = art++;
      }
    }
  }
  for (Index i = 0; i < rows; ++i) {
    for (Index c = 0; c < total; ++c) tab.at(i, c) = standard(i, c);
    tab.rhs(i) = b(i);
  }
  std::vector<Index> row_origin(static_cast<std::size_t>(rows));
  for (Index i = 0; i < rows; ++i) row_origin[static_cast<std::size_t>(i)] = i;

  LpResult result;
  const double feas_tol = tol * std::max(1.0, b.size() > 0 ? b.cwiseAbs().maxCoeff() : 0.0);
  auto is_artificial = [&](Index c) { return c >= ny + num_slack; };

  if (num_art > 0) {
    Vector phase1_cost = Vector::Zero(total);
    phase1_cost.tail(num_art).setConstant(-1.0);
    std::vector<bool> allowed(static_cast<std::size_t>(total), true);
    run_phase(tab, phase1_cost, allowed, tol, result.iterations);
    double infeasibility = 0.0;
    for (Index r = 0; r < tab.rows(); ++r)
      if (is_artificial(tab.basic(r))) infeasibility += tab.rhs(r);
    if (infeasibility > feas_tol) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    // Drive zero-level artificials out of the basis; rows where that is
    // impossible are linearly dependent and get dropped.
    for (Index r = tab.rows() - 1; r >= 0; --r) {
      if (!is_artificial(tab.basic(r))) continue;
      Index col = -1;
      double best = tol;
      for (Index c = 0; c < ny + num_slack; ++c) {
        if (std::abs(tab.at(r, c)) > best) {
          best = std::abs(tab.at(r, c));
          col = c;
        }
      }
      if (col >= 0) {
        tab.pivot(r, col);
      } else {
        const Index last = tab.rows() - 1;
        row_origin[static_cast<std::size_t>(r)] = row_origin[static_cast<std::size_t>(last)];
        row_origin.pop_back();
        tab.drop_row(r);
      }
    }
  }

  Vector cost = Vector::Zero(total);
  for (Index j = 0; j < n; ++j)
    for (const auto& term : vars.terms[static_cast<std::size_t>(j)]) cost(term.y) += p.objective(j) * term.coef;
  std::vector<bool> allowed(static_cast<std::size_t>(total));
  for (Index c = 0; c < total; ++c) allowed[static_cast<std::size_t>(c)] = !is_artificial(c);
  if (run_phase(tab, cost, allowed, tol, result.iterations) == PhaseOutcome::kUnbounded) {
    result.status = LpStatus::kUnbounded;
    return result;
  }

  // Re-solve the final basis against the untouched standard-form data; this
  // removes the round-off accumulated by the tableau updates.
  Vector z = Vector::Zero(total);
  const Index brows = tab.rows();
  for (Index r = 0; r < brows; ++r) z(tab.basic(r)) = std::max(0.0, tab.rhs(r));
  if (brows > 0) {
    Matrix basis_matrix(brows, brows);
    Vector basis_rhs(brows);
    for (Index r = 0; r < brows; ++r) {
      basis_rhs(r) = b(row_origin[static_cast<std::size_t>(r)]);
      for (Index k = 0; k < brows; ++k) basis_matrix(r, k) = standard(row_origin[static_cast<std::size_t>(r)], tab.basic(k));
    }
    Eigen::FullPivLU<Matrix> lu(basis_matrix);
    if (lu.isInvertible()) {
      const Vector refined = lu.solve(basis_rhs);
      if (refined.allFinite() && (basis_matrix * refined - basis_rhs).norm() <= feas_tol &&
          refined.minCoeff() >= -feas_tol) {
        for (Index k = 0; k < brows; ++k) z(tab.basic(k)) = std::max(0.0, refined(k));
      }
    }
  }

  result.x = vars.offset;
  for (Index j = 0; j < n; ++j)
    for (const auto& term : vars.terms[static_cast<std::size_t>(j)]) result.x(j) += term.coef * z(term.y);
  result.value = p.objective.dot(result.x);
  result.status = LpStatus::kOptimal;
  return result;
}

}  // namespace nsplab
