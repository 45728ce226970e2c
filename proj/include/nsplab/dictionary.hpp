#pragma once

#include <optional>
#include <string>

#include "nsplab/numerics.hpp"
#include "nsplab/rng.hpp"

namespace nsplab {

enum class DictionaryKind { kGaussianUnitNorm, kIdentity, kParsevalRandom, kUserMatrix };

const char* to_string(DictionaryKind kind);
DictionaryKind parse_dictionary_kind(const std::string& name);

/// A d x n dictionary with its column-norm bound rho = max_i ||d_i||^2 and
/// operator norm cached at construction. Immutable.
class Dictionary {
 public:
  explicit Dictionary(Matrix atoms);

  const Matrix& matrix() const { return atoms_; }
  Index dim() const { return atoms_.rows(); }
  Index size() const { return atoms_.cols(); }
  double rho() const { return rho_; }
  double op_norm() const { return op_norm_; }

 private:
  Matrix atoms_;
  double rho_;
  double op_norm_;
};

/// Largest squared column norm.
double max_column_norm_sq(const Matrix& a);

/// Builds a dictionary of the requested kind. `user` is required for (and
/// only used by) kUserMatrix.
Dictionary make_dictionary(DictionaryKind kind, Index d, Index n, RngStream& rng,
                           const std::optional<Matrix>& user = std::nullopt);

inline constexpr double kFullSparkRelDetTol = 1e-10;
inline constexpr double kFullSparkBudget = 1e6;

/// True iff every d x d column submatrix has |det| above kFullSparkRelDetTol
/// times the product of its column norms. Throws BudgetExceeded when
/// C(n, d) exceeds kFullSparkBudget; throws DomainError when n < d.
bool full_spark_check(const Dictionary& dict);

}  // namespace nsplab
