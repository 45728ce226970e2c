#include "nsplab/dictionary.hpp"

#include <cmath>

#include "nsplab/errors.hpp"

namespace nsplab {

const char* to_string(DictionaryKind kind) {
  switch (kind) {
    case DictionaryKind::kGaussianUnitNorm: return "gaussian_unit_norm";
    case DictionaryKind::kIdentity: return "identity";
    case DictionaryKind::kParsevalRandom: return "parseval_random";
    case DictionaryKind::kUserMatrix: return "user_matrix";
  }
  return "unknown";
}

DictionaryKind parse_dictionary_kind(const std::string& name) {
  if (name == "gaussian_unit_norm") return DictionaryKind::kGaussianUnitNorm;
  if (name == "identity") return DictionaryKind::kIdentity;
  if (name == "parseval_random") return DictionaryKind::kParsevalRandom;
  if (name == "user_matrix") return DictionaryKind::kUserMatrix;
  throw DomainError("unknown dictionary kind: " + name);
}

double max_column_norm_sq(const Matrix& a) {
  return a.cols() == 0 ? 0.0 : a.colwise().squaredNorm().maxCoeff();
}

Dictionary::Dictionary(Matrix atoms) : atoms_(std::move(atoms)) {
  require(atoms_.allFinite(), "Dictionary: entries must be finite");
  rho_ = max_column_norm_sq(atoms_);
  op_norm_ = operator_norm(atoms_);
}

namespace {

Matrix gaussian_matrix(Index rows, Index cols, RngStream& rng) {
  Matrix g(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) g(i, j) = rng.gaussian();
  return g;
}

}  // namespace

Dictionary make_dictionary(DictionaryKind kind, Index d, Index n, RngStream& rng, const std::optional<Matrix>& user) {
  switch (kind) {
    case DictionaryKind::kUserMatrix:
      require(user.has_value(), "make_dictionary: user_matrix needs a matrix");
      return Dictionary(*user);
    case DictionaryKind::kIdentity:
      require(d >= 1 && d == n, "make_dictionary: identity needs d == n >= 1");
      return Dictionary(Matrix::Identity(d, n));
    case DictionaryKind::kGaussianUnitNorm: {
      require(d >= 1 && n >= d, "make_dictionary: gaussian_unit_norm needs n >= d >= 1");
      Matrix g = gaussian_matrix(d, n, rng);
      for (Index j = 0; j < n; ++j) {
        // A zero column has probability zero; redraw rather than divide by 0.
        while (g.col(j).norm() == 0.0)
          for (Index i = 0; i < d; ++i) g(i, j) = rng.gaussian();
        g.col(j).normalize();
      }
      return Dictionary(std::move(g));
    }
    case DictionaryKind::kParsevalRandom: {
      require(d >= 1 && n >= d, "make_dictionary: parseval_random needs n >= d >= 1");
      // Orthonormal columns of the n x d transpose become orthonormal rows.
      const Matrix g = gaussian_matrix(n, d, rng);
      Eigen::HouseholderQR<Matrix> qr(g);
      const Matrix q = qr.householderQ() * Matrix::Identity(n, d);
      return Dictionary(q.transpose());
    }
  }
  throw DomainError("make_dictionary: unknown kind");
}

bool full_spark_check(const Dictionary& dict) {
  const Matrix& a = dict.matrix();
  const Index d = a.rows(), n = a.cols();
  require(n >= d, "full_spark_check: needs at least d columns");
  const double count = binomial(n, d);
  if (count > kFullSparkBudget)
    throw BudgetExceeded("full_spark_check: C(" + std::to_string(n) + ", " + std::to_string(d) +
                         ") submatrices exceed the budget of 1e6");
  const Vector norms = a.colwise().norm().transpose();
  bool full = true;
  Matrix sub(d, d);
  for_each_subset(n, d, [&](const std::vector<Index>& cols) {
    double scale = 1.0;
    for (Index k = 0; k < d; ++k) {
      sub.col(k) = a.col(cols[static_cast<std::size_t>(k)]);
      scale *= norms(cols[static_cast<std::size_t>(k)]);
    }
    const double det = sub.partialPivLu().determinant();
    if (!(std::abs(det) > kFullSparkRelDetTol * scale)) full = false;
    return full;
  });
  return full;
}

}  // namespace nsplab
