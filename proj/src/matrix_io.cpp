#include "nsplab/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nsplab/errors.hpp"

namespace nsplab {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Matrix read_matrix(std::istream& in) {
  long rows = -1, cols = -1;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0) throw DomainError("matrix text: bad header, expected '<rows> <cols>'");
  Matrix a(rows, cols);
  std::string token;
  for (long i = 0; i < rows; ++i) {
    for (long j = 0; j < cols; ++j) {
      if (!(in >> token)) throw DomainError("matrix text: truncated data");
      char* end = nullptr;
      const double v = std::strtod(token.c_str(), &end);
      if (end == token.c_str() || *end != '\0') throw DomainError("matrix text: bad number '" + token + "'");
      if (!std::isfinite(v)) throw DomainError("matrix text: entries must be finite");
      a(i, j) = v;
    }
  }
  if (in >> token) throw DomainError("matrix text: trailing data after " + std::to_string(rows * cols) + " entries");
  return a;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open matrix file: " + path);
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const Matrix& a) {
  out << a.rows() << ' ' << a.cols() << '\n';
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(a(i, j));
    }
    out << '\n';
  }
}

void write_matrix_file(const std::string& path, const Matrix& a) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write matrix file: " + path);
  write_matrix(out, a);
}

Vector read_vector_file(const std::string& path) {
  const Matrix a = read_matrix_file(path);
  if (a.cols() == 1) return a.col(0);
  if (a.rows() == 1) return a.row(0).transpose();
  throw DomainError("vector file must have a single row or column: " + path);
}

}  // namespace nsplab
