#pragma once

#include <iosfwd>
#include <string>

#include "nsplab/numerics.hpp"

namespace nsplab {

// Text format: first line "<rows> <cols>", then one row per line with
// space-separated decimals. Values are written with 17 significant digits so
// a write/read cycle is bit-exact.

Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const Matrix& a);
void write_matrix_file(const std::string& path, const Matrix& a);

/// Reads a matrix file holding a single row or single column.
Vector read_vector_file(const std::string& path);

/// "%.17g", with inf/nan spelled the way strtod reads them back.
std::string format_double(double x);

}  // namespace nsplab
