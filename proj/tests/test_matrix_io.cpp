#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "nsplab/errors.hpp"
#include "nsplab/matrix_io.hpp"

using namespace nsplab;

TEST(MatrixIo, RoundTripIsBitExact) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal;
  Matrix a(4, 3);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 3; ++j) a(i, j) = normal(gen) * std::pow(10.0, static_cast<double>(i * 5 - 8));
  a(0, 0) = 0.1;
  std::stringstream ss;
  write_matrix(ss, a);
  const Matrix b = read_matrix(ss);
  ASSERT_EQ(b.rows(), 4);
  ASSERT_EQ(b.cols(), 3);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 3; ++j) EXPECT_EQ(a(i, j), b(i, j));
}

TEST(MatrixIo, HeaderAndRowLayout) {
  std::stringstream ss;
  Matrix a(2, 2);
  a << 1, 2.5, -3, 0;
  write_matrix(ss, a);
  EXPECT_EQ(ss.str(), "2 2\n1 2.5\n-3 0\n");
}

TEST(MatrixIo, RejectsMalformedInput) {
  std::stringstream bad_header("x 2\n1 2\n");
  EXPECT_THROW(read_matrix(bad_header), DomainError);
  std::stringstream short_data("2 2\n1 2 3\n");
  EXPECT_THROW(read_matrix(short_data), DomainError);
  std::stringstream extra("1 1\n1 2\n");
  EXPECT_THROW(read_matrix(extra), DomainError);
  std::stringstream nonfinite("1 1\ninf\n");
  EXPECT_THROW(read_matrix(nonfinite), DomainError);
  EXPECT_THROW(read_matrix_file("/nonexistent/matrix.txt"), DomainError);
}

TEST(MatrixIo, VectorFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "nsplab_io_test";
  std::filesystem::create_directories(dir);
  Matrix col(3, 1);
  col << 1, 2, 3;
  write_matrix_file((dir / "col.txt").string(), col);
  write_matrix_file((dir / "row.txt").string(), col.transpose());
  EXPECT_EQ(read_vector_file((dir / "col.txt").string()), col.col(0));
  EXPECT_EQ(read_vector_file((dir / "row.txt").string()), col.col(0));
  write_matrix_file((dir / "mat.txt").string(), Matrix::Ones(2, 2));
  EXPECT_THROW(read_vector_file((dir / "mat.txt").string()), DomainError);
}

TEST(MatrixIo, FormatDouble) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(3.0), "3");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
}
