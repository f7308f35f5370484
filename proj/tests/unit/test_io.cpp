#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "mlsurf/io.hpp"

namespace {

using namespace mlsurf;
using C = std::complex<double>;

TEST(ParseComplex, Forms) {
  EXPECT_EQ(io::parse_complex("1.5"), C(1.5, 0));
  EXPECT_EQ(io::parse_complex("-2"), C(-2, 0));
  EXPECT_EQ(io::parse_complex("0.3+1.2j"), C(0.3, 1.2));
  EXPECT_EQ(io::parse_complex("0.3-1.2j"), C(0.3, -1.2));
  EXPECT_EQ(io::parse_complex("-0.3-1.2J"), C(-0.3, -1.2));
  EXPECT_EQ(io::parse_complex("2.5j"), C(0, 2.5));
  EXPECT_EQ(io::parse_complex("j"), C(0, 1));
  EXPECT_EQ(io::parse_complex("-j"), C(0, -1));
  EXPECT_EQ(io::parse_complex("1+j"), C(1, 1));
  EXPECT_EQ(io::parse_complex("1e-3+2E+2j"), C(1e-3, 200));
  EXPECT_EQ(io::parse_complex("  4e-1  "), C(0.4, 0));
}

TEST(ParseComplex, RejectsMalformed) {
  EXPECT_THROW(io::parse_complex(""), InvalidArgument);
  EXPECT_THROW(io::parse_complex("abc"), InvalidArgument);
  EXPECT_THROW(io::parse_complex("1+2i"), InvalidArgument);
  EXPECT_THROW(io::parse_complex("1..2j"), InvalidArgument);
}

TEST(PeriodMatrixFile, ReadsGenusTwo) {
  std::ifstream in(std::string(MLSURF_TEST_DATA) + "/genus2.txt");
  ASSERT_TRUE(in);
  const auto p = io::read_period_matrix(in);
  EXPECT_EQ(p.genus(), 2);
  EXPECT_EQ(p.matrix()(0, 1), C(0.3, 0.25));
  EXPECT_EQ(p.matrix()(1, 1), C(-0.1, 0.9));
}

TEST(PeriodMatrixFile, CommentsAndBlankLines) {
  std::istringstream in("# genus\n1\n\n  0+2j  # diagonal\n");
  EXPECT_EQ(io::read_period_matrix(in).matrix()(0, 0), C(0, 2));
}

TEST(PeriodMatrixFile, Errors) {
  std::istringstream asym("2\n1j 0.5\n0.2 1j\n");
  EXPECT_THROW(io::read_period_matrix(asym), InvalidArgument);
  std::istringstream short_row("2\n1j 0\n1j\n");
  EXPECT_THROW(io::read_period_matrix(short_row), DimensionMismatch);
  std::istringstream missing_rows("3\n1j 0 0\n");
  EXPECT_THROW(io::read_period_matrix(missing_rows), DimensionMismatch);
  std::istringstream bad_genus("1.5\n1j\n");
  EXPECT_THROW(io::read_period_matrix(bad_genus), InvalidArgument);
  std::istringstream not_posdef("1\n-1j\n");
  EXPECT_THROW(io::read_period_matrix(not_posdef), InvalidArgument);
}

TEST(ThetaBAFile, ReadsAllFields) {
  std::ifstream in(std::string(MLSURF_TEST_DATA) + "/genus1_ba.txt");
  ASSERT_TRUE(in);
  const auto inp = io::read_theta_ba_inputs(in);
  EXPECT_EQ(inp.period.genus(), 1);
  EXPECT_EQ(inp.z(0), C(0.1, 0.05));
  EXPECT_EQ(inp.abel_r(0), C(-0.25, 0.02));
  EXPECT_EQ(inp.exp2_r, C(0.05, 0));
  EXPECT_DOUBLE_EQ(inp.d, 1.7);
  EXPECT_LT(std::abs(ba_theta_assembly(inp, 0.0, 0.0) - C(1.7)), 1e-14);
}

TEST(ThetaBAFile, Errors) {
  const std::string base = "genus 1\nB 1j\nz 0\nU 0\nV 0\nabel_P 0\nabel_r 0.1\nexp1_P 0\nexp2_P 0\nexp1_r 0\nexp2_r 0\n";
  std::istringstream no_d(base);
  EXPECT_THROW(io::read_theta_ba_inputs(no_d), InvalidArgument);
  std::istringstream complex_d(base + "d 1+1j\n");
  EXPECT_THROW(io::read_theta_ba_inputs(complex_d), InvalidArgument);
  std::istringstream dup(base + "d 1\nd 2\n");
  EXPECT_THROW(io::read_theta_ba_inputs(dup), InvalidArgument);
  std::istringstream wrong_dim("genus 2\nB 1j 0 0 1j\nz 0\nU 0 0\nV 0 0\nabel_P 0 0\nabel_r 0 0\nexp1_P 0\nexp2_P 0\nexp1_r 0\nexp2_r 0\nd 1\n");
  EXPECT_THROW(io::read_theta_ba_inputs(wrong_dim), DimensionMismatch);
}

TEST(Scenario, KeyValueLines) {
  std::istringstream in("# sphere\na = 1\n b=1 \nq1 = 2   # zero\ngamma_im = -0.5\n");
  const auto kv = io::read_scenario(in);
  EXPECT_EQ(kv.size(), 4U);
  EXPECT_EQ(kv.at("gamma_im"), -0.5);
  EXPECT_EQ(kv.at("b"), 1.0);
}

TEST(Scenario, Errors) {
  std::istringstream no_eq("a 1\n");
  EXPECT_THROW(io::read_scenario(no_eq), InvalidArgument);
  std::istringstream bad_value("a = one\n");
  EXPECT_THROW(io::read_scenario(bad_value), InvalidArgument);
  std::istringstream empty_key(" = 2\n");
  EXPECT_THROW(io::read_scenario(empty_key), InvalidArgument);
}

}  // namespace
