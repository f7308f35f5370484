#include <gtest/gtest.h>

#include <random>

#include "../support/generators.hpp"
#include "mlsurf/baker_akhiezer.hpp"

namespace {

using namespace mlsurf;
using C = std::complex<double>;

const auto kSphere = derive_constants(1.0, 1.0, 2.0, 1.0);

// Solves psi_2(+-b) = psi_1(+-a) for (f2, g2) directly.
std::pair<C, C> solve_gluing(const ReducibleCurveData<double>& cv, double x, double y) {
  const C i(0, 1);
  Eigen::Matrix2cd m;
  Eigen::Vector2cd rhs;
  const C gam = cv.gamma();
  for (int s = 0; s < 2; ++s) {
    const double sb = s == 0 ? cv.b : -cv.b;
    const double sa = s == 0 ? cv.a : -cv.a;
    const C e = std::exp(i * y * sb);
    m(s, 0) = e;
    m(s, 1) = e / (sb - gam);
    rhs(s) = cv.d * std::exp(i * x * sa);
  }
  const Eigen::Vector2cd sol = m.partialPivLu().solve(rhs);
  return {sol(0), sol(1)};
}

TEST(BakerAkhiezer, NormalizationAtOrigin) {
  const auto v = ba_rational_eval(kSphere, 0.0, 0.0, Component::One, C(0.3, 0.2));
  EXPECT_DOUBLE_EQ(v.f1, 1.0);
  EXPECT_NEAR(v.f2, 1.0, 1e-15);
  EXPECT_LT(std::abs(v.g2), 1e-15);
  EXPECT_LT(std::abs(ba_rational_field(kSphere, Component::One, C(0))(0.4, -1.3) - C(kSphere.d)), 1e-15);
}

TEST(BakerAkhiezer, CoefficientsSolveGluingSystem) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto cv = gen::random_curve(rng);
    const double x = u(rng);
    const double y = u(rng);
    const auto [f2, g2] = solve_gluing(cv, x, y);
    const auto v = ba_rational_eval(cv, x, y, Component::Two, C(0.1, 0.1));
    const double scale = 1 + std::abs(f2) + std::abs(g2);
    EXPECT_LT(std::abs(C(v.f2) - f2), 1e-12 * scale);
    EXPECT_LT(std::abs(v.g2 - g2), 1e-12 * scale);
    EXPECT_LT(std::abs(v.g2.real()), 1e-15 * scale);
    EXPECT_LT(ba_gluing_defect(cv, x, y), 1e-12);
  }
}

TEST(BakerAkhiezer, ConjugationSymmetry) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto cv = gen::random_curve(rng);
    const double x = u(rng);
    const double y = u(rng);
    const C p(u(rng), u(rng));
    EXPECT_LT(ba_conjugation_defect(cv, x, y, Component::One, p), 1e-12);
    EXPECT_LT(ba_conjugation_defect(cv, x, y, Component::Two, p), 1e-12);
    EXPECT_LT(std::abs(ba_f2_field(cv)(x, y).imag()), 1e-12);
  }
}

TEST(BakerAkhiezer, RealOnTheImaginaryAxis) {
  for (double x : {0.0, 0.4, 2.1}) {
    for (double y : {0.0, -0.9, 1.7}) {
      EXPECT_LT(std::abs(ba_rational_field(kSphere, Component::Two, C(0, 0.7))(x, y).imag()), 1e-14);
    }
  }
}

TEST(BakerAkhiezer, SimplePoleAtDivisorPoint) {
  const double x = 0.3;
  const double y = 1.1;
  const C gam = kSphere.gamma();
  const C g2 = ba_g2_field(kSphere)(x, y);
  const C expected = std::exp(C(0, 1) * y * gam) * g2;
  for (double eps : {1e-4, 1e-6, 1e-8}) {
    const C z = gam + C(eps, 0);
    const C scaled = (z - gam) * ba_rational_field(kSphere, Component::Two, z)(x, y);
    EXPECT_LT(std::abs(scaled - expected), 10 * eps * (1 + std::abs(expected)));
  }
  EXPECT_THROW(ba_rational_field(kSphere, Component::Two, gam), Degenerate);
}

TEST(BakerAkhiezer, EssentialSingularityCoefficientsMatchLargeK) {
  // y = 0 keeps the phase e^{iyk} exact at |k| = 1e4
  const double x = 0.6;
  const double y = 0.0;
  const int order = 3;
  const auto p1 = ba_essential_singularity_coeffs(kSphere, x, y, Puncture::P1, order);
  EXPECT_EQ(p1[0], C(kSphere.d));
  for (int n = 1; n <= order; ++n) EXPECT_EQ(p1[static_cast<std::size_t>(n)], C(0));

  const auto p2 = ba_essential_singularity_coeffs(kSphere, x, y, Puncture::P2, order);
  ASSERT_EQ(p2.size(), 4U);
  ASSERT_GT(std::abs(p2[1]), 0.1);
  // coefficients are real
  for (const auto& c : p2) EXPECT_LT(std::abs(c.imag()), 1e-15);
  for (double arg : {0.0, 1e-3, kPi<double> - 2e-3}) {
    const C k = std::polar(1e4, arg);
    const C reduced = ba_rational_field(kSphere, Component::Two, k)(x, y) * std::exp(-C(0, 1) * k * y);
    C series = 0;
    for (int n = order; n >= 0; --n) series = series / (C(0, 1) * k) + p2[static_cast<std::size_t>(n)];
    EXPECT_LT(std::abs(reduced - series), 1e-13);
  }
}

ThetaBAInputs<double> genus_one_inputs(C b, double d) {
  MatrixXc<double> m(1, 1);
  m(0, 0) = b;
  ThetaBAInputs<double> in{PeriodMatrix<double>::fromUpperTriangle(m),
                           VectorXc<double>::Constant(1, C(0.1, 0.05)),
                           VectorXc<double>::Constant(1, C(0.3, 0)),
                           VectorXc<double>::Constant(1, C(-0.2, 0)),
                           VectorXc<double>::Constant(1, C(0.15, 0.1)),
                           VectorXc<double>::Constant(1, C(-0.25, 0.02)),
                           C(0.4, 0),
                           C(0.1, 0),
                           C(-0.3, 0),
                           C(0.05, 0),
                           d};
  return in;
}

TEST(ThetaAssembly, NormalizedAtOrigin) {
  const auto in = genus_one_inputs(C(0.2, 1.1), 1.7);
  EXPECT_LT(std::abs(ba_theta_assembly(in, 0.0, 0.0) - C(1.7)), 1e-14);
}

TEST(ThetaAssembly, LatticeShiftOfDivisorVectorLeavesPsiUnchanged) {
  auto in = genus_one_inputs(C(0.2, 1.1), 1.0);
  const C before = ba_theta_assembly(in, 0.7, -0.3);
  in.z(0) += 1.0;
  EXPECT_LT(std::abs(ba_theta_assembly(in, 0.7, -0.3) - before), 1e-13);
}

TEST(ThetaAssembly, ZeroWindingReducesToExponentials) {
  auto in = genus_one_inputs(C(0, 1), 2.0);
  in.u.setZero();
  in.v.setZero();
  const double x = 0.8;
  const double y = -1.2;
  const C two_pi_i(0, 2 * kPi<double>);
  const C expected =
      2.0 * std::exp(two_pi_i * (x * in.exp1_p + y * in.exp2_p)) / std::exp(two_pi_i * (x * in.exp1_r + y * in.exp2_r));
  EXPECT_LT(std::abs(ba_theta_assembly(in, x, y) - expected), 1e-13);
}

TEST(ThetaAssembly, SpecialDivisorIsDegenerate) {
  auto in = genus_one_inputs(C(0, 1), 1.0);
  // theta(1/2 + B/2) = 0
  in.abel_p(0) = C(0.5, 0.5) - in.z(0);
  EXPECT_THROW(ba_theta_assembly(in, 0.1, 0.1), Degenerate);
}

TEST(ThetaAssembly, DimensionMismatch) {
  auto in = genus_one_inputs(C(0, 1), 1.0);
  in.u = VectorXc<double>::Zero(2);
  EXPECT_THROW(ba_theta_assembly(in, 0.0, 0.0), DimensionMismatch);
}

}  // namespace
