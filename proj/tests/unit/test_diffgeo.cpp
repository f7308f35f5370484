#include <gtest/gtest.h>

#include <random>

#include "../support/generators.hpp"
#include "mlsurf/diffgeo.hpp"

namespace {

using namespace mlsurf;
using C = std::complex<double>;

const C I(0, 1);
const auto kSphere = derive_constants(1.0, 1.0, 2.0, 1.0);

// Flat Lagrangian torus with unequal radii: Lagrangian, not minimal.
// r^2 = (0.5, 0.3, 0.2), phases u.x + v.y with u = (1,-1,-1), v = (0,2,-3).
struct FlatTorus {
  std::array<double, 3> r{std::sqrt(0.5), std::sqrt(0.3), std::sqrt(0.2)};
  std::array<double, 3> u{1, -1, -1};
  std::array<double, 3> v{0, 2, -3};

  SurfaceJet<double> jet(double x, double y) const {
    SurfaceJet<double> j;
    j.x = x;
    j.y = y;
    for (int k = 0; k < 3; ++k) {
      const auto s = static_cast<std::size_t>(k);
      const C p = r[s] * std::exp(I * (u[s] * x + v[s] * y));
      j.phi(k) = p;
      j.phi_x(k) = I * u[s] * p;
      j.phi_y(k) = I * v[s] * p;
      j.phi_xx(k) = -u[s] * u[s] * p;
      j.phi_xy(k) = -u[s] * v[s] * p;
      j.phi_yy(k) = -v[s] * v[s] * p;
    }
    return j;
  }
  SurfaceJet<double> operator()(double x, double y) const { return jet(x, y); }
};

// Complex projective line: unit norm but not Lagrangian.
SurfaceJet<double> complex_line_jet(double x, double y) {
  SurfaceJet<double> j;
  j.x = x;
  j.y = y;
  const C e = std::exp(I * y);
  j.phi << std::cos(x), std::sin(x) * e, 0.0;
  j.phi_x << -std::sin(x), std::cos(x) * e, 0.0;
  j.phi_y << 0.0, I * std::sin(x) * e, 0.0;
  j.phi_xx << -std::cos(x), -std::sin(x) * e, 0.0;
  j.phi_xy << 0.0, I * std::cos(x) * e, 0.0;
  j.phi_yy << 0.0, -std::sin(x) * e, 0.0;
  return j;
}

TEST(Gram, HermitianConvention) {
  const Vector3c<double> u(C(1, 2), C(0, 1), C(3, 0));
  const Vector3c<double> w(C(0, 1), C(2, 0), C(1, -1));
  C expected = 0;
  for (int k = 0; k < 3; ++k) expected += u(k) * std::conj(w(k));
  EXPECT_LT(std::abs(hermitian(u, w) - expected), 1e-15);
}

TEST(Gram, WorkedExampleSatisfiesOrthogonality) {
  const SpectralFamily<double> fam(kSphere);
  for (double x : {0.0, 0.9, 2.3}) {
    for (double y : {0.1, 1.5, -2.0}) {
      const auto d = gram_defects(fam.jet(x, y));
      EXPECT_LT(d.max(), 1e-14);
    }
  }
}

TEST(Gram, ComplexLineIsNotLagrangian) {
  const auto jet = complex_line_jet(0.7, 0.2);
  const auto d = gram_defects(jet);
  EXPECT_LT(d.norm, 1e-15);
  EXPECT_GT(d.cross, 0.1);
  EXPECT_THROW(lagrangian_angle(jet), NotLagrangian);
}

TEST(Metric, WorkedExampleMatchesClosedForm) {
  const SpectralFamily<double> fam(kSphere);
  for (double x : {0.0, 0.9, 2.3}) {
    for (double y : {0.1, 1.5, -2.0}) {
      const auto m = metric_from_jet(fam.jet(x, y));
      EXPECT_NEAR(m.E, 1.0, 1e-14);
      EXPECT_NEAR(m.G, 1.5 * (1 + std::sin(2 * (x - y))), 1e-13);
      EXPECT_NEAR(m.v1, std::log(0.5), 1e-14);
    }
  }
}

TEST(Metric, DegenerateWhenPhiYVanishes) {
  const SpectralFamily<double> fam(kSphere);
  // f2 = cos(x - y) + sin(x - y) vanishes at x - y = -pi/4
  const double y = 0.3;
  const double x = y - kPi<double> / 4;
  EXPECT_LT(fam.jet(x, y).phi_y.squaredNorm(), 1e-28);
  EXPECT_THROW(christoffel_solve(fam.jet(x, y)), Degenerate);
  auto flat = fam.jet(x, y);
  flat.phi_y.setZero();
  EXPECT_THROW(metric_from_jet(flat), Degenerate);
}

TEST(Angle, WorkedExampleHasE2iBetaMinusOne) {
  const SpectralFamily<double> fam(kSphere);
  for (double x : {0.0, 0.9, 2.3}) {
    for (double y : {0.1, 1.5, -2.0}) {
      const double beta = lagrangian_angle(fam.jet(x, y));
      EXPECT_LT(std::abs(std::polar(1.0, 2 * beta) + 1.0), 1e-14);
      const auto g = jet_gradients(fam.jet(x, y));
      EXPECT_LT(std::abs(g.beta_x) + std::abs(g.beta_y), 1e-13);
    }
  }
}

TEST(Angle, FlatTorusAngleIsLinear) {
  const FlatTorus torus;
  const auto g = jet_gradients(torus.jet(0.3, 0.4));
  // beta = sum of phases + const
  EXPECT_NEAR(g.beta_x, -1.0, 1e-14);
  EXPECT_NEAR(g.beta_y, -1.0, 1e-14);
  EXPECT_LT(gram_defects(torus.jet(0.3, 0.4)).max(), 1e-15);
}

TEST(Angle, Unwrap) {
  EXPECT_NEAR(unwrap_angle(-3.1, 3.1), 2 * kPi<double> - 3.1, 1e-15);
  EXPECT_NEAR(unwrap_angle(0.5, 0.4), 0.5, 1e-15);
}

TEST(Christoffel, WorkedExampleInvariants) {
  const SpectralFamily<double> fam(kSphere);
  const auto jet = fam.jet(0.2, 0.9);
  const auto ch = christoffel_solve(jet);
  const auto m = metric_from_jet(jet);
  EXPECT_LT(christoffel_b_defects(ch, m).max(), 1e-13);
  EXPECT_LT(ch.residual, 1e-14);
  EXPECT_LT(ch.condition, 1e8);
  // Gamma^2_12 = f2_x / f2 with f2 = cos t + sin t, t = x - y = -0.7
  const double t = -0.7;
  EXPECT_NEAR(ch.gamma2_12.real(), (std::cos(t) - std::sin(t)) / (std::cos(t) + std::sin(t)), 1e-11);
  EXPECT_NEAR(ch.gamma2_12.real(), 11.681, 1e-3);
  EXPECT_LT(std::abs(ch.gamma2_12.imag()), 1e-12);
}

TEST(Christoffel, TraceIdentityAndMinimalityOnBothFamilies) {
  const SpectralFamily<double> fam(kSphere);
  const ConeFamily<double> cone(1, 2);
  for (double x : {0.4, 1.3, 2.9}) {
    for (double y : {0.1, 0.75, -1.4}) {
      for (const auto& jet : {fam.jet(x, y), cone.jet(x, y)}) {
        const auto ch = christoffel_solve(jet);
        const auto l1 = lemma1_defects(ch, jet_gradients(jet));
        const auto mn = minimality_defects(ch);
        EXPECT_LT(std::max(l1[0], l1[1]), 1e-12);
        EXPECT_LT(std::max(mn[0], mn[1]), 1e-12);
        EXPECT_LT(christoffel_b_defects(ch, metric_from_jet(jet)).max(), 1e-12);
      }
    }
  }
}

TEST(Christoffel, FlatTorusIsNotMinimalButSatisfiesTraceIdentity) {
  const FlatTorus torus;
  const auto jet = torus.jet(0.3, 0.4);
  const auto ch = christoffel_solve(jet);
  const auto l1 = lemma1_defects(ch, jet_gradients(jet));
  EXPECT_LT(std::max(l1[0], l1[1]), 1e-13);
  const auto mn = minimality_defects(ch);
  EXPECT_NEAR(mn[0], 1.0, 1e-13);
  EXPECT_NEAR(mn[1], 1.0, 1e-13);
}

TEST(Frame, StructureOnBothFamilies) {
  const SpectralFamily<double> fam(kSphere);
  const ConeFamily<double> cone(1, 2);
  auto spectral_field = [&](double x, double y) { return fam.jet(x, y); };
  auto cone_field = [&](double x, double y) { return cone.jet(x, y); };
  for (auto [x, y] : {std::pair{0.2, 0.9}, {1.7, 0.4}, {3.1, -1.0}}) {
    const auto fs = frame_and_connection<double>(spectral_field, x, y, 1e-4);
    EXPECT_LT(frame_defects(fs).max(), 1e-8);
    EXPECT_LT(connection_entry_defect(fs, metric_from_jet(fam.jet(x, y)), jet_gradients(fam.jet(x, y))), 1e-8);
    const auto fc = frame_and_connection<double>(cone_field, x, y, 1e-4);
    EXPECT_LT(frame_defects(fc).max(), 1e-8);
    EXPECT_LT(connection_entry_defect(fc, metric_from_jet(cone.jet(x, y)), jet_gradients(cone.jet(x, y))), 1e-8);
  }
}

TEST(Frame, FlatTorusFrameStillInSU3) {
  // the frame structure only needs the Lagrangian condition
  const FlatTorus torus;
  const auto fd = frame_and_connection<double>(torus, 0.3, 0.4, 1e-4);
  EXPECT_LT(frame_defects(fd).max(), 1e-8);
}

TEST(Frame, RejectsNonLagrangianInput) {
  EXPECT_THROW(frame_and_connection<double>(complex_line_jet, 0.7, 0.2, 1e-4), NotLagrangian);
  EXPECT_THROW(frame_and_connection<double>(complex_line_jet, 0.7, 0.2, 0.0), InvalidArgument);
}

TEST(Theorem1, RandomCurvesAndPoints) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int c = 0; c < 20; ++c) {
    const auto cv = gen::random_curve(rng);
    const SpectralFamily<double> fam(cv);
    for (int p = 0; p < 10; ++p) {
      const auto d = theorem1_defects(cv, fam.jet(u(rng), u(rng)));
      EXPECT_LT(*std::max_element(d.begin(), d.end()), 1e-9);
    }
  }
}

TEST(Theorem1, RejectsJetOfAnotherCurve) {
  const auto other = derive_constants(1.5, 0.8, 3.0, -0.5);
  EXPECT_THROW(theorem1_defects(kSphere, SpectralFamily<double>(other).jet(0.3, 0.2)), InvalidArgument);
}

TEST(Curvature, ClosedFormMetrics) {
  // round sphere dx^2 + cos^2 x dy^2
  const double x = 0.4;
  MetricJet<double> s{1, 0, 0, 0, std::cos(x) * std::cos(x), -std::sin(2 * x), 0, -2 * std::cos(2 * x)};
  EXPECT_NEAR(gauss_curvature(s), 1.0, 1e-14);
  // flat
  EXPECT_NEAR(gauss_curvature(MetricJet<double>{1, 0, 0, 0, 1, 0, 0, 0}), 0.0, 1e-15);
  // upper half plane (dx^2 + dy^2) / y^2
  const double y = 1.7;
  const double e = 1 / (y * y);
  MetricJet<double> h{e, 0, -2 / (y * y * y), 6 / (y * y * y * y), e, 0, -2 / (y * y * y), 0};
  EXPECT_NEAR(gauss_curvature(h), -1.0, 1e-14);
  EXPECT_THROW(gauss_curvature(MetricJet<double>{0, 0, 0, 0, 1, 0, 0, 0}), Degenerate);
}

TEST(Curvature, FiniteDifferencesOnClosedForms) {
  auto sphere = [](double px, double) { return std::pair{1.0, std::cos(px) * std::cos(px)}; };
  EXPECT_NEAR(gauss_curvature_fd(sphere, 0.4, 0.0, 1e-4), 1.0, 1e-3);
  auto hyper = [](double, double py) { return std::pair{1 / (py * py), 1 / (py * py)}; };
  EXPECT_NEAR(gauss_curvature_fd(hyper, 0.0, 1.7, 1e-4), -1.0, 1e-3);
  auto signed_g = [](double px, double) { return std::pair{1.0, std::cos(px)}; };
  EXPECT_THROW(gauss_curvature_fd(signed_g, kPi<double> / 2, 0.0, 1e-4), Degenerate);
}

TEST(Curvature, WorkedExampleIsRoundSphere) {
  const SpectralFamily<double> fam(kSphere);
  auto eg = [&](double px, double py) {
    return std::pair{fam.derivative(1, 0, px, py).squaredNorm(), fam.derivative(0, 1, px, py).squaredNorm()};
  };
  for (auto [x, y] : {std::pair{0.2, 0.9}, {1.7, 0.4}, {3.1, -1.0}}) {
    EXPECT_NEAR(gauss_curvature(metric_jet(fam, x, y)), 1.0, 1e-10);
    EXPECT_NEAR(gauss_curvature_fd(eg, x, y, 1e-4), 1.0, 1e-3);
  }
}

TEST(Curvature, RandomCurvesHaveUnitCurvature) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int c = 0; c < 10; ++c) {
    const SpectralFamily<double> fam(gen::random_curve(rng));
    for (int p = 0; p < 5; ++p) {
      const double x = u(rng);
      const double y = u(rng);
      if (fam.degeneracy_distance(x, y) < 0.05) continue;
      EXPECT_NEAR(gauss_curvature(metric_jet(fam, x, y)), 1.0, 1e-8);
    }
  }
}

}  // namespace
