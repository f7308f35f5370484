#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include "mlsurf/surface.hpp"

namespace mlsurf {

// Conventions: <u, w> = sum u_i conj(w_i); |phi_x|^2 = 2 e^{v1}, |phi_y|^2 = 2 e^{v2};
// phi_ij = Gamma^1_ij phi_x + Gamma^2_ij phi_y + b_ij phi.

template <typename T>
struct GramDefects {
  T norm{};   // | <phi, phi> - 1 |
  T phi_x{};  // | <phi, phi_x> |
  T phi_y{};  // | <phi, phi_y> |
  T cross{};  // | <phi_x, phi_y> |

  T orthogonality() const { return std::max({phi_x, phi_y, cross}); }
  T max() const { return std::max(norm, orthogonality()); }
};

template <typename T>
GramDefects<T> gram_defects(const SurfaceJet<T>& jet) {
  GramDefects<T> d;
  d.norm = std::abs(hermitian(jet.phi, jet.phi) - Complex<T>(1));
  d.phi_x = std::abs(hermitian(jet.phi, jet.phi_x));
  d.phi_y = std::abs(hermitian(jet.phi, jet.phi_y));
  d.cross = std::abs(hermitian(jet.phi_x, jet.phi_y));
  return d;
}

template <typename T>
struct MetricData {
  T v1{};
  T v2{};
  T E{};  // 2 e^{v1}
  T G{};  // 2 e^{v2}
};

template <typename T>
MetricData<T> metric_from_jet(const SurfaceJet<T>& jet) {
  MetricData<T> m;
  m.E = jet.phi_x.squaredNorm();
  m.G = jet.phi_y.squaredNorm();
  if (!(m.E > std::numeric_limits<T>::min()) || !(m.G > std::numeric_limits<T>::min())) {
    throw Degenerate("vanishing partial derivative: immersion degenerates here");
  }
  m.v1 = std::log(m.E / T(2));
  m.v2 = std::log(m.G / T(2));
  return m;
}

/// Rows phi, phi_x / |phi_x|, phi_y / |phi_y|; unitary when the Gram
/// conditions hold.
template <typename T>
Matrix3c<T> lagrangian_frame(const SurfaceJet<T>& jet) {
  const MetricData<T> m = metric_from_jet(jet);
  Matrix3c<T> frame;
  frame.row(0) = jet.phi.transpose();
  frame.row(1) = (jet.phi_x / std::sqrt(m.E)).transpose();
  frame.row(2) = (jet.phi_y / std::sqrt(m.G)).transpose();
  return frame;
}

/// beta = arg det(lagrangian_frame), in (-pi, pi].
template <typename T>
T lagrangian_angle(const SurfaceJet<T>& jet, T det_tolerance = T(1e-6)) {
  const Complex<T> det = lagrangian_frame(jet).determinant();
  if (std::abs(std::abs(det) - T(1)) > det_tolerance) {
    throw NotLagrangian("|det| of the normalized frame deviates from 1 (non-Lagrangian input)");
  }
  return std::arg(det);
}

/// Lift `value` by multiples of 2*pi to lie within pi of `reference`.
template <typename T>
T unwrap_angle(T value, T reference) {
  return reference + std::remainder(value - reference, T(2) * kPi<T>);
}

/// Gradients of v1, v2 and beta read off a second-order jet.
template <typename T>
struct JetGradients {
  T v1_x{}, v1_y{};
  T v2_x{}, v2_y{};
  T beta_x{}, beta_y{};
};

template <typename T>
JetGradients<T> jet_gradients(const SurfaceJet<T>& jet) {
  const MetricData<T> m = metric_from_jet(jet);
  JetGradients<T> g;
  g.v1_x = T(2) * hermitian(jet.phi_xx, jet.phi_x).real() / m.E;
  g.v1_y = T(2) * hermitian(jet.phi_xy, jet.phi_x).real() / m.E;
  g.v2_x = T(2) * hermitian(jet.phi_xy, jet.phi_y).real() / m.G;
  g.v2_y = T(2) * hermitian(jet.phi_yy, jet.phi_y).real() / m.G;

  // d log det M = tr(M^{-1} dM) for M with rows (phi, phi_x, phi_y); the
  // positive row normalizations only affect the real part.
  Matrix3c<T> rows;
  rows << jet.phi.transpose(), jet.phi_x.transpose(), jet.phi_y.transpose();
  Matrix3c<T> dx;
  dx << jet.phi_x.transpose(), jet.phi_xx.transpose(), jet.phi_xy.transpose();
  Matrix3c<T> dy;
  dy << jet.phi_y.transpose(), jet.phi_xy.transpose(), jet.phi_yy.transpose();
  const Eigen::PartialPivLU<Matrix3c<T>> lu(rows);
  g.beta_x = (lu.solve(dx)).trace().imag();
  g.beta_y = (lu.solve(dy)).trace().imag();
  return g;
}

// ---------------------------------------------------------------------------
// Christoffel system
// ---------------------------------------------------------------------------

template <typename T>
struct ChristoffelData {
  // gammaK_IJ is Gamma^K_IJ
  Complex<T> gamma1_11{}, gamma2_11{};
  Complex<T> gamma1_12{}, gamma2_12{};
  Complex<T> gamma1_22{}, gamma2_22{};
  Complex<T> b11{}, b12{}, b22{};
  T condition{};  // 2-norm condition number of [phi_x phi_y phi]
  T residual{};   // max componentwise backward error of the three solves
};

template <typename T>
ChristoffelData<T> christoffel_solve(const SurfaceJet<T>& jet, T max_condition = T(1e8)) {
  Matrix3c<T> basis;
  basis.col(0) = jet.phi_x;
  basis.col(1) = jet.phi_y;
  basis.col(2) = jet.phi;

  const Eigen::JacobiSVD<Matrix3c<T>> svd(basis);
  const auto& sv = svd.singularValues();
  const T cond = sv(2) > T(0) ? sv(0) / sv(2) : std::numeric_limits<T>::infinity();
  if (!(cond <= max_condition)) throw Degenerate("moving frame (phi_x, phi_y, phi) is ill-conditioned");

  Matrix3c<T> rhs;
  rhs.col(0) = jet.phi_xx;
  rhs.col(1) = jet.phi_xy;
  rhs.col(2) = jet.phi_yy;
  const Matrix3c<T> sol = basis.fullPivLu().solve(rhs);

  ChristoffelData<T> ch;
  ch.gamma1_11 = sol(0, 0);
  ch.gamma2_11 = sol(1, 0);
  ch.b11 = sol(2, 0);
  ch.gamma1_12 = sol(0, 1);
  ch.gamma2_12 = sol(1, 1);
  ch.b12 = sol(2, 1);
  ch.gamma1_22 = sol(0, 2);
  ch.gamma2_22 = sol(1, 2);
  ch.b22 = sol(2, 2);
  ch.condition = cond;
  ch.residual = (basis * sol - rhs).cwiseAbs().maxCoeff();
  return ch;
}

/// Relative deviations from b11 = -2e^{v1}, b12 = 0, b22 = -2e^{v2}. b12 is
/// measured against max(E, G).
template <typename T>
struct ChristoffelBDefects {
  T b11{};
  T b12{};
  T b22{};
  T max() const { return std::max({b11, b12, b22}); }
};

template <typename T>
ChristoffelBDefects<T> christoffel_b_defects(const ChristoffelData<T>& ch, const MetricData<T>& m) {
  ChristoffelBDefects<T> d;
  d.b11 = std::abs(ch.b11 + m.E) / m.E;
  d.b22 = std::abs(ch.b22 + m.G) / m.G;
  d.b12 = std::abs(ch.b12) / std::max(m.E, m.G);
  return d;
}

/// |Gamma^1_11 + Gamma^2_12 - ((v1_x + v2_x)/2 + i beta_x)| and the y analogue.
template <typename T>
std::array<T, 2> lemma1_defects(const ChristoffelData<T>& ch, const JetGradients<T>& g) {
  const Complex<T> rhs_x(T(0.5) * (g.v1_x + g.v2_x), g.beta_x);
  const Complex<T> rhs_y(T(0.5) * (g.v1_y + g.v2_y), g.beta_y);
  return {std::abs(ch.gamma1_11 + ch.gamma2_12 - rhs_x), std::abs(ch.gamma1_12 + ch.gamma2_22 - rhs_y)};
}

/// |Im(Gamma^1_11 + Gamma^2_12)|, |Im(Gamma^1_12 + Gamma^2_22)|; both vanish
/// exactly when the surface is minimal.
template <typename T>
std::array<T, 2> minimality_defects(const ChristoffelData<T>& ch) {
  return {std::abs((ch.gamma1_11 + ch.gamma2_12).imag()), std::abs((ch.gamma1_12 + ch.gamma2_22).imag())};
}

// ---------------------------------------------------------------------------
// SU(3) frame and connection matrices
// ---------------------------------------------------------------------------

template <typename T>
struct FrameData {
  Matrix3c<T> frame = Matrix3c<T>::Zero();  // rows phi, e^{-v1/2 - i beta/2} phi_x / sqrt2, ...
  T beta{};
  Matrix3c<T> a = Matrix3c<T>::Zero();  // frame_x = a * frame
  Matrix3c<T> b = Matrix3c<T>::Zero();  // frame_y = b * frame
  T f{};                                // a(1,1) = i f
  T h{};                                // b(1,1) = i h
};

/// Frame with the e^{-i beta/2} twist that places it in SU(3).
template <typename T>
Matrix3c<T> twisted_frame(const SurfaceJet<T>& jet, T beta) {
  const Complex<T> twist = std::exp(Complex<T>(T(0), -beta / T(2)));
  Matrix3c<T> frame = lagrangian_frame(jet);
  frame.row(1) *= twist;
  frame.row(2) *= twist;
  return frame;
}

/// Builds the twisted frame at (x, y) and A = frame_x frame^{-1},
/// B = frame_y frame^{-1} by fourth-order central differences of step h. `field` maps
/// (x, y) to a SurfaceJet. Beta at stencil points is lifted continuously
/// from its value at the center.
template <typename T, typename JetField>
FrameData<T> frame_and_connection(const JetField& field, T x, T y, T h, T unitarity_tolerance = T(1e-6)) {
  if (!(h > T(0))) throw InvalidArgument("finite-difference step must be > 0");
  const SurfaceJet<T> center = field(x, y);
  FrameData<T> out;
  out.beta = lagrangian_angle(center, unitarity_tolerance);
  out.frame = twisted_frame(center, out.beta);
  const T unitarity = (out.frame * out.frame.adjoint() - Matrix3c<T>::Identity()).cwiseAbs().maxCoeff();
  if (unitarity > unitarity_tolerance) throw NotLagrangian("frame is not unitary");

  auto frame_at = [&](T px, T py) {
    const SurfaceJet<T> j = field(px, py);
    return twisted_frame(j, unwrap_angle(lagrangian_angle(j, unitarity_tolerance), out.beta));
  };
  // fourth-order central stencil
  const Matrix3c<T> dx = (frame_at(x - T(2) * h, y) - T(8) * frame_at(x - h, y) + T(8) * frame_at(x + h, y) -
                          frame_at(x + T(2) * h, y)) /
                         (T(12) * h);
  const Matrix3c<T> dy = (frame_at(x, y - T(2) * h) - T(8) * frame_at(x, y - h) + T(8) * frame_at(x, y + h) -
                          frame_at(x, y + T(2) * h)) /
                         (T(12) * h);
  const Matrix3c<T> inverse = out.frame.inverse();
  out.a = dx * inverse;
  out.b = dy * inverse;
  out.f = out.a(1, 1).imag();
  out.h = out.b(1, 1).imag();
  return out;
}

/// Residuals of the structural claims about the frame: unitarity,
/// det = 1, A and B in su(3), the displayed zero pattern, f and h real.
template <typename T>
struct FrameDefects {
  T unitarity{};
  T determinant{};
  T a_skew{}, b_skew{};
  T a_trace{}, b_trace{};
  T zero_pattern{};
  T f_real{}, h_real{};

  T max() const { return std::max({unitarity, determinant, a_skew, b_skew, a_trace, b_trace, zero_pattern, f_real, h_real}); }
};

template <typename T>
FrameDefects<T> frame_defects(const FrameData<T>& fd) {
  FrameDefects<T> d;
  d.unitarity = (fd.frame * fd.frame.adjoint() - Matrix3c<T>::Identity()).cwiseAbs().maxCoeff();
  d.determinant = std::abs(fd.frame.determinant() - Complex<T>(1));
  d.a_skew = (fd.a + fd.a.adjoint()).cwiseAbs().maxCoeff();
  d.b_skew = (fd.b + fd.b.adjoint()).cwiseAbs().maxCoeff();
  d.a_trace = std::abs(fd.a.trace());
  d.b_trace = std::abs(fd.b.trace());
  d.zero_pattern = std::max({std::abs(fd.a(0, 0)), std::abs(fd.a(0, 2)), std::abs(fd.a(2, 0)),
                             std::abs(fd.b(0, 0)), std::abs(fd.b(0, 1)), std::abs(fd.b(1, 0))});
  d.f_real = std::abs(fd.a(1, 1).real());
  d.h_real = std::abs(fd.b(1, 1).real());
  return d;
}

/// Max deviation of the off-diagonal entries of A and B from their closed
/// forms in v1, v2, beta, their gradients, and the extracted f, h.
template <typename T>
T connection_entry_defect(const FrameData<T>& fd, const MetricData<T>& m, const JetGradients<T>& g) {
  const Complex<T> i(T(0), T(1));
  const T sqrt2 = std::sqrt(T(2));
  const T hb = fd.beta / T(2);
  const Complex<T> e_p = std::exp(i * hb);
  const Complex<T> e_m = std::exp(-i * hb);
  const T ev1 = std::exp(m.v1 / T(2));
  const T ev2 = std::exp(m.v2 / T(2));
  const T r12 = std::exp((m.v1 - m.v2) / T(2));
  const T r21 = T(1) / r12;

  Matrix3c<T> a = Matrix3c<T>::Zero();
  a(0, 1) = sqrt2 * ev1 * e_p;
  a(1, 0) = -sqrt2 * ev1 * e_m;
  a(1, 1) = i * fd.f;
  a(1, 2) = T(0.5) * r12 * (T(2) * i * fd.h - g.v1_y + i * g.beta_y);
  a(2, 1) = T(0.5) * r12 * (T(2) * i * fd.h + g.v1_y + i * g.beta_y);
  a(2, 2) = -i * fd.f;

  Matrix3c<T> b = Matrix3c<T>::Zero();
  b(0, 2) = sqrt2 * ev2 * e_p;
  b(2, 0) = -sqrt2 * ev2 * e_m;
  b(1, 1) = i * fd.h;
  b(1, 2) = T(0.5) * r21 * (i * g.beta_x - T(2) * i * fd.f + g.v2_x);
  b(2, 1) = T(0.5) * r21 * (i * g.beta_x - T(2) * i * fd.f - g.v2_x);
  b(2, 2) = -i * fd.h;

  return std::max((fd.a - a).cwiseAbs().maxCoeff(), (fd.b - b).cwiseAbs().maxCoeff());
}

// ---------------------------------------------------------------------------
// Residue identities for the spectral family
// ---------------------------------------------------------------------------

/// Absolute values of the six residue sums; all vanish for a jet of the
/// spectral family built on `curve`.
template <typename T>
std::array<T, 6> theorem1_defects(const ReducibleCurveData<T>& curve, const SurfaceJet<T>& jet) {
  const SpectralFamily<T> family(curve);
  const Vector3c<T> expected = family.value(jet.x, jet.y);
  if ((expected - jet.phi).cwiseAbs().maxCoeff() > T(1e-8) * (T(1) + expected.norm())) {
    throw InvalidArgument("jet does not belong to the spectral family of this curve");
  }
  std::array<T, 3> weight{};
  for (std::size_t k = 0; k < 3; ++k) weight[k] = curve.residue_q[k] / (curve.alpha[k] * curve.alpha[k]);

  auto weighted = [&](const Vector3c<T>& u, const Vector3c<T>& w) {
    Complex<T> s(0);
    for (int k = 0; k < 3; ++k) s += u(k) * std::conj(w(k)) * weight[static_cast<std::size_t>(k)];
    return s;
  };
  const T f1 = curve.d;
  const T f2 = ba_f2_field(curve)(jet.x, jet.y).real();
  return {
      std::abs(weighted(jet.phi, jet.phi) + curve.d * curve.d * curve.residue_r),
      std::abs(weighted(jet.phi, jet.phi_x)),
      std::abs(weighted(jet.phi, jet.phi_y)),
      std::abs(weighted(jet.phi_x, jet.phi_y)),
      std::abs(weighted(jet.phi_x, jet.phi_x) + f1 * f1 * curve.c1_exp),
      std::abs(weighted(jet.phi_y, jet.phi_y) + f2 * f2 * curve.c2_exp),
  };
}

// ---------------------------------------------------------------------------
// Gaussian curvature of an orthogonal metric E dx^2 + G dy^2
// ---------------------------------------------------------------------------

/// Metric coefficients with the partials the curvature formula consumes.
template <typename T>
struct MetricJet {
  T E{}, E_x{}, E_y{}, E_yy{};
  T G{}, G_x{}, G_y{}, G_xx{};
};

/// K = -1/(2W) (d/dx(G_x/W) + d/dy(E_y/W)), W = sqrt(E G).
template <typename T>
T gauss_curvature(const MetricJet<T>& m) {
  if (!(m.E > T(0)) || !(m.G > T(0))) throw Degenerate("metric is not positive definite");
  const T w = std::sqrt(m.E * m.G);
  const T w_x = (m.E_x * m.G + m.E * m.G_x) / (T(2) * w);
  const T w_y = (m.E_y * m.G + m.E * m.G_y) / (T(2) * w);
  const T ddx = m.G_xx / w - m.G_x * w_x / (w * w);
  const T ddy = m.E_yy / w - m.E_y * w_y / (w * w);
  return -(ddx + ddy) / (T(2) * w);
}

/// Exact metric jet of the spectral family (uses third partials of phi).
template <typename T>
MetricJet<T> metric_jet(const SpectralFamily<T>& family, T x, T y) {
  const Vector3c<T> px = family.derivative(1, 0, x, y);
  const Vector3c<T> py = family.derivative(0, 1, x, y);
  const Vector3c<T> pxx = family.derivative(2, 0, x, y);
  const Vector3c<T> pxy = family.derivative(1, 1, x, y);
  const Vector3c<T> pyy = family.derivative(0, 2, x, y);
  const Vector3c<T> pxxy = family.derivative(2, 1, x, y);
  const Vector3c<T> pxyy = family.derivative(1, 2, x, y);
  MetricJet<T> m;
  m.E = px.squaredNorm();
  m.E_x = T(2) * hermitian(pxx, px).real();
  m.E_y = T(2) * hermitian(pxy, px).real();
  m.E_yy = T(2) * (hermitian(pxyy, px).real() + pxy.squaredNorm());
  m.G = py.squaredNorm();
  m.G_x = T(2) * hermitian(pxy, py).real();
  m.G_y = T(2) * hermitian(pyy, py).real();
  m.G_xx = T(2) * (hermitian(pxxy, py).real() + pxy.squaredNorm());
  return m;
}

/// Curvature by nested central differences. `metric` maps (x, y) to the pair
/// (E, G); every stencil point must have E, G > 0.
template <typename T, typename MetricField>
T gauss_curvature_fd(const MetricField& metric, T x, T y, T h) {
  if (!(h > T(0))) throw InvalidArgument("finite-difference step must be > 0");
  auto eval = [&](T px, T py) {
    const std::pair<T, T> eg = metric(px, py);
    if (!(eg.first > T(0)) || !(eg.second > T(0))) throw Degenerate("curvature stencil reaches E <= 0 or G <= 0");
    return eg;
  };
  auto g_x_over_w = [&](T px, T py) {
    const auto c = eval(px, py);
    const T g_x = (eval(px + h, py).second - eval(px - h, py).second) / (T(2) * h);
    return g_x / std::sqrt(c.first * c.second);
  };
  auto e_y_over_w = [&](T px, T py) {
    const auto c = eval(px, py);
    const T e_y = (eval(px, py + h).first - eval(px, py - h).first) / (T(2) * h);
    return e_y / std::sqrt(c.first * c.second);
  };
  const auto c = eval(x, y);
  const T w = std::sqrt(c.first * c.second);
  const T ddx = (g_x_over_w(x + h, y) - g_x_over_w(x - h, y)) / (T(2) * h);
  const T ddy = (e_y_over_w(x, y + h) - e_y_over_w(x, y - h)) / (T(2) * h);
  return -(ddx + ddy) / (T(2) * w);
}

}  // namespace mlsurf
