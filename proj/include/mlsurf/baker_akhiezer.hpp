#pragma once

#include <vector>

#include "mlsurf/exp_sum.hpp"
#include "mlsurf/spectral_curve.hpp"
#include "mlsurf/theta.hpp"

namespace mlsurf {

// ---------------------------------------------------------------------------
// Rational model on the reducible curve.
//
//   psi_1 = d e^{i x z1},   psi_2 = e^{i y z2} (f2 + g2 / (z2 - gamma)),
//
// with f2, g2 fixed by psi_1(+-a) = psi_2(+-b) and psi_1(0) = d. Writing
// theta = a x - b y and gamma = i*Gamma:
//
//   f2 = d (cos theta + (Gamma/b) sin theta)            (real)
//   g2 = i d (b^2 + Gamma^2)/b sin theta                (purely imaginary)
// ---------------------------------------------------------------------------

enum class Puncture { P1, P2 };

template <typename T>
struct BARationalValue {
  T f1{};
  T f2{};
  Complex<T> g2{};
  Complex<T> psi{};
};

/// f2(x, y) as an exponential sum.
template <typename T>
ExpSum<T> ba_f2_field(const ReducibleCurveData<T>& curve) {
  const Complex<T> i(T(0), T(1));
  const T ratio = curve.gamma_im / curve.b;
  const T half_d = curve.d / T(2);
  return ExpSum<T>::wave(half_d * (T(1) - i * ratio), Complex<T>(curve.a), Complex<T>(-curve.b)) +
         ExpSum<T>::wave(half_d * (T(1) + i * ratio), Complex<T>(-curve.a), Complex<T>(curve.b));
}

/// g2(x, y) as an exponential sum.
template <typename T>
ExpSum<T> ba_g2_field(const ReducibleCurveData<T>& curve) {
  const T k = curve.d * (curve.b * curve.b + curve.gamma_im * curve.gamma_im) / (T(2) * curve.b);
  return ExpSum<T>::wave(Complex<T>(k), Complex<T>(curve.a), Complex<T>(-curve.b)) +
         ExpSum<T>::wave(Complex<T>(-k), Complex<T>(-curve.a), Complex<T>(curve.b));
}

/// psi(x, y, P) for fixed P = (component, coord), as a function of (x, y).
template <typename T>
ExpSum<T> ba_rational_field(const ReducibleCurveData<T>& curve, Component component, Complex<T> coord) {
  if (component == Component::One) {
    return ExpSum<T>::wave(Complex<T>(curve.d), coord, Complex<T>(0));
  }
  const Complex<T> gap = coord - curve.gamma();
  if (std::abs(gap) <= T(8) * std::numeric_limits<T>::epsilon() * (T(1) + std::abs(curve.gamma()))) {
    throw Degenerate("psi_2 has its pole at the divisor point gamma");
  }
  return (ba_f2_field(curve) + ba_g2_field(curve) * (T(1) / gap)) *
         ExpSum<T>::wave(Complex<T>(1), Complex<T>(0), coord);
}

template <typename T>
BARationalValue<T> ba_rational_eval(const ReducibleCurveData<T>& curve, T x, T y, Component component,
                                    Complex<T> coord) {
  BARationalValue<T> out;
  out.f1 = curve.d;
  out.f2 = ba_f2_field(curve)(x, y).real();
  out.g2 = ba_g2_field(curve)(x, y);
  out.psi = ba_rational_field(curve, component, coord)(x, y);
  return out;
}

/// Relative mismatch of psi across the two gluing pairs.
template <typename T>
T ba_gluing_defect(const ReducibleCurveData<T>& curve, T x, T y) {
  const Complex<T> p1a = ba_rational_field(curve, Component::One, Complex<T>(curve.a))(x, y);
  const Complex<T> p1m = ba_rational_field(curve, Component::One, Complex<T>(-curve.a))(x, y);
  const Complex<T> p2b = ba_rational_field(curve, Component::Two, Complex<T>(curve.b))(x, y);
  const Complex<T> p2m = ba_rational_field(curve, Component::Two, Complex<T>(-curve.b))(x, y);
  return std::max(std::abs(p1a - p2b), std::abs(p1m - p2m)) / (T(1) + std::abs(p1a));
}

/// |psi(x, y, tau P) - conj psi(x, y, P)| with tau(z) = -conj(z) on each component.
template <typename T>
T ba_conjugation_defect(const ReducibleCurveData<T>& curve, T x, T y, Component component, Complex<T> coord) {
  const Complex<T> direct = ba_rational_field(curve, component, coord)(x, y);
  const Complex<T> mirrored = ba_rational_field(curve, component, -std::conj(coord))(x, y);
  return std::abs(mirrored - std::conj(direct));
}

/// Coefficients of psi * e^{-i k t} in powers of 1/(ik) at a puncture
/// (k = z1, t = x at P1; k = z2, t = y at P2). Entry n multiplies (ik)^{-n};
/// order + 1 entries are returned.
template <typename T>
std::vector<Complex<T>> ba_essential_singularity_coeffs(const ReducibleCurveData<T>& curve, T x, T y,
                                                        Puncture puncture, int order) {
  if (order < 0) throw InvalidArgument("order must be >= 0");
  std::vector<Complex<T>> out(static_cast<std::size_t>(order) + 1, Complex<T>(0));
  if (puncture == Puncture::P1) {
    out[0] = Complex<T>(curve.d);
    return out;
  }
  // g2/(k - gamma) = sum_{n>=1} g2 gamma^{n-1} k^{-n} and k^{-n} = i^n (ik)^{-n}
  const Complex<T> i(T(0), T(1));
  const Complex<T> g2 = ba_g2_field(curve)(x, y);
  out[0] = ba_f2_field(curve)(x, y);
  Complex<T> term = g2 * i;
  for (int n = 1; n <= order; ++n) {
    out[static_cast<std::size_t>(n)] = term;
    term *= curve.gamma() * i;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Theta-function assembly from precomputed period data.
// ---------------------------------------------------------------------------

/// All curve-dependent transcendental data, supplied by the caller. `z` is
/// K - sum A(gamma_i) with the Riemann constants folded in; exp*_p / exp*_r are
/// the values of the normalized abelian integrals at P and at r.
template <typename T>
struct ThetaBAInputs {
  PeriodMatrix<T> period;
  VectorXc<T> z;
  VectorXc<T> u;
  VectorXc<T> v;
  VectorXc<T> abel_p;
  VectorXc<T> abel_r;
  Complex<T> exp1_p{};
  Complex<T> exp2_p{};
  Complex<T> exp1_r{};
  Complex<T> exp2_r{};
  T d{1};
};

template <typename T>
void validate(const ThetaBAInputs<T>& inp) {
  const Eigen::Index g = inp.period.genus();
  for (const VectorXc<T>* vec : {&inp.z, &inp.u, &inp.v, &inp.abel_p, &inp.abel_r}) {
    if (vec->size() != g) throw DimensionMismatch("theta BA input vector dimension differs from genus");
  }
}

namespace detail {

template <typename T>
Complex<T> unnormalized_ba(const ThetaBAInputs<T>& inp, const VectorXc<T>& abel, Complex<T> exp1, Complex<T> exp2,
                           T x, T y, const LatticeTruncation& trunc) {
  const VectorXc<T> shifted = abel + x * inp.u + y * inp.v + inp.z;
  const VectorXc<T> base = abel + inp.z;
  const Complex<T> denom = riemann_theta(base, inp.period, trunc);
  if (std::abs(denom) < T(1e-13)) throw Degenerate("theta(A(P) + z) vanishes: divisor in special position");
  const Complex<T> two_pi_i(T(0), T(2) * kPi<T>);
  return riemann_theta(shifted, inp.period, trunc) / denom * std::exp(two_pi_i * (x * exp1 + y * exp2));
}

}  // namespace detail

/// psi(x, y, P) = psi~(x, y, P) / psi~(x, y, r) * d with
/// psi~ = theta(A(P) + xU + yV + z) / theta(A(P) + z) * exp(2 pi i (x I1(P) + y I2(P))).
template <typename T>
Complex<T> ba_theta_assembly(const ThetaBAInputs<T>& inp, T x, T y, const LatticeTruncation& trunc) {
  validate(inp);
  const Complex<T> at_p = detail::unnormalized_ba(inp, inp.abel_p, inp.exp1_p, inp.exp2_p, x, y, trunc);
  const Complex<T> at_r = detail::unnormalized_ba(inp, inp.abel_r, inp.exp1_r, inp.exp2_r, x, y, trunc);
  if (std::abs(at_r) < T(1e-13)) throw Degenerate("psi~(x, y, r) vanishes; normalization undefined");
  return at_p / at_r * inp.d;
}

/// Same, with a truncation radius adequate for every theta argument involved.
template <typename T>
Complex<T> ba_theta_assembly(const ThetaBAInputs<T>& inp, T x, T y) {
  validate(inp);
  const Eigen::Index g = inp.period.genus();
  VectorXc<T> widest = VectorXc<T>::Zero(g);
  for (const VectorXc<T>* abel : {&inp.abel_p, &inp.abel_r}) {
    for (const VectorXc<T>& arg : {VectorXc<T>(*abel + inp.z), VectorXc<T>(*abel + x * inp.u + y * inp.v + inp.z)}) {
      for (Eigen::Index k = 0; k < g; ++k) {
        if (std::abs(arg(k).imag()) > std::abs(widest(k).imag())) widest(k) = arg(k);
      }
    }
  }
  return ba_theta_assembly(inp, x, y, default_truncation(inp.period, widest));
}

}  // namespace mlsurf
