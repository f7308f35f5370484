#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mlsurf/types.hpp"

namespace mlsurf {

/// Irreducible component of the two-component rational spectral curve.
enum class Component { One = 1, Two = 2 };

template <typename T>
struct Pole {
  Complex<T> root;
  int multiplicity = 1;
};

/// scale * N(z) dz / prod_k (z - root_k)^{m_k} on one rational component,
/// numerator coefficients in ascending order.
template <typename T>
struct RationalOneForm {
  Component component = Component::One;
  std::vector<Complex<T>> numerator;
  std::vector<Pole<T>> poles;
  Complex<T> scale{1};
};

/// Laurent expansion of a form at z = infinity in w = 1/z:
/// Omega = sum_k coeffs[k] * w^(lowest_power + k) dw.
template <typename T>
struct LaurentAtInfinity {
  int lowest_power = 0;
  std::vector<Complex<T>> coeffs;
};

namespace detail {

template <typename T>
Complex<T> horner(const std::vector<Complex<T>>& ascending, Complex<T> z) {
  Complex<T> acc(0);
  for (auto it = ascending.rbegin(); it != ascending.rend(); ++it) acc = acc * z + *it;
  return acc;
}

template <typename T>
bool same_point(Complex<T> p, Complex<T> q) {
  return std::abs(p - q) <= T(8) * std::numeric_limits<T>::epsilon() * (T(1) + std::abs(q));
}

template <typename T>
int trimmed_degree(const std::vector<Complex<T>>& coeffs) {
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg >= 0 && coeffs[static_cast<std::size_t>(deg)] == Complex<T>(0)) --deg;
  return deg;
}

// Merges coincident roots into a single pole of summed multiplicity.
template <typename T>
std::vector<Pole<T>> merge_poles(const std::vector<Complex<T>>& roots) {
  std::vector<Pole<T>> poles;
  for (const auto& r : roots) {
    bool merged = false;
    for (auto& p : poles) {
      if (same_point(r, p.root)) {
        ++p.multiplicity;
        merged = true;
        break;
      }
    }
    if (!merged) poles.push_back({r, 1});
  }
  return poles;
}

}  // namespace detail

/// Residue at a simple pole by deflation: scale * N(p) / prod_{other}(p - r)^m.
template <typename T>
Complex<T> residue_simple(const RationalOneForm<T>& form, Complex<T> pole) {
  const Pole<T>* hit = nullptr;
  for (const auto& p : form.poles) {
    if (detail::same_point(pole, p.root)) {
      if (hit != nullptr) throw InvalidArgument("pole listed twice in the denominator");
      hit = &p;
    }
  }
  if (hit == nullptr) throw InvalidArgument("point is not a pole of the form");
  if (hit->multiplicity != 1) throw InvalidArgument("residue_simple requires a simple pole");

  Complex<T> denom(1);
  for (const auto& p : form.poles) {
    if (&p == hit) continue;
    for (int k = 0; k < p.multiplicity; ++k) denom *= (hit->root - p.root);
  }
  return form.scale * detail::horner(form.numerator, hit->root) / denom;
}

/// First `count` Laurent coefficients of the form at infinity.
template <typename T>
LaurentAtInfinity<T> laurent_at_infinity(const RationalOneForm<T>& form, int count) {
  const int n = detail::trimmed_degree(form.numerator);
  LaurentAtInfinity<T> out;
  if (n < 0) {
    out.coeffs.assign(static_cast<std::size_t>(std::max(count, 0)), Complex<T>(0));
    return out;
  }
  int total_mult = 0;
  for (const auto& p : form.poles) total_mult += p.multiplicity;
  // z = 1/w, dz = -dw/w^2: Omega = -scale * w^(D-n-2) * Nrev(w) / prod (1 - r w)^m dw
  out.lowest_power = total_mult - n - 2;

  const auto len = static_cast<std::size_t>(std::max(count, 0));
  std::vector<Complex<T>> series(len, Complex<T>(0));
  for (std::size_t j = 0; j < len && static_cast<int>(j) <= n; ++j) {
    series[j] = -form.scale * form.numerator[static_cast<std::size_t>(n) - j];
  }
  // multiply by the geometric series of each pole factor
  for (const auto& p : form.poles) {
    for (int k = 0; k < p.multiplicity; ++k) {
      for (std::size_t j = 1; j < len; ++j) series[j] += p.root * series[j - 1];
    }
  }
  out.coeffs = std::move(series);
  return out;
}

/// Residue at z = infinity (coefficient of dw/w in the local coordinate w = 1/z).
template <typename T>
Complex<T> residue_at_infinity(const RationalOneForm<T>& form) {
  // w^-1 sits at index -1 - lowest_power
  auto head = laurent_at_infinity(form, 1);
  const int idx = -1 - head.lowest_power;
  if (idx < 0) return Complex<T>(0);
  auto full = laurent_at_infinity(form, idx + 1);
  return full.coeffs[static_cast<std::size_t>(idx)];
}

/// Coefficients of w^1, ..., w^order in Omega = (c w + q w^2 + d3 w^3 + ...) dw
/// at z = infinity. Minimality at a puncture is q = 0.
template <typename T>
std::vector<Complex<T>> expansion_at_infinity(const RationalOneForm<T>& form, int order) {
  if (order < 1) throw InvalidArgument("expansion order must be >= 1");
  auto head = laurent_at_infinity(form, 1);
  if (head.lowest_power < 1) {
    throw InvalidArgument("form does not vanish at infinity (pole or nonzero value in w = 1/z)");
  }
  const int shift = head.lowest_power - 1;
  std::vector<Complex<T>> out(static_cast<std::size_t>(order), Complex<T>(0));
  if (order > shift) {
    auto full = laurent_at_infinity(form, order - shift);
    for (int k = shift; k < order; ++k) out[static_cast<std::size_t>(k)] = full.coeffs[static_cast<std::size_t>(k - shift)];
  }
  return out;
}

/// dz / (z (z^2 - a^2)) on the first component.
template <typename T>
RationalOneForm<T> omega_first_component(T a) {
  RationalOneForm<T> form;
  form.component = Component::One;
  form.numerator = {Complex<T>(1)};
  form.poles = detail::merge_poles<T>({Complex<T>(0), Complex<T>(a), Complex<T>(-a)});
  return form;
}

/// Scale c that makes the second-component form cancel the residue of the
/// first-component form at the gluing pair (a, b).
template <typename T>
T regular_scale(T a, T b, T gamma_im, const std::array<T, 3>& q) {
  return -b * (b - q[0]) * (b - q[1]) * (b - q[2]) / (a * a * (b * b + gamma_im * gamma_im));
}

/// c (z^2 - gamma^2) dz / ((z - Q1)(z - Q2)(z - Q3)(z^2 - b^2)) with gamma = i*gamma_im.
template <typename T>
RationalOneForm<T> omega_second_component(T b, T gamma_im, const std::array<T, 3>& q, T c) {
  RationalOneForm<T> form;
  form.component = Component::Two;
  form.numerator = {Complex<T>(gamma_im * gamma_im), Complex<T>(0), Complex<T>(1)};
  form.poles = detail::merge_poles<T>(
      {Complex<T>(q[0]), Complex<T>(q[1]), Complex<T>(q[2]), Complex<T>(b), Complex<T>(-b)});
  form.scale = Complex<T>(c);
  return form;
}

/// Spectral data of the reducible rational curve: two copies of CP^1 glued
/// at z1 = +-a ~ z2 = +-b, punctures at infinity on each component,
/// normalization point r = 0 on the first, divisor point i*gamma_im and
/// Q1, Q2, Q3 on the second.
template <typename T>
struct ReducibleCurveData {
  T a{};
  T b{};
  std::array<T, 3> q{};   // Q1, Q2 = -Q1, Q3
  T gamma_im{};
  T d{};                  // normalization psi(r) = d
  T c{};                  // scale of the second-component form
  std::array<T, 3> alpha{};
  std::array<T, 3> residue_q{};  // Res_{Q_i} of the second-component form
  T residue_r{};                 // Res_0 of the first-component form
  T c1_exp{};                    // leading w-coefficient at P1
  T c2_exp{};                    // leading w-coefficient at P2

  Complex<T> gamma() const { return {T(0), gamma_im}; }
  RationalOneForm<T> omega1() const { return omega_first_component(a); }
  RationalOneForm<T> omega2() const { return omega_second_component(b, gamma_im, q, c); }
};

/// max over both gluing pairs of |Res Omega_1 + Res Omega_2|.
template <typename T>
T regularity_defect(const ReducibleCurveData<T>& curve) {
  const auto w1 = curve.omega1();
  const auto w2 = curve.omega2();
  const T plus = std::abs(residue_simple(w1, Complex<T>(curve.a)) + residue_simple(w2, Complex<T>(curve.b)));
  const T minus = std::abs(residue_simple(w1, Complex<T>(-curve.a)) + residue_simple(w2, Complex<T>(-curve.b)));
  return std::max(plus, minus);
}

template <typename T>
ReducibleCurveData<T> derive_constants(T a, T b, T q1, T gamma_im) {
  auto finite = [](T v) { return std::isfinite(static_cast<double>(v)); };
  if (!finite(a) || !finite(b) || !finite(q1) || !finite(gamma_im)) {
    throw InvalidArgument("curve parameters must be finite");
  }
  if (!(a > T(0))) throw InvalidArgument("a must be > 0");
  if (!(b > T(0))) throw InvalidArgument("b must be > 0");
  if (gamma_im == T(0)) throw InvalidArgument("gamma_im must be nonzero");
  if (q1 == T(0)) throw InvalidArgument("q1 must be nonzero");
  if (!(std::abs(q1) > b)) throw InvalidArgument("|q1| must exceed b (otherwise Res_Q3 <= 0)");

  ReducibleCurveData<T> curve;
  curve.a = a;
  curve.b = b;
  curve.gamma_im = gamma_im;
  const T q2 = -q1;
  const T q3 = -b * b * (q1 + q2) / (b * b + q1 * q2);
  curve.q = {q1, q2, q3};
  for (T qi : curve.q) {
    if (std::abs(std::abs(qi) - b) <= T(8) * std::numeric_limits<T>::epsilon() * b) {
      throw InvalidArgument("marked point coincides with a gluing point");
    }
  }
  curve.c = regular_scale(a, b, gamma_im, curve.q);

  const auto w1 = curve.omega1();
  const auto w2 = curve.omega2();
  curve.residue_r = residue_simple(w1, Complex<T>(0)).real();
  curve.d = std::sqrt(T(-1) / curve.residue_r);
  for (std::size_t i = 0; i < 3; ++i) {
    const Complex<T> res = residue_simple(w2, Complex<T>(curve.q[i]));
    if (!(res.real() > T(0))) {
      throw InvalidArgument("Res_Q" + std::to_string(i + 1) + " is not positive");
    }
    curve.residue_q[i] = res.real();
    curve.alpha[i] = std::sqrt(res.real());
  }
  curve.c1_exp = expansion_at_infinity(w1, 1)[0].real();
  curve.c2_exp = expansion_at_infinity(w2, 1)[0].real();

  const T scale = std::max(T(1), std::abs(residue_simple(w1, Complex<T>(a))));
  if (regularity_defect(curve) > T(1e-13) * scale) {
    throw Error("internal: derived curve is not regular at the gluing points");
  }
  return curve;
}

}  // namespace mlsurf
