#pragma once

#include <vector>

#include "mlsurf/types.hpp"

namespace mlsurf {

/// One term coeff * exp(i (kx x + ky y)). Wavenumbers may be complex, which
/// covers Baker-Akhiezer evaluations at non-real spectral points.
template <typename T>
struct ExpTerm {
  Complex<T> coeff;
  Complex<T> kx;
  Complex<T> ky;
};

/// Finite sum of exponential terms in (x, y). Closed under addition, scalar
/// multiplication, products and partial differentiation, so every derivative
/// of a closed-form Baker-Akhiezer expression is exact coefficient algebra.
template <typename T>
class ExpSum {
 public:
  ExpSum() = default;
  explicit ExpSum(std::vector<ExpTerm<T>> terms) : terms_(std::move(terms)) {}

  static ExpSum constant(Complex<T> c) { return ExpSum({{c, Complex<T>(0), Complex<T>(0)}}); }
  static ExpSum wave(Complex<T> c, Complex<T> kx, Complex<T> ky) { return ExpSum({{c, kx, ky}}); }

  const std::vector<ExpTerm<T>>& terms() const { return terms_; }

  Complex<T> operator()(T x, T y) const { return derivative(0, 0, x, y); }

  /// d^nx/dx^nx d^ny/dy^ny evaluated at (x, y).
  Complex<T> derivative(int nx, int ny, T x, T y) const {
    const Complex<T> i(T(0), T(1));
    Complex<T> sum(0);
    for (const auto& t : terms_) {
      const Complex<T> dx = i * t.kx;
      const Complex<T> dy = i * t.ky;
      Complex<T> factor = t.coeff;
      for (int k = 0; k < nx; ++k) factor *= dx;
      for (int k = 0; k < ny; ++k) factor *= dy;
      sum += factor * std::exp(i * (t.kx * x + t.ky * y));
    }
    return sum;
  }

  ExpSum differentiated(int nx, int ny) const {
    const Complex<T> i(T(0), T(1));
    ExpSum out = *this;
    for (auto& t : out.terms_) {
      for (int k = 0; k < nx; ++k) t.coeff *= i * t.kx;
      for (int k = 0; k < ny; ++k) t.coeff *= i * t.ky;
    }
    return out;
  }

  ExpSum& operator+=(const ExpSum& other) {
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    return *this;
  }
  ExpSum& operator*=(Complex<T> s) {
    for (auto& t : terms_) t.coeff *= s;
    return *this;
  }

  friend ExpSum operator+(ExpSum a, const ExpSum& b) { return a += b; }
  friend ExpSum operator-(ExpSum a, ExpSum b) { return a += (b *= Complex<T>(-1)); }
  friend ExpSum operator*(ExpSum a, Complex<T> s) { return a *= s; }
  friend ExpSum operator*(Complex<T> s, ExpSum a) { return a *= s; }

  friend ExpSum operator*(const ExpSum& a, const ExpSum& b) {
    std::vector<ExpTerm<T>> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_) {
      for (const auto& t : b.terms_) out.push_back({s.coeff * t.coeff, s.kx + t.kx, s.ky + t.ky});
    }
    return ExpSum(std::move(out));
  }

 private:
  std::vector<ExpTerm<T>> terms_;
};

}  // namespace mlsurf
