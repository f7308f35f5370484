#pragma once

#include <array>
#include <cmath>
#include <limits>

#include "mlsurf/baker_akhiezer.hpp"

namespace mlsurf {

/// Value and first/second partials of phi: R^2 -> C^3 at (x, y).
template <typename T>
struct SurfaceJet {
  T x{};
  T y{};
  Vector3c<T> phi = Vector3c<T>::Zero();
  Vector3c<T> phi_x = Vector3c<T>::Zero();
  Vector3c<T> phi_y = Vector3c<T>::Zero();
  Vector3c<T> phi_xx = Vector3c<T>::Zero();
  Vector3c<T> phi_xy = Vector3c<T>::Zero();
  Vector3c<T> phi_yy = Vector3c<T>::Zero();
};

/// phi^i = alpha_i psi(x, y, Q_i) on the reducible rational curve. Each
/// component is an exponential sum, so partials of any order are exact.
template <typename T>
class SpectralFamily {
 public:
  explicit SpectralFamily(ReducibleCurveData<T> curve) : curve_(std::move(curve)) {
    for (std::size_t i = 0; i < 3; ++i) {
      components_[i] = ba_rational_field(curve_, Component::Two, Complex<T>(curve_.q[i])) * Complex<T>(curve_.alpha[i]);
    }
  }

  const ReducibleCurveData<T>& curve() const { return curve_; }
  const std::array<ExpSum<T>, 3>& components() const { return components_; }

  Vector3c<T> derivative(int nx, int ny, T x, T y) const {
    Vector3c<T> out;
    for (int i = 0; i < 3; ++i) out(i) = components_[static_cast<std::size_t>(i)].derivative(nx, ny, x, y);
    return out;
  }

  Vector3c<T> value(T x, T y) const { return derivative(0, 0, x, y); }
  Vector3c<T> operator()(T x, T y) const { return value(x, y); }

  SurfaceJet<T> jet(T x, T y) const {
    SurfaceJet<T> j;
    j.x = x;
    j.y = y;
    j.phi = derivative(0, 0, x, y);
    j.phi_x = derivative(1, 0, x, y);
    j.phi_y = derivative(0, 1, x, y);
    j.phi_xx = derivative(2, 0, x, y);
    j.phi_xy = derivative(1, 1, x, y);
    j.phi_yy = derivative(0, 2, x, y);
    return j;
  }

  /// Euclidean distance in the (x, y) plane to the nearest line where
  /// f2 = 0, i.e. where |phi_y| vanishes and the immersion degenerates.
  T degeneracy_distance(T x, T y) const {
    const T theta = curve_.a * x - curve_.b * y;
    const T theta0 = std::atan(-curve_.b / curve_.gamma_im);
    const T offset = std::remainder(theta - theta0, kPi<T>);
    return std::abs(offset) / std::hypot(curve_.a, curve_.b);
  }

 private:
  ReducibleCurveData<T> curve_;
  std::array<ExpSum<T>, 3> components_;
};

template <typename T>
SurfaceJet<T> spectral_family_jet(const ReducibleCurveData<T>& curve, T x, T y) {
  return SpectralFamily<T>(curve).jet(x, y);
}

/// Immersion whose Hopf image is the cone m u1^2 + n u2^2 = (m+n) u3^2 swept by
/// the circle action; m, n >= 1.
template <typename T>
class ConeFamily {
 public:
  ConeFamily(int m, int n) : m_(m), n_(n) {
    if (m < 1 || n < 1) throw InvalidArgument("cone family requires m, n >= 1");
    const T mt = static_cast<T>(m);
    const T nt = static_cast<T>(n);
    c1_ = std::sqrt(mt + nt) / std::sqrt(T(2) * mt + nt);
    c2_ = std::sqrt(mt + nt) / std::sqrt(mt + T(2) * nt);
    w_cos_ = nt / (mt + T(2) * nt);
    w_sin_ = mt / (T(2) * mt + nt);
  }

  int m() const { return m_; }
  int n() const { return n_; }

  Vector3c<T> value(T x, T y) const { return jet(x, y).phi; }
  Vector3c<T> operator()(T x, T y) const { return value(x, y); }

  SurfaceJet<T> jet(T x, T y) const {
    const Complex<T> i(T(0), T(1));
    const T pi = kPi<T>;
    const T k1 = pi * static_cast<T>(m_);
    const T k2 = pi * static_cast<T>(n_);
    const T k3 = -pi * static_cast<T>(m_ + n_);
    const Complex<T> e1 = std::exp(i * (k1 * y));
    const Complex<T> e2 = std::exp(i * (k2 * y));
    const Complex<T> e3 = std::exp(i * (k3 * y));
    const T sx = std::sin(x);
    const T cx = std::cos(x);

    // third component modulus s = sqrt(R(x))
    const T radicand = w_cos_ * cx * cx + w_sin_ * sx * sx;
    const T kappa = w_sin_ - w_cos_;
    const T r1 = kappa * std::sin(T(2) * x);
    const T r2 = T(2) * kappa * std::cos(T(2) * x);
    const T s = std::sqrt(radicand);
    const T s1 = r1 / (T(2) * s);
    const T s2 = r2 / (T(2) * s) - r1 * r1 / (T(4) * s * s * s);

    const std::array<T, 3> val = {c1_ * sx, c2_ * cx, s};
    const std::array<T, 3> dx1 = {c1_ * cx, -c2_ * sx, s1};
    const std::array<T, 3> dx2 = {-c1_ * sx, -c2_ * cx, s2};
    const std::array<T, 3> k = {k1, k2, k3};
    const std::array<Complex<T>, 3> e = {e1, e2, e3};

    SurfaceJet<T> j;
    j.x = x;
    j.y = y;
    for (int c = 0; c < 3; ++c) {
      const auto u = static_cast<std::size_t>(c);
      const Complex<T> iky = i * k[u];
      j.phi(c) = val[u] * e[u];
      j.phi_x(c) = dx1[u] * e[u];
      j.phi_y(c) = iky * val[u] * e[u];
      j.phi_xx(c) = dx2[u] * e[u];
      j.phi_xy(c) = iky * dx1[u] * e[u];
      j.phi_yy(c) = iky * iky * val[u] * e[u];
    }
    return j;
  }

 private:
  int m_;
  int n_;
  T c1_{}, c2_{}, w_cos_{}, w_sin_{};
};

template <typename T>
SurfaceJet<T> cone_family_jet(int m, int n, T x, T y) {
  return ConeFamily<T>(m, n).jet(x, y);
}

/// Central-difference jet of an arbitrary point map (x, y) -> C^3, O(h^2).
template <typename T, typename Evaluator>
SurfaceJet<T> fd_jet(const Evaluator& eval, T x, T y, T h) {
  if (!(h > T(0))) throw InvalidArgument("finite-difference step must be > 0");
  const Vector3c<T> c = eval(x, y);
  const Vector3c<T> xp = eval(x + h, y);
  const Vector3c<T> xm = eval(x - h, y);
  const Vector3c<T> yp = eval(x, y + h);
  const Vector3c<T> ym = eval(x, y - h);
  const Vector3c<T> pp = eval(x + h, y + h);
  const Vector3c<T> pm = eval(x + h, y - h);
  const Vector3c<T> mp = eval(x - h, y + h);
  const Vector3c<T> mm = eval(x - h, y - h);

  SurfaceJet<T> j;
  j.x = x;
  j.y = y;
  j.phi = c;
  j.phi_x = (xp - xm) / (T(2) * h);
  j.phi_y = (yp - ym) / (T(2) * h);
  j.phi_xx = (xp - T(2) * c + xm) / (h * h);
  j.phi_yy = (yp - T(2) * c + ym) / (h * h);
  j.phi_xy = (pp - pm - mp + mm) / (T(4) * h * h);
  return j;
}

/// Canonical representative of the Hopf class of phi: unit norm, first
/// nonzero component real and positive.
template <typename T>
Vector3c<T> hopf_representative(const Vector3c<T>& phi) {
  const T norm = phi.norm();
  if (!(norm > T(0))) throw InvalidArgument("Hopf projection of the zero vector");
  Vector3c<T> unit = phi / norm;
  const T threshold = T(64) * std::numeric_limits<T>::epsilon();
  for (int i = 0; i < 3; ++i) {
    const T mag = std::abs(unit(i));
    if (mag > threshold) {
      unit *= std::conj(unit(i)) / mag;
      unit(i) = Complex<T>(mag, T(0));
      break;
    }
  }
  return unit;
}

}  // namespace mlsurf
