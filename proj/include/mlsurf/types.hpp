#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mlsurf {

template <typename T>
using Complex = std::complex<T>;

template <typename T>
using Vector3c = Eigen::Matrix<Complex<T>, 3, 1>;

template <typename T>
using Matrix3c = Eigen::Matrix<Complex<T>, 3, 3>;

template <typename T>
using VectorXc = Eigen::Matrix<Complex<T>, Eigen::Dynamic, 1>;

template <typename T>
using MatrixXc = Eigen::Matrix<Complex<T>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename T>
inline constexpr T kPi = T(3.141592653589793238462643383279502884L);

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Parameters outside an operation's domain (bad curve data, zero vectors, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Truncated lattice sum would exceed the configured term cap.
class TruncationCapExceeded : public Error {
 public:
  using Error::Error;
};

// The evaluation point is a genuine singularity of the construction:
// vanishing derivative, theta zero, ill-conditioned moving frame.
class Degenerate : public Error {
 public:
  using Error::Error;
};

// The normalized frame (phi, phi_x, phi_y) is not unitary.
class NotLagrangian : public Error {
 public:
  using Error::Error;
};

/// Hermitian product <u, w> = sum_i u_i * conj(w_i), conjugate-linear in the
/// second slot.
template <typename T>
Complex<T> hermitian(const Vector3c<T>& u, const Vector3c<T>& w) {
  return w.dot(u);  // Eigen conjugates the left operand
}

}  // namespace mlsurf
