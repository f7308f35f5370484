#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "mlsurf/types.hpp"

namespace mlsurf {

/// Neumaier-compensated accumulator for complex terms; real and imaginary
/// parts carry independent compensation.
template <typename T>
class CompensatedSum {
 public:
  void add(const Complex<T>& term) {
    accumulate(re_, re_comp_, term.real());
    accumulate(im_, im_comp_, term.imag());
  }
  Complex<T> value() const { return {re_ + re_comp_, im_ + im_comp_}; }

 private:
  static void accumulate(T& sum, T& comp, T term) {
    const T t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }

  T re_{0}, re_comp_{0}, im_{0}, im_comp_{0};
};

/// Riemann matrix: complex symmetric g x g with positive definite imaginary
/// part. Only the upper triangle of the input is read.
template <typename T>
class PeriodMatrix {
 public:
  static PeriodMatrix fromUpperTriangle(const MatrixXc<T>& entries) {
    if (entries.rows() == 0 || entries.rows() != entries.cols()) {
      throw DimensionMismatch("period matrix must be square with genus >= 1");
    }
    const Eigen::Index g = entries.rows();
    MatrixXc<T> b(g, g);
    for (Eigen::Index i = 0; i < g; ++i) {
      for (Eigen::Index j = i; j < g; ++j) {
        b(i, j) = entries(i, j);
        b(j, i) = entries(i, j);
      }
    }
    using RealMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
    const RealMatrix im = b.imag();
    Eigen::LLT<RealMatrix> llt(im);
    if (llt.info() != Eigen::Success) {
      throw InvalidArgument("imaginary part of the period matrix is not positive definite");
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(im, Eigen::EigenvaluesOnly);
    const T lambda_min = eig.eigenvalues().minCoeff();
    if (!(lambda_min > T(0))) {
      throw InvalidArgument("imaginary part of the period matrix is not positive definite");
    }
    return PeriodMatrix(std::move(b), lambda_min);
  }

  int genus() const { return static_cast<int>(b_.rows()); }
  const MatrixXc<T>& matrix() const { return b_; }
  T minImagEigenvalue() const { return lambda_min_; }

 private:
  PeriodMatrix(MatrixXc<T> b, T lambda_min) : b_(std::move(b)), lambda_min_(lambda_min) {}

  MatrixXc<T> b_;
  T lambda_min_;
};

/// Lattice vectors m with |m|_inf <= radius are summed.
struct LatticeTruncation {
  int radius = 8;
  std::size_t max_terms = 4'000'000;
};

inline std::size_t lattice_cardinality(int radius, int genus) {
  std::size_t n = 1;
  const std::size_t side = 2 * static_cast<std::size_t>(radius) + 1;
  for (int i = 0; i < genus; ++i) {
    if (n > std::numeric_limits<std::size_t>::max() / side) return std::numeric_limits<std::size_t>::max();
    n *= side;
  }
  return n;
}

/// Smallest radius R >= 1 with exp(-pi*lambda_min*R^2) * exp(2*pi*|Im z|*R*g) < tol.
template <typename T>
LatticeTruncation default_truncation(const PeriodMatrix<T>& b, const VectorXc<T>& z, T tol = T(1e-14),
                                     std::size_t max_terms = 4'000'000) {
  const T lambda = b.minImagEigenvalue();
  const T g = static_cast<T>(b.genus());
  const T im_max = z.size() > 0 ? z.imag().cwiseAbs().maxCoeff() : T(0);
  // pi*lambda*R^2 - 2*pi*g*|Im z|*R - log(1/tol) > 0
  const T qa = kPi<T> * lambda;
  const T qb = T(2) * kPi<T> * g * im_max;
  const T qc = -std::log(tol);
  const T root = (qb + std::sqrt(qb * qb + T(4) * qa * qc)) / (T(2) * qa);
  LatticeTruncation trunc;
  trunc.radius = std::max(1, static_cast<int>(std::ceil(root)));
  trunc.max_terms = max_terms;
  return trunc;
}

/// Truncated Riemann theta series sum_m exp(pi i (Bm,m) + 2 pi i (m,z)).
/// Terms are grouped by |m|_inf shell and the shells are added from the
/// outermost inward with compensated summation.
template <typename T>
Complex<T> riemann_theta(const VectorXc<T>& z, const PeriodMatrix<T>& period, const LatticeTruncation& trunc) {
  const int g = period.genus();
  if (z.size() != g) {
    throw DimensionMismatch("theta argument has dimension " + std::to_string(z.size()) + ", genus is " +
                            std::to_string(g));
  }
  if (trunc.radius < 1) throw InvalidArgument("lattice truncation radius must be >= 1");
  if (lattice_cardinality(trunc.radius, g) > trunc.max_terms) {
    throw TruncationCapExceeded("lattice sum (2R+1)^g exceeds the configured cap");
  }

  const MatrixXc<T>& b = period.matrix();
  const int r = trunc.radius;
  const Complex<T> i_pi(T(0), kPi<T>);
  std::vector<CompensatedSum<T>> shells(static_cast<std::size_t>(r) + 1);
  std::vector<int> m(static_cast<std::size_t>(g), -r);

  for (;;) {
    Complex<T> quad(0);
    Complex<T> lin(0);
    int shell = 0;
    for (int i = 0; i < g; ++i) {
      shell = std::max(shell, std::abs(m[i]));
      lin += static_cast<T>(m[i]) * z(i);
      Complex<T> row(0);
      for (int j = 0; j < g; ++j) row += b(i, j) * static_cast<T>(m[j]);
      quad += static_cast<T>(m[i]) * row;
    }
    shells[static_cast<std::size_t>(shell)].add(std::exp(i_pi * quad + T(2) * i_pi * lin));

    int k = 0;
    while (k < g && m[k] == r) m[k++] = -r;
    if (k == g) break;
    ++m[k];
  }

  CompensatedSum<T> total;
  for (int s = r; s >= 0; --s) total.add(shells[static_cast<std::size_t>(s)].value());
  return total.value();
}

/// |theta(z + Bm) - exp(-pi i (Bm,m) - 2 pi i (m,z)) theta(z)| / (1 + |theta(z)|).
template <typename T>
T quasi_periodicity_defect(const VectorXc<T>& z, const Eigen::VectorXi& m, const PeriodMatrix<T>& period,
                           const LatticeTruncation& trunc) {
  if (m.size() != period.genus()) throw DimensionMismatch("lattice shift dimension differs from genus");
  const VectorXc<T> mc = m.cast<T>().template cast<Complex<T>>();
  const VectorXc<T> bm = period.matrix() * mc;
  const Complex<T> i_pi(T(0), kPi<T>);
  const Complex<T> factor = std::exp(-i_pi * (mc.array() * bm.array()).sum() - T(2) * i_pi * (mc.array() * z.array()).sum());
  const Complex<T> base = riemann_theta(z, period, trunc);
  const Complex<T> shifted = riemann_theta(VectorXc<T>(z + bm), period, trunc);
  return std::abs(shifted - factor * base) / (T(1) + std::abs(base));
}

}  // namespace mlsurf
