// Copyright 2026 The qpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Self-contained dense complex linear algebra for operators of dimension
// up to 64: Hermitian eigendecomposition (cyclic Jacobi), spectral
// functions, trace norms, support projectors and Kronecker products.

#ifndef QPRIV_LINALG_HPP
#define QPRIV_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "qpriv/errors.hpp"

namespace qpriv {

using Complex = std::complex<double>;

inline constexpr int kMaxDim = 64;
inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kHermitianTol = 1e-10;

/// Dense square complex matrix, row-major, value semantics.
class ComplexMatrix {
 public:
  ComplexMatrix() : dim_(0) {}

  explicit ComplexMatrix(int dim) : dim_(dim), a_(std::size_t(dim) * dim) {
    check_dim(dim);
  }

  ComplexMatrix(int dim, std::vector<Complex> entries)
      : dim_(dim), a_(std::move(entries)) {
    check_dim(dim);
    if (a_.size() != std::size_t(dim) * dim)
      throw DimensionMismatchError("ComplexMatrix: entry count does not match dim^2");
  }

  static ComplexMatrix identity(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix zero(int dim) { return ComplexMatrix(dim); }

  int dim() const { return dim_; }

  Complex& operator()(int i, int j) { return a_[std::size_t(i) * dim_ + j]; }
  const Complex& operator()(int i, int j) const {
    return a_[std::size_t(i) * dim_ + j];
  }

  const std::vector<Complex>& entries() const { return a_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix r(dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  Complex trace() const {
    Complex t = 0.0;
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const Complex& z : a_) s += std::norm(z);
    return std::sqrt(s);
  }

  bool all_finite() const {
    for (const Complex& z : a_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_dim(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_dim(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  ComplexMatrix& operator*=(Complex s) {
    for (Complex& z : a_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
    return a += b;
  }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
    return a -= b;
  }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.require_same_dim(b);
    const int n = a.dim_;
    ComplexMatrix r(n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex(0.0)) continue;
        for (int j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

 private:
  static void check_dim(int dim) {
    if (dim < 1) throw DimensionMismatchError("ComplexMatrix: dim must be positive");
    if (dim > kMaxDim)
      throw DimensionOverflowError("ComplexMatrix: dim " + std::to_string(dim) +
                                   " exceeds limit " + std::to_string(kMaxDim));
  }

  void require_same_dim(const ComplexMatrix& o) const {
    if (dim_ != o.dim_)
      throw DimensionMismatchError("ComplexMatrix: dims " + std::to_string(dim_) +
                                   " and " + std::to_string(o.dim_) + " differ");
  }

  int dim_;
  std::vector<Complex> a_;
};

inline double hermiticity_defect(const ComplexMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) s += std::norm(a(i, j) - std::conj(a(j, i)));
  return std::sqrt(s);
}

inline bool is_hermitian(const ComplexMatrix& a, double rel_tol = kHermitianTol) {
  return hermiticity_defect(a) <= rel_tol * std::max(1.0, a.frobenius_norm());
}

inline void require_hermitian(const ComplexMatrix& a, const char* who) {
  if (!a.all_finite())
    throw ValidationError(std::string(who) + ": matrix has non-finite entries");
  if (!is_hermitian(a))
    throw NotHermitianError(std::string(who) + ": matrix is not Hermitian within tolerance");
}

/// Real trace of a product of two (nominally Hermitian) matrices.
inline double real_trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim())
    throw DimensionMismatchError("real_trace_product: dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int k = 0; k < a.dim(); ++k) s += (a(i, k) * b(k, i)).real();
  return s;
}

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and a
/// unitary whose columns are the matching eigenvectors.
struct HermitianEigenSystem {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;
};

namespace detail {

// One cyclic Jacobi pass: rotate away every off-diagonal element in the
// (p,q) plane with the complex Givens rotation that diagonalizes the 2x2
// block. Convergence is quadratic once the off-diagonal mass is small.
inline bool jacobi_sweep(ComplexMatrix& a, ComplexMatrix& v) {
  const int n = a.dim();
  bool rotated = false;
  for (int p = 0; p < n - 1; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const Complex apq = a(p, q);
      const double mag = std::abs(apq);
      if (mag == 0.0) continue;
      rotated = true;

      const double app = a(p, p).real();
      const double aqq = a(q, q).real();
      const Complex phase = apq / mag;  // e^{i theta}

      // Phase-rotate to a real symmetric 2x2 block, then pick the smaller
      // Jacobi tangent root for stability.
      const double tau = (aqq - app) / (2.0 * mag);
      const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
      const double c = 1.0 / std::sqrt(1.0 + t * t);
      const double s = t * c;

      // Unitary U: U_pp = c, U_pq = s, U_qp = -s*conj(phase), U_qq = c*conj(phase).
      const Complex upq = s;
      const Complex uqp = -s * std::conj(phase);
      const Complex uqq = c * std::conj(phase);

      // A <- A U (columns p and q).
      for (int k = 0; k < n; ++k) {
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = c * akp + uqp * akq;
        a(k, q) = upq * akp + uqq * akq;
      }
      // A <- U^dagger A (rows p and q).
      for (int k = 0; k < n; ++k) {
        const Complex apk = a(p, k);
        const Complex aqk = a(q, k);
        a(p, k) = c * apk + std::conj(uqp) * aqk;
        a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
      }
      // V <- V U.
      for (int k = 0; k < n; ++k) {
        const Complex vkp = v(k, p);
        const Complex vkq = v(k, q);
        v(k, p) = c * vkp + uqp * vkq;
        v(k, q) = upq * vkp + uqq * vkq;
      }
      a(p, q) = 0.0;
      a(q, p) = 0.0;
    }
  }
  return rotated;
}

inline double offdiagonal_mass(const ComplexMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace detail

inline HermitianEigenSystem hermitian_eig(const ComplexMatrix& input) {
  require_hermitian(input, "hermitian_eig");
  const int n = input.dim();

  // Work on the exactly Hermitian part so rounding in the caller cannot
  // leak into the iteration.
  ComplexMatrix a(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = 0.5 * (input(i, j) + std::conj(input(j, i)));

  const double scale = a.frobenius_norm();
  ComplexMatrix v = ComplexMatrix::identity(n);

  constexpr int kMaxSweeps = 100;
  constexpr double kOffTol = 1e-13;
  bool converged = (scale == 0.0);
  for (int sweep = 0; !converged && sweep < kMaxSweeps; ++sweep) {
    if (!detail::jacobi_sweep(a, v) ||
        detail::offdiagonal_mass(a) <= kOffTol * scale) {
      converged = true;
    }
  }
  if (!converged) throw NoConvergenceError("hermitian_eig: sweep budget exhausted");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return a(i, i).real() < a(j, j).real();
  });

  HermitianEigenSystem sys;
  sys.eigenvalues.resize(n);
  sys.eigenvectors = ComplexMatrix(n);
  for (int c = 0; c < n; ++c) {
    sys.eigenvalues[c] = a(order[c], order[c]).real();
    for (int r = 0; r < n; ++r) sys.eigenvectors(r, c) = v(r, order[c]);
  }
  return sys;
}

/// Rebuild sum_i f(lambda_i) |i><i| from an eigensystem.
template <typename Fn>
inline ComplexMatrix spectral_map(const HermitianEigenSystem& sys, Fn&& f) {
  const int n = sys.eigenvectors.dim();
  ComplexMatrix r(n);
  for (int k = 0; k < n; ++k) {
    const double w = f(sys.eigenvalues[k]);
    if (w == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const Complex vik = sys.eigenvectors(i, k);
      if (vik == Complex(0.0)) continue;
      for (int j = 0; j < n; ++j)
        r(i, j) += w * vik * std::conj(sys.eigenvectors(j, k));
    }
  }
  return r;
}

/// Sum of the positive eigenvalues of a Hermitian matrix.
inline double positive_part_trace(const ComplexMatrix& a) {
  const HermitianEigenSystem sys = hermitian_eig(a);
  double s = 0.0;
  for (double lam : sys.eigenvalues)
    if (lam > 0.0) s += lam;
  return s;
}

/// Schatten 1-norm. Hermitian inputs take the eigenvalue route; general
/// matrices go through the singular values of A^dagger A.
inline double trace_norm(const ComplexMatrix& a) {
  if (!a.all_finite()) throw ValidationError("trace_norm: non-finite entries");
  if (is_hermitian(a, 1e-12)) {
    const HermitianEigenSystem sys = hermitian_eig(a);
    double s = 0.0;
    for (double lam : sys.eigenvalues) s += std::abs(lam);
    return s;
  }
  const ComplexMatrix gram = a.adjoint() * a;
  const HermitianEigenSystem sys = hermitian_eig(gram);
  double s = 0.0;
  for (double lam : sys.eigenvalues) s += std::sqrt(std::max(lam, 0.0));
  return s;
}

namespace detail {

inline HermitianEigenSystem psd_eig(const ComplexMatrix& a, double rank_tol,
                                    const char* who) {
  const HermitianEigenSystem sys = hermitian_eig(a);
  const double lam_max = sys.eigenvalues.empty() ? 0.0 : sys.eigenvalues.back();
  if (sys.eigenvalues.front() < -rank_tol * std::max(1.0, lam_max))
    throw NotPsdError(std::string(who) + ": matrix has a negative eigenvalue " +
                      std::to_string(sys.eigenvalues.front()));
  return sys;
}

}  // namespace detail

/// Projector onto the eigenspaces with eigenvalue above rank_tol * lambda_max.
inline ComplexMatrix support_projector(const ComplexMatrix& a,
                                       double rank_tol = kDefaultRankTol) {
  const HermitianEigenSystem sys = detail::psd_eig(a, rank_tol, "support_projector");
  const double cutoff = rank_tol * std::max(0.0, sys.eigenvalues.back());
  return spectral_map(sys, [&](double lam) { return lam > cutoff ? 1.0 : 0.0; });
}

/// Moore-Penrose inverse square root: sum lambda^{-1/2} |i><i| over the support.
inline ComplexMatrix inv_sqrt_on_support(const ComplexMatrix& a,
                                         double rank_tol = kDefaultRankTol) {
  const HermitianEigenSystem sys = detail::psd_eig(a, rank_tol, "inv_sqrt_on_support");
  const double cutoff = rank_tol * std::max(0.0, sys.eigenvalues.back());
  return spectral_map(sys, [&](double lam) {
    return lam > cutoff ? 1.0 / std::sqrt(lam) : 0.0;
  });
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const long prod = long(a.dim()) * b.dim();
  if (prod > kMaxDim)
    throw DimensionOverflowError("kron: product dimension " + std::to_string(prod) +
                                 " exceeds limit " + std::to_string(kMaxDim));
  ComplexMatrix r{int(prod)};
  const int db = b.dim();
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex(0.0)) continue;
      for (int k = 0; k < db; ++k)
        for (int l = 0; l < db; ++l) r(i * db + k, j * db + l) = aij * b(k, l);
    }
  return r;
}

}  // namespace qpriv

#endif  // QPRIV_LINALG_HPP
