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

// Quantum state and channel model: density operators, Kraus channels, the
// depolarizing channel, tensor products and seeded random instance
// generators for property tests.

#ifndef QPRIV_QUANTUM_HPP
#define QPRIV_QUANTUM_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qpriv/errors.hpp"
#include "qpriv/linalg.hpp"

namespace qpriv {

inline constexpr double kDensityTraceTol = 1e-10;
inline constexpr double kDensityNegTol = 1e-10;
inline constexpr double kKrausCompletenessTol = 1e-9;
inline constexpr double kChannelOutputNegTol = 1e-9;

/// Positive semi-definite, unit-trace operator.
class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix m) : m_(std::move(m)) { validate(); }

  int dim() const { return m_.dim(); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  void validate() const {
    if (!m_.all_finite())
      throw ValidationError("DensityOperator: non-finite entries");
    if (!is_hermitian(m_))
      throw ValidationError("DensityOperator: matrix is not Hermitian within tolerance");
    if (std::abs(m_.trace().real() - 1.0) > kDensityTraceTol ||
        std::abs(m_.trace().imag()) > kDensityTraceTol)
      throw ValidationError("DensityOperator: trace is not 1 within tolerance");
    const HermitianEigenSystem sys = hermitian_eig(m_);
    if (sys.eigenvalues.front() < -kDensityNegTol)
      throw ValidationError("DensityOperator: negative eigenvalue " +
                            std::to_string(sys.eigenvalues.front()));
  }

  ComplexMatrix m_;
};

/// Kraus representation {E_j} with sum_j E_j^dagger E_j = I.
/// Channels are square (input dim equals output dim) in this library.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<ComplexMatrix> operators)
      : ops_(std::move(operators)) {
    if (ops_.empty()) throw ValidationError("KrausChannel: empty operator list");
    const int d = ops_.front().dim();
    for (const ComplexMatrix& e : ops_) {
      if (e.dim() != d)
        throw DimensionMismatchError("KrausChannel: mixed operator dimensions");
      if (!e.all_finite())
        throw ValidationError("KrausChannel: non-finite entries");
    }
    if (long(ops_.size()) > long(d) * d)
      throw ValidationError("KrausChannel: more than dim^2 Kraus operators");
    ComplexMatrix sum(d);
    for (const ComplexMatrix& e : ops_) sum += e.adjoint() * e;
    sum -= ComplexMatrix::identity(d);
    if (sum.frobenius_norm() > kKrausCompletenessTol)
      throw ValidationError("KrausChannel: completeness sum_j E_j^dagger E_j = I violated "
                            "(defect " + std::to_string(sum.frobenius_norm()) + ")");
  }

  static KrausChannel identity(int dim) {
    return KrausChannel({ComplexMatrix::identity(dim)});
  }

  int input_dim() const { return ops_.front().dim(); }
  int output_dim() const { return ops_.front().dim(); }
  const std::vector<ComplexMatrix>& operators() const { return ops_; }

 private:
  std::vector<ComplexMatrix> ops_;
};

/// Mixing probability and dimension of a depolarizing channel
/// rho -> (p/D) I + (1-p) rho.
struct DepolarizingParams {
  double p = 0.0;
  int dim = 2;

  DepolarizingParams(double p_, int dim_) : p(p_), dim(dim_) {
    if (!(p >= 0.0 && p <= 1.0))
      throw OutOfRangeError("DepolarizingParams: p must lie in [0,1]");
    if (dim < 2) throw OutOfRangeError("DepolarizingParams: dim must be at least 2");
  }
};

/// Prior probabilities of the two hypotheses; p_sigma is derived.
struct PriorPair {
  double p_rho = 0.5;

  explicit PriorPair(double p_rho_ = 0.5) : p_rho(p_rho_) {
    if (!(p_rho >= 0.0 && p_rho <= 1.0))
      throw OutOfRangeError("PriorPair: p_rho must lie in [0,1]");
  }
  double p_sigma() const { return 1.0 - p_rho; }
};

inline DensityOperator density_from_pure(const std::vector<Complex>& amplitudes,
                                         bool normalize = false) {
  const int d = int(amplitudes.size());
  if (d < 1) throw ZeroVectorError("density_from_pure: empty amplitude vector");
  double n2 = 0.0;
  for (const Complex& z : amplitudes) n2 += std::norm(z);
  if (n2 <= 1e-300) throw ZeroVectorError("density_from_pure: zero amplitude vector");
  if (!normalize && std::abs(std::sqrt(n2) - 1.0) > 1e-8)
    throw ValidationError("density_from_pure: vector norm differs from 1 by more than 1e-8");
  ComplexMatrix m(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      m(i, j) = amplitudes[i] * std::conj(amplitudes[j]) / n2;
  return DensityOperator(std::move(m));
}

namespace detail {

// Channel outputs inherit rounding from the Kraus sum; eigenvalues in
// [-1e-9, 0) are clipped to zero and the trace renormalized. Anything more
// negative is a real bug in the inputs.
inline DensityOperator repair_channel_output(ComplexMatrix m, const char* who) {
  // Hermitize first: the Kraus sum is Hermitian analytically.
  const int n = m.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const Complex z = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  const HermitianEigenSystem sys = hermitian_eig(m);
  if (sys.eigenvalues.front() < -kChannelOutputNegTol)
    throw NotPsdError(std::string(who) + ": output eigenvalue " +
                      std::to_string(sys.eigenvalues.front()) +
                      " below the -1e-9 repair window");
  ComplexMatrix fixed =
      spectral_map(sys, [](double lam) { return lam < 0.0 ? 0.0 : lam; });
  const double tr = fixed.trace().real();
  if (std::abs(tr - 1.0) > kKrausCompletenessTol * 10.0)
    throw NotPsdError(std::string(who) + ": output trace " + std::to_string(tr) +
                      " too far from 1");
  fixed *= Complex(1.0 / tr);
  return DensityOperator(std::move(fixed));
}

}  // namespace detail

inline DensityOperator apply_channel(const KrausChannel& e, const DensityOperator& rho) {
  if (e.input_dim() != rho.dim())
    throw DimensionMismatchError("apply_channel: channel dim " +
                                 std::to_string(e.input_dim()) + " vs state dim " +
                                 std::to_string(rho.dim()));
  ComplexMatrix out(e.output_dim());
  for (const ComplexMatrix& k : e.operators()) out += k * rho.matrix() * k.adjoint();
  return detail::repair_channel_output(std::move(out), "apply_channel");
}

inline DensityOperator depolarizing_apply(const DepolarizingParams& params,
                                          const DensityOperator& rho) {
  if (params.dim != rho.dim())
    throw DimensionMismatchError("depolarizing_apply: dim mismatch");
  ComplexMatrix m = ComplexMatrix::identity(params.dim);
  m *= Complex(params.p / params.dim);
  ComplexMatrix scaled = rho.matrix();
  scaled *= Complex(1.0 - params.p);
  m += scaled;
  return DensityOperator(std::move(m));
}

/// Explicit Kraus form of the depolarizing channel: the identity plus the
/// D^2 - 1 discrete Weyl conjugations, each weighted by p/D^2. Used for
/// cross-validation against the affine action.
inline KrausChannel depolarizing_kraus(const DepolarizingParams& params) {
  const int d = params.dim;
  const double w = params.p / double(d) / double(d);
  std::vector<ComplexMatrix> ops;
  ops.reserve(std::size_t(d) * d);
  const double two_pi = 2.0 * 3.14159265358979323846;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      ComplexMatrix wab(d);
      for (int j = 0; j < d; ++j) {
        // W_{a,b} = X^a Z^b: |j> -> omega^{b j} |j + a mod d>.
        const double ang = two_pi * double(b) * double(j) / double(d);
        wab((j + a) % d, j) = std::polar(1.0, ang);
      }
      const double weight = (a == 0 && b == 0) ? 1.0 - params.p + w : w;
      wab *= Complex(std::sqrt(weight));
      ops.push_back(std::move(wab));
    }
  return KrausChannel(std::move(ops));
}

/// A channel is either an explicit Kraus list or the depolarizing family;
/// keeping the family symbolic is what lets audits use its closed forms.
class Channel {
 public:
  Channel(KrausChannel k) : impl_(std::move(k)) {}          // NOLINT(runtime/explicit)
  Channel(DepolarizingParams p) : impl_(std::move(p)) {}    // NOLINT(runtime/explicit)

  int dim() const {
    if (const auto* k = std::get_if<KrausChannel>(&impl_)) return k->input_dim();
    return std::get<DepolarizingParams>(impl_).dim;
  }

  DensityOperator apply(const DensityOperator& rho) const {
    if (const auto* k = std::get_if<KrausChannel>(&impl_)) return apply_channel(*k, rho);
    return depolarizing_apply(std::get<DepolarizingParams>(impl_), rho);
  }

  const DepolarizingParams* depolarizing() const {
    return std::get_if<DepolarizingParams>(&impl_);
  }
  const KrausChannel* kraus() const { return std::get_if<KrausChannel>(&impl_); }

  /// Kraus form regardless of representation (depolarizing expands to Weyl form).
  KrausChannel to_kraus() const {
    if (const auto* k = std::get_if<KrausChannel>(&impl_)) return *k;
    return depolarizing_kraus(std::get<DepolarizingParams>(impl_));
  }

 private:
  std::variant<KrausChannel, DepolarizingParams> impl_;
};

inline DensityOperator tensor_state(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator(kron(a.matrix(), b.matrix()));
}

inline KrausChannel tensor_channel(const KrausChannel& e1, const KrausChannel& e2) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(e1.operators().size() * e2.operators().size());
  for (const ComplexMatrix& a : e1.operators())
    for (const ComplexMatrix& b : e2.operators()) ops.push_back(kron(a, b));
  return KrausChannel(std::move(ops));
}

/// Deterministic random stream. Raw mt19937_64 words are mapped to doubles
/// directly so streams are reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() {  // [0, 1)
    return double(gen_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(ang);
    have_spare_ = true;
    return r * std::cos(ang);
  }

  Complex complex_normal() {  // E|z|^2 = 1
    const double inv_sqrt2 = 0.70710678118654752440;
    return Complex(normal() * inv_sqrt2, normal() * inv_sqrt2);
  }

  std::uint64_t word() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// rho = G G^dagger / tr(G G^dagger) with G a dim x rank complex Gaussian.
inline DensityOperator random_density(int dim, int rank, Rng& rng) {
  if (dim < 1 || dim > kMaxDim || rank < 1 || rank > dim)
    throw OutOfRangeError("random_density: need 1 <= rank <= dim <= 64");
  std::vector<Complex> g(std::size_t(dim) * rank);
  for (Complex& z : g) z = rng.complex_normal();
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Complex s = 0.0;
      for (int k = 0; k < rank; ++k)
        s += g[std::size_t(i) * rank + k] * std::conj(g[std::size_t(j) * rank + k]);
      m(i, j) = s;
    }
  const double tr = m.trace().real();
  m *= Complex(1.0 / tr);
  // Exact Hermitian symmetrization of the Gram rounding.
  for (int i = 0; i < dim; ++i) {
    m(i, i) = Complex(m(i, i).real(), 0.0);
    for (int j = i + 1; j < dim; ++j) {
      const Complex z = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  }
  return DensityOperator(std::move(m));
}

inline DensityOperator random_density(int dim, int rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(dim, rank, rng);
}

namespace detail {

// Modified Gram-Schmidt with one re-orthogonalization pass.
inline void orthonormalize_columns(std::vector<std::vector<Complex>>& cols) {
  const std::size_t rows = cols.front().size();
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < c; ++p) {
        Complex dot = 0.0;
        for (std::size_t r = 0; r < rows; ++r) dot += std::conj(cols[p][r]) * cols[c][r];
        for (std::size_t r = 0; r < rows; ++r) cols[c][r] -= dot * cols[p][r];
      }
    }
    double n2 = 0.0;
    for (std::size_t r = 0; r < rows; ++r) n2 += std::norm(cols[c][r]);
    if (n2 <= 1e-280)
      throw NumericalError("orthonormalize_columns: rank-deficient draw");
    const double inv = 1.0 / std::sqrt(n2);
    for (std::size_t r = 0; r < rows; ++r) cols[c][r] *= inv;
  }
}

}  // namespace detail

/// Stinespring-style draw: a (dim * kraus_rank) x dim Gaussian matrix with
/// orthonormalized columns, sliced into kraus_rank blocks. The stacked
/// isometry makes the channel exactly trace preserving.
inline KrausChannel random_channel(int dim, int kraus_rank, Rng& rng) {
  if (dim < 1 || dim > kMaxDim || kraus_rank < 1 || long(kraus_rank) > long(dim) * dim)
    throw OutOfRangeError("random_channel: need 1 <= kraus_rank <= dim^2");
  const std::size_t rows = std::size_t(dim) * kraus_rank;
  std::vector<std::vector<Complex>> cols(dim, std::vector<Complex>(rows));
  for (int c = 0; c < dim; ++c)
    for (std::size_t r = 0; r < rows; ++r) cols[c][r] = rng.complex_normal();
  detail::orthonormalize_columns(cols);

  std::vector<ComplexMatrix> ops;
  ops.reserve(kraus_rank);
  for (int blk = 0; blk < kraus_rank; ++blk) {
    ComplexMatrix e(dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) e(r, c) = cols[c][std::size_t(blk) * dim + r];
    ops.push_back(std::move(e));
  }
  return KrausChannel(std::move(ops));
}

inline KrausChannel random_channel(int dim, int kraus_rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_channel(dim, kraus_rank, rng);
}

/// Haar-ish random unitary: the single Kraus operator of a rank-1 channel.
inline ComplexMatrix random_unitary(int dim, std::uint64_t seed) {
  return random_channel(dim, 1, seed).operators().front();
}

}  // namespace qpriv

#endif  // QPRIV_QUANTUM_HPP
