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

// Distinguishability measures between density operators: trace distance,
// symmetric (Helstrom) testing, asymmetric Neyman-Pearson testing with a
// dual optimality certificate, relative entropy, max-relative entropy and
// the hockey-stick divergence.

#ifndef QPRIV_DIVERGENCES_HPP
#define QPRIV_DIVERGENCES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qpriv/errors.hpp"
#include "qpriv/linalg.hpp"
#include "qpriv/quantum.hpp"

namespace qpriv {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Logarithm/exponential base threaded through one computation. Mixing
/// bases across a derivation breaks every identity, so callers pick one.
enum class LogBase { two, natural };

inline double log_in_base(double x, LogBase base) {
  return base == LogBase::two ? std::log2(x) : std::log(x);
}

inline double exp_in_base(double e, LogBase base) {
  return base == LogBase::two ? std::exp2(e) : std::exp(e);
}

inline const char* log_base_name(LogBase base) {
  return base == LogBase::two ? "two" : "natural";
}

/// Measurement effect: Hermitian with spectrum inside [0, 1] (tolerance 1e-9).
class TestOperator {
 public:
  explicit TestOperator(ComplexMatrix m) : m_(std::move(m)) {
    require_hermitian(m_, "TestOperator");
    const HermitianEigenSystem sys = hermitian_eig(m_);
    if (sys.eigenvalues.front() < -1e-9 || sys.eigenvalues.back() > 1.0 + 1e-9)
      throw ValidationError("TestOperator: spectrum escapes [0,1] (range [" +
                            std::to_string(sys.eigenvalues.front()) + ", " +
                            std::to_string(sys.eigenvalues.back()) + "])");
  }

  int dim() const { return m_.dim(); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

/// Outcome of the asymmetric (Neyman-Pearson) optimization
///   minimize tr(Q sigma)  s.t.  0 <= Q <= I,  tr(Q rho) >= 1 - eta.
struct AsymmetricTestResult {
  double beta = 0.0;            // optimal type-II error, in [0,1]
  double d_eta = 0.0;           // -log_base(beta); +inf when beta == 0
  TestOperator optimal_test;    // the minimizing Q
  double dual_value = 0.0;      // Lagrangian dual at the reported multiplier
  double dual_gap = 0.0;        // beta - dual_value, in [0, 1e-7]
  double multiplier = 0.0;      // Lagrange multiplier of the acceptance constraint
  double mixing_weight = 0.0;   // uniform weight on the kernel of u*rho - sigma
};

/// Outcome of the symmetric (prior-weighted) optimization.
struct SymmetricTestResult {
  double p_err = 0.0;
  double p_max = 0.0;
  TestOperator optimal_test;
};

inline void require_equal_dims(const DensityOperator& rho, const DensityOperator& sigma,
                               const char* who) {
  if (rho.dim() != sigma.dim())
    throw DimensionMismatchError(std::string(who) + ": state dims " +
                                 std::to_string(rho.dim()) + " and " +
                                 std::to_string(sigma.dim()) + " differ");
}

inline double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  require_equal_dims(rho, sigma, "trace_distance");
  const double t = 0.5 * trace_norm(rho.matrix() - sigma.matrix());
  return std::clamp(t, 0.0, 1.0);
}

inline double binary_entropy(double v, LogBase base) {
  if (!(v >= 0.0 && v <= 1.0))
    throw OutOfRangeError("binary_entropy: argument outside [0,1]");
  double h = 0.0;
  if (v > 0.0 && v < 1.0) h = -v * std::log(v) - (1.0 - v) * std::log(1.0 - v);
  return base == LogBase::two ? h / std::log(2.0) : h;
}

inline double hockey_stick(const DensityOperator& rho, const DensityOperator& sigma,
                           double gamma) {
  require_equal_dims(rho, sigma, "hockey_stick");
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw OutOfRangeError("hockey_stick: gamma must be finite and nonnegative");
  ComplexMatrix diff = rho.matrix();
  ComplexMatrix scaled = sigma.matrix();
  scaled *= Complex(gamma);
  diff -= scaled;
  return positive_part_trace(diff);
}

/// Helstrom-Holevo symmetric test. The returned test is the projector onto
/// the strictly positive eigenspace of p_rho rho - p_sigma sigma, which
/// attains the closed-form error.
inline SymmetricTestResult helstrom(const DensityOperator& rho, const DensityOperator& sigma,
                                    const PriorPair& priors) {
  require_equal_dims(rho, sigma, "helstrom");
  ComplexMatrix delta = rho.matrix();
  delta *= Complex(priors.p_rho);
  ComplexMatrix s = sigma.matrix();
  s *= Complex(priors.p_sigma());
  delta -= s;

  const HermitianEigenSystem sys = hermitian_eig(delta);
  double norm1 = 0.0;
  for (double lam : sys.eigenvalues) norm1 += std::abs(lam);
  const double p_err = std::clamp(0.5 * (1.0 - norm1), 0.0, 1.0);
  const double p_max = 0.5 * (1.0 - std::abs(priors.p_rho - priors.p_sigma()));

  ComplexMatrix proj = spectral_map(sys, [](double lam) { return lam > 0.0 ? 1.0 : 0.0; });
  return SymmetricTestResult{p_err, p_max, TestOperator(std::move(proj))};
}

namespace detail {

// Quadratic forms <v_k| M |v_k> for every eigenvector column.
inline std::vector<double> eigenbasis_weights(const HermitianEigenSystem& sys,
                                              const ComplexMatrix& m) {
  const int n = m.dim();
  std::vector<double> w(n, 0.0);
  for (int k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (int i = 0; i < n; ++i) {
      Complex row = 0.0;
      for (int j = 0; j < n; ++j) row += m(i, j) * sys.eigenvectors(j, k);
      acc += std::conj(sys.eigenvectors(i, k)) * row;
    }
    w[k] = acc.real();
  }
  return w;
}

struct PencilPoint {
  HermitianEigenSystem sys;  // of u*rho - sigma
  double pos_tr = 0.0;       // sum of positive eigenvalues
  double accept = 0.0;       // tr(Pi_+ rho), strict positive part
};

inline PencilPoint eval_pencil(double u, const ComplexMatrix& rho,
                               const ComplexMatrix& sigma) {
  ComplexMatrix a = rho;
  a *= Complex(u);
  a -= sigma;
  PencilPoint p;
  p.sys = hermitian_eig(a);
  const std::vector<double> w = eigenbasis_weights(p.sys, rho);
  for (int k = 0; k < int(p.sys.eigenvalues.size()); ++k) {
    const double lam = p.sys.eigenvalues[k];
    if (lam > 0.0) {
      p.pos_tr += lam;
      p.accept += w[k];
    }
  }
  return p;
}

inline double clip_probability(double x) {
  // Rounding slack 1e-12 outside [0,1] is clamped; tiny residue around zero
  // collapses to an exact zero so the extended-real log stays honest.
  if (x < 1e-13) return 0.0;
  return std::min(x, 1.0);
}

}  // namespace detail

/// Asymmetric quantum Neyman-Pearson test.
///
/// The optimum maximizes the concave dual
///   g(u) = u (1 - eta) - tr[(u rho - sigma)_+],   u >= 0,
/// whose derivative is (1 - eta) - tr(Pi_+(u rho - sigma) rho). The
/// multiplier u* is located by bisection on that slope; at a kink (a
/// crossing eigenvalue of the pencil) the acceptance constraint is finished
/// off with a uniform mixing weight on the kernel of u* rho - sigma. Two
/// boundary sectors bypass the scan:
///   u = 0   when sigma's kernel already carries acceptance mass 1 - eta
///           (then beta = 0), and
///   u = inf when eta = 0, where the optimal test is the support projector
///           of rho and the dual supremum equals tr(Pi_rho sigma) in the
///           limit (the supremum need not be attained at finite u).
/// The reported dual value certifies optimality: beta - dual_value is the
/// (nonnegative) duality gap and exceeds 1e-7 only on solver failure.
inline AsymmetricTestResult neyman_pearson(const DensityOperator& rho,
                                           const DensityOperator& sigma, double eta,
                                           LogBase base) {
  require_equal_dims(rho, sigma, "neyman_pearson");
  if (!(eta >= 0.0 && eta <= 1.0))
    throw OutOfRangeError("neyman_pearson: eta outside [0,1]");

  const int n = rho.dim();
  const ComplexMatrix& r = rho.matrix();
  const ComplexMatrix& s = sigma.matrix();

  const auto finish = [&](double beta_raw, ComplexMatrix q, double dual, double u,
                          double x) {
    const double beta = detail::clip_probability(beta_raw);
    double gap = beta - dual;
    if (gap < -1e-9 || gap > 1e-7)
      throw DualGapError("neyman_pearson: duality gap " + std::to_string(gap) +
                         " outside [0, 1e-7]");
    gap = std::max(gap, 0.0);
    const double d = beta == 0.0 ? kInf : std::max(0.0, -log_in_base(beta, base));
    return AsymmetricTestResult{beta, d, TestOperator(std::move(q)), dual, gap, u, x};
  };

  // eta = 0 sector: tr(Q rho) = 1 pins Q to the identity on supp(rho) and
  // the block structure of 0 <= Q <= I forbids any cross terms, so the
  // support projector is optimal with beta = tr(Pi_rho sigma).
  if (eta < 1e-12) {
    ComplexMatrix pi = support_projector(r);
    const double overlap = real_trace_product(pi, s);
    const double acc = real_trace_product(pi, r);
    if (acc < 1.0 - (n * kDefaultRankTol + 1e-10))
      throw InfeasibleToleranceError("neyman_pearson: support projector misses acceptance");
    const double beta_raw = overlap <= kDefaultRankTol ? 0.0 : overlap;
    return finish(beta_raw, std::move(pi), detail::clip_probability(beta_raw), kInf, 0.0);
  }

  // u = 0 sector: enough acceptance mass on ker(sigma) makes beta = 0.
  const ComplexMatrix pi_sigma = support_projector(s);
  ComplexMatrix pi_ker = ComplexMatrix::identity(n);
  pi_ker -= pi_sigma;
  const double k0 = real_trace_product(pi_ker, r);
  if (k0 >= 1.0 - eta - 1e-12) {
    double x = 0.0;
    if (1.0 - eta > 1e-14) x = std::min(1.0, (1.0 - eta) / k0);
    ComplexMatrix q = pi_ker;
    q *= Complex(x);
    return finish(0.0, std::move(q), 0.0, 0.0, x);
  }

  // Bracket the dual maximizer: slope h(u) = (1 - eta) - accept(u) starts
  // positive (accept(0+) <= k0 < 1 - eta) and tends to -eta.
  double lo = 0.0;
  double hi = 1.0;
  detail::PencilPoint at_hi = detail::eval_pencil(hi, r, s);
  int guard = 0;
  while ((1.0 - eta) - at_hi.accept > 0.0) {
    hi *= 2.0;
    if (++guard > 60)
      throw InfeasibleToleranceError("neyman_pearson: multiplier bracket overflow");
    at_hi = detail::eval_pencil(hi, r, s);
  }
  for (int it = 0; it < 200; ++it) {
    if (hi - lo <= 1e-13 * std::max(1.0, hi)) break;
    const double mid = 0.5 * (lo + hi);
    const detail::PencilPoint at_mid = detail::eval_pencil(mid, r, s);
    if ((1.0 - eta) - at_mid.accept > 0.0)
      lo = mid;
    else
      hi = mid;
  }

  const double u = 0.5 * (lo + hi);
  ComplexMatrix pencil = r;
  pencil *= Complex(u);
  pencil -= s;
  const double band = 1e-11 * std::max(1.0, pencil.frobenius_norm());
  const HermitianEigenSystem sys = hermitian_eig(pencil);
  const std::vector<double> wr = detail::eigenbasis_weights(sys, r);
  const std::vector<double> ws = detail::eigenbasis_weights(sys, s);

  double pos_tr = 0.0, acc_plus = 0.0, acc_ker = 0.0, beta_plus = 0.0, beta_ker = 0.0;
  for (int k = 0; k < n; ++k) {
    const double lam = sys.eigenvalues[k];
    if (lam > 0.0) pos_tr += lam;
    if (lam > band) {
      acc_plus += wr[k];
      beta_plus += ws[k];
    } else if (lam >= -band) {
      acc_ker += wr[k];
      beta_ker += ws[k];
    }
  }

  double x = 0.0;
  if (acc_ker > 1e-14) x = std::clamp((1.0 - eta - acc_plus) / acc_ker, 0.0, 1.0);
  const double achieved = acc_plus + x * acc_ker;
  if (achieved < 1.0 - eta - 1e-10)
    throw InfeasibleToleranceError("neyman_pearson: no (u, x) meets the acceptance "
                                   "constraint within 1e-10");

  ComplexMatrix q = spectral_map(sys, [&](double lam) {
    if (lam > band) return 1.0;
    if (lam >= -band) return x;
    return 0.0;
  });
  const double beta_raw = beta_plus + x * beta_ker;
  const double dual = u * (1.0 - eta) - pos_tr;
  return finish(beta_raw, std::move(q), dual, u, x);
}

inline double d_eta(const DensityOperator& rho, const DensityOperator& sigma, double eta,
                    LogBase base) {
  return neyman_pearson(rho, sigma, eta, base).d_eta;
}

/// -log tr(Pi_supp(rho) sigma); +inf when the support overlap vanishes.
inline double d_zero(const DensityOperator& rho, const DensityOperator& sigma,
                     LogBase base) {
  require_equal_dims(rho, sigma, "d_zero");
  const ComplexMatrix pi = support_projector(rho.matrix());
  const double overlap = real_trace_product(pi, sigma.matrix());
  if (overlap <= kDefaultRankTol) return kInf;
  return std::max(0.0, -log_in_base(std::min(overlap, 1.0), base));
}

inline double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma,
                               LogBase base) {
  require_equal_dims(rho, sigma, "relative_entropy");
  const HermitianEigenSystem sys_s = hermitian_eig(sigma.matrix());
  const double cut_s = kDefaultRankTol * std::max(0.0, sys_s.eigenvalues.back());

  // Support condition: mass of rho outside supp(sigma).
  const std::vector<double> overlap = detail::eigenbasis_weights(sys_s, rho.matrix());
  double deficit = 0.0;
  for (int k = 0; k < int(overlap.size()); ++k)
    if (sys_s.eigenvalues[k] <= cut_s) deficit += overlap[k];
  if (deficit > kDefaultRankTol) return kInf;

  const HermitianEigenSystem sys_r = hermitian_eig(rho.matrix());
  const double cut_r = kDefaultRankTol * std::max(0.0, sys_r.eigenvalues.back());
  double ent = 0.0;  // tr(rho log rho)
  for (double lam : sys_r.eigenvalues)
    if (lam > cut_r) ent += lam * std::log(lam);
  double cross = 0.0;  // tr(rho log sigma)
  for (int k = 0; k < int(overlap.size()); ++k)
    if (sys_s.eigenvalues[k] > cut_s) cross += overlap[k] * std::log(sys_s.eigenvalues[k]);

  double s_nat = ent - cross;
  if (s_nat < 0.0) {
    if (s_nat < -1e-9)
      throw NumericalError("relative_entropy: negative value " + std::to_string(s_nat));
    s_nat = 0.0;
  }
  return base == LogBase::two ? s_nat / std::log(2.0) : s_nat;
}

/// log of the largest eigenvalue of sigma^{-1/2} rho sigma^{-1/2} on the
/// support of sigma; +inf on support escape; floored at zero.
inline double d_max(const DensityOperator& rho, const DensityOperator& sigma,
                    LogBase base) {
  require_equal_dims(rho, sigma, "d_max");
  const HermitianEigenSystem sys_s = hermitian_eig(sigma.matrix());
  const double cut_s = kDefaultRankTol * std::max(0.0, sys_s.eigenvalues.back());
  const std::vector<double> overlap = detail::eigenbasis_weights(sys_s, rho.matrix());
  double deficit = 0.0;
  for (int k = 0; k < int(overlap.size()); ++k)
    if (sys_s.eigenvalues[k] <= cut_s) deficit += overlap[k];
  if (deficit > kDefaultRankTol) return kInf;

  const ComplexMatrix b = inv_sqrt_on_support(sigma.matrix());
  const ComplexMatrix m = b * rho.matrix() * b;
  const HermitianEigenSystem sys = hermitian_eig(m);
  const double lam_max = std::max(sys.eigenvalues.back(), 0.0);
  if (lam_max == 0.0) return 0.0;
  return std::max(0.0, log_in_base(lam_max, base));
}

}  // namespace qpriv

#endif  // QPRIV_DIVERGENCES_HPP
