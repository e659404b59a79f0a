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

// Test-only oracles and fixtures. Everything here is independent of the
// library's solver paths: the diagonal LP is solved greedily, random tests
// are sampled directly, and reference values are evaluated from scalar
// formulas.

#ifndef QPRIV_TESTS_ORACLES_HPP
#define QPRIV_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "qpriv/qpriv.hpp"

namespace oracles {

using qpriv::Complex;
using qpriv::ComplexMatrix;
using qpriv::DensityOperator;
using qpriv::Rng;

// Exact LP optimum of  min sum q_i b_i  s.t.  sum p_i b_i >= 1 - eta,
// 0 <= b_i <= 1, by the fractional-knapsack exchange argument: accept
// outcomes in decreasing order of p_i / q_i and split the marginal one.
inline double lp_beta_diagonal(std::vector<double> p, std::vector<double> q,
                               double eta) {
  const double target = 1.0 - eta;
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const bool a_free = q[a] <= 0.0;
    const bool b_free = q[b] <= 0.0;
    if (a_free != b_free) return a_free;
    if (a_free && b_free) return p[a] > p[b];
    return p[a] * q[b] > p[b] * q[a];  // ratio compare without division
  });
  double covered = 0.0;
  double cost = 0.0;
  for (std::size_t idx : order) {
    if (covered >= target - 1e-15) break;
    const double take = std::min(1.0, (target - covered) / std::max(p[idx], 1e-300));
    covered += take * p[idx];
    cost += take * q[idx];
  }
  return cost;
}

inline ComplexMatrix random_hermitian(int dim, Rng& rng) {
  ComplexMatrix h(dim);
  for (int i = 0; i < dim; ++i) h(i, i) = rng.normal();
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      const Complex z = rng.complex_normal();
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  return h;
}

// Uniform-spectrum random effect 0 <= L <= I in a Haar-ish random basis.
inline ComplexMatrix random_test_operator(int dim, Rng& rng) {
  const ComplexMatrix u = qpriv::random_channel(dim, 1, rng).operators().front();
  ComplexMatrix lam(dim);
  for (int i = 0; i < dim; ++i) lam(i, i) = rng.uniform();
  return u * lam * u.adjoint();
}

inline DensityOperator random_diagonal_state(int dim, Rng& rng) {
  std::vector<double> w(dim);
  double sum = 0.0;
  for (double& x : w) {
    x = -std::log(std::max(rng.uniform(), 1e-300));  // flat Dirichlet
    sum += x;
  }
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = w[i] / sum;
  return DensityOperator(std::move(m));
}

inline DensityOperator qubit_zero() { return qpriv::density_from_pure({1.0, 0.0}); }
inline DensityOperator qubit_one() { return qpriv::density_from_pure({0.0, 1.0}); }
inline DensityOperator qubit_plus() {
  const double s = 0.70710678118654752440;
  return qpriv::density_from_pure({Complex(s), Complex(s)});
}
inline DensityOperator maximally_mixed(int dim) {
  ComplexMatrix m = ComplexMatrix::identity(dim);
  m *= Complex(1.0 / dim);
  return DensityOperator(std::move(m));
}

inline DensityOperator diagonal_state(std::vector<double> probs) {
  ComplexMatrix m(int(probs.size()));
  for (int i = 0; i < int(probs.size()); ++i) m(i, i) = probs[i];
  return DensityOperator(std::move(m));
}

inline double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).frobenius_norm();
}

}  // namespace oracles

#endif  // QPRIV_TESTS_ORACLES_HPP
