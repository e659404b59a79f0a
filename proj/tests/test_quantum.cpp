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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "qpriv/quantum.hpp"

using namespace qpriv;

TEST_CASE("density_from_pure") {
  const DensityOperator zero = oracles::qubit_zero();
  CHECK(std::abs(zero.matrix()(0, 0) - Complex(1.0)) < 1e-15);
  CHECK(std::abs(zero.matrix()(1, 1)) < 1e-15);

  const DensityOperator plus = oracles::qubit_plus();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(std::abs(plus.matrix()(i, j) - Complex(0.5)) < 1e-12);

  const double s = 0.70710678118654752440;
  const DensityOperator circ = density_from_pure({Complex(s), Complex(0.0, s)});
  CHECK(std::abs(circ.matrix()(0, 0) - Complex(0.5)) < 1e-12);
  CHECK(std::abs(circ.matrix()(0, 1) - Complex(0.0, -0.5)) < 1e-12);
  CHECK(std::abs(circ.matrix()(1, 0) - Complex(0.0, 0.5)) < 1e-12);
  CHECK(std::abs(circ.matrix()(1, 1) - Complex(0.5)) < 1e-12);

  CHECK_THROWS_AS(density_from_pure({Complex(0.0), Complex(0.0)}), ZeroVectorError);
  CHECK_THROWS_AS(density_from_pure({Complex(0.5), Complex(0.0)}), ValidationError);
  CHECK_NOTHROW(density_from_pure({Complex(0.5), Complex(0.0)}, /*normalize=*/true));
}

TEST_CASE("apply_channel on identity, unitary and measure-and-discard channels") {
  const DensityOperator plus = oracles::qubit_plus();
  const DensityOperator id_out = apply_channel(KrausChannel::identity(2), plus);
  CHECK(oracles::frobenius_distance(id_out.matrix(), plus.matrix()) < 1e-12);

  ComplexMatrix x(2);
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  const DensityOperator flipped =
      apply_channel(KrausChannel({x}), oracles::qubit_zero());
  CHECK(oracles::frobenius_distance(flipped.matrix(), oracles::qubit_one().matrix()) <
        1e-12);

  const KrausChannel discard({oracles::qubit_zero().matrix(),
                              oracles::qubit_one().matrix()});
  const DensityOperator collapsed = apply_channel(discard, plus);
  CHECK(oracles::frobenius_distance(collapsed.matrix(),
                                    oracles::maximally_mixed(2).matrix()) < 1e-12);

  CHECK_THROWS_AS(apply_channel(KrausChannel::identity(3), plus),
                  DimensionMismatchError);
}

TEST_CASE("channel outputs stay trace-one and PSD on 1000 random draws") {
  Rng rng(20);
  for (int trial = 0; trial < 1000; ++trial) {
    const int dim = 2 + trial % 3;
    const int kraus_rank = 1 + trial % (dim * dim);
    const KrausChannel e = random_channel(dim, kraus_rank, rng);
    const DensityOperator rho = random_density(dim, 1 + trial % dim, rng);

    // Raw Kraus sum, before the library's repair step.
    ComplexMatrix raw(dim);
    for (const ComplexMatrix& k : e.operators())
      raw += k * rho.matrix() * k.adjoint();
    CHECK(std::abs(raw.trace().real() - 1.0) <= 1e-9);
    CHECK(hermitian_eig(raw).eigenvalues.front() >= -1e-9);

    const DensityOperator out = apply_channel(e, rho);
    CHECK(std::abs(out.matrix().trace().real() - 1.0) <= 1e-12);
  }
}

TEST_CASE("depolarizing_apply closed-form examples") {
  const DepolarizingParams full(1.0, 2);
  const DensityOperator mixed = depolarizing_apply(full, oracles::qubit_plus());
  CHECK(oracles::frobenius_distance(mixed.matrix(), oracles::maximally_mixed(2).matrix()) <
        1e-15);

  const DepolarizingParams off(0.0, 2);
  const DensityOperator same = depolarizing_apply(off, oracles::qubit_plus());
  CHECK(oracles::frobenius_distance(same.matrix(), oracles::qubit_plus().matrix()) <
        1e-15);

  const DepolarizingParams half(0.5, 2);
  const DensityOperator out = depolarizing_apply(half, oracles::qubit_zero());
  CHECK(std::abs(out.matrix()(0, 0) - Complex(0.75)) < 1e-15);
  CHECK(std::abs(out.matrix()(1, 1) - Complex(0.25)) < 1e-15);

  CHECK_THROWS_AS(depolarizing_apply(half, oracles::maximally_mixed(3)),
                  DimensionMismatchError);
}

TEST_CASE("depolarizing commutes with unitary conjugation") {
  Rng rng(21);
  const DepolarizingParams params(0.3, 3);
  const DensityOperator rho = random_density(3, 2, rng);
  const ComplexMatrix u = random_unitary(3, 77);
  const DensityOperator rotated(u * rho.matrix() * u.adjoint());
  const ComplexMatrix lhs = depolarizing_apply(params, rotated).matrix();
  const ComplexMatrix rhs =
      u * depolarizing_apply(params, rho).matrix() * u.adjoint();
  CHECK(oracles::frobenius_distance(lhs, rhs) < 1e-12);
}

TEST_CASE("depolarizing affine action matches its Weyl Kraus form") {
  Rng rng(22);
  for (double p : {0.0, 0.3, 0.7, 1.0}) {
    for (int dim : {2, 3, 4}) {
      const DepolarizingParams params(p, dim);
      const KrausChannel kraus = depolarizing_kraus(params);
      for (int trial = 0; trial < 5; ++trial) {
        const DensityOperator rho = random_density(dim, 1 + trial % dim, rng);
        const DensityOperator via_affine = depolarizing_apply(params, rho);
        const DensityOperator via_kraus = apply_channel(kraus, rho);
        CHECK(oracles::frobenius_distance(via_affine.matrix(), via_kraus.matrix()) <=
              1e-9);
      }
    }
  }
}

TEST_CASE("tensor_state") {
  const DensityOperator zz = tensor_state(oracles::qubit_zero(), oracles::qubit_zero());
  CHECK(std::abs(zz.matrix()(0, 0) - Complex(1.0)) < 1e-15);

  const DensityOperator mm =
      tensor_state(oracles::maximally_mixed(2), oracles::maximally_mixed(2));
  CHECK(oracles::frobenius_distance(mm.matrix(), oracles::maximally_mixed(4).matrix()) <
        1e-15);

  Rng rng(23);
  const DensityOperator a = random_density(2, 2, rng);
  const DensityOperator b = random_density(3, 2, rng);
  std::vector<double> expected;
  for (double la : hermitian_eig(a.matrix()).eigenvalues)
    for (double lb : hermitian_eig(b.matrix()).eigenvalues) expected.push_back(la * lb);
  std::sort(expected.begin(), expected.end());
  const std::vector<double> got = hermitian_eig(tensor_state(a, b).matrix()).eigenvalues;
  for (std::size_t i = 0; i < got.size(); ++i)
    CHECK(std::abs(got[i] - expected[i]) <= 1e-10);
}

TEST_CASE("tensor_channel defining identity") {
  const KrausChannel id4 =
      tensor_channel(KrausChannel::identity(2), KrausChannel::identity(2));
  const DensityOperator probe =
      tensor_state(oracles::qubit_plus(), oracles::qubit_zero());
  CHECK(oracles::frobenius_distance(apply_channel(id4, probe).matrix(), probe.matrix()) <
        1e-12);

  // (depolarizing p=1 (x) identity) on |00><00| factors as (I/2) (x) |0><0|.
  const KrausChannel dep_id = tensor_channel(depolarizing_kraus({1.0, 2}),
                                             KrausChannel::identity(2));
  const DensityOperator out = apply_channel(
      dep_id, tensor_state(oracles::qubit_zero(), oracles::qubit_zero()));
  const DensityOperator expected =
      tensor_state(oracles::maximally_mixed(2), oracles::qubit_zero());
  CHECK(oracles::frobenius_distance(out.matrix(), expected.matrix()) < 1e-9);

  Rng rng(24);
  for (int trial = 0; trial < 25; ++trial) {
    const KrausChannel e1 = random_channel(2, 1 + trial % 4, rng);
    const KrausChannel e2 = random_channel(3, 1 + trial % 3, rng);
    const DensityOperator r1 = random_density(2, 1 + trial % 2, rng);
    const DensityOperator r2 = random_density(3, 1 + trial % 3, rng);
    const DensityOperator joint =
        apply_channel(tensor_channel(e1, e2), tensor_state(r1, r2));
    const DensityOperator factored =
        tensor_state(apply_channel(e1, r1), apply_channel(e2, r2));
    CHECK(oracles::frobenius_distance(joint.matrix(), factored.matrix()) <= 1e-9);
  }
}

TEST_CASE("random_density contracts") {
  const DensityOperator pure = random_density(2, 1, 5);
  const double purity = real_trace_product(pure.matrix(), pure.matrix());
  CHECK(std::abs(purity - 1.0) <= 1e-10);

  const DensityOperator full = random_density(4, 4, 5);
  CHECK(std::abs(full.matrix().trace().real() - 1.0) <= 1e-12);

  const DensityOperator again = random_density(4, 4, 5);
  CHECK(full.matrix().entries() == again.matrix().entries());

  CHECK_THROWS_AS(random_density(4, 5, 0), OutOfRangeError);
}

TEST_CASE("random_channel contracts") {
  const KrausChannel unitary = random_channel(3, 1, 9);
  const ComplexMatrix u = unitary.operators().front();
  CHECK((u.adjoint() * u - ComplexMatrix::identity(3)).frobenius_norm() <= 1e-9);

  const KrausChannel e = random_channel(3, 5, 9);
  ComplexMatrix sum(3);
  for (const ComplexMatrix& k : e.operators()) sum += k.adjoint() * k;
  CHECK((sum - ComplexMatrix::identity(3)).frobenius_norm() <= 1e-9);

  const KrausChannel again = random_channel(3, 5, 9);
  for (std::size_t i = 0; i < e.operators().size(); ++i)
    CHECK(e.operators()[i].entries() == again.operators()[i].entries());
}

TEST_CASE("KrausChannel rejects an incomplete operator list") {
  ComplexMatrix half = ComplexMatrix::identity(2);
  half *= Complex(0.5);
  CHECK_THROWS_AS(KrausChannel({half}), ValidationError);
}
