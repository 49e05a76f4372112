/*
 * Copyright 2026 The qmarkov Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "doctest.h"

#include "qmarkov/channel.hpp"
#include "qmarkov/markov.hpp"

using namespace qmarkov;

namespace {

DensityOp random_ac(Rng& rng, int da, int db, int dc) {
  const SystemLayout l({{"A", da}, {"B", db}, {"C", dc}});
  return reduced_state(PureVec(l, random_state_vector(l.total_dim(), rng)), {"A", "C"});
}

CMatrix pauli(int k) {
  CMatrix m(2, 2);
  if (k == 0) m << 0, 1, 1, 0;
  if (k == 1) m << 0, Complex(0, -1), Complex(0, 1), 0;
  if (k == 2) m << 1, 0, 0, -1;
  return m;
}

}  // namespace

TEST_CASE("E and the Petz map fix the right states") {
  Rng rng(21);
  for (int i = 0; i < 10; ++i) {
    const auto ac = random_ac(rng, 2, 3, 2);
    const auto a = partial_trace(ac, {"A"});
    const auto e = channel_E(ac, {"A"}, {"C"});
    CHECK(completeness_residual(e, identity(2)) < 1e-10);
    CHECK(max_abs(apply(e, a).mat() - a.mat()) < 1e-12);
    const auto p = petz_channel(ac, {"A"}, {"C"});
    CHECK(max_abs(apply(p, a).mat() - ac.mat()) < 1e-12);
  }
}

TEST_CASE("transfer matrix of E is Lambda2 pinv(Lambda1)") {
  Rng rng(22);
  const auto ac = random_ac(rng, 2, 4, 2);
  const auto t = transfer_matrices(ac, {"A"}, {"C"});
  CHECK(max_abs(t.lambda - transfer_of(channel_E(ac, {"A"}, {"C"}))) < 1e-10);
}

TEST_CASE("transfer matrix acts on row-major vectorizations") {
  Rng rng(23);
  const auto ac = random_ac(rng, 2, 3, 2);
  const auto e = channel_E(ac, {"A"}, {"C"});
  const CMatrix x = random_density(2, rng);
  const CMatrix lam = transfer_of(e);
  CVector vx(4);
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) vx(k * 2 + l) = x(k, l);
  const CVector out = lam * vx;
  const CMatrix direct = apply_raw(e, e.in, x);
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) CHECK(std::abs(out(k * 2 + l) - direct(k, l)) < 1e-12);
}

TEST_CASE("ergodic projector of the identity channel is the identity") {
  const CMatrix id = identity(4);
  CHECK(max_abs(ergodic_projector(id) - id) < 1e-12);
}

TEST_CASE("ergodic projector for a self-adjoint example") {
  const auto ac = reduced_state(build_example("VIB", 2, {0.5}), {"A", "C"});
  const auto t = transfer_matrices(ac, {"A"}, {"C"});
  REQUIRE(is_self_adjoint(t.lambda));
  const CMatrix inf = ergodic_projector(t.lambda);
  CHECK(max_abs(inf * inf - inf) < 1e-10);
  CHECK(max_abs(t.lambda * inf - inf) < 1e-10);
  CHECK(max_abs(cesaro_average(t.lambda, 2000) - inf) < 1e-3);
}

TEST_CASE("ergodic projector rejects maps without a fixed point") {
  CHECK_THROWS_AS(ergodic_projector(CMatrix(0.5 * identity(3))), Error);
}

TEST_CASE("commutants of simple families") {
  CHECK(commutant_basis({identity(3)}).size() == 9);
  CHECK(commutant_basis({pauli(0), pauli(1), pauli(2)}).size() == 1);
  CHECK(commutant_basis({pauli(2)}).size() == 2);
  CHECK(commutant_basis({tensor(pauli(2), identity(2))}).size() == 8);
}

TEST_CASE("apply_superop matches apply for the Kraus channel") {
  Rng rng(24);
  const auto ac = random_ac(rng, 2, 3, 2);
  const auto e = channel_E(ac, {"A"}, {"C"});
  const SystemLayout l({{"A", 2}, {"X", 3}});
  const DensityOp rho(l, random_density(6, rng));
  const CMatrix via_superop = apply_superop(transfer_of(e), l, {"A"}, rho.mat());
  const CMatrix via_kraus = apply(e, rho).mat();  // output layout A then X
  CHECK(max_abs(via_superop - via_kraus) < 1e-12);
}
