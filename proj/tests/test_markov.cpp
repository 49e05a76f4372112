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

#include <cmath>

#include "qmarkov/info.hpp"
#include "qmarkov/markov.hpp"

using namespace qmarkov;

TEST_CASE("GHZ-type states cost their Shannon entropy") {
  for (const auto& lam : {std::vector<double>{0.5, 0.5}, {0.25, 0.75}, {0.2, 0.3, 0.5}}) {
    const auto psi = build_example("VIC", 0, lam);
    const double h = shannon(lam);
    CHECK(markov_cost_formula(psi) == doctest::Approx(h).epsilon(1e-10));
    const auto alg = markov_cost_algorithm(psi);
    REQUIRE(alg.has_value());
    CHECK(*alg == doctest::Approx(h).epsilon(1e-10));
  }
  // frozen value for weights (1/4, 3/4)
  CHECK(markov_cost_formula(build_example("VIC", 0, {0.25, 0.75})) == doctest::Approx(0.8112781244591328));
}

TEST_CASE("VIB costs are asymmetric between A and C") {
  for (double lam : {0.0, 0.2, 0.5, 0.8, 1.0}) {
    const auto psi = build_example("VIB", 2, {lam});
    CHECK(markov_cost_formula(psi) == doctest::Approx(binary_entropy(lam) + 2.0 * lam).epsilon(1e-10));
    CHECK(markov_cost_formula(psi, Parties{}.swapped()) == doctest::Approx(lam > 0 ? 2.0 : 0.0).epsilon(1e-10));
  }
}

TEST_CASE("VIA cost jumps at the Markov point") {
  CHECK(std::abs(markov_cost_formula(build_example("VIA", 2, {0.25}))) < 1e-9);
  for (double lam : {0.26, 0.5, 1.0}) {
    CHECK(markov_cost_formula(build_example("VIA", 2, {lam})) == doctest::Approx(2.0).epsilon(1e-9));
  }
  const auto rho = DensityOp::from_pure(build_example("VIA", 2, {0.26}));
  CHECK(qcmi(rho, {"A"}, {"B"}, {"C"}) < 0.01);
}

TEST_CASE("algorithm route is not applicable on generic states") {
  Rng rng(41);
  const SystemLayout l({{"A", 2}, {"B", 3}, {"C", 2}});
  const PureVec psi(l, random_state_vector(12, rng));
  const auto detail = markov_cost_algorithm_detail(psi);
  CHECK_FALSE(detail.value.has_value());
  CHECK(detail.hermiticity > 1e-8);
}

TEST_CASE("cost is sandwiched between qcmi and qmi") {
  Rng rng(42);
  for (int i = 0; i < 30; ++i) {
    const SystemLayout l({{"A", 2}, {"B", 2 + i % 2}, {"C", 2}});
    const PureVec psi(l, random_state_vector(l.total_dim(), rng));
    const auto rep = bounds_check(psi);
    CHECK(rep.qcmi <= rep.m_formula + 1e-7);
    CHECK(rep.m_formula <= rep.qmi_a_bc + 1e-7);
  }
}

TEST_CASE("cost is invariant under local unitaries") {
  Rng rng(43);
  const auto psi = build_example("VIB", 2, {0.4});
  const double m = markov_cost_formula(psi);
  CVector v = psi.vec();
  v = embed(haar_unitary(3, rng), psi.layout(), {"A"}) * v;
  v = embed(haar_unitary(2, rng), psi.layout(), {"C"}) * v;
  v = embed(haar_unitary(3, rng), psi.layout(), {"B"}) * v;
  CHECK(markov_cost_formula(PureVec(psi.layout(), v)) == doctest::Approx(m).epsilon(1e-9));
}

TEST_CASE("Markov tests and decompositions") {
  const auto markov = DensityOp::from_pure(build_example("VIA", 2, {0.25}));
  CHECK(is_markov_state(markov));
  const auto dec = markov_decomposition(markov);
  CHECK(dec.residual < 1e-8);
  double total = 0.0;
  for (const auto& t : dec.terms) total += t.q;
  CHECK(total == doctest::Approx(1.0));
  const auto rec = recovery_check(markov);
  CHECK(rec.residual_bc < 1e-8);
  CHECK(rec.residual_ab < 1e-8);

  const auto not_markov = DensityOp::from_pure(build_example("VIA", 2, {0.6}));
  CHECK_FALSE(is_markov_state(not_markov));
  try {
    markov_decomposition(not_markov);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotMarkov);
  }
}

TEST_CASE("classical mixtures of products are Markov") {
  Rng rng(44);
  // sum_j q_j sigma_j^{A b_j} (x) phi_j^{b_j' C} with orthogonal B blocks
  const int da = 2, dc = 2;
  const SystemLayout l({{"A", da}, {"B", 4}, {"C", dc}});
  CMatrix rho = CMatrix::Zero(l.total_dim(), l.total_dim());
  for (int j = 0; j < 2; ++j) {
    CMatrix pb = CMatrix::Zero(4, 4);
    pb(2 * j, 2 * j) = 1.0;
    const CMatrix term = tensor(tensor(random_density(da, rng), pb), random_density(dc, rng));
    rho += (j == 0 ? 0.3 : 0.7) * term;
  }
  const DensityOp ups(l, rho);
  CHECK(is_markov_state(ups));
  CHECK(markov_decomposition(ups).residual < 1e-8);
  const auto rec = recovery_check(ups);
  CHECK(rec.residual_bc < 1e-8);
}

TEST_CASE("recovery residual grows with the distance from the Markov point") {
  double last = -1.0;
  for (double lam : {0.25, 0.4, 0.7, 1.0}) {
    const auto rec = recovery_check(DensityOp::from_pure(build_example("VIA", 2, {lam})));
    CHECK(rec.residual_bc <= 4.0 * std::sqrt((4.0 * lam - 1.0) / 3.0) + 1e-6);
    CHECK(rec.residual_bc >= last - 1e-12);
    last = rec.residual_bc;
  }
}

TEST_CASE("cost equals qcmi on GHZ states") {
  CHECK(theorem6_check(build_example("VIC", 0, {0.3, 0.7})));
}

TEST_CASE("example builder validates its arguments") {
  CHECK_THROWS_AS(build_example("VIZ", 2, {0.5}), Error);
  CHECK_THROWS_AS(build_example("VIA", 2, {0.1}), Error);
  CHECK_THROWS_AS(build_example("VIB", 2, {0.5, 0.5}), Error);
  CHECK_THROWS_AS(build_example("VIC", 0, {0.5, 0.6}), Error);
  const auto psi = build_example("VIA", 3, {0.5});
  CHECK(psi.layout().dims() == std::vector<int>{3, 10, 3});
}
