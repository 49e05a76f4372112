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
#include "qmarkov/kidec.hpp"
#include "qmarkov/markov.hpp"

using namespace qmarkov;

namespace {

DensityOp phi_state(int d) {
  CVector v = CVector::Zero(d * d);
  for (int k = 0; k < d; ++k) v(k * d + k) = 1.0 / std::sqrt(static_cast<double>(d));
  return DensityOp::from_pure(PureVec(SystemLayout({{"A", d}, {"C", d}}), v));
}

void check_valid(const KIDecomposition& dec, const DensityOp& rho) {
  const auto rep = validate_ki(dec, rho);
  CHECK(rep.reconstruction < 1e-9);
  CHECK(rep.isometry < 1e-9);
  CHECK(rep.irreducibility == 0.0);
  CHECK(rep.intertwiner == 0.0);
  CHECK(rep.probability_sum == doctest::Approx(1.0));
}

}  // namespace

TEST_CASE("product input puts everything in the redundant part") {
  Rng rng(31);
  const DensityOp rho(SystemLayout({{"A", 3}, {"C", 2}}), tensor(random_density(3, rng), random_density(2, rng)));
  const auto dec = ki_decompose(rho, {"A"}, {"C"});
  REQUIRE(dec.blocks.size() == 1);
  CHECK(dec.blocks[0].dim_l == 3);
  CHECK(dec.blocks[0].dim_r == 1);
  check_valid(dec, rho);
}

TEST_CASE("maximally entangled input keeps all of A correlated") {
  for (int d : {2, 3}) {
    const auto rho = phi_state(d);
    const auto dec = ki_decompose(rho, {"A"}, {"C"});
    REQUIRE(dec.blocks.size() == 1);
    CHECK(dec.blocks[0].dim_l == 1);
    CHECK(dec.blocks[0].dim_r == d);
    check_valid(dec, rho);
  }
}

TEST_CASE("classically correlated input splits into one block per value") {
  const auto rho = reduced_state(build_example("VIC", 0, {0.2, 0.3, 0.5}), {"A", "C"});
  const auto dec = ki_decompose(rho, {"A"}, {"C"});
  REQUIRE(dec.blocks.size() == 3);
  CHECK(dec.blocks[0].p == doctest::Approx(0.5));
  CHECK(dec.blocks[1].p == doctest::Approx(0.3));
  CHECK(dec.blocks[2].p == doctest::Approx(0.2));
  for (const auto& b : dec.blocks) CHECK(b.dim_l * b.dim_r == 1);
  check_valid(dec, rho);
}

TEST_CASE("VIB marginal has a two-dimensional and a one-dimensional block") {
  const auto rho = reduced_state(build_example("VIB", 2, {0.5}), {"A", "C"});
  const auto dec = ki_decompose(rho, {"A"}, {"C"});
  REQUIRE(dec.blocks.size() == 2);
  CHECK(dec.blocks[0].dim_r == 2);
  CHECK(dec.blocks[1].dim_r == 1);
  check_valid(dec, rho);
}

TEST_CASE("rank-deficient A marginal") {
  // A is three-dimensional but the state only lives on a qubit subspace
  CVector v = CVector::Zero(6);
  v(0 * 2 + 0) = v(2 * 2 + 1) = 1.0 / std::sqrt(2.0);
  const auto rho = DensityOp::from_pure(PureVec(SystemLayout({{"A", 3}, {"C", 2}}), v));
  const auto dec = ki_decompose(rho, {"A"}, {"C"});
  REQUIRE(dec.blocks.size() == 1);
  CHECK(dec.blocks[0].dim_r == 2);
  check_valid(dec, rho);
}

TEST_CASE("block multiset is invariant under local unitaries on A") {
  Rng rng(32);
  for (int i = 0; i < 5; ++i) {
    const auto rho = reduced_state(build_example("VIB", 2, {0.3}), {"A", "C"});
    const auto dec = ki_decompose(rho, {"A"}, {"C"});
    const CMatrix u = embed(haar_unitary(3, rng), rho.layout(), {"A"});
    const DensityOp rotated(rho.layout(), u * rho.mat() * u.adjoint());
    const auto dec2 = ki_decompose(rotated, {"A"}, {"C"});
    REQUIRE(dec.blocks.size() == dec2.blocks.size());
    for (std::size_t j = 0; j < dec.blocks.size(); ++j) {
      CHECK(dec.blocks[j].p == doctest::Approx(dec2.blocks[j].p).epsilon(1e-8));
      CHECK(dec.blocks[j].dim_l == dec2.blocks[j].dim_l);
      CHECK(dec.blocks[j].dim_r == dec2.blocks[j].dim_r);
    }
  }
}

TEST_CASE("seed does not change the decomposition") {
  const auto rho = reduced_state(build_example("VIB", 2, {0.7}), {"A", "C"});
  const auto d1 = ki_decompose(rho, {"A"}, {"C"}, 1);
  const auto d2 = ki_decompose(rho, {"A"}, {"C"}, 99);
  REQUIRE(d1.blocks.size() == d2.blocks.size());
  for (std::size_t j = 0; j < d1.blocks.size(); ++j) CHECK(d1.blocks[j].p == doctest::Approx(d2.blocks[j].p));
}

TEST_CASE("random pure states give irreducible decompositions") {
  Rng rng(33);
  for (int i = 0; i < 10; ++i) {
    const SystemLayout l({{"A", 2}, {"B", 2}, {"C", 2}});
    const auto rho = reduced_state(PureVec(l, random_state_vector(8, rng)), {"A", "C"});
    check_valid(ki_decompose(rho, {"A"}, {"C"}), rho);
  }
}

TEST_CASE("tripartite decomposition reconstructs the pure state") {
  Rng rng(34);
  std::vector<PureVec> cases = {build_example("VIB", 2, {0.5}), build_example("VIA", 2, {0.6}),
                                build_example("VIC", 0, {0.25, 0.75})};
  const SystemLayout l({{"A", 2}, {"B", 3}, {"C", 2}});
  cases.emplace_back(l, random_state_vector(12, rng));
  for (const auto& psi : cases) {
    const auto t = ki_tripartite(psi);
    CHECK(t.reconstruction < 1e-8);
    CHECK(t.isometry < 1e-8);
    double total = 0.0;
    for (const auto& b : t.base.blocks) total += b.p;
    CHECK(total == doctest::Approx(1.0));
  }
}

TEST_CASE("steered states reproduce the A marginal") {
  Rng rng(35);
  const SystemLayout l({{"A", 2}, {"B", 2}, {"C", 2}});
  const auto rho = reduced_state(PureVec(l, random_state_vector(8, rng)), {"A", "C"});
  // a complete measurement on C
  std::vector<CMatrix> ops;
  for (int k = 0; k < 2; ++k) {
    CMatrix p = CMatrix::Zero(2, 2);
    p(k, k) = 1.0;
    ops.push_back(p);
  }
  CMatrix sum = CMatrix::Zero(2, 2);
  for (const auto& [prob, state] : steered_states(rho, {"A"}, {"C"}, ops)) sum += prob * state;
  CHECK(max_abs(sum - partial_trace(rho, {"A"}).mat()) < 1e-12);
}
