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

namespace {

DensityOp bell() {
  CVector v = CVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return DensityOp::from_pure(PureVec(SystemLayout({{"A", 2}, {"B", 2}}), v));
}

}  // namespace

TEST_CASE("shannon entropy") {
  CHECK(shannon({0.5, 0.5}) == doctest::Approx(1.0));
  CHECK(shannon({1.0, 0.0}) == 0.0);
  CHECK(shannon({0.25, 0.25, 0.25, 0.25}) == doctest::Approx(2.0));
  // h(1/4) = 2 - (3/4) log2 3
  CHECK(binary_entropy(0.25) == doctest::Approx(2.0 - 0.75 * std::log2(3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(shannon({0.5, 0.6}), Error);
  CHECK_THROWS_AS(shannon({1.5, -0.5}), Error);
}

TEST_CASE("von Neumann entropy") {
  CHECK(vn_entropy(CMatrix(identity(4) / 4.0)) == doctest::Approx(2.0));
  const auto b = bell();
  CHECK(std::abs(vn_entropy(b)) < 1e-12);
  CHECK(marginal_entropy(b, {"A"}) == doctest::Approx(1.0));
  CHECK(marginal_entropy(b, {}) == 0.0);
}

TEST_CASE("mutual information of a Bell pair is 2") {
  CHECK(qmi(bell(), {"A"}, {"B"}) == doctest::Approx(2.0));
}

TEST_CASE("GHZ conditional mutual information") {
  const auto g = DensityOp::from_pure(build_example("VIC", 0, {0.5, 0.5}));
  CHECK(qcmi(g, {"A"}, {"B"}, {"C"}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(qcmi(g, {"A"}, {"A"}, {"C"}), Error);
}

TEST_CASE("trace distance uses the unnormalized trace norm") {
  const SystemLayout l({{"A", 2}});
  CMatrix p0 = CMatrix::Zero(2, 2), p1 = CMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  CHECK(trace_distance(DensityOp(l, p0), DensityOp(l, p1)) == doctest::Approx(2.0));
  CHECK(trace_norm(p0 - p1) == doctest::Approx(2.0));
}

TEST_CASE("eta functions") {
  CHECK(eta0(0.0) == 0.0);
  CHECK(eta0(0.25) == doctest::Approx(0.5));
  const double top = std::exp(-1.0) * std::log2(std::exp(1.0));
  CHECK(eta0(std::exp(-1.0)) == doctest::Approx(top));
  CHECK(eta0(0.9) == doctest::Approx(top));
  CHECK(fannes_eta(0.5, 4) == doctest::Approx(eta(0.5) * 2.0));
}

TEST_CASE("entropy inequalities on random states") {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const SystemLayout l({{"A", 2}, {"B", 2}, {"C", 3}});
    const DensityOp rho(l, random_density(12, rng, 1 + i % 12));
    const double sa = marginal_entropy(rho, {"A"}), sb = marginal_entropy(rho, {"B"});
    const double sab = marginal_entropy(rho, {"A", "B"});
    CHECK(sab <= sa + sb + 1e-10);
    CHECK(sab >= std::abs(sa - sb) - 1e-10);
    CHECK(qcmi(rho, {"A"}, {"B"}, {"C"}) >= -1e-10);
    const double chain = qmi(rho, {"A"}, {"B", "C"}) - qmi(rho, {"A"}, {"B"}) - qcmi(rho, {"A"}, {"B"}, {"C"});
    CHECK(std::abs(chain) < 1e-10);
  }
}

TEST_CASE("pure states have equal complementary entropies") {
  Rng rng(12);
  const SystemLayout l({{"A", 2}, {"B", 3}, {"C", 2}});
  const PureVec psi(l, random_state_vector(12, rng));
  const auto rho = DensityOp::from_pure(psi);
  CHECK(marginal_entropy(rho, {"A"}) == doctest::Approx(marginal_entropy(rho, {"B", "C"})).epsilon(1e-10));
}
