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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmarkov/kidec.hpp"
#include "qmarkov/qmat.hpp"

namespace qmarkov {

/// Labels of the three parties. The cost is always M_{A|B}: the random
/// unitary acts on `a` and the Markov condition is conditioned on `b`.
struct Parties {
  Labels a{"A"};
  Labels b{"B"};
  Labels c{"C"};
  /// The C|B cost: the roles of A and C exchanged.
  Parties swapped() const { return {c, b, a}; }
};

struct AlgorithmResult {
  std::optional<double> value;  ///< empty when the transfer matrix is not Hermitian
  double hermiticity = 0.0;     ///< max|Lambda - Lambda^dagger|
  int fixed_rank = 0;           ///< rank of the eigenvalue-1 projector
  RVector omega_spectrum;
};

struct CostReport {
  double m_formula = 0.0;
  std::optional<double> m_algorithm;
  double qcmi = 0.0;
  double qmi_a_bc = 0.0;
  bool self_adjoint = false;
  struct Row {
    double p;
    int dim_l;
    int dim_r;
    double s_phi_ar;
  };
  std::vector<Row> blocks;
};

struct MarkovTerm {
  double q = 0.0;
  int dim_l = 1;
  int dim_r = 1;
  CMatrix sigma;  ///< on A (x) b_L^i
  CMatrix phi;    ///< on b_R^i (x) C
};

struct MarkovDecomposition {
  IsometryOp gamma_b;
  std::vector<MarkovTerm> terms;
  double residual = 0.0;  ///< trace norm of the reconstruction error
};

struct RecoveryReport {
  double residual_bc = 0.0;  ///< || ups - R_{B->BC}(ups^AB) ||_1
  double residual_ab = 0.0;  ///< || ups - R'_{B->AB}(ups^BC) ||_1
};

double markov_cost_formula(const TripartiteKI& tki);
/// Decomposes first; the seed only drives the random commutant draws.
double markov_cost_formula(const PureVec& psi, const Parties& parties = {},
                           std::uint64_t seed = kDefaultKISeed);

AlgorithmResult markov_cost_algorithm_detail(const PureVec& psi, const Parties& parties = {},
                                             double herm_tol = 1e-8, double eig_tol = 1e-8);
std::optional<double> markov_cost_algorithm(const PureVec& psi, const Parties& parties = {});

bool is_markov_state(const DensityOp& rho, const Parties& parties = {}, double tol = 1e-9);

MarkovDecomposition markov_decomposition(const DensityOp& ups, const Parties& parties = {},
                                         double tol = 1e-8, std::uint64_t seed = kDefaultKISeed);

RecoveryReport recovery_check(const DensityOp& ups, const Parties& parties = {});

CostReport bounds_check(const PureVec& psi, const Parties& parties = {},
                        std::uint64_t seed = kDefaultKISeed);

/// Value-level test of M_{A|B} == I(A:C|B).
bool theorem6_check(const PureVec& psi, double tol = 1e-6, const Parties& parties = {});

/// The three example families. VIA and VIB take one lambda; VIC takes a
/// probability vector whose length sets d (the d argument must agree or be 0).
PureVec build_example(const std::string& family, int d, const std::vector<double>& lambda);

}  // namespace qmarkov
