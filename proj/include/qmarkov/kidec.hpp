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

#include <cstdint>
#include <utility>
#include <vector>

#include "qmarkov/qmat.hpp"

namespace qmarkov {

inline constexpr std::uint64_t kDefaultKISeed = 0x4b49'6465'636fULL;

struct KIBlock {
  double p = 0.0;
  int dim_l = 1;
  int dim_r = 1;
  CMatrix omega;  ///< on a_L^j
  CMatrix phi;    ///< on a_R^j (x) C, a_R major
};

/// gamma.mat is (d_a0 * d_aL * d_aR) x d_A with row index (j*d_aL + alpha)*d_aR + r.
/// It is a partial isometry: gamma^dagger gamma projects onto supp Psi^A.
/// Block j lives on alpha < dim_l, r < dim_r.
struct KIDecomposition {
  IsometryOp gamma;
  SystemLayout a_layout;
  SystemLayout c_layout;
  std::vector<KIBlock> blocks;
  int d_a0 = 1;
  int d_al = 1;
  int d_ar = 1;
};

struct KIReport {
  double reconstruction = 0.0;  ///< trace norm of Gamma Psi Gamma^dagger - block form
  double isometry = 0.0;        ///< max|Gamma^dagger Gamma - support projector|
  double irreducibility = 0.0;  ///< extra commutant dimensions of {<k|phi_j|l>}, summed
  double intertwiner = 0.0;     ///< null dimensions of cross-block intertwiner systems, summed
  double probability_sum = 0.0;
};

struct TripartiteKI {
  KIDecomposition base;
  /// Rows (j*d_bL + s)*d_bR + t, columns B.
  IsometryOp gamma_prime;
  int d_bl = 1;
  int d_br = 1;
  std::vector<CVector> omega_vecs;  ///< per block, on a_L^j (x) b_L^j
  std::vector<CVector> phi_vecs;    ///< per block, on a_R^j (x) b_R^j (x) C
  std::vector<int> dim_bl;
  std::vector<int> dim_br;
  double reconstruction = 0.0;      ///< Euclidean norm of the tripartite block-form residual
  double isometry = 0.0;
};

/// KI decomposition of the A factors of psi_ac with respect to the C factors.
KIDecomposition ki_decompose(const DensityOp& psi_ac, const Labels& a, const Labels& c,
                             std::uint64_t seed = kDefaultKISeed, double tol = 1e-7);

KIReport validate_ki(const KIDecomposition& dec, const DensityOp& psi_ac);

/// Gamma rho Gamma^dagger for a raw operator on A (x) C (A-major).
CMatrix ki_frame(const KIDecomposition& dec, const CMatrix& rho_ac);

/// Rotates each block's a_R basis so phi_j^{a_R} is diagonal, descending.
KIDecomposition canonical_ar_basis(const KIDecomposition& dec);

/// Tripartite form of a pure state; A, B, C are the labels of each party.
TripartiteKI ki_tripartite(const PureVec& psi, const Labels& a, const Labels& b, const Labels& c,
                           std::uint64_t seed = kDefaultKISeed, double tol = 1e-7);
TripartiteKI ki_tripartite(const PureVec& psi, std::uint64_t seed = kDefaultKISeed);

/// Normalized states Tr_C[M Psi M^dagger]/w with weights w; zero weights dropped.
std::vector<std::pair<double, CMatrix>> steered_states(const DensityOp& psi_ac, const Labels& a,
                                                       const Labels& c,
                                                       const std::vector<CMatrix>& ops);

}  // namespace qmarkov
