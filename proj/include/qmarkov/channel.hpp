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

#include <vector>

#include "qmarkov/qmat.hpp"

namespace qmarkov {

/// CPTP map rho -> sum_i K_i rho K_i^dagger; each K_i is out-dim x in-dim.
struct KrausChannel {
  SystemLayout in;
  SystemLayout out;
  std::vector<CMatrix> kraus;
};

/// Superoperators act on row-major vectorized operators: entry [kl, mn]
/// (row k*d+l, column m*d+n) maps tau_mn to E(tau)_kl.
struct TransferSet {
  CMatrix lambda1;
  CMatrix lambda2;
  CMatrix lambda;
};

/// Petz recovery map A -> AC of psi_ac. Output layout is A-factors then C-factors.
KrausChannel petz_channel(const DensityOp& psi_ac, const Labels& a, const Labels& c);
/// E = Tr_C o Petz, Kraus operators <k|_C (Psi^AC)^{1/2} |l>_C (Psi^A)^{-1/2}
/// ordered with k major.
KrausChannel channel_E(const DensityOp& psi_ac, const Labels& a, const Labels& c);

TransferSet transfer_matrices(const DensityOp& psi_ac, const Labels& a, const Labels& c);
/// sum_i K_i (x) conj(K_i), the superoperator of a Kraus family.
CMatrix transfer_of(const KrausChannel& ch);

bool is_self_adjoint(const CMatrix& lambda, double tol = 1e-8);
/// Projector onto the eigenvalue-1 eigenspace of a Hermitian transfer matrix.
CMatrix ergodic_projector(const CMatrix& lambda, double eig_tol = 1e-8);
/// (1/N) sum_{n=1..N} lambda^n
CMatrix cesaro_average(const CMatrix& lambda, int n);

/// Hilbert-Schmidt orthonormal basis of {X : [K,X] = [K^dagger,X] = 0 for all K}.
std::vector<CMatrix> commutant_basis(const std::vector<CMatrix>& ops, double tol = 1e-9);
std::vector<CMatrix> commutant_basis(const KrausChannel& ch, double tol = 1e-9);

/// Completeness residual max|sum K^dagger K - P| against projector P.
double completeness_residual(const KrausChannel& ch, const CMatrix& projector);

/// Applies the channel to the factors ch.in of rho (identity elsewhere).
/// Result layout: ch.out factors followed by the untouched factors in order.
/// The input trace is not required to be one.
CMatrix apply_raw(const KrausChannel& ch, const SystemLayout& layout, const CMatrix& rho);
DensityOp apply(const KrausChannel& ch, const DensityOp& rho);
/// Same placement contract for a superoperator acting on the factors `targets`;
/// the output keeps rho's layout.
CMatrix apply_superop(const CMatrix& phi, const SystemLayout& layout, const Labels& targets,
                      const CMatrix& rho);

}  // namespace qmarkov
