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

/// Shannon entropy in bits. Rejects negative weights and weights that do
/// not sum to one within 1e-9.
double shannon(const std::vector<double>& p);
/// Entropy of a (possibly slightly noisy) spectrum: values below 1e-12 are
/// dropped, no normalization check.
double spectrum_entropy(const RVector& eigenvalues);
double binary_entropy(double x);

double vn_entropy(const CMatrix& rho);
double vn_entropy(const DensityOp& rho);
/// S(X) of the marginal on `labels`; the empty set gives 0.
double marginal_entropy(const DensityOp& rho, const Labels& labels);

double qmi(const DensityOp& rho, const Labels& a, const Labels& b);
double qcmi(const DensityOp& rho, const Labels& a, const Labels& b, const Labels& c);

/// Sum of absolute eigenvalues of a Hermitian matrix (no 1/2 factor).
double trace_norm(const CMatrix& m);
double trace_distance(const DensityOp& rho, const DensityOp& sigma);
double trace_distance(const CMatrix& rho, const CMatrix& sigma);

/// eta_0(x) = -x log2 x below 1/e, constant (1/e) log2 e above.
double eta0(double x);
double eta(double x);
/// eta(x) * log2 d, the right-hand side of the Fannes inequality.
double fannes_eta(double x, int d);

}  // namespace qmarkov
