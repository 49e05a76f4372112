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

#include "qmarkov/info.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace qmarkov {

namespace {

constexpr double kSpectrumFloor = 1e-12;

void require_disjoint(std::initializer_list<const Labels*> sets) {
  std::set<std::string> seen;
  for (const auto* s : sets) {
    for (const auto& l : *s) {
      if (!seen.insert(l).second) {
        throw Error(ErrorCode::kInvalidArgument, "label '" + l + "' appears in more than one subsystem");
      }
    }
  }
}

Labels join(const Labels& a, const Labels& b) {
  Labels out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

double shannon(const std::vector<double>& p) {
  double sum = 0.0;
  for (double x : p) {
    if (x < 0.0) throw Error(ErrorCode::kInvalidArgument, "negative probability weight");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorCode::kNotNormalized, "probability weights do not sum to 1");
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}

double spectrum_entropy(const RVector& eigenvalues) {
  double h = 0.0;
  for (double x : eigenvalues) {
    if (x > kSpectrumFloor) h -= x * std::log2(x);
  }
  return h;
}

double binary_entropy(double x) { return shannon({x, 1.0 - x}); }

double vn_entropy(const CMatrix& rho) { return spectrum_entropy(eigh(rho, 1e-8).values); }

double vn_entropy(const DensityOp& rho) { return vn_entropy(rho.mat()); }

double marginal_entropy(const DensityOp& rho, const Labels& labels) {
  if (labels.empty()) return 0.0;
  return vn_entropy(partial_trace(rho, labels));
}

double qmi(const DensityOp& rho, const Labels& a, const Labels& b) {
  require_disjoint({&a, &b});
  return marginal_entropy(rho, a) + marginal_entropy(rho, b) - marginal_entropy(rho, join(a, b));
}

double qcmi(const DensityOp& rho, const Labels& a, const Labels& b, const Labels& c) {
  require_disjoint({&a, &b, &c});
  const Labels ab = join(a, b);
  return marginal_entropy(rho, ab) + marginal_entropy(rho, join(b, c)) - marginal_entropy(rho, b) -
         marginal_entropy(rho, join(ab, c));
}

double trace_norm(const CMatrix& m) { return eigh(m, 1e-8).values.cwiseAbs().sum(); }

double trace_distance(const CMatrix& rho, const CMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "trace distance between operators of different size");
  }
  return trace_norm(rho - sigma);
}

double trace_distance(const DensityOp& rho, const DensityOp& sigma) {
  return trace_distance(rho.mat(), sigma.mat());
}

double eta0(double x) {
  if (x <= 0.0) return 0.0;
  const double inv_e = 1.0 / std::numbers::e;
  // constant past the maximum of -x log x so the bound stays monotone
  if (x > inv_e) return inv_e * std::log2(std::numbers::e);
  return -x * std::log2(x);
}

double eta(double x) { return x + eta0(x); }

double fannes_eta(double x, int d) {
  if (x < 0.0) throw Error(ErrorCode::kInvalidArgument, "fannes_eta needs x >= 0");
  return eta(x) * std::log2(static_cast<double>(d));
}

}  // namespace qmarkov
