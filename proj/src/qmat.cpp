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

#include "qmarkov/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>

namespace qmarkov {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kUnknownLabel: return "UNKNOWN_LABEL";
    case ErrorCode::kDimensionMismatch: return "DIM_MISMATCH";
    case ErrorCode::kNotHermitian: return "NOT_HERMITIAN";
    case ErrorCode::kNotPositive: return "NOT_POSITIVE";
    case ErrorCode::kNotNormalized: return "NOT_NORMALIZED";
    case ErrorCode::kNotPure: return "NOT_PURE";
    case ErrorCode::kNotMarkov: return "NOT_MARKOV";
    case ErrorCode::kNumerical: return "NUMERICAL";
    case ErrorCode::kDimensionCap: return "DIM_CAP";
    case ErrorCode::kEmptyTypicalSet: return "EMPTY_TYPICAL_SET";
  }
  return "UNKNOWN";
}

// ---------------------------------------------------------------------------
// SystemLayout

SystemLayout::SystemLayout(std::vector<Factor> factors) : factors_(std::move(factors)) {
  std::set<std::string> seen;
  for (const auto& f : factors_) {
    if (f.dim < 1) {
      throw Error(ErrorCode::kInvalidArgument, "factor '" + f.label + "' has dimension < 1");
    }
    if (!seen.insert(f.label).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate factor label '" + f.label + "'");
    }
  }
}

int SystemLayout::total_dim() const {
  int d = 1;
  for (const auto& f : factors_) d *= f.dim;
  return d;
}

std::vector<int> SystemLayout::dims() const {
  std::vector<int> out;
  out.reserve(factors_.size());
  for (const auto& f : factors_) out.push_back(f.dim);
  return out;
}

Labels SystemLayout::labels() const {
  Labels out;
  out.reserve(factors_.size());
  for (const auto& f : factors_) out.push_back(f.label);
  return out;
}

bool SystemLayout::contains(const std::string& label) const {
  return std::any_of(factors_.begin(), factors_.end(),
                     [&](const Factor& f) { return f.label == label; });
}

std::size_t SystemLayout::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].label == label) return i;
  }
  throw Error(ErrorCode::kUnknownLabel, "unknown factor label '" + label + "'");
}

std::vector<std::size_t> SystemLayout::indices_of(const Labels& labels) const {
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(index_of(l));
  return out;
}

int SystemLayout::dim_of(const Labels& labels) const {
  int d = 1;
  for (auto i : indices_of(labels)) d *= factors_[i].dim;
  return d;
}

SystemLayout SystemLayout::restricted(const Labels& labels) const {
  const auto idx = indices_of(labels);
  std::vector<Factor> out;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (std::find(idx.begin(), idx.end(), i) != idx.end()) out.push_back(factors_[i]);
  }
  return SystemLayout(std::move(out));
}

SystemLayout SystemLayout::permuted(const Labels& order) const {
  if (order.size() != factors_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "permutation must list every factor exactly once");
  }
  std::vector<Factor> out;
  for (auto i : indices_of(order)) out.push_back(factors_[i]);
  return SystemLayout(std::move(out));
}

SystemLayout SystemLayout::concat(const SystemLayout& other) const {
  auto f = factors_;
  f.insert(f.end(), other.factors_.begin(), other.factors_.end());
  return SystemLayout(std::move(f));
}

// ---------------------------------------------------------------------------
// State types

namespace {

void check_density(const SystemLayout& layout, const CMatrix& mat, double tol) {
  if (mat.rows() != mat.cols() || mat.rows() != layout.total_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "density matrix size does not match layout");
  }
  const double scale = std::max(1.0, max_abs(mat));
  if (hermiticity_residual(mat) > tol * scale) {
    throw Error(ErrorCode::kNotHermitian, "density matrix is not Hermitian");
  }
  if (std::abs(mat.trace() - Complex(1.0, 0.0)) > tol * std::max(1.0, double(mat.rows()))) {
    throw Error(ErrorCode::kNotNormalized, "density matrix trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (mat + mat.adjoint()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) {
    throw Error(ErrorCode::kNotPositive, "density matrix has a negative eigenvalue");
  }
}

}  // namespace

DensityOp::DensityOp(SystemLayout layout, CMatrix mat, double tol)
    : layout_(std::move(layout)), mat_(std::move(mat)) {
  check_density(layout_, mat_, tol);
}

DensityOp DensityOp::unchecked(SystemLayout layout, CMatrix mat) {
  DensityOp op;
  op.layout_ = std::move(layout);
  op.mat_ = std::move(mat);
  return op;
}

DensityOp DensityOp::from_pure(const PureVec& psi) {
  return unchecked(psi.layout(), psi.vec() * psi.vec().adjoint());
}

PureVec::PureVec(SystemLayout layout, CVector vec, double tol)
    : layout_(std::move(layout)), vec_(std::move(vec)) {
  if (vec_.size() != layout_.total_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "state vector size does not match layout");
  }
  if (std::abs(vec_.norm() - 1.0) > tol) {
    throw Error(ErrorCode::kNotNormalized, "state vector is not normalized");
  }
}

PureVec PureVec::normalized(SystemLayout layout, CVector vec) {
  const double n = vec.norm();
  if (n == 0.0) throw Error(ErrorCode::kNotNormalized, "zero state vector");
  PureVec out;
  if (vec.size() != layout.total_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "state vector size does not match layout");
  }
  out.layout_ = std::move(layout);
  out.vec_ = vec / n;
  return out;
}

// ---------------------------------------------------------------------------
// Dense algebra

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CVector tensor(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

CMatrix identity(int d) { return CMatrix::Identity(d, d); }

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double hermiticity_residual(const CMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(m - m.adjoint());
}

EigenSystem eigh(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::kDimensionMismatch, "eigh needs a square matrix");
  if (hermiticity_residual(m) > tol * std::max(1.0, max_abs(m))) {
    throw Error(ErrorCode::kNotHermitian, "eigh input is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()));
  if (es.info() != Eigen::Success) throw Error(ErrorCode::kNumerical, "eigensolver failed");
  const auto n = m.rows();
  EigenSystem out{RVector(n), CMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = es.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

namespace {

CMatrix spectral_map(const EigenSystem& es, const std::function<double(double)>& f) {
  const auto& v = es.vectors;
  RVector fv = es.values.unaryExpr(f);
  return v * fv.asDiagonal() * v.adjoint();
}

}  // namespace

CMatrix psd_sqrt(const CMatrix& m, double tol) {
  const auto es = eigh(m, tol);
  if (es.values.size() > 0 && es.values.minCoeff() < -tol * std::max(1.0, es.values.maxCoeff())) {
    throw Error(ErrorCode::kNotPositive, "psd_sqrt input has a negative eigenvalue");
  }
  return spectral_map(es, [](double x) { return x > 0 ? std::sqrt(x) : 0.0; });
}

CMatrix pinv_sqrt(const CMatrix& m, double rank_tol) {
  const auto es = eigh(m, 1e-6);
  const double cutoff = std::max(0.0, es.values.size() ? es.values.maxCoeff() : 0.0) * rank_tol;
  return spectral_map(es, [cutoff](double x) { return x > cutoff && x > 0 ? 1.0 / std::sqrt(x) : 0.0; });
}

CMatrix support_basis(const CMatrix& m, double rank_tol) {
  const auto es = eigh(m, 1e-6);
  const double cutoff = std::max(0.0, es.values.size() ? es.values.maxCoeff() : 0.0) * rank_tol;
  Eigen::Index r = 0;
  while (r < es.values.size() && es.values(r) > cutoff && es.values(r) > 0) ++r;
  return es.vectors.leftCols(r);
}

CMatrix pinv(const CMatrix& m, double rank_tol) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double cutoff = (s.size() ? s(0) : 0.0) * rank_tol;
  RVector inv = s.unaryExpr([cutoff](double x) { return x > cutoff && x > 0 ? 1.0 / x : 0.0; });
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

// ---------------------------------------------------------------------------
// Index bookkeeping

namespace {

std::vector<long> strides_of(std::span<const int> dims) {
  std::vector<long> s(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i) s[i] = s[i + 1] * dims[i + 1];
  return s;
}

/// Offsets (in the full index space) of every composite index over the
/// selected factors, enumerated with the leftmost selected factor major.
std::vector<long> offsets_of(std::span<const int> dims, const std::vector<bool>& select) {
  const auto strides = strides_of(dims);
  std::vector<long> out{0};
  for (std::size_t f = 0; f < dims.size(); ++f) {
    if (!select[f]) continue;
    std::vector<long> next;
    next.reserve(out.size() * dims[f]);
    for (long base : out) {
      for (int k = 0; k < dims[f]; ++k) next.push_back(base + k * strides[f]);
    }
    out = std::move(next);
  }
  return out;
}

std::vector<long> permutation_map(std::span<const int> dims, std::span<const int> perm) {
  if (perm.size() != dims.size()) {
    throw Error(ErrorCode::kInvalidArgument, "permutation length differs from factor count");
  }
  const auto old_strides = strides_of(dims);
  std::vector<long> out{0};
  for (int p : perm) {
    std::vector<long> next;
    next.reserve(out.size() * dims[p]);
    for (long base : out) {
      for (int k = 0; k < dims[p]; ++k) next.push_back(base + k * old_strides[p]);
    }
    out = std::move(next);
  }
  return out;
}

std::vector<bool> mask_of(const SystemLayout& layout, const Labels& keep) {
  std::vector<bool> mask(layout.size(), false);
  for (auto i : layout.indices_of(keep)) mask[i] = true;
  return mask;
}

std::vector<int> perm_of(const SystemLayout& layout, const Labels& order) {
  if (order.size() != layout.size()) {
    throw Error(ErrorCode::kInvalidArgument, "permutation must list every factor exactly once");
  }
  std::vector<int> perm;
  for (auto i : layout.indices_of(order)) perm.push_back(static_cast<int>(i));
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::kInvalidArgument, "permutation repeats a factor");
  }
  return perm;
}

}  // namespace

CMatrix partial_trace(const CMatrix& m, std::span<const int> dims, const std::vector<bool>& keep) {
  std::vector<bool> traced(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) traced[i] = !keep[i];
  const auto kept_off = offsets_of(dims, keep);
  const auto traced_off = offsets_of(dims, traced);
  const auto n = static_cast<Eigen::Index>(kept_off.size());
  CMatrix out = CMatrix::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      Complex acc = 0.0;
      for (long t : traced_off) acc += m(kept_off[a] + t, kept_off[b] + t);
      out(a, b) = acc;
    }
  }
  return out;
}

DensityOp partial_trace(const DensityOp& op, const Labels& keep) {
  const auto mask = mask_of(op.layout(), keep);
  const auto dims = op.layout().dims();
  return DensityOp::unchecked(op.layout().restricted(keep), partial_trace(op.mat(), dims, mask));
}

DensityOp reduced_state(const PureVec& psi, const Labels& keep) {
  const auto mask = mask_of(psi.layout(), keep);
  std::vector<bool> traced(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) traced[i] = !mask[i];
  const auto dims = psi.layout().dims();
  const auto kept_off = offsets_of(dims, mask);
  const auto traced_off = offsets_of(dims, traced);
  CMatrix amp(kept_off.size(), traced_off.size());
  for (std::size_t a = 0; a < kept_off.size(); ++a) {
    for (std::size_t t = 0; t < traced_off.size(); ++t) amp(a, t) = psi.vec()(kept_off[a] + traced_off[t]);
  }
  return DensityOp::unchecked(psi.layout().restricted(keep), amp * amp.adjoint());
}

CMatrix permute_factors(const CMatrix& m, std::span<const int> dims, std::span<const int> perm) {
  const auto map = permutation_map(dims, perm);
  const auto n = static_cast<Eigen::Index>(map.size());
  CMatrix out(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) out(a, b) = m(map[a], map[b]);
  }
  return out;
}

CVector permute_factors(const CVector& v, std::span<const int> dims, std::span<const int> perm) {
  const auto map = permutation_map(dims, perm);
  CVector out(v.size());
  for (std::size_t a = 0; a < map.size(); ++a) out(a) = v(map[a]);
  return out;
}

DensityOp permute(const DensityOp& op, const Labels& order) {
  const auto perm = perm_of(op.layout(), order);
  const auto dims = op.layout().dims();
  return DensityOp::unchecked(op.layout().permuted(order), permute_factors(op.mat(), dims, perm));
}

PureVec permute(const PureVec& psi, const Labels& order) {
  const auto perm = perm_of(psi.layout(), order);
  const auto dims = psi.layout().dims();
  return PureVec(psi.layout().permuted(order), permute_factors(psi.vec(), dims, perm), 1e-6);
}

CMatrix embed(const CMatrix& op, const SystemLayout& layout, const Labels& targets) {
  const int dt = layout.dim_of(targets);
  if (op.rows() != dt || op.cols() != dt) {
    throw Error(ErrorCode::kDimensionMismatch, "operator does not match target factors");
  }
  Labels order = targets;
  for (const auto& l : layout.labels()) {
    if (std::find(targets.begin(), targets.end(), l) == targets.end()) order.push_back(l);
  }
  const SystemLayout staged = layout.permuted(order);
  CMatrix full = tensor(op, identity(layout.total_dim() / dt));
  // staged -> layout order
  std::vector<int> perm;
  for (const auto& l : layout.labels()) perm.push_back(static_cast<int>(staged.index_of(l)));
  const auto dims = staged.dims();
  return permute_factors(full, dims, perm);
}

PureVec purify(const DensityOp& rho, const std::string& ref_label) {
  const int d = rho.dim();
  const auto es = eigh(rho.mat(), 1e-6);
  CVector psi = CVector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) {
    const double w = es.values(i);
    if (w <= 0) continue;
    CVector ref = CVector::Zero(d);
    ref(i) = 1.0;
    psi += std::sqrt(w) * tensor(CVector(es.vectors.col(i)), ref);
  }
  SystemLayout layout = rho.layout().concat(SystemLayout({{ref_label, d}}));
  return PureVec::normalized(std::move(layout), std::move(psi));
}

// ---------------------------------------------------------------------------
// Random sampling

namespace {

CMatrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  CMatrix z(rows, cols);
  // fill column by column so the draw order is fixed
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      z(i, j) = Complex(re, im);
    }
  }
  return z;
}

}  // namespace

CMatrix haar_unitary(int d, Rng& rng) {
  if (d < 1) throw Error(ErrorCode::kInvalidArgument, "haar_unitary needs d >= 1");
  const CMatrix z = ginibre(d, d, rng);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    const Complex rii = r(i, i);
    const double a = std::abs(rii);
    q.col(i) *= a > 0 ? rii / a : Complex(1.0, 0.0);
  }
  return q;
}

CMatrix random_density(int d, Rng& rng, int rank) {
  if (rank <= 0) rank = d;
  const CMatrix g = ginibre(d, rank, rng);
  CMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

CVector random_state_vector(int d, Rng& rng) {
  CVector v = ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

}  // namespace qmarkov
