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

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qmarkov {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Rng = std::mt19937_64;
using Labels = std::vector<std::string>;

/// Default tolerance for Hermiticity, positivity and normalization checks.
inline constexpr double kStateTol = 1e-9;
/// Relative cutoff below which eigen/singular values count as zero.
inline constexpr double kRankCutoff = 1e-10;

enum class ErrorCode {
  kInvalidArgument,
  kUnknownLabel,
  kDimensionMismatch,
  kNotHermitian,
  kNotPositive,
  kNotNormalized,
  kNotPure,
  kNotMarkov,
  kNumerical,
  kDimensionCap,
  kEmptyTypicalSet,
};

/// Every failure in the library surfaces as this exception; the code lets
/// callers (the CLI in particular) map failures to stable identifiers.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

struct Factor {
  std::string label;
  int dim = 1;
  bool operator==(const Factor&) const = default;
};

/// Ordered tensor factors. Index convention: the leftmost factor is the
/// most significant digit of a composite basis index.
class SystemLayout {
 public:
  SystemLayout() = default;
  explicit SystemLayout(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t size() const { return factors_.size(); }
  int total_dim() const;
  std::vector<int> dims() const;
  Labels labels() const;

  bool contains(const std::string& label) const;
  /// Position of `label`; throws kUnknownLabel.
  std::size_t index_of(const std::string& label) const;
  /// Positions of `labels`, in the order given.
  std::vector<std::size_t> indices_of(const Labels& labels) const;
  /// Product of the dims of `labels`.
  int dim_of(const Labels& labels) const;
  /// Sub-layout of `labels` kept in this layout's order.
  SystemLayout restricted(const Labels& labels) const;
  /// Layout with factors reordered to `order` (must be a permutation).
  SystemLayout permuted(const Labels& order) const;
  SystemLayout concat(const SystemLayout& other) const;

  bool operator==(const SystemLayout&) const = default;

 private:
  std::vector<Factor> factors_;
};

/// Validated unit-trace positive semidefinite operator.
class DensityOp {
 public:
  DensityOp(SystemLayout layout, CMatrix mat, double tol = kStateTol);

  /// Skips validation; for results produced by trusted internal routines.
  static DensityOp unchecked(SystemLayout layout, CMatrix mat);
  static DensityOp from_pure(const class PureVec& psi);

  const SystemLayout& layout() const { return layout_; }
  const CMatrix& mat() const { return mat_; }
  int dim() const { return static_cast<int>(mat_.rows()); }

 private:
  DensityOp() = default;
  SystemLayout layout_;
  CMatrix mat_;
};

class PureVec {
 public:
  PureVec(SystemLayout layout, CVector vec, double tol = kStateTol);
  /// Normalizes `vec`; throws if it is zero.
  static PureVec normalized(SystemLayout layout, CVector vec);

  const SystemLayout& layout() const { return layout_; }
  const CVector& vec() const { return vec_; }
  int dim() const { return static_cast<int>(vec_.size()); }

 private:
  PureVec() = default;
  SystemLayout layout_;
  CVector vec_;
};

/// Linear isometry from (the support of a state on) `source` into `target`.
/// `mat` is target-dim x source-dim; mat^dagger mat is the identity on the
/// relevant source subspace.
struct IsometryOp {
  SystemLayout source;
  SystemLayout target;
  CMatrix mat;
};

struct EigenSystem {
  RVector values;   ///< descending
  CMatrix vectors;  ///< columns match `values`
};

// ---------------------------------------------------------------------------
// Operations

CMatrix tensor(const CMatrix& a, const CMatrix& b);
CVector tensor(const CVector& a, const CVector& b);
CMatrix identity(int d);
double hermiticity_residual(const CMatrix& m);

/// Hermitian eigendecomposition, eigenvalues descending.
EigenSystem eigh(const CMatrix& m, double tol = kStateTol);

/// Principal square root of a PSD matrix.
CMatrix psd_sqrt(const CMatrix& m, double tol = kStateTol);
/// m^{-1/2} on the support, zero on the kernel; eigenvalues below
/// max(eig) * rank_tol are treated as kernel.
CMatrix pinv_sqrt(const CMatrix& m, double rank_tol = kRankCutoff);
/// Moore-Penrose pseudo inverse with the same relative cutoff.
CMatrix pinv(const CMatrix& m, double rank_tol = kRankCutoff);
/// Orthonormal basis (columns) of the support of a PSD matrix.
CMatrix support_basis(const CMatrix& m, double rank_tol = kRankCutoff);

/// Partial trace of a raw operator over the factors not flagged in `keep`.
CMatrix partial_trace(const CMatrix& m, std::span<const int> dims, const std::vector<bool>& keep);
DensityOp partial_trace(const DensityOp& op, const Labels& keep);
/// Reduced state of a pure vector; avoids building the full projector.
DensityOp reduced_state(const PureVec& psi, const Labels& keep);

/// Reorders tensor factors. `perm[i]` is the old position of new factor i.
CMatrix permute_factors(const CMatrix& m, std::span<const int> dims, std::span<const int> perm);
CVector permute_factors(const CVector& v, std::span<const int> dims, std::span<const int> perm);
DensityOp permute(const DensityOp& op, const Labels& order);
PureVec permute(const PureVec& psi, const Labels& order);

/// Purification on layout (+) a reference factor labelled `ref_label`
/// whose dimension equals the layout's total dimension.
PureVec purify(const DensityOp& rho, const std::string& ref_label = "R");

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the
/// R-diagonal phases folded into Q.
CMatrix haar_unitary(int d, Rng& rng);
/// Random density operator GG^dagger / Tr (Ginibre ensemble).
CMatrix random_density(int d, Rng& rng, int rank = -1);
CVector random_state_vector(int d, Rng& rng);

/// Operator acting as `op` on the factors `targets` and identity elsewhere.
CMatrix embed(const CMatrix& op, const SystemLayout& layout, const Labels& targets);

double max_abs(const CMatrix& m);

}  // namespace qmarkov
