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

#include "qmarkov/channel.hpp"

#include <algorithm>
#include <cmath>

namespace qmarkov {

namespace {

struct OrderedAC {
  CMatrix rho;  // A-major, C-minor
  int da;
  int dc;
  SystemLayout a_layout;
  SystemLayout c_layout;
};

OrderedAC order_ac(const DensityOp& psi_ac, const Labels& a, const Labels& c) {
  Labels order = a;
  order.insert(order.end(), c.begin(), c.end());
  if (order.size() != psi_ac.layout().size()) {
    throw Error(ErrorCode::kInvalidArgument, "A and C must partition the state's factors");
  }
  const auto p = permute(psi_ac, order);
  SystemLayout la = psi_ac.layout().permuted(order).restricted(a);
  SystemLayout lc = psi_ac.layout().permuted(order).restricted(c);
  // restricted() keeps layout order; reorder to the requested label order
  la = la.permuted(a);
  lc = lc.permuted(c);
  return {p.mat(), la.total_dim(), lc.total_dim(), la, lc};
}

CMatrix marginal_a(const OrderedAC& s) {
  const int dims[2] = {s.da, s.dc};
  return partial_trace(s.rho, dims, {true, false});
}

void require_support(const CMatrix& psi_a) {
  if (eigh(psi_a, 1e-6).values(0) < 1e-14) {
    throw Error(ErrorCode::kNumerical, "marginal on A is numerically zero");
  }
}

}  // namespace

KrausChannel petz_channel(const DensityOp& psi_ac, const Labels& a, const Labels& c) {
  const auto s = order_ac(psi_ac, a, c);
  const CMatrix psi_a = marginal_a(s);
  require_support(psi_a);
  const CMatrix root = psd_sqrt(s.rho, 1e-8);
  const CMatrix inv = pinv_sqrt(psi_a);
  KrausChannel ch{s.a_layout, s.a_layout.concat(s.c_layout), {}};
  for (int l = 0; l < s.dc; ++l) {
    CVector e = CVector::Zero(s.dc);
    e(l) = 1.0;
    ch.kraus.push_back(root * tensor(inv, CMatrix(e)));
  }
  return ch;
}

KrausChannel channel_E(const DensityOp& psi_ac, const Labels& a, const Labels& c) {
  const auto s = order_ac(psi_ac, a, c);
  const CMatrix psi_a = marginal_a(s);
  require_support(psi_a);
  const CMatrix root = psd_sqrt(s.rho, 1e-8);
  const CMatrix inv = pinv_sqrt(psi_a);
  KrausChannel ch{s.a_layout, s.a_layout, {}};
  for (int k = 0; k < s.dc; ++k) {
    for (int l = 0; l < s.dc; ++l) {
      CMatrix block(s.da, s.da);
      for (int x = 0; x < s.da; ++x) {
        for (int y = 0; y < s.da; ++y) block(x, y) = root(x * s.dc + k, y * s.dc + l);
      }
      ch.kraus.push_back(block * inv);
    }
  }
  return ch;
}

TransferSet transfer_matrices(const DensityOp& psi_ac, const Labels& a, const Labels& c) {
  const auto s = order_ac(psi_ac, a, c);
  const CMatrix sa = psd_sqrt(marginal_a(s), 1e-8);
  const CMatrix t = psd_sqrt(s.rho, 1e-8);
  const int d = s.da, dc = s.dc;
  TransferSet out;
  out.lambda1.resize(d * d, d * d);
  out.lambda2.setZero(d * d, d * d);
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
          out.lambda1(k * d + l, m * d + n) = sa(k, m) * sa(n, l);
          Complex acc = 0.0;
          for (int x = 0; x < dc; ++x) {
            for (int y = 0; y < dc; ++y) acc += t(k * dc + x, m * dc + y) * t(n * dc + y, l * dc + x);
          }
          out.lambda2(k * d + l, m * d + n) = acc;
        }
      }
    }
  }
  out.lambda = out.lambda2 * pinv(out.lambda1);
  return out;
}

CMatrix transfer_of(const KrausChannel& ch) {
  const auto r = ch.out.total_dim(), c = ch.in.total_dim();
  CMatrix out = CMatrix::Zero(r * r, c * c);
  for (const auto& k : ch.kraus) out += tensor(k, CMatrix(k.conjugate()));
  return out;
}

bool is_self_adjoint(const CMatrix& lambda, double tol) { return hermiticity_residual(lambda) <= tol; }

CMatrix ergodic_projector(const CMatrix& lambda, double eig_tol) {
  const auto es = eigh(lambda, 1e-6);
  CMatrix p = CMatrix::Zero(lambda.rows(), lambda.cols());
  int rank = 0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    if (std::abs(es.values(i) - 1.0) <= eig_tol) {
      p += es.vectors.col(i) * es.vectors.col(i).adjoint();
      ++rank;
    }
  }
  if (rank == 0) throw Error(ErrorCode::kNumerical, "transfer matrix has no eigenvalue 1");
  return p;
}

CMatrix cesaro_average(const CMatrix& lambda, int n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "cesaro_average needs N >= 1");
  CMatrix power = lambda;
  CMatrix sum = lambda;
  for (int i = 2; i <= n; ++i) {
    power = power * lambda;
    sum += power;
  }
  return sum / static_cast<double>(n);
}

std::vector<CMatrix> commutant_basis(const std::vector<CMatrix>& ops, double tol) {
  if (ops.empty()) throw Error(ErrorCode::kInvalidArgument, "commutant of an empty family");
  const auto d = ops.front().rows();
  const auto d2 = d * d;
  const CMatrix id = identity(static_cast<int>(d));
  // stack [K (x) I - I (x) K^T] for K and K^dagger, compressing with QR as we go
  CMatrix r = CMatrix::Zero(0, d2);
  auto push = [&](const CMatrix& k) {
    CMatrix blk = tensor(k, id) - tensor(id, CMatrix(k.transpose()));
    CMatrix stacked(r.rows() + blk.rows(), d2);
    stacked << r, blk;
    if (stacked.rows() > d2) {
      Eigen::HouseholderQR<CMatrix> qr(stacked);
      r = qr.matrixQR().topRows(d2).triangularView<Eigen::Upper>();
    } else {
      r = stacked;
    }
  };
  double scale = 0.0;
  for (const auto& k : ops) {
    scale = std::max(scale, k.norm());
    if (k.rows() != d || k.cols() != d) {
      throw Error(ErrorCode::kDimensionMismatch, "commutant needs square operators of one size");
    }
    push(k);
    push(k.adjoint());
  }
  Eigen::JacobiSVD<CMatrix> svd(r, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  // the operator scale floors the cutoff; families proportional to the identity
  // leave only rounding noise in the stacked system
  const double cutoff = std::max({s.size() ? s(0) : 0.0, scale, 1e-300}) * tol;
  std::vector<CMatrix> out;
  for (Eigen::Index i = 0; i < d2; ++i) {
    const double si = i < s.size() ? s(i) : 0.0;
    if (si > cutoff) continue;
    const CVector v = svd.matrixV().col(i);
    CMatrix x(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = 0; b < d; ++b) x(a, b) = v(a * d + b);
    }
    out.push_back(x);
  }
  return out;
}

std::vector<CMatrix> commutant_basis(const KrausChannel& ch, double tol) {
  if (!(ch.in == ch.out)) throw Error(ErrorCode::kDimensionMismatch, "commutant needs in == out");
  return commutant_basis(ch.kraus, tol);
}

double completeness_residual(const KrausChannel& ch, const CMatrix& projector) {
  CMatrix sum = CMatrix::Zero(ch.in.total_dim(), ch.in.total_dim());
  for (const auto& k : ch.kraus) sum += k.adjoint() * k;
  return max_abs(sum - projector);
}

namespace {

Labels rest_labels(const SystemLayout& layout, const Labels& targets) {
  Labels rest;
  for (const auto& l : layout.labels()) {
    if (std::find(targets.begin(), targets.end(), l) == targets.end()) rest.push_back(l);
  }
  return rest;
}

}  // namespace

CMatrix apply_raw(const KrausChannel& ch, const SystemLayout& layout, const CMatrix& rho) {
  const Labels targets = ch.in.labels();
  for (const auto& f : ch.in.factors()) {
    if (layout.dim_of({f.label}) != f.dim) {
      throw Error(ErrorCode::kDimensionMismatch, "channel input factor '" + f.label + "' has wrong dim");
    }
  }
  const Labels rest = rest_labels(layout, targets);
  for (const auto& l : ch.out.labels()) {
    if (std::find(rest.begin(), rest.end(), l) != rest.end()) {
      throw Error(ErrorCode::kInvalidArgument, "channel output label '" + l + "' clashes with the state");
    }
  }
  Labels order = targets;
  order.insert(order.end(), rest.begin(), rest.end());
  const auto staged = permute(DensityOp::unchecked(layout, rho), order);
  const CMatrix id = identity(layout.dim_of(rest));
  const auto dout = ch.out.total_dim() * id.rows();
  CMatrix out = CMatrix::Zero(dout, dout);
  for (const auto& k : ch.kraus) {
    const CMatrix kk = tensor(k, id);
    out += kk * staged.mat() * kk.adjoint();
  }
  return out;
}

DensityOp apply(const KrausChannel& ch, const DensityOp& rho) {
  const Labels rest = rest_labels(rho.layout(), ch.in.labels());
  SystemLayout out_layout = ch.out.concat(rho.layout().restricted(rest).permuted(rest));
  return DensityOp::unchecked(std::move(out_layout), apply_raw(ch, rho.layout(), rho.mat()));
}

CMatrix apply_superop(const CMatrix& phi, const SystemLayout& layout, const Labels& targets,
                      const CMatrix& rho) {
  const int d = layout.dim_of(targets);
  if (phi.rows() != d * d || phi.cols() != d * d) {
    throw Error(ErrorCode::kDimensionMismatch, "superoperator does not match target factors");
  }
  const Labels rest = rest_labels(layout, targets);
  Labels order = targets;
  order.insert(order.end(), rest.begin(), rest.end());
  const CMatrix staged = permute(DensityOp::unchecked(layout, rho), order).mat();
  const int r = layout.total_dim() / d;
  CMatrix out = CMatrix::Zero(staged.rows(), staged.cols());
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
          const Complex w = phi(k * d + l, m * d + n);
          if (w == Complex(0.0)) continue;
          out.block(k * r, l * r, r, r) += w * staged.block(m * r, n * r, r, r);
        }
      }
    }
  }
  // back to the caller's factor order
  const SystemLayout staged_layout = layout.permuted(order);
  return permute(DensityOp::unchecked(staged_layout, out), layout.labels()).mat();
}

}  // namespace qmarkov
