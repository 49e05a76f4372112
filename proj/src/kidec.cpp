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

#include "qmarkov/kidec.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "qmarkov/channel.hpp"
#include "qmarkov/info.hpp"

namespace qmarkov {

namespace {

constexpr double kClusterGap = 1e-6;
constexpr int kMaxAttempts = 8;

struct Ordered {
  CMatrix rho;
  SystemLayout a_layout;
  SystemLayout c_layout;
  int da = 1;
  int dc = 1;
};

Ordered order_ac(const DensityOp& psi_ac, const Labels& a, const Labels& c) {
  Labels order = a;
  order.insert(order.end(), c.begin(), c.end());
  if (order.size() != psi_ac.layout().size()) {
    throw Error(ErrorCode::kInvalidArgument, "A and C must partition the state's factors");
  }
  const auto p = permute(psi_ac, order);
  Ordered o;
  o.a_layout = p.layout().restricted(a);
  o.c_layout = p.layout().restricted(c);
  o.da = o.a_layout.total_dim();
  o.dc = o.c_layout.total_dim();
  o.rho = p.mat();
  return o;
}

// One central block: minimal projections (columns in support coordinates)
// sharing a common rank.
struct CentralBlock {
  std::vector<CMatrix> units;
  int rank() const { return static_cast<int>(units.front().cols()); }
  CMatrix projector() const {
    CMatrix p = CMatrix::Zero(units.front().rows(), units.front().rows());
    for (const auto& q : units) p += q * q.adjoint();
    return p;
  }
};

std::vector<double> gaussians(std::size_t n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& x : out) x = g(rng);
  return out;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) i = parent[i] = parent[parent[i]];
  return i;
}

// Splits the commutant into minimal projections using one random Hermitian
// element, then groups them into central blocks. Empty on failure.
std::vector<CentralBlock> draw_structure(const std::vector<CMatrix>& basis, Rng& rng) {
  const auto s = basis.front().rows();
  const auto w = gaussians(basis.size(), rng);
  CMatrix h = CMatrix::Zero(s, s);
  for (std::size_t i = 0; i < basis.size(); ++i) h += w[i] * (basis[i] + basis[i].adjoint());
  const auto es = eigh(h, 1e-6);
  const double spread = es.values(0) - es.values(s - 1);
  if (spread <= 1e-12) return {};

  std::vector<CMatrix> clusters;
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= s; ++i) {
    if (i == s || (es.values(i - 1) - es.values(i)) / spread > kClusterGap) {
      clusters.push_back(es.vectors.middleCols(start, i - start));
      start = i;
    }
  }

  std::vector<std::size_t> parent(clusters.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t x = 0; x < clusters.size(); ++x) {
    for (std::size_t y = x + 1; y < clusters.size(); ++y) {
      double link = 0.0;
      for (const auto& b : basis) link += (clusters[x].adjoint() * b * clusters[y]).norm();
      if (link > 1e-6) parent[find_root(parent, x)] = find_root(parent, y);
    }
  }

  std::vector<CentralBlock> blocks;
  std::vector<int> slot(clusters.size(), -1);
  for (std::size_t x = 0; x < clusters.size(); ++x) {
    const auto r = find_root(parent, x);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    blocks[slot[r]].units.push_back(clusters[x]);
  }

  std::size_t algebra_dim = 0;
  for (const auto& b : blocks) {
    for (const auto& q : b.units) {
      if (q.cols() != b.rank()) return {};
    }
    algebra_dim += b.units.size() * b.units.size();
  }
  // the commutant must be a direct sum of full matrix algebras
  if (algebra_dim != basis.size()) return {};
  return blocks;
}

bool same_structure(const std::vector<CentralBlock>& x, const std::vector<CentralBlock>& y) {
  if (x.size() != y.size()) return false;
  for (const auto& bx : x) {
    const CMatrix px = bx.projector();
    const double rx = static_cast<double>(bx.units.size() * bx.rank());
    bool matched = false;
    for (const auto& by : y) {
      if (by.units.size() != bx.units.size() || by.rank() != bx.rank()) continue;
      if (std::abs((px * by.projector()).trace().real() - rx) < 1e-6) matched = true;
    }
    if (!matched) return false;
  }
  return true;
}

CMatrix polar_unitary(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// Rotates every unit of a block onto the first one so the algebra acts as
// M_L (x) I_R in the combined basis.
bool align_units(CentralBlock& block, const std::vector<CMatrix>& basis, Rng& rng) {
  if (block.units.size() == 1) return true;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const auto re = gaussians(basis.size(), rng);
    const auto im = gaussians(basis.size(), rng);
    CMatrix z = CMatrix::Zero(basis.front().rows(), basis.front().cols());
    for (std::size_t i = 0; i < basis.size(); ++i) z += Complex(re[i], im[i]) * basis[i];
    bool ok = true;
    std::vector<CMatrix> aligned{block.units.front()};
    for (std::size_t a = 1; a < block.units.size() && ok; ++a) {
      const CMatrix m = block.units[a].adjoint() * z * block.units.front();
      if (m.norm() < 1e-6 * z.norm()) ok = false;
      else aligned.push_back(block.units[a] * polar_unitary(m));
    }
    if (ok) {
      block.units = std::move(aligned);
      return true;
    }
  }
  return false;
}

struct Attempt {
  KIDecomposition dec;
  double residual = 0.0;
};

CMatrix block_form(const KIDecomposition& dec, int dc) {
  const int dim = dec.d_a0 * dec.d_al * dec.d_ar * dc;
  CMatrix out = CMatrix::Zero(dim, dim);
  for (std::size_t j = 0; j < dec.blocks.size(); ++j) {
    const auto& b = dec.blocks[j];
    const CMatrix blk = b.p * tensor(b.omega, b.phi);
    auto index = [&](int alpha, int rc) {
      const int r = rc / dc, c = rc % dc;
      return ((static_cast<int>(j) * dec.d_al + alpha) * dec.d_ar + r) * dc + c;
    };
    const int rdc = b.dim_r * dc;
    for (int x = 0; x < blk.rows(); ++x) {
      for (int y = 0; y < blk.cols(); ++y) out(index(x / rdc, x % rdc), index(y / rdc, y % rdc)) = blk(x, y);
    }
  }
  return out;
}

CMatrix frame_of(const CMatrix& gamma, const CMatrix& rho, int dc) {
  const CMatrix g = tensor(gamma, identity(dc));
  return g * rho * g.adjoint();
}

void read_blocks(KIDecomposition& dec, const CMatrix& frame, int dc) {
  for (std::size_t j = 0; j < dec.blocks.size(); ++j) {
    auto& b = dec.blocks[j];
    const int n = b.dim_l * b.dim_r * dc;
    std::vector<int> idx;
    idx.reserve(n);
    for (int alpha = 0; alpha < b.dim_l; ++alpha) {
      for (int r = 0; r < b.dim_r; ++r) {
        for (int c = 0; c < dc; ++c) idx.push_back(((static_cast<int>(j) * dec.d_al + alpha) * dec.d_ar + r) * dc + c);
      }
    }
    CMatrix x(n, n);
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) x(u, v) = frame(idx[u], idx[v]);
    }
    b.p = x.trace().real();
    const int dims[2] = {b.dim_l, b.dim_r * dc};
    b.omega = partial_trace(x, dims, {true, false}) / b.p;
    b.phi = partial_trace(x, dims, {false, true}) / b.p;
  }
}

Attempt assemble(const Ordered& o, const CMatrix& w, std::vector<CentralBlock> blocks) {
  const CMatrix psi_a = partial_trace(o.rho, std::array<int, 2>{o.da, o.dc}, {true, false});
  std::vector<double> p;
  for (const auto& b : blocks) p.push_back((w * b.projector() * w.adjoint() * psi_a).trace().real());
  std::vector<std::size_t> order(blocks.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (std::abs(p[x] - p[y]) > 1e-9) return p[x] > p[y];
    if (blocks[x].rank() != blocks[y].rank()) return blocks[x].rank() > blocks[y].rank();
    return blocks[x].units.size() > blocks[y].units.size();
  });

  Attempt out;
  auto& dec = out.dec;
  dec.a_layout = o.a_layout;
  dec.c_layout = o.c_layout;
  dec.d_a0 = static_cast<int>(blocks.size());
  for (const auto& b : blocks) {
    dec.d_al = std::max(dec.d_al, static_cast<int>(b.units.size()));
    dec.d_ar = std::max(dec.d_ar, b.rank());
  }
  CMatrix g = CMatrix::Zero(dec.d_a0 * dec.d_al * dec.d_ar, o.da);
  for (std::size_t j = 0; j < order.size(); ++j) {
    const auto& b = blocks[order[j]];
    KIBlock kb;
    kb.dim_l = static_cast<int>(b.units.size());
    kb.dim_r = b.rank();
    for (int alpha = 0; alpha < kb.dim_l; ++alpha) {
      const CMatrix vecs = w * b.units[alpha];
      for (int r = 0; r < kb.dim_r; ++r) {
        g.row((static_cast<int>(j) * dec.d_al + alpha) * dec.d_ar + r) = vecs.col(r).adjoint();
      }
    }
    dec.blocks.push_back(std::move(kb));
  }
  dec.gamma = IsometryOp{o.a_layout,
                         SystemLayout({{"a0", dec.d_a0}, {"aL", dec.d_al}, {"aR", dec.d_ar}}), g};
  const CMatrix frame = frame_of(g, o.rho, o.dc);
  read_blocks(dec, frame, o.dc);
  out.residual = trace_norm(frame - block_form(dec, o.dc));
  return out;
}

}  // namespace

KIDecomposition ki_decompose(const DensityOp& psi_ac, const Labels& a, const Labels& c,
                             std::uint64_t seed, double tol) {
  const Ordered o = order_ac(psi_ac, a, c);
  const CMatrix psi_a = partial_trace(o.rho, std::array<int, 2>{o.da, o.dc}, {true, false});
  const CMatrix w = support_basis(psi_a);
  const auto s = w.cols();
  if (s == 0) throw Error(ErrorCode::kNumerical, "marginal on A has empty support");

  if (s == 1) {
    CentralBlock only;
    only.units.push_back(CMatrix::Identity(1, 1));
    return assemble(o, w, {only}).dec;
  }

  const auto ch = channel_E(psi_ac, a, c);
  std::vector<CMatrix> restricted;
  restricted.reserve(ch.kraus.size());
  for (const auto& k : ch.kraus) restricted.push_back(w.adjoint() * k * w);
  const auto basis = commutant_basis(restricted);
  if (basis.size() <= 1) {
    CentralBlock only;
    only.units.push_back(CMatrix::Identity(s, s));
    return assemble(o, w, {only}).dec;
  }

  Rng rng(seed);
  double best = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    auto first = draw_structure(basis, rng);
    const auto second = draw_structure(basis, rng);
    if (first.empty() || second.empty() || !same_structure(first, second)) continue;
    bool aligned = true;
    for (auto& b : first) aligned = aligned && align_units(b, basis, rng);
    if (!aligned) continue;
    auto result = assemble(o, w, std::move(first));
    if (result.residual <= tol) return std::move(result.dec);
    best = std::min(best, result.residual);
  }
  throw Error(ErrorCode::kNumerical,
              "KI decomposition did not stabilize; best reconstruction residual " + std::to_string(best));
}

CMatrix ki_frame(const KIDecomposition& dec, const CMatrix& rho_ac) {
  return frame_of(dec.gamma.mat, rho_ac, dec.c_layout.total_dim());
}

namespace {

double null_dimension(const CMatrix& system, double rel_tol) {
  Eigen::JacobiSVD<CMatrix> svd(system);
  const auto& s = svd.singularValues();
  const double cutoff = std::max((s.size() ? s(0) : 0.0) * rel_tol, 1e-13);
  double null = static_cast<double>(system.cols() - s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) <= cutoff) null += 1.0;
  }
  return null;
}

// <k|_C phi |l>_C as operators on a_R
std::vector<CMatrix> steering_family(const KIBlock& b, int dc) {
  std::vector<CMatrix> ops;
  for (int k = 0; k < dc; ++k) {
    for (int l = 0; l < dc; ++l) {
      CMatrix op(b.dim_r, b.dim_r);
      for (int r = 0; r < b.dim_r; ++r) {
        for (int q = 0; q < b.dim_r; ++q) op(r, q) = b.phi(r * dc + k, q * dc + l);
      }
      ops.push_back(op);
    }
  }
  return ops;
}

}  // namespace

KIReport validate_ki(const KIDecomposition& dec, const DensityOp& psi_ac) {
  const Ordered o = order_ac(psi_ac, dec.a_layout.labels(), dec.c_layout.labels());
  KIReport rep;
  const CMatrix frame = frame_of(dec.gamma.mat, o.rho, o.dc);
  rep.reconstruction = trace_norm(frame - block_form(dec, o.dc));

  const CMatrix psi_a = partial_trace(o.rho, std::array<int, 2>{o.da, o.dc}, {true, false});
  const CMatrix w = support_basis(psi_a);
  rep.isometry = max_abs(dec.gamma.mat.adjoint() * dec.gamma.mat - w * w.adjoint());

  std::vector<std::vector<CMatrix>> families;
  for (const auto& b : dec.blocks) {
    rep.probability_sum += b.p;
    families.push_back(steering_family(b, o.dc));
    if (b.dim_r > 1) rep.irreducibility += static_cast<double>(commutant_basis(families.back()).size()) - 1.0;
  }

  for (std::size_t j = 0; j < dec.blocks.size(); ++j) {
    for (std::size_t k = j + 1; k < dec.blocks.size(); ++k) {
      const auto& bj = dec.blocks[j];
      const auto& bk = dec.blocks[k];
      // N : a_R^j -> a_R^k with p_j N phi_j,kl = p_k phi_k,kl N
      const int rj = bj.dim_r, rk = bk.dim_r;
      const auto nops = families[j].size();
      CMatrix system(static_cast<Eigen::Index>(nops) * rk * rj, rk * rj);
      for (std::size_t t = 0; t < nops; ++t) {
        system.middleRows(static_cast<Eigen::Index>(t) * rk * rj, rk * rj) =
            bj.p * tensor(identity(rk), CMatrix(families[j][t].transpose())) -
            bk.p * tensor(families[k][t], identity(rj));
      }
      rep.intertwiner += null_dimension(system, 1e-9);
    }
  }
  return rep;
}

KIDecomposition canonical_ar_basis(const KIDecomposition& dec) {
  KIDecomposition out = dec;
  const int dc = dec.c_layout.total_dim();
  for (std::size_t j = 0; j < out.blocks.size(); ++j) {
    auto& b = out.blocks[j];
    const int dims[2] = {b.dim_r, dc};
    const auto es = eigh(partial_trace(b.phi, dims, {true, false}), 1e-6);
    const CMatrix& u = es.vectors;
    const CMatrix ul = tensor(identity(b.dim_l), u);
    std::vector<int> rows;
    for (int alpha = 0; alpha < b.dim_l; ++alpha) {
      for (int r = 0; r < b.dim_r; ++r) rows.push_back((static_cast<int>(j) * dec.d_al + alpha) * dec.d_ar + r);
    }
    CMatrix old(rows.size(), dec.gamma.mat.cols());
    for (std::size_t x = 0; x < rows.size(); ++x) old.row(x) = dec.gamma.mat.row(rows[x]);
    const CMatrix fresh = ul.adjoint() * old;
    for (std::size_t x = 0; x < rows.size(); ++x) out.gamma.mat.row(rows[x]) = fresh.row(x);
    const CMatrix uc = tensor(u, identity(dc));
    b.phi = uc.adjoint() * b.phi * uc;
  }
  return out;
}

TripartiteKI ki_tripartite(const PureVec& psi, const Labels& a, const Labels& b, const Labels& c,
                           std::uint64_t seed, double tol) {
  Labels order = a;
  order.insert(order.end(), b.begin(), b.end());
  order.insert(order.end(), c.begin(), c.end());
  if (order.size() != psi.layout().size()) {
    throw Error(ErrorCode::kInvalidArgument, "A, B and C must partition the state's factors");
  }
  const PureVec po = permute(psi, order);
  const int da = po.layout().dim_of(a), db = po.layout().dim_of(b), dc = po.layout().dim_of(c);
  Labels ac = a;
  ac.insert(ac.end(), c.begin(), c.end());

  TripartiteKI out;
  out.base = canonical_ar_basis(ki_decompose(reduced_state(po, ac), a, c, seed, tol));
  const auto& dec = out.base;
  const CMatrix& g = dec.gamma.mat;

  // chi rows: (j, alpha, r); columns (b, c)
  const CMatrix psi_mat = po.vec().reshaped<Eigen::RowMajor>(da, db * dc);
  const CMatrix chi = g * psi_mat;

  std::vector<CMatrix> v_t;  // V_j^T, (s,t) x b
  for (std::size_t j = 0; j < dec.blocks.size(); ++j) {
    const auto& blk = dec.blocks[j];
    const int l = blk.dim_l, r = blk.dim_r;
    const double sp = std::sqrt(blk.p);
    CMatrix m(l * r * dc, db);
    for (int alpha = 0; alpha < l; ++alpha) {
      for (int q = 0; q < r; ++q) {
        const auto row = (static_cast<int>(j) * dec.d_al + alpha) * dec.d_ar + q;
        for (int x = 0; x < db; ++x) {
          for (int y = 0; y < dc; ++y) m((alpha * r + q) * dc + y, x) = chi(row, x * dc + y) / sp;
        }
      }
    }

    const auto ew = eigh(blk.omega, 1e-6);
    CMatrix omega_vec = CMatrix::Zero(l, l);  // [alpha, s]
    for (int s = 0; s < l; ++s) omega_vec.col(s) = std::sqrt(std::max(0.0, ew.values(s))) * ew.vectors.col(s);

    const auto ef = eigh(blk.phi, 1e-6);
    int rank = 0;
    while (rank < ef.values.size() && ef.values(rank) > 1e-14) ++rank;
    rank = std::max(rank, 1);
    CMatrix phi_mat(r * dc, rank);  // [(r,c), t]
    for (int t = 0; t < rank; ++t) phi_mat.col(t) = std::sqrt(std::max(0.0, ef.values(t))) * ef.vectors.col(t);

    CMatrix n(l * r * dc, l * rank);
    for (int alpha = 0; alpha < l; ++alpha) {
      for (int rc = 0; rc < r * dc; ++rc) {
        for (int s = 0; s < l; ++s) {
          for (int t = 0; t < rank; ++t) n(alpha * r * dc + rc, s * rank + t) = omega_vec(alpha, s) * phi_mat(rc, t);
        }
      }
    }
    v_t.push_back(pinv(n) * m);

    out.omega_vecs.push_back(omega_vec.reshaped<Eigen::RowMajor>());
    CVector pv(r * rank * dc);
    for (int q = 0; q < r; ++q) {
      for (int t = 0; t < rank; ++t) {
        for (int y = 0; y < dc; ++y) pv((q * rank + t) * dc + y) = phi_mat(q * dc + y, t);
      }
    }
    out.phi_vecs.push_back(pv);
    out.dim_bl.push_back(l);
    out.dim_br.push_back(rank);
    out.d_bl = std::max(out.d_bl, l);
    out.d_br = std::max(out.d_br, rank);
  }

  const int jn = static_cast<int>(dec.blocks.size());
  CMatrix gp = CMatrix::Zero(jn * out.d_bl * out.d_br, db);
  for (int j = 0; j < jn; ++j) {
    for (int s = 0; s < out.dim_bl[j]; ++s) {
      for (int t = 0; t < out.dim_br[j]; ++t) {
        gp.row((j * out.d_bl + s) * out.d_br + t) = v_t[j].row(s * out.dim_br[j] + t).conjugate();
      }
    }
  }
  out.gamma_prime = IsometryOp{po.layout().restricted(b),
                               SystemLayout({{"b0", jn}, {"bL", out.d_bl}, {"bR", out.d_br}}), gp};

  // (Gamma (x) Gamma' (x) I)|psi> against sum_j sqrt(p_j)|j>|j>|omega_j>|phi_j>
  const int db2 = static_cast<int>(gp.rows());
  CVector got = CVector::Zero(static_cast<Eigen::Index>(chi.rows()) * db2 * dc);
  for (Eigen::Index row = 0; row < chi.rows(); ++row) {
    const CVector flat = chi.row(row).transpose();
    const CMatrix bc = flat.reshaped<Eigen::RowMajor>(db, dc);
    const CMatrix mapped = gp * bc;
    got.segment(row * db2 * dc, db2 * dc) = mapped.reshaped<Eigen::RowMajor>();
  }
  CVector want = CVector::Zero(got.size());
  for (int j = 0; j < jn; ++j) {
    const auto& blk = dec.blocks[j];
    const int l = blk.dim_l, r = blk.dim_r, rank = out.dim_br[j];
    const double sp = std::sqrt(blk.p);
    for (int alpha = 0; alpha < l; ++alpha) {
      for (int q = 0; q < r; ++q) {
        for (int s = 0; s < l; ++s) {
          for (int t = 0; t < rank; ++t) {
            for (int y = 0; y < dc; ++y) {
              const auto arow = (j * dec.d_al + alpha) * dec.d_ar + q;
              const auto brow = (j * out.d_bl + s) * out.d_br + t;
              want((arow * db2 + brow) * dc + y) =
                  sp * out.omega_vecs[j](alpha * l + s) * out.phi_vecs[j]((q * rank + t) * dc + y);
            }
          }
        }
      }
    }
  }
  out.reconstruction = (got - want).norm();

  const CMatrix psi_b = reduced_state(po, b).mat();
  const CMatrix wb = support_basis(psi_b);
  out.isometry = max_abs(gp.adjoint() * gp - wb * wb.adjoint());
  if (out.reconstruction > std::max(tol, 1e-6) * 10 || out.isometry > 1e-6) {
    throw Error(ErrorCode::kNumerical, "tripartite KI form failed: residual " + std::to_string(out.reconstruction) +
                                           ", isometry " + std::to_string(out.isometry));
  }
  return out;
}

TripartiteKI ki_tripartite(const PureVec& psi, std::uint64_t seed) {
  const auto labels = psi.layout().labels();
  if (labels.size() != 3) throw Error(ErrorCode::kInvalidArgument, "expected exactly three factors A, B, C");
  return ki_tripartite(psi, {labels[0]}, {labels[1]}, {labels[2]}, seed);
}

std::vector<std::pair<double, CMatrix>> steered_states(const DensityOp& psi_ac, const Labels& a,
                                                       const Labels& c,
                                                       const std::vector<CMatrix>& ops) {
  const Ordered o = order_ac(psi_ac, a, c);
  std::vector<std::pair<double, CMatrix>> out;
  for (const auto& m : ops) {
    if (m.rows() != o.dc || m.cols() != o.dc) throw Error(ErrorCode::kDimensionMismatch, "operator does not act on C");
    const CMatrix mm = tensor(identity(o.da), m);
    const CMatrix x = partial_trace(mm * o.rho * mm.adjoint(), std::array<int, 2>{o.da, o.dc}, {true, false});
    const double wgt = x.trace().real();
    if (wgt > 1e-14) out.emplace_back(wgt, x / wgt);
  }
  return out;
}

}  // namespace qmarkov
