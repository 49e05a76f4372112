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

#include "qmarkov/markov.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "qmarkov/channel.hpp"
#include "qmarkov/info.hpp"

namespace qmarkov {

namespace {

Labels join(const Labels& x, const Labels& y) {
  Labels out = x;
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

}  // namespace

double markov_cost_formula(const TripartiteKI& tki) {
  std::vector<double> p;
  double quantum = 0.0;
  const int dc = tki.base.c_layout.total_dim();
  for (const auto& b : tki.base.blocks) {
    p.push_back(b.p);
    const int dims[2] = {b.dim_r, dc};
    quantum += b.p * vn_entropy(partial_trace(b.phi, dims, {true, false}));
  }
  // block weights come out of a numerical trace; renormalize the tiny drift
  double sum = 0.0;
  for (double x : p) sum += x;
  for (double& x : p) x /= sum;
  return shannon(p) + 2.0 * quantum;
}

double markov_cost_formula(const PureVec& psi, const Parties& parties, std::uint64_t seed) {
  return markov_cost_formula(ki_tripartite(psi, parties.a, parties.b, parties.c, seed));
}

AlgorithmResult markov_cost_algorithm_detail(const PureVec& psi, const Parties& parties,
                                             double herm_tol, double eig_tol) {
  const auto psi_ac = reduced_state(psi, join(parties.a, parties.c));
  const auto t = transfer_matrices(psi_ac, parties.a, parties.c);
  AlgorithmResult out;
  out.hermiticity = hermiticity_residual(t.lambda);
  if (out.hermiticity > herm_tol) return out;

  const CMatrix lam_inf = ergodic_projector(t.lambda, eig_tol);
  out.fixed_rank = static_cast<int>(std::lround(lam_inf.trace().real()));
  const CMatrix tilde = lam_inf * t.lambda1;
  const auto d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(tilde.rows()))));
  // Omega[(k,m),(l,n)] = tilde[kl, mn]
  CMatrix omega(d * d, d * d);
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) omega(k * d + m, l * d + n) = tilde(k * d + l, m * d + n);
      }
    }
  }
  out.omega_spectrum = eigh(0.5 * (omega + omega.adjoint()), 1e-6).values;
  out.value = spectrum_entropy(out.omega_spectrum);
  return out;
}

std::optional<double> markov_cost_algorithm(const PureVec& psi, const Parties& parties) {
  return markov_cost_algorithm_detail(psi, parties).value;
}

bool is_markov_state(const DensityOp& rho, const Parties& parties, double tol) {
  return qcmi(rho, parties.a, parties.b, parties.c) <= tol;
}

MarkovDecomposition markov_decomposition(const DensityOp& ups, const Parties& parties, double tol,
                                         std::uint64_t seed) {
  const double cmi = qcmi(ups, parties.a, parties.b, parties.c);
  if (cmi > tol) {
    throw Error(ErrorCode::kNotMarkov, "state is not Markov: I(A:C|B) = " + std::to_string(cmi));
  }
  const auto ordered = permute(ups, join(join(parties.a, parties.b), parties.c));
  const int da = ordered.layout().dim_of(parties.a);
  const int db = ordered.layout().dim_of(parties.b);
  const int dc = ordered.layout().dim_of(parties.c);
  const auto dec = ki_decompose(partial_trace(ordered, join(parties.b, parties.c)), parties.b, parties.c, seed);

  MarkovDecomposition out;
  out.gamma_b = dec.gamma;
  const CMatrix& g = dec.gamma.mat;
  const auto db2 = static_cast<int>(g.rows());
  const CMatrix full = tensor(tensor(identity(da), g), identity(dc));
  const CMatrix frame = full * ordered.mat() * full.adjoint();

  CMatrix rebuilt = CMatrix::Zero(frame.rows(), frame.cols());
  for (std::size_t i = 0; i < dec.blocks.size(); ++i) {
    const auto& blk = dec.blocks[i];
    std::vector<int> idx;
    for (int x = 0; x < da; ++x) {
      for (int beta = 0; beta < blk.dim_l; ++beta) {
        for (int r = 0; r < blk.dim_r; ++r) {
          for (int y = 0; y < dc; ++y) {
            const int brow = (static_cast<int>(i) * dec.d_al + beta) * dec.d_ar + r;
            idx.push_back((x * db2 + brow) * dc + y);
          }
        }
      }
    }
    const auto n = static_cast<Eigen::Index>(idx.size());
    CMatrix x(n, n);
    for (Eigen::Index u = 0; u < n; ++u) {
      for (Eigen::Index v = 0; v < n; ++v) x(u, v) = frame(idx[u], idx[v]);
    }
    MarkovTerm term;
    term.q = x.trace().real();
    term.dim_l = blk.dim_l;
    term.dim_r = blk.dim_r;
    const int dims[2] = {da * blk.dim_l, blk.dim_r * dc};
    term.sigma = partial_trace(x, dims, {true, false}) / term.q;
    term.phi = partial_trace(x, dims, {false, true}) / term.q;
    const CMatrix piece = term.q * tensor(term.sigma, term.phi);
    for (Eigen::Index u = 0; u < n; ++u) {
      for (Eigen::Index v = 0; v < n; ++v) rebuilt(idx[u], idx[v]) = piece(u, v);
    }
    out.terms.push_back(std::move(term));
  }
  out.residual = trace_norm(frame - rebuilt);
  (void)db;
  return out;
}

RecoveryReport recovery_check(const DensityOp& ups, const Parties& parties) {
  const Labels abc = join(join(parties.a, parties.b), parties.c);
  const auto ordered = permute(ups, abc);
  const auto ab = partial_trace(ordered, join(parties.a, parties.b));
  const auto bc = partial_trace(ordered, join(parties.b, parties.c));

  RecoveryReport rep;
  const auto r = petz_channel(bc, parties.b, parties.c);
  rep.residual_bc = trace_distance(ordered, permute(apply(r, ab), abc));
  const auto r2 = petz_channel(ab, parties.b, parties.a);
  rep.residual_ab = trace_distance(ordered, permute(apply(r2, bc), abc));
  return rep;
}

CostReport bounds_check(const PureVec& psi, const Parties& parties, std::uint64_t seed) {
  CostReport rep;
  const auto tki = ki_tripartite(psi, parties.a, parties.b, parties.c, seed);
  rep.m_formula = markov_cost_formula(tki);
  const int dc = tki.base.c_layout.total_dim();
  for (const auto& b : tki.base.blocks) {
    const int dims[2] = {b.dim_r, dc};
    rep.blocks.push_back({b.p, b.dim_l, b.dim_r, vn_entropy(partial_trace(b.phi, dims, {true, false}))});
  }
  const auto alg = markov_cost_algorithm_detail(psi, parties);
  rep.self_adjoint = alg.value.has_value();
  rep.m_algorithm = alg.value;
  const auto rho = DensityOp::from_pure(psi);
  rep.qcmi = qcmi(rho, parties.a, parties.b, parties.c);
  rep.qmi_a_bc = qmi(rho, parties.a, join(parties.b, parties.c));
  return rep;
}

bool theorem6_check(const PureVec& psi, double tol, const Parties& parties) {
  const double m = markov_cost_formula(psi, parties);
  return std::abs(m - qcmi(DensityOp::from_pure(psi), parties.a, parties.b, parties.c)) <= tol;
}

namespace {

SystemLayout abc_layout(int da, int db, int dc) { return SystemLayout({{"A", da}, {"B", db}, {"C", dc}}); }

double single_lambda(const std::vector<double>& lambda) {
  if (lambda.size() != 1) throw Error(ErrorCode::kInvalidArgument, "this family takes exactly one lambda");
  return lambda.front();
}

}  // namespace

PureVec build_example(const std::string& family, int d, const std::vector<double>& lambda) {
  if (family == "VIA") {
    if (d < 2) throw Error(ErrorCode::kInvalidArgument, "VIA needs d >= 2");
    const double lam = single_lambda(lambda);
    const double d2 = static_cast<double>(d) * d;
    if (lam < 1.0 / d2 - 1e-12 || lam > 1.0 + 1e-12) {
      throw Error(ErrorCode::kInvalidArgument, "VIA needs 1/d^2 <= lambda <= 1");
    }
    const int db = d * d + 1;
    const double a0 = std::sqrt(std::max(0.0, (d2 * lam - 1.0) / (d2 - 1.0)));
    const double a1 = std::sqrt(std::max(0.0, (1.0 - lam) / (d2 - 1.0)));
    CVector v = CVector::Zero(d * db * d);
    auto at = [&](int x, int b, int c) -> Complex& { return v((x * db + b) * d + c); };
    // B index 0 is the special |00> vector, 1 + k*d + l encodes |kl>
    for (int k = 0; k < d; ++k) at(k, 0, k) += a0 / std::sqrt(static_cast<double>(d));
    for (int k = 0; k < d; ++k) {
      for (int l = 0; l < d; ++l) at(k, 1 + k * d + l, l) += a1;
    }
    return PureVec::normalized(abc_layout(d, db, d), v);
  }
  if (family == "VIB") {
    if (d < 1) throw Error(ErrorCode::kInvalidArgument, "VIB needs d >= 1");
    const double lam = single_lambda(lambda);
    if (lam < -1e-12 || lam > 1.0 + 1e-12) throw Error(ErrorCode::kInvalidArgument, "VIB needs 0 <= lambda <= 1");
    const int dab = d + 1;
    CVector v = CVector::Zero(dab * dab * d);
    auto at = [&](int x, int b, int c) -> Complex& { return v((x * dab + b) * d + c); };
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (int k = 0; k < d; ++k) {
      at(1 + k, 0, k) += std::sqrt(std::max(0.0, lam)) * s;
      at(0, 1 + k, k) += std::sqrt(std::max(0.0, 1.0 - lam)) * s;
    }
    return PureVec::normalized(abc_layout(dab, dab, d), v);
  }
  if (family == "VIC") {
    const int n = static_cast<int>(lambda.size());
    if (n < 1 || (d != 0 && d != n)) throw Error(ErrorCode::kInvalidArgument, "VIC needs d == length of lambda");
    double sum = 0.0;
    for (double x : lambda) {
      if (x < 0.0) throw Error(ErrorCode::kInvalidArgument, "VIC weights must be non-negative");
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorCode::kInvalidArgument, "VIC weights must sum to 1");
    CVector v = CVector::Zero(n * n * n);
    for (int k = 0; k < n; ++k) v((k * n + k) * n + k) = std::sqrt(lambda[k]);
    return PureVec::normalized(abc_layout(n, n, n), v);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown example family '" + family + "'");
}

}  // namespace qmarkov
