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

#include "qmarkov/protosim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "qmarkov/info.hpp"

namespace qmarkov {

long dim_cap_from_env() {
  if (const char* env = std::getenv("MARKOV_DIM_CAP")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultDimCap;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 step on the combined value
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

// Calls fn(digits) for every sequence in prod_l [0, radix[l]).
template <typename Fn>
void for_each_sequence(const std::vector<int>& radix, Fn&& fn) {
  std::vector<int> digits(radix.size(), 0);
  for (int r : radix) {
    if (r <= 0) return;
  }
  while (true) {
    fn(digits);
    int pos = static_cast<int>(radix.size()) - 1;
    while (pos >= 0 && ++digits[pos] == radix[pos]) digits[pos--] = 0;
    if (pos < 0) return;
  }
}

double ipow(double base, int e) {
  double out = 1.0;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace

std::vector<TypicalSequence> strongly_typical_set(const std::vector<double>& p, int n, double delta,
                                                  std::size_t cap) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "typical sets need n >= 1");
  if (delta <= 0.0) throw Error(ErrorCode::kInvalidArgument, "typical sets need delta > 0");
  const int k = static_cast<int>(p.size());
  if (ipow(static_cast<double>(k), n) > static_cast<double>(cap)) {
    throw Error(ErrorCode::kDimensionCap, "typical-set enumeration of " + std::to_string(k) + "^" +
                                              std::to_string(n) + " sequences exceeds the cap");
  }
  int support = 0;
  for (double x : p) support += x > 0.0 ? 1 : 0;
  const double window = delta / std::max(1, support);

  std::vector<TypicalSequence> out;
  for_each_sequence(std::vector<int>(n, k), [&](const std::vector<int>& seq) {
    std::vector<int> count(k, 0);
    for (int x : seq) ++count[x];
    for (int x = 0; x < k; ++x) {
      if (p[x] <= 0.0 && count[x] > 0) return;
      if (std::abs(static_cast<double>(count[x]) / n - p[x]) >= window) return;
    }
    double prob = 1.0;
    for (int x : seq) prob *= p[x];
    out.push_back({seq, prob});
  });
  return out;
}

bool weakly_typical(const std::vector<double>& f, const std::vector<int>& seq, double delta) {
  if (seq.empty()) return true;
  double h = 0.0;
  for (double x : f) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  double log_prob = 0.0;
  for (int x : seq) {
    if (f[x] <= 0.0) return false;
    log_prob += std::log2(f[x]);
  }
  const double m = static_cast<double>(seq.size());
  // slack keeps exactly-on-the-boundary sequences (uniform spectra) inside
  const double slack = 1e-9 * m;
  return log_prob >= -m * (h + delta) - slack && log_prob <= -m * (h - delta) + slack;
}

FrameSpectra frame_spectra(const TripartiteKI& tki) {
  FrameSpectra out;
  const int dc = tki.base.c_layout.total_dim();
  for (const auto& b : tki.base.blocks) {
    out.p.push_back(b.p);
    const int dims[2] = {b.dim_r, dc};
    const auto es = eigh(partial_trace(b.phi, dims, {true, false}), 1e-6);
    std::vector<double> f(es.values.data(), es.values.data() + es.values.size());
    for (double& x : f) x = std::max(0.0, x);
    out.f.push_back(std::move(f));
  }
  double sum = 0.0;
  for (double x : out.p) sum += x;
  for (double& x : out.p) x /= sum;
  return out;
}

namespace {

// Typical a_R sequences for a given j-sequence, as per-position indices.
std::vector<std::vector<int>> typical_ar_sequences(const FrameSpectra& s, const std::vector<int>& jseq,
                                                   double delta) {
  std::vector<int> radix;
  for (int j : jseq) radix.push_back(static_cast<int>(s.f[j].size()));
  std::vector<std::vector<int>> out;
  for_each_sequence(radix, [&](const std::vector<int>& r) {
    for (std::size_t j = 0; j < s.p.size(); ++j) {
      std::vector<int> sub;
      for (std::size_t l = 0; l < jseq.size(); ++l) {
        if (jseq[l] == static_cast<int>(j)) sub.push_back(r[l]);
      }
      if (!weakly_typical(s.f[j], sub, delta)) return;
    }
    out.push_back(r);
  });
  return out;
}

}  // namespace

double typical_mass(const FrameSpectra& spectra, const TypicalSpec& spec) {
  double mass = 0.0;
  for (const auto& ts : strongly_typical_set(spectra.p, spec.n, spec.delta)) {
    double inner = 0.0;
    for (const auto& r : typical_ar_sequences(spectra, ts.seq, spec.delta)) {
      double w = 1.0;
      for (std::size_t l = 0; l < r.size(); ++l) w *= spectra.f[ts.seq[l]][r[l]];
      inner += w;
    }
    mass += ts.prob * inner;
  }
  return mass;
}

PureVec ki_frame_vector(const TripartiteKI& tki) {
  const auto& dec = tki.base;
  const int dc = dec.c_layout.total_dim();
  const int da = dec.d_a0 * dec.d_al * dec.d_ar;
  const int db = dec.d_a0 * tki.d_bl * tki.d_br;
  CVector v = CVector::Zero(static_cast<Eigen::Index>(da) * db * dc);
  for (int j = 0; j < dec.d_a0; ++j) {
    const auto& blk = dec.blocks[j];
    const int l = blk.dim_l, rank = tki.dim_br[j];
    const double sp = std::sqrt(blk.p);
    for (int alpha = 0; alpha < l; ++alpha) {
      for (int r = 0; r < blk.dim_r; ++r) {
        for (int s = 0; s < l; ++s) {
          for (int t = 0; t < rank; ++t) {
            for (int c = 0; c < dc; ++c) {
              const int a = (j * dec.d_al + alpha) * dec.d_ar + r;
              const int b = (j * tki.d_bl + s) * tki.d_br + t;
              v((static_cast<Eigen::Index>(a) * db + b) * dc + c) =
                  sp * tki.omega_vecs[j](alpha * l + s) * tki.phi_vecs[j]((r * rank + t) * dc + c);
            }
          }
        }
      }
    }
  }
  return PureVec::normalized(SystemLayout({{"A", da}, {"B", db}, {"C", dc}}), v);
}

ProtocolState build_protocol_state(const TripartiteKI& tki, const TypicalSpec& spec, long dim_cap) {
  if (spec.n < 1) throw Error(ErrorCode::kInvalidArgument, "protocol needs n >= 1");
  if (spec.delta <= 0.0) throw Error(ErrorCode::kInvalidArgument, "protocol needs delta > 0");
  const PureVec one = ki_frame_vector(tki);
  const auto dims1 = one.layout().dims();
  const double total = ipow(static_cast<double>(one.dim()), spec.n);
  if (total > static_cast<double>(dim_cap)) {
    const double bytes = total * total * 16.0;
    throw Error(ErrorCode::kDimensionCap,
                "protocol state dimension " + std::to_string(static_cast<long long>(total)) + " exceeds cap " +
                    std::to_string(dim_cap) + " (a dense operator would need about " +
                    std::to_string(static_cast<long long>(bytes / 1048576.0)) + " MiB)");
  }

  ProtocolState st;
  st.spec = spec;
  st.spectra = frame_spectra(tki);
  st.d_a = tki.base.a_layout.total_dim();

  const int n = spec.n;
  std::vector<Factor> copies;
  std::vector<int> dims;
  CVector psi = CVector::Ones(1);
  for (int l = 0; l < n; ++l) {
    psi = tensor(psi, one.vec());
    for (int x = 0; x < 3; ++x) dims.push_back(dims1[x]);
  }
  std::vector<int> perm;
  for (int x = 0; x < 3; ++x) {
    for (int l = 0; l < n; ++l) perm.push_back(3 * l + x);
  }
  const char* names[3] = {"A", "B", "C"};
  Labels* groups[3] = {&st.a_labels, &st.b_labels, &st.c_labels};
  for (int x = 0; x < 3; ++x) {
    for (int l = 0; l < n; ++l) {
      const std::string label = names[x] + std::to_string(l + 1);
      copies.push_back({label, dims1[x]});
      groups[x]->push_back(label);
    }
  }
  st.layout = SystemLayout(copies);
  st.psi_n = permute_factors(psi, dims, perm);
  st.dim_a = static_cast<long>(std::llround(ipow(dims1[0], n)));
  st.dim_rest = static_cast<long>(st.psi_n.size()) / st.dim_a;

  const auto& dec = tki.base;
  std::vector<bool> keep(st.dim_a, false);
  for (const auto& ts : strongly_typical_set(st.spectra.p, n, spec.delta)) {
    ProtocolBlock blk;
    blk.j_seq = ts.seq;
    blk.p = ts.prob;
    const auto ar = typical_ar_sequences(st.spectra, ts.seq, spec.delta);
    blk.dim = static_cast<int>(ar.size());
    if (blk.dim == 0) continue;
    std::vector<int> lradix;
    for (int j : ts.seq) lradix.push_back(dec.blocks[j].dim_l);
    for_each_sequence(lradix, [&](const std::vector<int>& alpha) {
      std::vector<long> slot;
      for (const auto& r : ar) {
        long idx = 0;
        for (int l = 0; l < n; ++l) idx = idx * dims1[0] + (ts.seq[l] * dec.d_al + alpha[l]) * dec.d_ar + r[l];
        slot.push_back(idx);
        keep[idx] = true;
      }
      blk.slots.push_back(std::move(slot));
    });
    st.blocks.push_back(std::move(blk));
  }

  st.psi_prime = st.psi_n;
  for (long a = 0; a < st.dim_a; ++a) {
    if (!keep[a]) st.psi_prime.segment(a * st.dim_rest, st.dim_rest).setZero();
  }
  st.mass = st.psi_prime.squaredNorm();
  if (st.blocks.empty() || st.mass <= 0.0) {
    throw Error(ErrorCode::kEmptyTypicalSet, "typical set is empty for n=" + std::to_string(n) +
                                                 ", delta=" + std::to_string(spec.delta));
  }
  return st;
}

CMatrix sample_block_unitary(const ProtocolState& st, Rng& rng) {
  CMatrix v = CMatrix::Identity(st.dim_a, st.dim_a);
  for (const auto& blk : st.blocks) {
    const CMatrix u = haar_unitary(blk.dim, rng);
    for (const auto& slot : blk.slots) {
      for (int x = 0; x < blk.dim; ++x) {
        for (int y = 0; y < blk.dim; ++y) v(slot[x], slot[y]) = u(x, y);
      }
    }
  }
  return v;
}

AverageState average_markov_state(const ProtocolState& st) {
  const long dim = st.dim_a * st.dim_rest;
  CMatrix avg = CMatrix::Zero(dim, dim);
  const long e = st.dim_rest;
  for (const auto& blk : st.blocks) {
    const auto na = static_cast<long>(blk.slots.size());
    const int m = blk.dim;
    // Y_t = components (alpha-sequence, rest) for typical a_R index t
    CMatrix k = CMatrix::Zero(na * e, na * e);
    for (int t = 0; t < m; ++t) {
      CVector y(na * e);
      for (long a = 0; a < na; ++a) y.segment(a * e, e) = st.psi_prime.segment(blk.slots[a][t] * e, e);
      k += y * y.adjoint();
    }
    k /= static_cast<double>(m);
    for (int t = 0; t < m; ++t) {
      for (long a = 0; a < na; ++a) {
        for (long b = 0; b < na; ++b) {
          avg.block(blk.slots[a][t] * e, blk.slots[b][t] * e, e, e) = k.block(a * e, b * e, e, e);
        }
      }
    }
  }
  AverageState out{DensityOp::unchecked(st.layout, avg / st.mass), st.mass};
  return out;
}

long unitaries_for_rate(int n, double rate) {
  const double n_real = std::ceil(std::exp2(n * rate) - 1e-9);
  if (!(n_real < 1e9)) throw Error(ErrorCode::kDimensionCap, "rate asks for more than 1e9 unitaries");
  return std::max(1L, static_cast<long>(n_real));
}

double min_eigenvalue_bound(const FrameSpectra& spectra, int n, double delta, int d_a) {
  double h_prime = 0.0;
  double quantum = 0.0;
  for (std::size_t j = 0; j < spectra.p.size(); ++j) {
    h_prime += std::log2(spectra.p[j]);
    double s = 0.0;
    for (double x : spectra.f[j]) {
      if (x > 1e-12) s -= x * std::log2(x);
    }
    quantum += spectra.p[j] * s;
  }
  h_prime /= static_cast<double>(spectra.p.size());
  const double h = shannon(spectra.p);
  return std::exp2(-n * (h + 2.0 * quantum + delta * (h_prime + 2.0 * std::log2(4.0 * d_a))));
}

namespace {

CMatrix gram(const CMatrix& cols) { return cols * cols.adjoint(); }

}  // namespace

SimResult simulate_state(const ProtocolState& st, long n_unitaries, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::kInvalidArgument, "simulate needs at least one trial");
  if (n_unitaries < 1) throw Error(ErrorCode::kInvalidArgument, "simulate needs N >= 1");
  const auto avg = average_markov_state(st);
  const CMatrix& target = avg.state.mat();  // Psi-bar / D
  const long dim = st.dim_a * st.dim_rest;

  const CMatrix prime = st.psi_prime.reshaped<Eigen::RowMajor>(st.dim_a, st.dim_rest);
  const CMatrix full = st.psi_n.reshaped<Eigen::RowMajor>(st.dim_a, st.dim_rest);

  SimResult res;
  res.n = st.spec.n;
  res.delta = st.spec.delta;
  res.n_unitaries = n_unitaries;
  res.mass = st.mass;
  res.seed = seed;
  res.trials = trials;
  res.gentle = 2.0 * std::sqrt(std::max(0.0, 1.0 - st.mass));

  constexpr long kChunk = 256;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(trial_seed(seed, static_cast<std::uint64_t>(trial)));
    CMatrix sum_prime = CMatrix::Zero(dim, dim);
    CMatrix sum_full = CMatrix::Zero(dim, dim);
    for (long start = 0; start < n_unitaries; start += kChunk) {
      const long count = std::min(kChunk, n_unitaries - start);
      CMatrix xp(dim, count), xf(dim, count);
      for (long i = 0; i < count; ++i) {
        const CMatrix v = sample_block_unitary(st, rng);
        const CMatrix yp = v * prime;
        const CMatrix yf = v * full;
        xp.col(i) = yp.reshaped<Eigen::RowMajor>();
        xf.col(i) = yf.reshaped<Eigen::RowMajor>();
      }
      sum_prime += gram(xp);
      sum_full += gram(xf);
    }
    const double inv_n = 1.0 / static_cast<double>(n_unitaries);
    res.err_to_average += trace_norm(sum_prime * (inv_n / st.mass) - target);
    res.err_full += trace_norm(sum_full * inv_n - target);
  }
  res.err_to_average /= trials;
  res.err_full /= trials;

  const auto es = eigh(target * st.mass, 1e-6);
  res.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (double x : es.values) {
    if (x > 1e-12) res.min_eigenvalue = std::min(res.min_eigenvalue, x);
  }
  res.min_eigenvalue_bound = min_eigenvalue_bound(st.spectra, st.spec.n, st.spec.delta, st.d_a);

  const double eps1 = std::min(1.0, st.mass * res.err_to_average / 2.0);
  if (eps1 > 0.0) {
    const double log_dim = 3.0 * st.spec.n * std::log(static_cast<double>(st.d_a));
    res.chernoff_n = std::ceil(2.0 * (std::log(2.0) + log_dim) / (res.min_eigenvalue * eps1 * eps1));
  } else {
    res.chernoff_n = std::numeric_limits<double>::infinity();
  }
  return res;
}

SimResult simulate(const PureVec& psi, int n, double delta, double rate, int trials, std::uint64_t seed,
                   long dim_cap) {
  const auto tki = ki_tripartite(psi);
  const auto st = build_protocol_state(tki, {n, delta}, dim_cap);
  auto res = simulate_state(st, unitaries_for_rate(n, rate), trials, seed);
  res.rate = rate;
  return res;
}

}  // namespace qmarkov
