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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qmarkov/kidec.hpp"
#include "qmarkov/qmat.hpp"

namespace qmarkov {

inline constexpr long kDefaultDimCap = 4096;

/// Cap on the total state dimension; MARKOV_DIM_CAP overrides the default.
long dim_cap_from_env();

struct TypicalSpec {
  int n = 1;
  double delta = 1.0;
};

struct TypicalSequence {
  std::vector<int> seq;
  double prob = 0.0;
};

/// Strongly typical sequences: |N(x)/n - p_x| < delta/|support| for every
/// x, and symbols of zero probability never occur.
std::vector<TypicalSequence> strongly_typical_set(const std::vector<double>& p, int n, double delta,
                                                  std::size_t cap = std::size_t{1} << 22);

/// 2^{-m(H+delta)} <= prod f_{seq} <= 2^{-m(H-delta)}; the empty sequence passes.
bool weakly_typical(const std::vector<double>& f, const std::vector<int>& seq, double delta);

/// Per-copy data of the KI frame: block weights and the a_R spectra.
struct FrameSpectra {
  std::vector<double> p;
  std::vector<std::vector<double>> f;  ///< eigenvalues of phi_j^{a_R}, descending
};
FrameSpectra frame_spectra(const TripartiteKI& tki);

/// Tr[Pi_delta Psi_KI^{(x)n}] by enumeration; needs no state vectors.
double typical_mass(const FrameSpectra& spectra, const TypicalSpec& spec);

/// One typical j-sequence: every a_R-typical index list, one per a_L sequence.
struct ProtocolBlock {
  std::vector<int> j_seq;
  double p = 0.0;
  int dim = 0;                             ///< rank of the a_R typical projector
  std::vector<std::vector<long>> slots;    ///< [a_L sequence][typical a_R sequence] -> A^n index
};

struct ProtocolState {
  TypicalSpec spec;
  SystemLayout layout;  ///< A1..An B1..Bn C1..Cn (KI frame factors)
  Labels a_labels, b_labels, c_labels;
  long dim_a = 1;
  long dim_rest = 1;
  CVector psi_n;      ///< Psi_KI^{(x)n}
  CVector psi_prime;  ///< Pi_delta Psi_KI^{(x)n}, unnormalized
  double mass = 0.0;  ///< D = <Psi'|Psi'>
  std::vector<ProtocolBlock> blocks;
  FrameSpectra spectra;
  int d_a = 1;  ///< original A dimension
};

/// Single-copy KI-frame vector on (a0 aL aR) (x) (b0 bL bR) (x) C.
PureVec ki_frame_vector(const TripartiteKI& tki);

ProtocolState build_protocol_state(const TripartiteKI& tki, const TypicalSpec& spec,
                                   long dim_cap = kDefaultDimCap);

/// Block-Haar unitary on A^n: identity off the typical subspace.
CMatrix sample_block_unitary(const ProtocolState& st, Rng& rng);

/// Psi-bar = mass * state, with state a unit-trace operator.
struct AverageState {
  DensityOp state;
  double mass = 0.0;
};
AverageState average_markov_state(const ProtocolState& st);

struct SimResult {
  int n = 0;
  double delta = 0.0;
  double rate = 0.0;
  long n_unitaries = 0;
  double err_to_average = 0.0;  ///< || avg_i Psi'(V_i) - Psi-bar ||_1 / D
  double err_full = 0.0;        ///< || avg_i V_i Psi^{(x)n} V_i^dagger - Psi-bar / D ||_1
  double mass = 0.0;
  double gentle = 0.0;          ///< || Psi^{(x)n} - Psi' Psi'^dagger / D ||_1
  double min_eigenvalue = 0.0;  ///< smallest nonzero eigenvalue of Psi-bar
  double min_eigenvalue_bound = 0.0;
  double chernoff_n = 0.0;
  std::uint64_t seed = 0;
  int trials = 0;
};

/// N = ceil(2^{n rate}).
long unitaries_for_rate(int n, double rate);

/// 2^{-n[H + 2 sum p S + delta (H' + 2 log(4 d_A))]} with H' = mean_j log p_j.
double min_eigenvalue_bound(const FrameSpectra& spectra, int n, double delta, int d_a);

/// Runs `trials` independent draws of N unitaries on a prepared state.
SimResult simulate_state(const ProtocolState& st, long n_unitaries, int trials, std::uint64_t seed);

SimResult simulate(const PureVec& psi, int n, double delta, double rate, int trials, std::uint64_t seed,
                   long dim_cap = kDefaultDimCap);

/// Seed of trial `index` derived from the run seed.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace qmarkov
