// Copyright 2026 The chanmix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Probabilistic error cancellation: quasiprobability decompositions over a
// noisy basis, exact tuple enumeration, Monte Carlo estimation, the sign
// split into two convex mixtures, and the hybrid protocol that realises a
// block of layers with mixture circuits and samples the rest.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chanmix/channels.hpp"
#include "chanmix/circuit.hpp"
#include "chanmix/kraus.hpp"

namespace chanmix {

struct NoisyBasis {
  std::vector<KrausChannel> ops;

  NoisyBasis() = default;
  explicit NoisyBasis(std::vector<KrausChannel> ops);
  std::size_t size() const noexcept { return ops.size(); }
  Index dim() const { return ops.front().dim(); }
  std::vector<std::string> labels() const;
};

/// {noise o P o ideal : P in n-qubit Paulis}.
NoisyBasis noisy_pauli_basis(const KrausChannel& noise, const Operator& ideal);
/// Same with local depolarizing noise of strength p.
NoisyBasis noisy_pauli_basis(double p, const Operator& ideal);

struct QuasiProbRep {
  std::vector<double> coeffs;
  std::vector<int> signs;     // +1 / -1; +1 for dropped coefficients
  std::vector<double> probs;  // |c| / gamma
  double gamma = 0.0;
  double residual = 0.0;      // least-squares residual of the solve

  static QuasiProbRep from_coeffs(std::vector<double> coeffs, double residual = 0.0);
  /// Indices with nonzero probability.
  std::vector<std::size_t> support() const;
};

/// Coefficients below this magnitude are treated as exactly zero.
inline constexpr double kCoeffCutoff = 1e-12;

QuasiProbRep quasiprob_decompose(const KrausChannel& target, const NoisyBasis& basis,
                                 double tol = 1e-8);

struct Layer {
  KrausChannel target;
  NoisyBasis basis;
  QuasiProbRep rep;
};

struct LayeredDecomposition {
  std::vector<Layer> layers;
  double Gamma = 1.0;
  DensityMatrix rho0;
  Operator observable;

  std::size_t num_layers() const noexcept { return layers.size(); }
  /// Number of tuples with nonzero probability over layers [begin, end).
  std::uint64_t tuple_count(std::size_t begin, std::size_t end) const;
  std::uint64_t tuple_count() const { return tuple_count(0, layers.size()); }
};

LayeredDecomposition layered_decomposition(
    const std::vector<std::pair<KrausChannel, NoisyBasis>>& layers, const DensityMatrix& rho0,
    const Operator& observable, double tol = 1e-8);

/// Tr[C(rho0) A] with C the composition of the ideal layer targets.
double ideal_value(const LayeredDecomposition& decomp);

inline constexpr std::uint64_t kEnumerationGuard = 1'000'000;
inline constexpr std::uint64_t kBlockTupleGuard = 10'000;

/// Gamma * sum over tuples of sigma p Tr[O(rho0) A], by full enumeration.
double exact_cancellation_value(const LayeredDecomposition& decomp);

struct Estimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::size_t n_samples = 0;
};

/// Mean of Gamma * sigma * Tr[O(rho0) A] over sampled tuples.
Estimate pec_estimate(const LayeredDecomposition& decomp, std::size_t n_samples,
                      std::uint64_t seed);
/// The single-sample value the estimator averages (sample index `index`).
double pec_sample(const LayeredDecomposition& decomp, std::uint64_t seed, std::uint64_t index);

/// ceil(Gamma^2 / delta^2), with round-off near integers absorbed.
std::uint64_t sample_budget(double Gamma, double delta);

struct TupleTerm {
  std::vector<std::size_t> indices;  // basis index per layer
  int sign = 1;
  double prob = 0.0;
  KrausChannel channel;              // O_{a_k} o ... o O_{a_1}, Kraus-reduced
};

struct TwoShotSplit {
  std::vector<TupleTerm> tuples;     // all supported tuples, enumeration order
  std::optional<ConvexCombination> pos_mixture;
  std::optional<ConvexCombination> neg_mixture;
  double q_plus = 0.0;
  double q_minus = 0.0;
  double Gamma = 1.0;                // negativity of the split layers
  double reconstruction_residual = 0.0;
  double trace_identity_residual = 0.0;  // |Gamma (q+ - q-) - 1|
};

/// Sign split over layers [begin, end) (whole circuit by default).
TwoShotSplit two_shot_split(const LayeredDecomposition& decomp, std::size_t begin = 0,
                            std::size_t end = static_cast<std::size_t>(-1));

/// Gamma (q+ <A>_+ - q- <A>_-) evaluated on the split's input state.
double two_shot_value(const TwoShotSplit& split, const DensityMatrix& rho, const Operator& a);

struct HybridResult {
  double estimate = 0.0;
  double stderr_ = 0.0;
  double residual_negativity = 1.0;
  int logical_qubits_used = 0;
  std::size_t n_samples = 0;
  std::vector<Circuit> circuits;
};

/// Theorem-1 style protocol: layers [block_begin, block_begin + k) are
/// realised as two mixture circuits (one per sign class), the others are
/// sampled exactly as in pec_estimate. k = 0 is plain PEC; k = L needs no
/// sampling at all.
class HybridProtocol {
 public:
  HybridProtocol(const LayeredDecomposition& decomp, std::size_t block_begin, std::size_t k);

  HybridResult run(std::size_t n_samples, std::uint64_t seed) const;
  double sample_value(std::uint64_t seed, std::uint64_t index) const;

  double residual_negativity() const noexcept { return residual_negativity_; }
  int logical_qubits_used() const noexcept;
  const std::vector<Circuit>& circuits() const noexcept { return circuits_; }
  const TwoShotSplit& split() const noexcept { return split_; }
  bool fully_absorbed() const noexcept { return k_ == decomp_.num_layers(); }

 private:
  struct BlockOutput {
    Matrix plus, minus;
  };
  const BlockOutput& block_output(const std::vector<std::size_t>& prefix, const Matrix& rho) const;

  LayeredDecomposition decomp_;
  std::size_t begin_ = 0;
  std::size_t k_ = 0;
  double residual_negativity_ = 1.0;
  TwoShotSplit split_;
  std::vector<Circuit> circuits_;  // [0] positive class, [1] negative class
  std::optional<std::size_t> pos_circuit_, neg_circuit_;
  mutable std::map<std::vector<std::size_t>, BlockOutput> cache_;
};

HybridResult hybrid_protocol(const LayeredDecomposition& decomp, std::size_t block_begin,
                             std::size_t k, std::size_t n_samples, std::uint64_t seed);

}  // namespace chanmix
