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

#include <string>
#include <vector>

#include "chanmix/kraus.hpp"
#include "chanmix/qops.hpp"

namespace chanmix {

/// E(rho) as a state. The channel must map rho to a valid density matrix.
DensityMatrix apply_channel(const KrausChannel& channel, const DensityMatrix& rho);

/// outer o inner: Kraus set {K_out K_in}, weights multiplied.
KrausChannel compose_channels(const KrausChannel& outer, const KrausChannel& inner);

/// Minimal Kraus form from the Choi eigendecomposition. Negative Choi
/// eigenvalues become negative weights, so signed maps survive the round trip.
KrausChannel canonical_kraus(const KrausChannel& channel, double cutoff = 1e-12);

/// rho -> sum_a p_a E_a(rho). Zero-probability components are kept.
class ConvexCombination {
 public:
  ConvexCombination(std::vector<KrausChannel> channels, std::vector<double> probs);

  const std::vector<KrausChannel>& channels() const noexcept { return channels_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return channels_.size(); }
  Index dim() const noexcept { return channels_.front().dim(); }
  /// Largest Kraus count among the components.
  std::size_t max_kraus() const;

 private:
  std::vector<KrausChannel> channels_;
  std::vector<double> probs_;
};

/// Analytic mixture with Kraus set {sqrt(p_a) K_{j,a}}; components must be CPTP.
KrausChannel convex_combination(const ConvexCombination& cc);

/// Unitary on env (x) sys, environment-major: row/col index = i * d + a.
struct DilatedUnitary {
  Operator unitary;
  Index env_dim = 1;
  Index sys_dim = 1;
};

/// Stinespring dilation of a CPTP channel. The Kraus list is zero-padded to
/// env_dim = 2^ceil(log2 M); column block 0 is the stacked Kraus isometry and
/// the remaining columns are a Householder completion. A larger power-of-two
/// `env_dim` may be requested; the extra environment qubits are then idle.
DilatedUnitary stinespring_dilation(const KrausChannel& channel, Index env_dim = 0);

KrausChannel depolarizing_channel(double p, int n_qubits);
KrausChannel amplitude_damping_channel(double beta);

/// Noisy controlled gate on C (x) S under the logical-control noise model:
/// the controlled ideal gate (ideal_unitary on |value>, identity elsewhere)
/// followed by the noise part K_a U^dagger on S regardless of the control.
KrausChannel controlled_extension(const KrausChannel& channel, int control_dim, int control_value,
                                  const Operator& ideal_unitary);

}  // namespace chanmix
