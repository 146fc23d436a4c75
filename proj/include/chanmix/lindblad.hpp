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

// Markovian open-system evolution of the damped Rabi atom, exactly and via
// the three-channel product formula.

#include <cstdint>
#include <vector>

#include "chanmix/channels.hpp"
#include "chanmix/circuit.hpp"
#include "chanmix/kraus.hpp"

namespace chanmix {

/// d rho/dt = -i[H, rho] + sum_k rate_k (L_k rho L_k^dagger - {L_k^dagger L_k, rho}/2).
struct LindbladSpec {
  Operator hamiltonian;
  std::vector<Operator> jump_ops;
  std::vector<double> rates;

  void validate() const;
};

struct RabiParams {
  double omega0 = 1.0;
  double Omega = 0.5;
  double gamma = 0.1;
  double dt = 0.05;
  int steps = 200;

  double lambda() const noexcept { return omega0 + Omega + gamma; }
  double tau() const noexcept { return lambda() * dt; }
  void validate() const;
};

/// H = omega0 Z + Omega X, single jump sigma^- = |0><1| at rate gamma.
LindbladSpec rabi_lindblad(const RabiParams& params);

Superoperator liouvillian_superop(const LindbladSpec& spec);
DensityMatrix exact_evolve(const LindbladSpec& spec, const DensityMatrix& rho0, double t);

struct RabiChannelSet {
  std::vector<KrausChannel> channels;  // e^{-i Z tau}, e^{-i X tau}, damping(beta); zero rates dropped
  std::vector<double> probs;           // (omega0, Omega, gamma) / lambda
  double tau = 0.0;
  double beta = 0.0;

  ConvexCombination mixture() const { return ConvexCombination(channels, probs); }
};

/// beta = 1 - e^{-tau}: the damping branch is drawn with probability
/// gamma / lambda, so this is the choice whose step map agrees with
/// exp(dt L) to first order in dt.
RabiChannelSet rabi_channel_set(const RabiParams& params);

/// One stochastic trajectory: each step applies one channel drawn by probs.
DensityMatrix sampled_evolve(const RabiParams& params, const DensityMatrix& rho0,
                             std::uint64_t seed);
/// Average of `trajectories` independent trajectories (substream per index).
DensityMatrix sampled_average(const RabiParams& params, const DensityMatrix& rho0,
                              int trajectories, std::uint64_t seed);
/// Trajectory-averaged states after 0..steps steps.
std::vector<DensityMatrix> sampled_trajectory(const RabiParams& params, const DensityMatrix& rho0,
                                              int trajectories, std::uint64_t seed);

/// States after 0..steps applications of the CCC step circuit.
std::vector<DensityMatrix> ccc_trajectory(const RabiParams& params, const DensityMatrix& rho0);
DensityMatrix ccc_evolve(const RabiParams& params, const DensityMatrix& rho0);

std::vector<DensityMatrix> forking_trajectory(const RabiParams& params, const DensityMatrix& rho0,
                                              ForkingMode mode = ForkingMode::kShared);

/// Two-qubit (ancilla, system) circuit realising amplitude damping beta.
Circuit amplitude_damping_subcircuit(double beta);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace chanmix
