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

#include "chanmix/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "chanmix/error.hpp"
#include "chanmix/rng.hpp"

namespace chanmix {

void LindbladSpec::validate() const {
  const Index d = hamiltonian.rows();
  if (d == 0 || hamiltonian.cols() != d) throw DimensionError("Lindblad: H must be square");
  if (hermiticity_residual(hamiltonian) > tol::kHermitian) {
    throw DomainError("Lindblad: Hamiltonian is not Hermitian within 1e-10");
  }
  if (jump_ops.size() != rates.size()) throw DimensionError("Lindblad: one rate per jump operator");
  for (std::size_t k = 0; k < jump_ops.size(); ++k) {
    if (jump_ops[k].rows() != d || jump_ops[k].cols() != d) {
      throw DimensionError("Lindblad: jump operator dimension differs from H");
    }
    if (!(rates[k] >= 0.0)) throw DomainError("Lindblad: rates must be nonnegative");
  }
}

void RabiParams::validate() const {
  if (!(omega0 >= 0.0)) throw DomainError("omega0 must be nonnegative");
  if (!(Omega >= 0.0)) throw DomainError("omega must be nonnegative");
  if (!(gamma >= 0.0)) throw DomainError("gamma must be nonnegative");
  if (!(lambda() > 0.0)) throw DomainError("omega0 + omega + gamma must be positive");
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (steps < 0) throw DomainError("steps must be nonnegative");
}

LindbladSpec rabi_lindblad(const RabiParams& params) {
  params.validate();
  Matrix lower = Matrix::Zero(2, 2);
  lower(0, 1) = 1.0;
  return LindbladSpec{params.omega0 * pauli('Z') + params.Omega * pauli('X'), {lower},
                      {params.gamma}};
}

Superoperator liouvillian_superop(const LindbladSpec& spec) {
  spec.validate();
  const Index d = spec.hamiltonian.rows();
  const Matrix id = Matrix::Identity(d, d);
  const Complex i(0.0, 1.0);
  // vec(A X B) = (B^T (x) A) vec(X)
  Matrix l = -i * (kron(id, spec.hamiltonian) - kron(spec.hamiltonian.transpose(), id));
  for (std::size_t k = 0; k < spec.jump_ops.size(); ++k) {
    const Matrix& j = spec.jump_ops[k];
    const Matrix jj = j.adjoint() * j;
    l += spec.rates[k] *
         (kron(j.conjugate(), j) - 0.5 * kron(id, jj) - 0.5 * kron(jj.transpose(), id));
  }
  return Superoperator{std::move(l), d};
}

DensityMatrix exact_evolve(const LindbladSpec& spec, const DensityMatrix& rho0, double t) {
  if (!(t >= 0.0)) throw DomainError("exact_evolve: t must be nonnegative");
  const Superoperator gen = liouvillian_superop(spec);
  if (rho0.dim() != gen.dim) throw DimensionError("exact_evolve: state dimension mismatch");
  Matrix propagator;
  Eigen::ComplexEigenSolver<Matrix> es(gen.matrix * t);
  const Matrix& v = es.eigenvectors();
  Eigen::PartialPivLU<Matrix> lu(v);
  const double cond = operator_norm(v) * operator_norm(lu.inverse());
  if (es.info() == Eigen::Success && std::isfinite(cond) && cond < 1e8) {
    const Vector e = es.eigenvalues().array().exp();
    propagator = v * e.asDiagonal() * lu.inverse();
  } else {
    // Defective or nearly defective generator: scaling-and-squaring Pade.
    propagator = (gen.matrix * t).exp();
  }
  Matrix rho = unvec(propagator * vec(rho0.matrix()), gen.dim);
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix(rho0.dims(), std::move(rho));
}

RabiChannelSet rabi_channel_set(const RabiParams& params) {
  params.validate();
  const double lam = params.lambda();
  const double tau = params.tau();
  const Complex i(0.0, 1.0);
  Matrix uz = Matrix::Zero(2, 2);
  uz(0, 0) = std::exp(-i * tau);
  uz(1, 1) = std::exp(i * tau);
  Matrix ux(2, 2);
  ux << std::cos(tau), -i * std::sin(tau), -i * std::sin(tau), std::cos(tau);
  RabiChannelSet set;
  set.tau = tau;
  set.beta = 1.0 - std::exp(-tau);
  set.channels = {KrausChannel::unitary(uz, "rz"), KrausChannel::unitary(ux, "rx"),
                  amplitude_damping_channel(set.beta)};
  set.probs = {params.omega0 / lam, params.Omega / lam, params.gamma / lam};
  // Channels with a vanishing rate are left out of the mixture entirely.
  RabiChannelSet kept{{}, {}, set.tau, set.beta};
  for (std::size_t a = 0; a < set.channels.size(); ++a) {
    if (set.probs[a] > 0.0) {
      kept.channels.push_back(set.channels[a]);
      kept.probs.push_back(set.probs[a]);
    }
  }
  // Absorb rounding so the distribution sums to 1 to machine precision.
  double rest = 1.0;
  for (std::size_t a = 1; a < kept.probs.size(); ++a) rest -= kept.probs[a];
  kept.probs[0] = std::max(rest, 0.0);
  return kept;
}

DensityMatrix sampled_evolve(const RabiParams& params, const DensityMatrix& rho0,
                             std::uint64_t seed) {
  return sampled_average(params, rho0, 1, seed);
}

DensityMatrix sampled_average(const RabiParams& params, const DensityMatrix& rho0,
                              int trajectories, std::uint64_t seed) {
  return sampled_trajectory(params, rho0, trajectories, seed).back();
}

std::vector<DensityMatrix> sampled_trajectory(const RabiParams& params, const DensityMatrix& rho0,
                                              int trajectories, std::uint64_t seed) {
  if (trajectories < 1) throw DomainError("trajectories must be at least 1");
  if (rho0.dim() != 2) throw DimensionError("damped Rabi evolution acts on one qubit");
  const RabiChannelSet set = rabi_channel_set(params);
  const auto steps = static_cast<std::size_t>(params.steps);
  std::vector<Matrix> acc(steps + 1, Matrix::Zero(2, 2));
  for (int n = 0; n < trajectories; ++n) {
    auto gen = substream(seed, static_cast<std::uint64_t>(n));
    std::discrete_distribution<std::size_t> pick(set.probs.begin(), set.probs.end());
    Matrix rho = rho0.matrix();
    acc[0] += rho;
    for (std::size_t s = 1; s <= steps; ++s) {
      rho = apply_kraus(set.channels[pick(gen)], rho);
      acc[s] += rho;
    }
  }
  std::vector<DensityMatrix> out;
  out.reserve(steps + 1);
  for (auto& m : acc) {
    m /= static_cast<double>(trajectories);
    out.emplace_back(rho0.dims(), 0.5 * (m + m.adjoint()));
  }
  return out;
}

namespace {

std::vector<DensityMatrix> iterate_circuit(const Circuit& step, int steps,
                                           const DensityMatrix& rho0) {
  if (rho0.dim() != 2) throw DimensionError("damped Rabi evolution acts on one qubit");
  std::vector<DensityMatrix> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(rho0);
  for (int s = 0; s < steps; ++s) {
    // Fresh coefficient/environment registers each step: the previous ones
    // are traced out, i.e. measured and reset.
    const DensityMatrix full = simulate_circuit(step, initial_state(step.layout(), out.back()));
    const Matrix m = system_marginal(step.layout(), full).matrix();
    out.emplace_back(rho0.dims(), 0.5 * (m + m.adjoint()));
  }
  return out;
}

}  // namespace

std::vector<DensityMatrix> ccc_trajectory(const RabiParams& params, const DensityMatrix& rho0) {
  const RabiChannelSet set = rabi_channel_set(params);
  return iterate_circuit(build_ccc_circuit(set.mixture(), 1), params.steps, rho0);
}

DensityMatrix ccc_evolve(const RabiParams& params, const DensityMatrix& rho0) {
  return ccc_trajectory(params, rho0).back();
}

std::vector<DensityMatrix> forking_trajectory(const RabiParams& params, const DensityMatrix& rho0,
                                              ForkingMode mode) {
  const RabiChannelSet set = rabi_channel_set(params);
  return iterate_circuit(build_forking_circuit(set.mixture(), 1, mode), params.steps, rho0);
}

Circuit amplitude_damping_subcircuit(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw DomainError("amplitude_damping_subcircuit: beta must lie in [0, 1]");
  }
  RegisterLayout layout;
  layout.env_qubits = 1;
  layout.sys_qubits = 1;
  Circuit c(layout);
  const int anc = layout.env_begin();
  const int sys = layout.sys_begin();
  // Ry(theta) has half-angle entries, so damping beta needs theta = 2 asin(sqrt(beta)).
  const double theta = 2.0 * std::asin(std::sqrt(beta));
  Matrix ry(2, 2);
  ry << std::cos(theta / 2), -std::sin(theta / 2), std::sin(theta / 2), std::cos(theta / 2);
  c.add_unitary("ry", ry, {anc}, {sys}, 1);
  c.add_cx(anc, sys);
  return c;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("trace_distance: dimensions differ");
  const Matrix diff = a.matrix() - b.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace chanmix
