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

#include <gtest/gtest.h>

#include <random>

#include "chanmix/channels.hpp"
#include "chanmix/circuit.hpp"
#include "chanmix/error.hpp"
#include "chanmix/lindblad.hpp"
#include "oracles.hpp"

namespace chanmix {
namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

struct RandomSet {
  std::vector<std::vector<Matrix>> kraus;
  std::vector<double> probs;
  ConvexCombination cc;
};

RandomSet random_set(int n_sys, int n_channels, std::mt19937_64& gen) {
  const Index d = Index{1} << n_sys;
  std::vector<std::vector<Matrix>> lists;
  std::vector<KrausChannel> chans;
  std::uniform_int_distribution<int> m_dist(1, 4);
  for (int a = 0; a < n_channels; ++a) {
    lists.push_back(oracle::random_kraus(d, m_dist(gen), gen));
    chans.emplace_back(lists.back());
  }
  auto p = oracle::random_probs(static_cast<std::size_t>(n_channels), gen);
  return {lists, p, ConvexCombination(chans, p)};
}

Matrix analytic_mixture(const RandomSet& set, const Matrix& rho) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (std::size_t a = 0; a < set.probs.size(); ++a) {
    out += set.probs[a] * oracle::kraus_sum(set.kraus[a], rho);
  }
  return out;
}

Matrix run_marginal(const Circuit& c, const Matrix& rho) {
  const int n = c.layout().sys_qubits;
  const DensityMatrix in(DensityMatrix::qubit_dims(n), rho);
  return system_marginal(c.layout(), simulate_circuit(c, initial_state(c.layout(), in))).matrix();
}

TEST(PrepUnitary, FirstColumnIsSquareRootOfProbabilities) {
  EXPECT_LE(max_abs(prep_unitary({1.0}) - Matrix::Identity(1, 1)), 0.0);
  const Matrix v = prep_unitary({0.25, 0.25, 0.25, 0.25});
  EXPECT_LE(max_abs(v.col(0) - Vector::Constant(4, 0.5)), 1e-15);
  EXPECT_LE(unitarity_residual(v), 1e-13);
  const Matrix r = prep_unitary({1.0 / 1.6, 0.5 / 1.6, 0.1 / 1.6});
  ASSERT_EQ(r.rows(), 4);
  EXPECT_NEAR(r(0, 0).real(), std::sqrt(1.0 / 1.6), 1e-15);
  EXPECT_NEAR(r(1, 0).real(), std::sqrt(0.5 / 1.6), 1e-15);
  EXPECT_NEAR(r(2, 0).real(), std::sqrt(0.1 / 1.6), 1e-15);
  EXPECT_EQ(r(3, 0), Complex(0.0));
  EXPECT_THROW(prep_unitary({0.5, 0.6}), DomainError);
}

TEST(Simulator, EmptyCircuitIsIdentity) {
  std::mt19937_64 gen(201);
  const Circuit c(RegisterLayout{0, 0, 2});
  const DensityMatrix rho({2, 2}, oracle::random_density(4, gen));
  EXPECT_LE(max_abs(simulate_circuit(c, rho).matrix() - rho.matrix()), 0.0);
}

TEST(Simulator, ControlledGateActsOnlyOnControlValue) {
  Circuit c(RegisterLayout{0, 0, 3});
  // Apply X to qubit 2 when (q0, q1) = (1, 0).
  c.add_unitary("x", pauli('X'), {2}, {0, 1}, 0b10);
  const Matrix u = circuit_unitary(c);
  for (Index b = 0; b < 8; ++b) {
    const Index expected = (b >> 1) == 0b10 ? (b ^ 1) : b;
    EXPECT_EQ(u(expected, b), Complex(1.0)) << b;
  }
}

TEST(Simulator, ChannelAndResetItems) {
  Circuit c(RegisterLayout{0, 0, 2});
  c.add_unitary("x", pauli('X'), {0});
  c.add_unitary("x", pauli('X'), {1});
  c.add_channel(amplitude_damping_channel(0.3), {1}, {0}, 1);
  c.add_reset(0);
  const DensityMatrix out = simulate_circuit(c, DensityMatrix::basis_state({2, 2}, 0));
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = 0.3;
  expected(1, 1) = 0.7;
  EXPECT_LE(max_abs(out.matrix() - expected), 1e-15);
}

TEST(Simulator, ControlledChannelMatchesControlledExtensionWithIdentityGate) {
  std::mt19937_64 gen(203);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ks = oracle::random_kraus(2, 3, gen);
    Circuit c(RegisterLayout{0, 0, 2});
    c.add_channel(KrausChannel(ks), {1}, {0}, 1);
    const Matrix rho = oracle::random_density(4, gen);
    // Control |1> block: channel; |0> block and coherences: identity / Kraus-0 only.
    Matrix expected = Matrix::Zero(4, 4);
    Matrix a0 = Matrix::Zero(4, 4);
    a0.block(0, 0, 2, 2) = Matrix::Identity(2, 2);
    a0.block(2, 2, 2, 2) = ks[0];
    expected += a0 * rho * a0.adjoint();
    for (std::size_t i = 1; i < ks.size(); ++i) {
      Matrix ai = Matrix::Zero(4, 4);
      ai.block(2, 2, 2, 2) = ks[i];
      expected += ai * rho * ai.adjoint();
    }
    const DensityMatrix out = simulate_circuit(c, DensityMatrix({2, 2}, rho));
    EXPECT_LE(max_abs(out.matrix() - expected), 1e-13);
  }
}

TEST(Circuit, RejectsMalformedItems) {
  Circuit c(RegisterLayout{0, 0, 2});
  EXPECT_THROW(c.add_unitary("x", pauli('X'), {2}), DimensionError);
  EXPECT_THROW(c.add_unitary("x", pauli('X'), {0}, {0}), DomainError);
  EXPECT_THROW(c.add_unitary("x", 2.0 * pauli('X'), {0}), DomainError);
  EXPECT_THROW(c.add_unitary("x", pauli('X'), {0}, {1}, 2), DomainError);
  EXPECT_THROW(c.add_unitary("x", pauli('X'), {0, 1}), DimensionError);
  EXPECT_THROW(c.add_reset(5), DimensionError);
  EXPECT_THROW(Circuit(RegisterLayout{4, 4, 5}), DimensionError);
}

TEST(AmplitudeDampingSubcircuit, ReproducesDampingChannel) {
  for (double beta : {0.0, 0.1, 0.36, 0.9, 1.0}) {
    const Circuit c = amplitude_damping_subcircuit(beta);
    ASSERT_EQ(c.num_qubits(), 2);
    for (int s = 0; s < 2; ++s) {
      const DensityMatrix in = DensityMatrix::basis_state({2, 2}, static_cast<Index>(s));
      const DensityMatrix out = simulate_circuit(c, in);
      const Matrix sys = partial_trace(out, std::vector<int>{1}).matrix();
      const Matrix expected =
          apply_kraus(amplitude_damping_channel(beta), DensityMatrix::basis_state({2}, s).matrix());
      EXPECT_LE(max_abs(sys - expected), 1e-12) << beta;
    }
    // Coherences too: compare the full channel on |+>.
    Vector plus = Vector::Constant(2, 1.0 / std::sqrt(2.0));
    const DensityMatrix in = tensor_product(DensityMatrix::basis_state({2}, 0),
                                            DensityMatrix::pure({2}, plus));
    const Matrix sys = partial_trace(simulate_circuit(c, in), std::vector<int>{1}).matrix();
    EXPECT_LE(max_abs(sys - apply_kraus(amplitude_damping_channel(beta), plus * plus.adjoint())),
              1e-12);
  }
}

TEST(CccCircuit, ElementaryExamples) {
  std::mt19937_64 gen(211);
  const Matrix rho = oracle::random_density(2, gen);
  const Circuit single = build_ccc_circuit(ConvexCombination({KrausChannel::identity(2)}, {1.0}), 1);
  EXPECT_LE(max_abs(run_marginal(single, rho) - rho), 1e-14);

  const ConvexCombination ix({KrausChannel::identity(2), KrausChannel::unitary(pauli('X'))},
                             {0.5, 0.5});
  const Matrix zero = DensityMatrix::basis_state({2}, 0).matrix();
  EXPECT_LE(max_abs(run_marginal(build_ccc_circuit(ix, 1), zero) - Matrix::Identity(2, 2) / 2.0),
            1e-14);
}

TEST(CccCircuit, RabiSetUsesFourQubits) {
  const RabiChannelSet set = rabi_channel_set(RabiParams{});
  const Circuit c = build_ccc_circuit(set.mixture(), 1);
  EXPECT_EQ(c.layout().coeff_qubits, 2);
  EXPECT_EQ(c.layout().env_qubits, 1);
  EXPECT_EQ(c.layout().sys_qubits, 1);
  EXPECT_EQ(c.num_qubits(), 4);
  std::mt19937_64 gen(223);
  const Matrix rho = oracle::random_density(2, gen);
  Matrix expected = Matrix::Zero(2, 2);
  for (std::size_t a = 0; a < 3; ++a) {
    expected += set.probs[a] * channel_to_superoperator(set.channels[a]).apply(rho);
  }
  EXPECT_LE(max_abs(run_marginal(c, rho) - expected), 1e-12);
}

TEST(CccCircuit, MarginalEqualsAnalyticMixture) {
  std::mt19937_64 gen(227);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 2;
    const int big_n = 2 + trial % 3;
    const RandomSet set = random_set(n, big_n, gen);
    for (CccMode mode : {CccMode::kDilated, CccMode::kChannel}) {
      const Circuit c = build_ccc_circuit(set.cc, n, mode);
      EXPECT_EQ(c.num_qubits(), n + ceil_log2(big_n) +
                                    (mode == CccMode::kDilated
                                         ? ceil_log2(static_cast<Index>(set.cc.max_kraus()))
                                         : 0));
      const Matrix rho = oracle::random_density(Index{1} << n, gen);
      EXPECT_LE(oracle::trace_norm_distance(run_marginal(c, rho), analytic_mixture(set, rho)),
                1e-10);
    }
  }
}

TEST(CccCircuit, FullStateMatchesPurification) {
  std::mt19937_64 gen(229);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + trial % 2;
    const RandomSet set = random_set(n, 3, gen);
    const Circuit c = build_ccc_circuit(set.cc, n);
    const Index d = Index{1} << n;
    const Vector psi = oracle::random_pure(d, gen);
    const DensityMatrix in = initial_state(c.layout(), DensityMatrix::pure(
                                                           DensityMatrix::qubit_dims(n), psi));
    const Matrix out = simulate_circuit(c, in).matrix();
    const Vector target = oracle::mixture_purification(
        set.probs, set.kraus, psi, Index{1} << c.layout().coeff_qubits,
        Index{1} << c.layout().env_qubits);
    const double overlap = (target.adjoint() * out * target)(0, 0).real();
    EXPECT_NEAR(overlap, 1.0, 1e-10);
  }
}

TEST(CccCircuit, HasNoPostSelection) {
  std::mt19937_64 gen(233);
  const RandomSet set = random_set(1, 3, gen);
  const Circuit c = build_ccc_circuit(set.cc, 1);
  for (const CircuitItem& item : c.items()) {
    EXPECT_EQ(item.kind, ItemKind::kUnitary);
  }
}

TEST(ForkingCircuit, SingleChannelIsDirectApplication) {
  std::mt19937_64 gen(239);
  const auto ks = oracle::random_kraus(2, 2, gen);
  const Circuit c = build_forking_circuit(ConvexCombination({KrausChannel(ks)}, {1.0}), 1);
  EXPECT_EQ(c.layout().coeff_qubits, 0);
  const Matrix rho = oracle::random_density(2, gen);
  EXPECT_LE(max_abs(run_marginal(c, rho) - oracle::kraus_sum(ks, rho)), 1e-13);
}

TEST(ForkingCircuit, RabiLayouts) {
  const RabiChannelSet set = rabi_channel_set(RabiParams{});
  const Circuit shared = build_forking_circuit(set.mixture(), 1, ForkingMode::kShared);
  const Circuit unshared = build_forking_circuit(set.mixture(), 1, ForkingMode::kUnshared);
  EXPECT_EQ(shared.num_qubits(), 7);
  EXPECT_EQ(unshared.num_qubits(), 8);
  const Matrix rho = DensityMatrix::basis_state({2}, 1).matrix();
  const Matrix ccc = run_marginal(build_ccc_circuit(set.mixture(), 1), rho);
  EXPECT_LE(max_abs(run_marginal(shared, rho) - ccc), 1e-10);
  EXPECT_LE(max_abs(run_marginal(unshared, rho) - ccc), 1e-10);
}

TEST(ForkingCircuit, AgreesWithCccOnRandomSets) {
  std::mt19937_64 gen(241);
  for (int trial = 0; trial < 20; ++trial) {
    const int big_n = 2 + trial % 2;
    const RandomSet set = random_set(1, big_n, gen);
    const Matrix rho = oracle::random_density(2, gen);
    const Matrix ccc = run_marginal(build_ccc_circuit(set.cc, 1), rho);
    for (ForkingMode mode : {ForkingMode::kShared, ForkingMode::kUnshared}) {
      const Circuit f = build_forking_circuit(set.cc, 1, mode);
      EXPECT_LE(max_abs(run_marginal(f, rho) - ccc), 1e-10);
    }
  }
}

TEST(ForkingCircuit, HalfIdentityHalfX) {
  const ConvexCombination ix({KrausChannel::identity(2), KrausChannel::unitary(pauli('X'))},
                             {0.5, 0.5});
  const Matrix zero = DensityMatrix::basis_state({2}, 0).matrix();
  EXPECT_LE(max_abs(run_marginal(build_forking_circuit(ix, 1), zero) - Matrix::Identity(2, 2) / 2.0),
            1e-14);
}

}  // namespace
}  // namespace chanmix
