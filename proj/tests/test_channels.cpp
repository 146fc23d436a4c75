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
#include "chanmix/error.hpp"
#include "chanmix/kraus.hpp"
#include "chanmix/qops.hpp"
#include "oracles.hpp"

namespace chanmix {
namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

TEST(ApplyChannel, MatchesKrausSumAndPreservesTrace) {
  std::mt19937_64 gen(101);
  for (int trial = 0; trial < 30; ++trial) {
    const auto ks = oracle::random_kraus(4, 1 + trial % 4, gen);
    const DensityMatrix rho({2, 2}, oracle::random_density(4, gen));
    const DensityMatrix out = apply_channel(KrausChannel(ks), rho);
    EXPECT_LE(max_abs(out.matrix() - oracle::kraus_sum(ks, rho.matrix())), 1e-13);
    EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-12);
    EXPECT_TRUE(out.is_physical());
  }
}

TEST(ApplyChannel, RejectsDimensionMismatch) {
  EXPECT_THROW(apply_channel(KrausChannel::identity(2), DensityMatrix::maximally_mixed({2, 2})),
               DimensionError);
}

TEST(ApplyChannel, SignedMapOutputMustBeAState) {
  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  const KrausChannel diff({p0, p1}, std::vector<double>{1.0, -1.0});
  EXPECT_TRUE(diff.has_negative_weights());
  EXPECT_NO_THROW(apply_channel(diff, DensityMatrix::basis_state({2}, 0)));
  EXPECT_THROW(apply_channel(diff, DensityMatrix::basis_state({2}, 1)), DomainError);
}

TEST(KrausChannel, RejectsInconsistentOperators) {
  EXPECT_THROW(KrausChannel(std::vector<Operator>{}), DimensionError);
  EXPECT_THROW(KrausChannel({Matrix::Identity(2, 2), Matrix::Identity(3, 3)}), DimensionError);
  EXPECT_THROW(KrausChannel({Matrix::Identity(2, 2)}, std::vector<double>{1.0, 2.0}), DimensionError);
}

TEST(ComposeChannels, MatchesSequentialApplication) {
  std::mt19937_64 gen(103);
  for (int trial = 0; trial < 20; ++trial) {
    const KrausChannel a(oracle::random_kraus(2, 2, gen));
    const KrausChannel b(oracle::random_kraus(2, 3, gen));
    const KrausChannel ab = compose_channels(a, b);
    EXPECT_EQ(ab.size(), 6U);
    const Matrix rho = oracle::random_density(2, gen);
    EXPECT_LE(max_abs(apply_kraus(ab, rho) - apply_kraus(a, apply_kraus(b, rho))), 1e-13);
    EXPECT_TRUE(cptp_check(ab).is_tp);
  }
}

TEST(CanonicalKraus, SameSuperoperatorWithMinimalRank) {
  std::mt19937_64 gen(107);
  const auto ks = oracle::random_kraus(2, 2, gen);
  // Pad with linearly dependent copies; the canonical form must collapse them.
  std::vector<Operator> padded;
  for (const auto& k : ks) {
    padded.push_back(k / std::sqrt(2.0));
    padded.push_back(k / std::sqrt(2.0));
  }
  const KrausChannel ch(padded);
  const KrausChannel canon = canonical_kraus(ch);
  EXPECT_EQ(canon.size(), 2U);
  EXPECT_LE(max_abs(channel_to_superoperator(canon).matrix - channel_to_superoperator(ch).matrix),
            1e-13);
}

TEST(CanonicalKraus, KeepsSignsOfNonCpMaps) {
  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  const KrausChannel diff({p0, p1}, std::vector<double>{1.0, -1.0});
  const KrausChannel canon = canonical_kraus(diff);
  EXPECT_TRUE(canon.has_negative_weights());
  EXPECT_LE(max_abs(channel_to_superoperator(canon).matrix - channel_to_superoperator(diff).matrix),
            1e-14);
}

TEST(ConvexCombination, ValidatesProbabilities) {
  const auto id = KrausChannel::identity(2);
  const auto x = KrausChannel::unitary(pauli('X'));
  EXPECT_NO_THROW(ConvexCombination({id, x}, {0.25, 0.75}));
  EXPECT_THROW(ConvexCombination({id, x}, {0.5, 0.6}), DomainError);
  EXPECT_THROW(ConvexCombination({id, x}, {1.5, -0.5}), DomainError);
  EXPECT_THROW(ConvexCombination({id, x}, {1.0}), DimensionError);
  EXPECT_THROW(ConvexCombination({id, KrausChannel::identity(4)}, {0.5, 0.5}), DimensionError);
}

TEST(ConvexCombination, AnalyticMixtureIsReproduced) {
  std::mt19937_64 gen(109);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<KrausChannel> chans;
    std::vector<std::vector<Matrix>> lists;
    for (int a = 0; a < 3; ++a) {
      lists.push_back(oracle::random_kraus(2, 1 + (trial + a) % 4, gen));
      chans.emplace_back(lists.back());
    }
    const auto p = oracle::random_probs(3, gen);
    const KrausChannel mix = convex_combination(ConvexCombination(chans, p));
    const Matrix rho = oracle::random_density(2, gen);
    Matrix expected = Matrix::Zero(2, 2);
    for (int a = 0; a < 3; ++a) expected += p[a] * oracle::kraus_sum(lists[a], rho);
    EXPECT_LE(max_abs(apply_kraus(mix, rho) - expected), 1e-13);
  }
}

TEST(StinespringDilation, BlockZeroReproducesKraus) {
  std::mt19937_64 gen(113);
  for (int m = 1; m <= 5; ++m) {
    const auto ks = oracle::random_kraus(2, m, gen);
    const DilatedUnitary dil = stinespring_dilation(KrausChannel(ks));
    EXPECT_EQ(dil.env_dim, Index{1} << ceil_log2(static_cast<Index>(m)));
    EXPECT_LE(unitarity_residual(dil.unitary), 1e-12);
    for (Index i = 0; i < dil.env_dim; ++i) {
      const Matrix block = dil.unitary.block(i * 2, 0, 2, 2);
      const Matrix expected = i < m ? ks[i] : Matrix::Zero(2, 2);
      EXPECT_LE(max_abs(block - expected), 1e-12);
    }
  }
}

TEST(StinespringDilation, TracingEnvironmentGivesChannel) {
  std::mt19937_64 gen(127);
  const auto ks = oracle::random_kraus(4, 3, gen);
  const DilatedUnitary dil = stinespring_dilation(KrausChannel(ks));
  const Matrix rho = oracle::random_density(4, gen);
  Matrix env0 = Matrix::Zero(dil.env_dim, dil.env_dim);
  env0(0, 0) = 1.0;
  const Matrix big = dil.unitary * oracle::kron_loops(env0, rho) * dil.unitary.adjoint();
  const std::vector<int> dims{static_cast<int>(dil.env_dim), 4};
  const Matrix out = oracle::brute_partial_trace(big, dims, {1});
  EXPECT_LE(max_abs(out - oracle::kraus_sum(ks, rho)), 1e-12);
}

TEST(StinespringDilation, LargerEnvironmentIsIdleOnExtraQubits) {
  const DilatedUnitary dil = stinespring_dilation(amplitude_damping_channel(0.2), 8);
  EXPECT_EQ(dil.env_dim, 8);
  EXPECT_LE(unitarity_residual(dil.unitary), 1e-12);
  EXPECT_LE(max_abs(dil.unitary.block(0, 0, 2, 2) -
                    amplitude_damping_channel(0.2).kraus()[0]),
            1e-14);
  EXPECT_THROW(stinespring_dilation(amplitude_damping_channel(0.2), 3), DimensionError);
}

TEST(StinespringDilation, RejectsNonTracePreserving) {
  EXPECT_THROW(stinespring_dilation(KrausChannel({Matrix::Identity(2, 2) * 0.5})), DomainError);
}

TEST(Depolarizing, ActionAndLimits) {
  const double p = 0.3;
  const KrausChannel dep = depolarizing_channel(p, 1);
  EXPECT_EQ(dep.size(), 4U);
  std::mt19937_64 gen(131);
  const Matrix rho = oracle::random_density(2, gen);
  Matrix expected = (1 - p) * rho;
  for (char c : {'X', 'Y', 'Z'}) expected += p / 3.0 * pauli(c) * rho * pauli(c);
  EXPECT_LE(max_abs(apply_kraus(dep, rho) - expected), 1e-14);
  EXPECT_THROW(depolarizing_channel(-0.1, 1), DomainError);
  EXPECT_THROW(depolarizing_channel(1.1, 1), DomainError);
  EXPECT_EQ(depolarizing_channel(0.1, 2).size(), 16U);
}

TEST(AmplitudeDamping, KrausFormAndRange) {
  const KrausChannel ad = amplitude_damping_channel(0.4);
  EXPECT_TRUE(cptp_check(ad).is_tp);
  EXPECT_NEAR(std::abs(ad.kraus()[1](0, 1)), std::sqrt(0.4), 1e-15);
  EXPECT_NEAR(std::abs(ad.kraus()[0](1, 1)), std::sqrt(0.6), 1e-15);
  EXPECT_THROW(amplitude_damping_channel(1.5), DomainError);
}

TEST(ControlledExtension, ActsAsIdealGateOnlyOnSelectedBranch) {
  const double p = 0.1;
  const Matrix h = (pauli('X') + pauli('Z')) / std::sqrt(2.0);
  const KrausChannel noisy = compose_channels(depolarizing_channel(p, 1), KrausChannel::unitary(h));
  const KrausChannel ext = controlled_extension(noisy, 2, 1, h);
  EXPECT_EQ(ext.dim(), 4);
  EXPECT_TRUE(cptp_check(ext).is_tp);
  EXPECT_TRUE(cptp_check(ext).is_cp);
  std::mt19937_64 gen(137);
  const Matrix rho = oracle::random_density(2, gen);
  const Matrix dep = apply_kraus(depolarizing_channel(p, 1), rho);
  for (int c = 0; c < 2; ++c) {
    Matrix pc = Matrix::Zero(2, 2);
    pc(c, c) = 1.0;
    const Matrix out = apply_kraus(ext, oracle::kron_loops(pc, rho));
    // Control |1>: the noisy gate; control |0>: only the trailing noise.
    const Matrix sys = c == 1 ? apply_kraus(noisy, rho) : dep;
    EXPECT_LE(max_abs(out - oracle::kron_loops(pc, sys)), 1e-13);
  }
}

TEST(ApplyChannel, ElementaryExamples) {
  std::mt19937_64 gen(139);
  const DensityMatrix rho({2}, oracle::random_density(2, gen));
  EXPECT_LE(max_abs(apply_channel(KrausChannel::identity(2), rho).matrix() - rho.matrix()), 1e-15);
  const auto excited = DensityMatrix::basis_state({2}, 1);
  Matrix decayed = Matrix::Zero(2, 2);
  decayed(0, 0) = 0.25;
  decayed(1, 1) = 0.75;
  EXPECT_LE(max_abs(apply_channel(amplitude_damping_channel(0.25), excited).matrix() - decayed),
            1e-15);
  const auto mixed = DensityMatrix::maximally_mixed({2});
  EXPECT_LE(max_abs(apply_channel(depolarizing_channel(0.37, 1), mixed).matrix() - mixed.matrix()),
            1e-15);
}

TEST(ComposeChannels, ElementaryExamples) {
  std::mt19937_64 gen(149);
  const Matrix rho = oracle::random_density(2, gen);
  const KrausChannel e(oracle::random_kraus(2, 3, gen));
  EXPECT_LE(max_abs(apply_kraus(compose_channels(KrausChannel::identity(2), e), rho) -
                    apply_kraus(e, rho)),
            1e-14);
  const KrausChannel x = KrausChannel::unitary(pauli('X'));
  EXPECT_LE(max_abs(apply_kraus(compose_channels(x, x), rho) - rho), 1e-15);
  // Depolarizing channels multiply their Pauli fidelities f = 1 - 4p/3.
  const double p1 = 0.1, p2 = 0.2;
  const double f = (1 - 4 * p1 / 3) * (1 - 4 * p2 / 3);
  const KrausChannel both = compose_channels(depolarizing_channel(p1, 1), depolarizing_channel(p2, 1));
  const Matrix oracle_s = channel_to_superoperator(depolarizing_channel(p1, 1)).matrix *
                          channel_to_superoperator(depolarizing_channel(p2, 1)).matrix;
  EXPECT_LE(max_abs(channel_to_superoperator(both).matrix - oracle_s), 1e-15);
  EXPECT_LE(max_abs(channel_to_superoperator(both).matrix -
                    channel_to_superoperator(depolarizing_channel(0.75 * (1 - f), 1)).matrix),
            1e-15);
}

TEST(ConvexCombination, ElementaryExamples) {
  std::mt19937_64 gen(151);
  const KrausChannel e(oracle::random_kraus(2, 2, gen));
  const Matrix rho = oracle::random_density(2, gen);
  EXPECT_LE(max_abs(apply_kraus(convex_combination(ConvexCombination({e}, {1.0})), rho) -
                    apply_kraus(e, rho)),
            1e-15);
  const KrausChannel half = convex_combination(
      ConvexCombination({KrausChannel::identity(2), KrausChannel::unitary(pauli('X'))}, {0.5, 0.5}));
  EXPECT_LE(max_abs(apply_kraus(half, DensityMatrix::basis_state({2}, 0).matrix()) -
                    Matrix::Identity(2, 2) / 2.0),
            1e-15);
  EXPECT_EQ(convex_combination(ConvexCombination({e, half}, {1.0, 0.0})).size(), e.size());
}

TEST(StinespringDilation, ElementaryExamples) {
  EXPECT_LE(max_abs(stinespring_dilation(KrausChannel::identity(2)).unitary -
                    Matrix::Identity(2, 2)),
            0.0);
  const DilatedUnitary ad = stinespring_dilation(amplitude_damping_channel(0.36));
  ASSERT_EQ(ad.unitary.rows(), 4);
  // <a=1,i=0|U|b=1,0> with environment-major index i*d + a.
  EXPECT_NEAR(ad.unitary(1, 1).real(), 0.8, 1e-15);
  EXPECT_NEAR(std::abs(ad.unitary(2, 1)), 0.6, 1e-15);
}

TEST(StinespringDilation, SoundOnRandomCorpus) {
  std::mt19937_64 gen(157);
  for (int trial = 0; trial < 50; ++trial) {
    const Index d = trial % 2 == 0 ? 2 : 4;
    const int m = 1 + trial % 4;
    const auto ks = oracle::random_kraus(d, m, gen);
    const DilatedUnitary dil = stinespring_dilation(KrausChannel(ks));
    const Matrix rho = oracle::random_density(d, gen);
    Matrix env0 = Matrix::Zero(dil.env_dim, dil.env_dim);
    env0(0, 0) = 1.0;
    const Matrix big = dil.unitary * oracle::kron_loops(env0, rho) * dil.unitary.adjoint();
    const Matrix out = oracle::brute_partial_trace(
        big, {static_cast<int>(dil.env_dim), static_cast<int>(d)}, {1});
    EXPECT_LE(max_abs(out - oracle::kraus_sum(ks, rho)), 1e-10);
  }
}

TEST(Depolarizing, FullStrengthAndFixedPoint) {
  const Matrix zero = DensityMatrix::basis_state({2}, 0).matrix();
  Matrix expected = Matrix::Zero(2, 2);
  for (char c : {'X', 'Y', 'Z'}) expected += pauli(c) * zero * pauli(c) / 3.0;
  EXPECT_LE(max_abs(apply_kraus(depolarizing_channel(1.0, 1), zero) - expected), 1e-15);
  EXPECT_NEAR(expected(1, 1).real(), 2.0 / 3.0, 1e-15);
  std::mt19937_64 gen(163);
  const Matrix rho = oracle::random_density(4, gen);
  EXPECT_LE(max_abs(apply_kraus(depolarizing_channel(0.0, 2), rho) - rho), 1e-15);
}

TEST(AmplitudeDamping, ElementaryExamples) {
  std::mt19937_64 gen(167);
  const Matrix rho = oracle::random_density(2, gen);
  EXPECT_LE(max_abs(apply_kraus(amplitude_damping_channel(0.0), rho) - rho), 1e-15);
  EXPECT_LE(max_abs(apply_kraus(amplitude_damping_channel(1.0),
                                DensityMatrix::basis_state({2}, 1).matrix()) -
                    DensityMatrix::basis_state({2}, 0).matrix()),
            1e-15);
  const Matrix plus = Matrix::Constant(2, 2, 0.5);
  const Matrix out = apply_kraus(amplitude_damping_channel(0.5), plus);
  EXPECT_NEAR(out(0, 1).real(), 0.5 * std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(out(0, 0).real(), 0.75, 1e-15);
}

TEST(ControlledExtension, NoiselessIsExactControlledUnitary) {
  std::mt19937_64 gen(173);
  const Matrix u = oracle::random_unitary(2, gen);
  const KrausChannel ext = controlled_extension(KrausChannel::unitary(u), 2, 1, u);
  ASSERT_EQ(ext.size(), 1U);
  EXPECT_LE(unitarity_residual(ext.kraus()[0]), 1e-12);
  Matrix cu = Matrix::Identity(4, 4);
  cu.block(2, 2, 2, 2) = u;
  EXPECT_LE(max_abs(ext.kraus()[0] - cu), 1e-14);
}

TEST(ControlledExtension, BlockSelectiveDampingOnFourLevelControl) {
  const double beta = 0.3;
  const KrausChannel ad = amplitude_damping_channel(beta);
  const KrausChannel ext = controlled_extension(ad, 4, 2, Matrix::Identity(2, 2));
  // Identity ideal gate: every control block sees the same damping.
  const Matrix sd = channel_to_superoperator(ad).matrix;
  const Matrix s = channel_to_superoperator(ext).matrix;
  std::mt19937_64 gen(179);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix rc = oracle::random_density(4, gen);
    const Matrix rs = oracle::random_density(2, gen);
    const Matrix out = unvec(s * vec(oracle::kron_loops(rc, rs)), 8);
    EXPECT_LE(max_abs(out - oracle::kron_loops(rc, unvec(sd * vec(rs), 2))), 1e-14);
  }
}

TEST(ControlledExtension, RejectsBadArguments) {
  const KrausChannel x = KrausChannel::unitary(pauli('X'));
  EXPECT_THROW(controlled_extension(x, 2, 2, pauli('X')), DimensionError);
  EXPECT_THROW(controlled_extension(x, 2, 1, Matrix::Identity(4, 4)), DimensionError);
  EXPECT_THROW(controlled_extension(x, 2, 1, 2.0 * pauli('X')), DomainError);
}

}  // namespace
}  // namespace chanmix
