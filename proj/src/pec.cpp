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

#include "chanmix/pec.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/QR>

#include "chanmix/error.hpp"
#include "chanmix/rng.hpp"

namespace chanmix {

namespace {

double trace_with(const Matrix& rho, const Operator& a) {
  return rho.cwiseProduct(a.transpose()).sum().real();
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::size_t draw(std::mt19937_64& gen, const std::vector<double>& probs) {
  std::discrete_distribution<std::size_t> dist(probs.begin(), probs.end());
  return dist(gen);
}

void check_block(const LayeredDecomposition& d, std::size_t begin, std::size_t end) {
  if (begin > end || end > d.num_layers()) {
    throw DomainError("layer block is not a contiguous range inside the circuit");
  }
}

}  // namespace

NoisyBasis::NoisyBasis(std::vector<KrausChannel> ops_in) : ops(std::move(ops_in)) {
  if (ops.empty()) throw DimensionError("noisy basis must be nonempty");
  for (const auto& op : ops) {
    if (op.dim() != ops.front().dim()) throw DimensionError("noisy basis ops differ in dimension");
  }
}

std::vector<std::string> NoisyBasis::labels() const {
  std::vector<std::string> out;
  out.reserve(ops.size());
  for (const auto& op : ops) out.push_back(op.label());
  return out;
}

NoisyBasis noisy_pauli_basis(const KrausChannel& noise, const Operator& ideal) {
  if (noise.dim() != ideal.rows()) throw DimensionError("noisy_pauli_basis: dimension mismatch");
  const int n = qubits_for_dim(ideal.rows());
  std::vector<KrausChannel> ops;
  for (const auto& label : pauli_labels(n)) {
    const KrausChannel gate = KrausChannel::unitary(pauli_string(label) * ideal, label);
    ops.push_back(compose_channels(noise, gate).relabeled(noise.label() + "." + label));
  }
  return NoisyBasis(std::move(ops));
}

NoisyBasis noisy_pauli_basis(double p, const Operator& ideal) {
  return noisy_pauli_basis(depolarizing_channel(p, qubits_for_dim(ideal.rows())), ideal);
}

QuasiProbRep QuasiProbRep::from_coeffs(std::vector<double> coeffs, double residual) {
  QuasiProbRep rep;
  rep.residual = residual;
  rep.coeffs = std::move(coeffs);
  for (double& c : rep.coeffs) {
    if (std::abs(c) < kCoeffCutoff) c = 0.0;
    rep.gamma += std::abs(c);
  }
  if (!(rep.gamma > 0.0)) throw DomainError("quasiprobability representation is identically zero");
  for (double c : rep.coeffs) {
    rep.signs.push_back(c < 0.0 ? -1 : 1);
    rep.probs.push_back(std::abs(c) / rep.gamma);
  }
  return rep;
}

std::vector<std::size_t> QuasiProbRep::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) out.push_back(i);
  }
  return out;
}

QuasiProbRep quasiprob_decompose(const KrausChannel& target, const NoisyBasis& basis, double tol) {
  if (!(tol > 0.0)) throw DomainError("quasiprob_decompose: tol must be positive");
  if (target.dim() != basis.dim()) throw DimensionError("quasiprob_decompose: dimension mismatch");
  const Superoperator st = channel_to_superoperator(target);
  const Index rows = st.matrix.size();
  const auto m = static_cast<Index>(basis.size());
  Matrix cols(rows, m);
  for (Index a = 0; a < m; ++a) {
    cols.col(a) = vec(channel_to_superoperator(basis.ops[static_cast<std::size_t>(a)]).matrix);
  }
  Eigen::MatrixXd lhs(2 * rows, m);
  lhs.topRows(rows) = cols.real();
  lhs.bottomRows(rows) = cols.imag();
  const Vector tv = vec(st.matrix);
  Eigen::VectorXd rhs(2 * rows);
  rhs.head(rows) = tv.real();
  rhs.tail(rows) = tv.imag();
  const Eigen::VectorXd c = lhs.completeOrthogonalDecomposition().solve(rhs);
  const double residual = (lhs * c - rhs).norm();
  if (residual > tol) throw BasisIncompleteError(residual);
  return QuasiProbRep::from_coeffs(std::vector<double>(c.data(), c.data() + c.size()), residual);
}

std::uint64_t LayeredDecomposition::tuple_count(std::size_t begin, std::size_t end) const {
  check_block(*this, begin, end);
  std::uint64_t t = 1;
  for (std::size_t i = begin; i < end; ++i) t = saturating_mul(t, layers[i].rep.support().size());
  return t;
}

LayeredDecomposition layered_decomposition(
    const std::vector<std::pair<KrausChannel, NoisyBasis>>& layers, const DensityMatrix& rho0,
    const Operator& observable, double tol) {
  if (layers.empty()) throw DomainError("layered_decomposition: no layers");
  if (observable.rows() != rho0.dim() || observable.cols() != rho0.dim()) {
    throw DimensionError("layered_decomposition: observable dimension mismatch");
  }
  if (hermiticity_residual(observable) > tol::kHermitian) {
    throw DomainError("layered_decomposition: observable is not Hermitian");
  }
  LayeredDecomposition d{{}, 1.0, rho0, observable};
  for (const auto& [target, basis] : layers) {
    if (target.dim() != rho0.dim()) throw DimensionError("layered_decomposition: layer dimension mismatch");
    QuasiProbRep rep = quasiprob_decompose(target, basis, tol);
    d.Gamma *= rep.gamma;
    d.layers.push_back(Layer{target, basis, std::move(rep)});
  }
  return d;
}

double ideal_value(const LayeredDecomposition& decomp) {
  Matrix rho = decomp.rho0.matrix();
  for (const auto& layer : decomp.layers) rho = apply_kraus(layer.target, rho);
  return trace_with(rho, decomp.observable);
}

namespace {

double enumerate(const LayeredDecomposition& d, std::size_t layer, const Matrix& rho) {
  if (layer == d.num_layers()) return trace_with(rho, d.observable);
  const Layer& l = d.layers[layer];
  double total = 0.0;
  for (std::size_t a : l.rep.support()) {
    total += l.rep.coeffs[a] * enumerate(d, layer + 1, apply_kraus(l.basis.ops[a], rho));
  }
  return total;
}

void check_enumeration_guard(const LayeredDecomposition& d, std::size_t begin, std::size_t end,
                             std::uint64_t guard) {
  std::uint64_t total = 1;
  for (std::size_t i = begin; i < end; ++i) total = saturating_mul(total, d.layers[i].basis.size());
  if (total > guard) {
    std::ostringstream os;
    os << "tuple enumeration needs " << total << " terms; the guard is " << guard;
    throw GuardExceeded(os.str());
  }
}

}  // namespace

double exact_cancellation_value(const LayeredDecomposition& decomp) {
  check_enumeration_guard(decomp, 0, decomp.num_layers(), kEnumerationGuard);
  return enumerate(decomp, 0, decomp.rho0.matrix());
}

double pec_sample(const LayeredDecomposition& decomp, std::uint64_t seed, std::uint64_t index) {
  auto gen = substream(seed, index);
  Matrix rho = decomp.rho0.matrix();
  int sign = 1;
  for (const auto& layer : decomp.layers) {
    const std::size_t a = draw(gen, layer.rep.probs);
    sign *= layer.rep.signs[a];
    rho = apply_kraus(layer.basis.ops[a], rho);
  }
  return decomp.Gamma * sign * trace_with(rho, decomp.observable);
}

namespace {

Estimate summarize(const std::vector<double>& values) {
  Estimate e;
  e.n_samples = values.size();
  if (values.empty()) return e;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  e.estimate = mean;
  if (values.size() > 1) {
    const double var = ss / static_cast<double>(values.size() - 1);
    e.stderr_ = std::sqrt(var / static_cast<double>(values.size()));
  }
  return e;
}

}  // namespace

Estimate pec_estimate(const LayeredDecomposition& decomp, std::size_t n_samples,
                      std::uint64_t seed) {
  if (n_samples < 1) throw DomainError("pec_estimate: n_samples must be at least 1");
  std::vector<double> values(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) values[s] = pec_sample(decomp, seed, s);
  return summarize(values);
}

std::uint64_t sample_budget(double Gamma, double delta) {
  if (!(delta > 0.0)) throw DomainError("sample_budget: delta must be positive");
  if (!(Gamma >= 1.0 - 1e-9)) throw DomainError("sample_budget: Gamma must be at least 1");
  const double x = Gamma * Gamma / (delta * delta);
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, x)) return static_cast<std::uint64_t>(r);
  return static_cast<std::uint64_t>(std::ceil(x));
}

TwoShotSplit two_shot_split(const LayeredDecomposition& decomp, std::size_t begin, std::size_t end) {
  if (end == static_cast<std::size_t>(-1)) end = decomp.num_layers();
  check_block(decomp, begin, end);
  if (begin == end) throw DomainError("two_shot_split: empty layer block");
  check_enumeration_guard(decomp, begin, end, kEnumerationGuard);

  TwoShotSplit split;
  for (std::size_t i = begin; i < end; ++i) split.Gamma *= decomp.layers[i].rep.gamma;

  // Odometer over the supports, first layer slowest.
  std::vector<std::vector<std::size_t>> supports;
  for (std::size_t i = begin; i < end; ++i) supports.push_back(decomp.layers[i].rep.support());
  std::vector<std::size_t> pos(supports.size(), 0);
  for (bool done = false; !done;) {
    TupleTerm term{{}, 1, 1.0, KrausChannel::identity(decomp.rho0.dim())};
    std::optional<KrausChannel> composed;
    for (std::size_t j = 0; j < supports.size(); ++j) {
      const Layer& layer = decomp.layers[begin + j];
      const std::size_t a = supports[j][pos[j]];
      term.indices.push_back(a);
      term.sign *= layer.rep.signs[a];
      term.prob *= layer.rep.probs[a];
      composed = composed ? compose_channels(layer.basis.ops[a], *composed) : layer.basis.ops[a];
    }
    term.channel = canonical_kraus(*composed);
    (term.sign > 0 ? split.q_plus : split.q_minus) += term.prob;
    split.tuples.push_back(std::move(term));

    done = true;
    for (std::size_t j = supports.size(); j-- > 0;) {
      if (++pos[j] < supports[j].size()) {
        done = false;
        break;
      }
      pos[j] = 0;
    }
  }

  auto mixture = [&](int sign, double q) -> std::optional<ConvexCombination> {
    if (q <= 0.0) return std::nullopt;
    std::vector<KrausChannel> chans;
    std::vector<double> probs;
    for (const auto& t : split.tuples) {
      if (t.sign != sign) continue;
      chans.push_back(t.channel);
      probs.push_back(t.prob / q);
    }
    return ConvexCombination(std::move(chans), std::move(probs));
  };
  split.pos_mixture = mixture(+1, split.q_plus);
  split.neg_mixture = mixture(-1, split.q_minus);

  KrausChannel ideal = decomp.layers[begin].target;
  for (std::size_t i = begin + 1; i < end; ++i) ideal = compose_channels(decomp.layers[i].target, ideal);
  Matrix rec = Matrix::Zero(ideal.dim() * ideal.dim(), ideal.dim() * ideal.dim());
  for (const auto& t : split.tuples) {
    rec += (split.Gamma * t.sign * t.prob) * channel_to_superoperator(t.channel).matrix;
  }
  split.reconstruction_residual =
      (rec - channel_to_superoperator(ideal).matrix).cwiseAbs().maxCoeff();
  split.trace_identity_residual = std::abs(split.Gamma * (split.q_plus - split.q_minus) - 1.0);
  return split;
}

double two_shot_value(const TwoShotSplit& split, const DensityMatrix& rho, const Operator& a) {
  double plus = 0.0, minus = 0.0;
  if (split.pos_mixture) plus = trace_with(apply_kraus(convex_combination(*split.pos_mixture), rho.matrix()), a);
  if (split.neg_mixture) minus = trace_with(apply_kraus(convex_combination(*split.neg_mixture), rho.matrix()), a);
  return split.Gamma * (split.q_plus * plus - split.q_minus * minus);
}

HybridProtocol::HybridProtocol(const LayeredDecomposition& decomp, std::size_t block_begin,
                               std::size_t k)
    : decomp_(decomp), begin_(block_begin), k_(k) {
  check_block(decomp_, begin_, begin_ + k_);
  for (std::size_t i = 0; i < decomp_.num_layers(); ++i) {
    if (i < begin_ || i >= begin_ + k_) residual_negativity_ *= decomp_.layers[i].rep.gamma;
  }
  if (k_ == 0) return;
  const std::uint64_t tuples = decomp_.tuple_count(begin_, begin_ + k_);
  if (tuples > kBlockTupleGuard) {
    std::ostringstream os;
    os << "absorbed block has " << tuples << " tuples; the register guard is " << kBlockTupleGuard;
    throw GuardExceeded(os.str());
  }
  split_ = two_shot_split(decomp_, begin_, begin_ + k_);

  // Both sign classes share one coefficient register spanning every block
  // tuple; the other class's tuples simply carry probability zero.
  std::vector<KrausChannel> chans;
  for (const auto& t : split_.tuples) chans.push_back(t.channel);
  const int n_sys = qubits_for_dim(decomp_.rho0.dim());
  auto build = [&](int sign, double q) {
    std::vector<double> probs;
    for (const auto& t : split_.tuples) probs.push_back(t.sign == sign ? t.prob / q : 0.0);
    circuits_.push_back(build_ccc_circuit(ConvexCombination(chans, probs), n_sys, CccMode::kChannel));
    return circuits_.size() - 1;
  };
  if (split_.q_plus > 0.0) pos_circuit_ = build(+1, split_.q_plus);
  if (split_.q_minus > 0.0) neg_circuit_ = build(-1, split_.q_minus);
}

int HybridProtocol::logical_qubits_used() const noexcept {
  return k_ == 0 ? 0 : ceil_log2(split_.tuples.size());
}

const HybridProtocol::BlockOutput& HybridProtocol::block_output(
    const std::vector<std::size_t>& prefix, const Matrix& rho) const {
  auto it = cache_.find(prefix);
  if (it != cache_.end()) return it->second;
  const DensityMatrix in(DensityMatrix::qubit_dims(qubits_for_dim(rho.rows())), 0.5 * (rho + rho.adjoint()));
  auto run = [&](const std::optional<std::size_t>& idx) -> Matrix {
    if (!idx) return Matrix::Zero(rho.rows(), rho.cols());
    const Circuit& c = circuits_[*idx];
    return system_marginal(c.layout(), simulate_circuit(c, initial_state(c.layout(), in))).matrix();
  };
  BlockOutput out{run(pos_circuit_), run(neg_circuit_)};
  return cache_.emplace(prefix, std::move(out)).first->second;
}

double HybridProtocol::sample_value(std::uint64_t seed, std::uint64_t index) const {
  auto gen = substream(seed, index);
  Matrix rho = decomp_.rho0.matrix();
  int sign = 1;
  std::vector<std::size_t> prefix;
  for (std::size_t i = 0; i < begin_; ++i) {
    const Layer& layer = decomp_.layers[i];
    const std::size_t a = draw(gen, layer.rep.probs);
    sign *= layer.rep.signs[a];
    prefix.push_back(a);
    rho = apply_kraus(layer.basis.ops[a], rho);
  }
  if (k_ == 0) {
    for (std::size_t i = begin_; i < decomp_.num_layers(); ++i) {
      const Layer& layer = decomp_.layers[i];
      const std::size_t a = draw(gen, layer.rep.probs);
      sign *= layer.rep.signs[a];
      rho = apply_kraus(layer.basis.ops[a], rho);
    }
    return residual_negativity_ * sign * trace_with(rho, decomp_.observable);
  }
  const BlockOutput& blk = block_output(prefix, rho);
  Matrix plus = blk.plus;
  Matrix minus = blk.minus;
  for (std::size_t i = begin_ + k_; i < decomp_.num_layers(); ++i) {
    const Layer& layer = decomp_.layers[i];
    const std::size_t a = draw(gen, layer.rep.probs);
    sign *= layer.rep.signs[a];
    plus = apply_kraus(layer.basis.ops[a], plus);
    minus = apply_kraus(layer.basis.ops[a], minus);
  }
  const double inner = split_.Gamma * (split_.q_plus * trace_with(plus, decomp_.observable) -
                                       split_.q_minus * trace_with(minus, decomp_.observable));
  return residual_negativity_ * sign * inner;
}

HybridResult HybridProtocol::run(std::size_t n_samples, std::uint64_t seed) const {
  HybridResult r;
  r.residual_negativity = residual_negativity_;
  r.logical_qubits_used = logical_qubits_used();
  r.circuits = circuits_;
  if (fully_absorbed()) {
    r.estimate = sample_value(seed, 0);
    r.stderr_ = 0.0;
    r.n_samples = 0;
    return r;
  }
  if (n_samples < 1) throw DomainError("hybrid_protocol: n_samples must be at least 1");
  std::vector<double> values(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) values[s] = sample_value(seed, s);
  const Estimate e = summarize(values);
  r.estimate = e.estimate;
  r.stderr_ = e.stderr_;
  r.n_samples = e.n_samples;
  return r;
}

HybridResult hybrid_protocol(const LayeredDecomposition& decomp, std::size_t block_begin,
                             std::size_t k, std::size_t n_samples, std::uint64_t seed) {
  return HybridProtocol(decomp, block_begin, k).run(n_samples, seed);
}

}  // namespace chanmix
