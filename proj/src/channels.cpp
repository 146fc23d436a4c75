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

#include "chanmix/channels.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "chanmix/error.hpp"

namespace chanmix {

DensityMatrix apply_channel(const KrausChannel& channel, const DensityMatrix& rho) {
  return DensityMatrix(rho.dims(), apply_kraus(channel, rho.matrix()));
}

KrausChannel compose_channels(const KrausChannel& outer, const KrausChannel& inner) {
  if (outer.dim() != inner.dim()) {
    throw DimensionError("compose_channels: channel dimensions differ");
  }
  std::vector<Operator> ops;
  std::vector<double> weights;
  ops.reserve(outer.size() * inner.size());
  weights.reserve(outer.size() * inner.size());
  for (std::size_t i = 0; i < outer.size(); ++i) {
    for (std::size_t j = 0; j < inner.size(); ++j) {
      ops.push_back(outer.kraus()[i] * inner.kraus()[j]);
      weights.push_back(outer.weights()[i] * inner.weights()[j]);
    }
  }
  return KrausChannel(std::move(ops), std::move(weights), outer.label() + "*" + inner.label());
}

KrausChannel canonical_kraus(const KrausChannel& channel, double cutoff) {
  const Index d = channel.dim();
  const ChoiMatrix j = choi_matrix(channel);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (j.matrix + j.matrix.adjoint()));
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<Operator> ops;
  std::vector<double> weights;
  for (Index k = es.eigenvalues().size() - 1; k >= 0; --k) {
    const double lam = es.eigenvalues()(k);
    if (std::abs(lam) <= cutoff * scale) continue;
    ops.push_back(std::sqrt(std::abs(lam)) * unvec(es.eigenvectors().col(k), d));
    weights.push_back(lam > 0.0 ? 1.0 : -1.0);
  }
  if (ops.empty()) {
    ops.push_back(Matrix::Zero(d, d));
    weights.push_back(1.0);
  }
  return KrausChannel(std::move(ops), std::move(weights), channel.label());
}

ConvexCombination::ConvexCombination(std::vector<KrausChannel> channels, std::vector<double> probs)
    : channels_(std::move(channels)), probs_(std::move(probs)) {
  if (channels_.empty()) throw DimensionError("convex combination needs at least one channel");
  if (channels_.size() != probs_.size()) {
    throw DimensionError("convex combination: channel and probability counts differ");
  }
  for (const auto& c : channels_) {
    if (c.dim() != channels_.front().dim()) {
      throw DimensionError("convex combination: component dimensions differ");
    }
  }
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw DomainError("convex combination: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "convex combination: probabilities sum to " << total << ", not 1";
    throw DomainError(os.str());
  }
}

std::size_t ConvexCombination::max_kraus() const {
  std::size_t m = 1;
  for (const auto& c : channels_) m = std::max(m, c.size());
  return m;
}

KrausChannel convex_combination(const ConvexCombination& cc) {
  std::vector<Operator> ops;
  std::string label = "mix(";
  for (std::size_t a = 0; a < cc.size(); ++a) {
    const KrausChannel& ch = cc.channels()[a];
    if (ch.has_negative_weights()) {
      throw DomainError("convex_combination: component '" + ch.label() + "' has signed weights");
    }
    const double p = cc.probs()[a];
    if (a) label += ",";
    label += ch.label();
    if (p == 0.0) continue;
    for (std::size_t j = 0; j < ch.size(); ++j) {
      ops.push_back(std::sqrt(p * ch.weights()[j]) * ch.kraus()[j]);
    }
  }
  return KrausChannel(std::move(ops), label + ")");
}

DilatedUnitary stinespring_dilation(const KrausChannel& channel, Index env_dim) {
  if (channel.has_negative_weights()) {
    throw DomainError("stinespring_dilation: signed Kraus sums have no dilation");
  }
  require_cptp(channel, 1e-9, "stinespring_dilation");
  const Index d = channel.dim();
  const std::size_t m = channel.size();
  const Index natural = Index{1} << ceil_log2(m);
  if (env_dim == 0) env_dim = natural;
  if (env_dim < natural || env_dim % natural != 0 || (env_dim & (env_dim - 1)) != 0) {
    throw DimensionError("stinespring_dilation: env_dim must be a power of two >= padded Kraus count");
  }
  check_dimension_cap(env_dim * d);

  Matrix w = Matrix::Zero(natural * d, d);
  for (std::size_t i = 0; i < m; ++i) {
    w.block(static_cast<Index>(i) * d, 0, d, d) = std::sqrt(channel.weights()[i]) * channel.kraus()[i];
  }
  Matrix u = complete_isometry(w);
  if (env_dim > natural) u = kron(Matrix::Identity(env_dim / natural, env_dim / natural), u);
  return DilatedUnitary{std::move(u), env_dim, d};
}

KrausChannel depolarizing_channel(double p, int n_qubits) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("depolarizing_channel: p must lie in [0, 1]");
  if (n_qubits < 1) throw DimensionError("depolarizing_channel: need at least one qubit");
  const auto labels = pauli_labels(n_qubits);
  const double others = static_cast<double>(labels.size() - 1);
  std::vector<Operator> ops;
  ops.reserve(labels.size());
  ops.push_back(std::sqrt(1.0 - p) * pauli_string(labels.front()));
  for (std::size_t i = 1; i < labels.size(); ++i) {
    ops.push_back(std::sqrt(p / others) * pauli_string(labels[i]));
  }
  std::ostringstream os;
  os << "depol(" << p << ")";
  return KrausChannel(std::move(ops), os.str());
}

KrausChannel amplitude_damping_channel(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw DomainError("amplitude_damping_channel: beta must lie in [0, 1]");
  }
  Matrix e0 = Matrix::Zero(2, 2);
  Matrix e1 = Matrix::Zero(2, 2);
  e0(0, 0) = 1.0;
  e0(1, 1) = std::sqrt(1.0 - beta);
  e1(0, 1) = std::sqrt(beta);
  std::ostringstream os;
  os << "ad(" << beta << ")";
  return KrausChannel({e0, e1}, os.str());
}

KrausChannel controlled_extension(const KrausChannel& channel, int control_dim, int control_value,
                                  const Operator& ideal_unitary) {
  if (control_dim < 1) throw DimensionError("controlled_extension: control_dim must be positive");
  if (control_value < 0 || control_value >= control_dim) {
    throw DimensionError("controlled_extension: control_value out of range");
  }
  const Index d = channel.dim();
  if (ideal_unitary.rows() != d || ideal_unitary.cols() != d) {
    throw DimensionError("controlled_extension: ideal unitary dimension differs from channel");
  }
  if (unitarity_residual(ideal_unitary) > tol::kUnitary) {
    throw DomainError("controlled_extension: ideal operator is not unitary");
  }
  check_dimension_cap(d * control_dim);
  Matrix proj = Matrix::Zero(control_dim, control_dim);
  proj(control_value, control_value) = 1.0;
  const Matrix rest = Matrix::Identity(control_dim, control_dim) - proj;
  const Matrix controlled = kron(proj, ideal_unitary) + kron(rest, Matrix::Identity(d, d));
  const Matrix id_c = Matrix::Identity(control_dim, control_dim);

  std::vector<Operator> ops;
  ops.reserve(channel.size());
  for (const auto& k : channel.kraus()) {
    ops.push_back(kron(id_c, k * ideal_unitary.adjoint()) * controlled);
  }
  return KrausChannel(std::move(ops), channel.weights(), "c[" + channel.label() + "]");
}

}  // namespace chanmix
