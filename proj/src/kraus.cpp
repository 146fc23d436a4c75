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

#include "chanmix/kraus.hpp"

#include <algorithm>
#include <sstream>

#include "chanmix/error.hpp"

namespace chanmix {

KrausChannel::KrausChannel(std::vector<Operator> kraus, std::string label)
    : KrausChannel(std::move(kraus), {}, std::move(label)) {}

KrausChannel::KrausChannel(std::vector<Operator> kraus, std::vector<double> weights,
                           std::string label)
    : kraus_(std::move(kraus)), weights_(std::move(weights)), label_(std::move(label)) {
  if (kraus_.empty()) throw DimensionError("Kraus list must be nonempty");
  const Index d = kraus_.front().rows();
  if (d <= 0) throw DimensionError("Kraus operators must be nonempty");
  check_dimension_cap(d);
  for (const auto& k : kraus_) {
    if (k.rows() != d || k.cols() != d) {
      throw DimensionError("all Kraus operators must be square with equal dimension");
    }
  }
  if (weights_.empty()) weights_.assign(kraus_.size(), 1.0);
  if (weights_.size() != kraus_.size()) {
    throw DimensionError("Kraus weight list length does not match operator list");
  }
}

KrausChannel KrausChannel::identity(Index dim) {
  return KrausChannel({Matrix::Identity(dim, dim)}, "id");
}

KrausChannel KrausChannel::unitary(const Operator& u, std::string label) {
  if (u.rows() != u.cols()) throw DimensionError("unitary channel needs a square operator");
  if (unitarity_residual(u) > tol::kUnitary) {
    throw DomainError("unitary channel operator is not unitary within 1e-10");
  }
  return KrausChannel({u}, std::move(label));
}

bool KrausChannel::has_negative_weights() const noexcept {
  return std::any_of(weights_.begin(), weights_.end(), [](double w) { return w < 0.0; });
}

KrausChannel KrausChannel::relabeled(std::string label) const {
  return KrausChannel(kraus_, weights_, std::move(label));
}

Matrix Superoperator::apply(const Matrix& rho) const {
  if (rho.rows() != dim || rho.cols() != dim) {
    throw DimensionError("superoperator dimension does not match operator");
  }
  return unvec(matrix * vec(rho), dim);
}

Matrix apply_kraus(const KrausChannel& channel, const Matrix& rho) {
  const Index d = channel.dim();
  if (rho.rows() != d || rho.cols() != d) {
    std::ostringstream os;
    os << "channel '" << channel.label() << "' acts on dimension " << d
       << " but operator is " << rho.rows() << "x" << rho.cols();
    throw DimensionError(os.str());
  }
  Matrix out = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < channel.size(); ++i) {
    const Operator& k = channel.kraus()[i];
    out.noalias() += channel.weights()[i] * (k * rho * k.adjoint());
  }
  return out;
}

Superoperator channel_to_superoperator(const KrausChannel& channel) {
  const Index d = channel.dim();
  check_dimension_cap(d * d);
  Superoperator s{Matrix::Zero(d * d, d * d), d};
  for (std::size_t i = 0; i < channel.size(); ++i) {
    const Operator& k = channel.kraus()[i];
    s.matrix.noalias() += channel.weights()[i] * kron(k.conjugate(), k);
  }
  return s;
}

ChoiMatrix choi_matrix(const KrausChannel& channel) {
  const Index d = channel.dim();
  check_dimension_cap(d * d);
  ChoiMatrix j{Matrix::Zero(d * d, d * d), d};
  for (std::size_t i = 0; i < channel.size(); ++i) {
    const Vector v = vec(channel.kraus()[i]);
    j.matrix.noalias() += channel.weights()[i] * (v * v.adjoint());
  }
  return j;
}

CptpReport cptp_check(const KrausChannel& channel, double tol) {
  if (!(tol > 0.0)) throw DomainError("cptp_check: tolerance must be positive");
  const Index d = channel.dim();
  Matrix gram = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < channel.size(); ++i) {
    const Operator& k = channel.kraus()[i];
    gram.noalias() += channel.weights()[i] * (k.adjoint() * k);
  }
  CptpReport r;
  r.tp_residual = operator_norm(gram - Matrix::Identity(d, d));
  const ChoiMatrix j = choi_matrix(channel);
  const Matrix herm = 0.5 * (j.matrix + j.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  r.choi_min_eig = es.eigenvalues().minCoeff();
  r.is_tp = r.tp_residual <= tol;
  r.is_cp = r.choi_min_eig >= -tol;
  return r;
}

void require_cptp(const KrausChannel& channel, double tol, const char* what) {
  const CptpReport r = cptp_check(channel, tol);
  if (!r.is_tp || !r.is_cp) {
    std::ostringstream os;
    os << what << ": channel '" << channel.label() << "' is not CPTP (tp residual "
       << r.tp_residual << ", Choi min eigenvalue " << r.choi_min_eig << ")";
    throw DomainError(os.str());
  }
}

}  // namespace chanmix
