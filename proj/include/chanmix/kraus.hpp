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

// Kraus-form channels and their superoperator / Choi representations.
//
// Vectorization is column-stacking throughout: vec(A B C) = (C^T (x) A) vec(B),
// so a Kraus channel has superoperator S = sum_i w_i conj(K_i) (x) K_i. The
// Choi matrix is J = sum_i w_i vec(K_i) vec(K_i)^dagger, ordered input (x)
// output, so Tr_out J = (sum_i w_i K_i^dagger K_i)^T.

#include <string>
#include <vector>

#include "chanmix/qops.hpp"

namespace chanmix {

/// A linear map rho -> sum_i w_i K_i rho K_i^dagger.
///
/// Weights default to +1 (an ordinary CP map). Negative weights make the map
/// a signed Kraus sum, which is how non-CP differences of channels are
/// represented. Trace preservation is checked on demand, not here.
class KrausChannel {
 public:
  KrausChannel(std::vector<Operator> kraus, std::string label = {});
  KrausChannel(std::vector<Operator> kraus, std::vector<double> weights, std::string label = {});

  static KrausChannel identity(Index dim);
  static KrausChannel unitary(const Operator& u, std::string label = {});

  const std::vector<Operator>& kraus() const noexcept { return kraus_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::string& label() const noexcept { return label_; }
  Index dim() const noexcept { return kraus_.front().rows(); }
  std::size_t size() const noexcept { return kraus_.size(); }
  bool has_negative_weights() const noexcept;

  KrausChannel relabeled(std::string label) const;

 private:
  std::vector<Operator> kraus_;
  std::vector<double> weights_;
  std::string label_;
};

struct Superoperator {
  Matrix matrix;  // d^2 x d^2, column-stacking
  Index dim = 0;  // d

  Matrix apply(const Matrix& rho) const;
};

struct ChoiMatrix {
  Matrix matrix;  // d^2 x d^2, input (x) output
  Index dim = 0;
};

/// Raw action on an arbitrary operator (no state invariants enforced).
Matrix apply_kraus(const KrausChannel& channel, const Matrix& rho);

Superoperator channel_to_superoperator(const KrausChannel& channel);
ChoiMatrix choi_matrix(const KrausChannel& channel);

struct CptpReport {
  bool is_tp = false;
  bool is_cp = false;
  double tp_residual = 0.0;   // ||sum w K^dagger K - I||_op
  double choi_min_eig = 0.0;  // smallest eigenvalue of the Choi matrix
};

CptpReport cptp_check(const KrausChannel& channel, double tol = 1e-9);

/// Throws DomainError unless the channel is CPTP within `tol`.
void require_cptp(const KrausChannel& channel, double tol, const char* what);

}  // namespace chanmix
