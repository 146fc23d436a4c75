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

// Circuit IR and dense density-matrix simulator.
//
// Qubit q of an n-qubit circuit is the q-th tensor factor from the left, i.e.
// bit (n - 1 - q) of a basis index. Multi-qubit operators act on their target
// list in the same order: targets[0] is the most significant factor.
// Registers are laid out left to right as coeff, env, sys, work, aux.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chanmix/channels.hpp"
#include "chanmix/qops.hpp"

namespace chanmix {

struct RegisterLayout {
  int coeff_qubits = 0;
  int env_qubits = 0;
  int sys_qubits = 0;
  int work_qubits = 0;  // forking only: one system-sized register per channel
  int aux_qubits = 0;   // forking only: flag ancilla of the unshared layout

  int total() const noexcept {
    return coeff_qubits + env_qubits + sys_qubits + work_qubits + aux_qubits;
  }
  int coeff_begin() const noexcept { return 0; }
  int env_begin() const noexcept { return coeff_qubits; }
  int sys_begin() const noexcept { return coeff_qubits + env_qubits; }
  int work_begin() const noexcept { return sys_begin() + sys_qubits; }
  int aux_begin() const noexcept { return work_begin() + work_qubits; }

  std::vector<int> coeff() const { return range(coeff_begin(), coeff_qubits); }
  std::vector<int> env() const { return range(env_begin(), env_qubits); }
  std::vector<int> sys() const { return range(sys_begin(), sys_qubits); }
  std::vector<int> work() const { return range(work_begin(), work_qubits); }
  std::vector<int> aux() const { return range(aux_begin(), aux_qubits); }

  bool operator==(const RegisterLayout&) const = default;

 private:
  static std::vector<int> range(int begin, int count);
};

enum class ItemKind { kUnitary, kChannel, kReset };

const char* to_string(ItemKind kind);

/// One circuit step. With controls, the operation acts only on the subspace
/// where the control qubits read `control_value` (controls[0] is its most
/// significant bit) and as the identity elsewhere. A controlled channel with
/// Kraus set {K_i} therefore has Kraus operators P (x) K_0 + (1 - P) (x) I and
/// P (x) K_i for i > 0 — the same map a controlled Stinespring dilation
/// produces with its environment starting in |0>.
struct CircuitItem {
  ItemKind kind = ItemKind::kUnitary;
  std::string name;
  Matrix matrix;                         // unitary items
  std::optional<KrausChannel> channel;   // channel items
  std::vector<int> targets;
  std::vector<int> controls;
  std::uint64_t control_value = 0;

  bool is_cx() const;
  bool is_single_qubit_unitary() const;
};

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(RegisterLayout layout);

  const RegisterLayout& layout() const noexcept { return layout_; }
  const std::vector<CircuitItem>& items() const noexcept { return items_; }
  int num_qubits() const noexcept { return layout_.total(); }
  std::size_t size() const noexcept { return items_.size(); }

  Circuit& add_unitary(std::string name, Matrix u, std::vector<int> targets,
                       std::vector<int> controls = {}, std::uint64_t control_value = 0);
  Circuit& add_channel(const KrausChannel& channel, std::vector<int> targets,
                       std::vector<int> controls = {}, std::uint64_t control_value = 0);
  Circuit& add_reset(int qubit);
  Circuit& add_cx(int control, int target);
  /// Validates and appends an already-built item.
  Circuit& add(CircuitItem item);
  Circuit& append(const Circuit& other);

  /// Number of items that are neither unitaries nor resets.
  std::size_t channel_item_count() const;

 private:
  RegisterLayout layout_;
  std::vector<CircuitItem> items_;
};

DensityMatrix simulate_circuit(const Circuit& circuit, const DensityMatrix& rho_in);
/// In-place variant on a raw 2^n x 2^n matrix.
void simulate_in_place(const Circuit& circuit, Matrix& rho);
/// Composite unitary of a circuit of unitary items only.
Matrix circuit_unitary(const Circuit& circuit);

/// Applies a (possibly value-controlled) operator from the left: M <- A M.
/// With `identity_elsewhere` false the rows outside the control subspace are
/// zeroed instead of kept, i.e. A = P (x) K rather than P (x) K + (1 - P) (x) I.
void apply_left(const Matrix& op, const std::vector<int>& targets, const std::vector<int>& controls,
                std::uint64_t control_value, int num_qubits, Matrix& m,
                bool identity_elsewhere = true);

/// |0><0| on coeff/env/work/aux and rho_sys on the system register.
DensityMatrix initial_state(const RegisterLayout& layout, const DensityMatrix& rho_sys);
DensityMatrix system_marginal(const RegisterLayout& layout, const DensityMatrix& rho);

/// V with V|0> = sum_a sqrt(p_a)|a>, dimension 2^ceil(log2 N).
Operator prep_unitary(const std::vector<double>& probs);

enum class CccMode {
  kDilated,  // controlled Stinespring unitaries on env (x) sys
  kChannel,  // controlled channel items on sys, no env register
};

Circuit build_ccc_circuit(const ConvexCombination& cc, int n_sys, CccMode mode = CccMode::kDilated);

enum class ForkingMode {
  kShared,    // value-controlled SWAPs straight off the coefficient register
  kUnshared,  // SWAPs routed through a dedicated flag ancilla
};

Circuit build_forking_circuit(const ConvexCombination& cc, int n_sys,
                              ForkingMode mode = ForkingMode::kShared);

/// Number of qubits needed to hold `dim` levels; throws unless a power of two.
int qubits_for_dim(Index dim);

}  // namespace chanmix
