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

// Ancilla-free compilation to {CNOT, arbitrary single-qubit unitary} and
// resource counting.
//
// General unitaries are split with the cosine-sine decomposition, block
// diagonals are demultiplexed into two half-size unitaries around a
// multiplexed Rz, and diagonals are peeled one qubit at a time into
// multiplexed Rz rotations, which are emitted with the Gray-code CNOT ladder.

#include "chanmix/circuit.hpp"

namespace chanmix {

/// Emits "cx" and single-qubit "u" items (resets pass through unchanged).
/// Throws DomainError on channel items.
Circuit compile_to_basis(const Circuit& circuit);

struct ResourceCount {
  int qubits = 0;
  int two_qubit_gates = 0;
  int single_qubit_gates = 0;
  int resets = 0;
  int depth = 0;
};

/// Requires a compiled circuit (cx, single-qubit unitaries and resets only).
ResourceCount count_resources(const Circuit& circuit);

/// min over phi of ||a - e^{i phi} b||_F.
double phase_invariant_distance(const Matrix& a, const Matrix& b);

}  // namespace chanmix
