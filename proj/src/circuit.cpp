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

#include "chanmix/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chanmix/error.hpp"

namespace chanmix {

namespace {

Matrix swap_matrix() {
  Matrix s = Matrix::Zero(4, 4);
  s(0, 0) = s(1, 2) = s(2, 1) = s(3, 3) = 1.0;
  return s;
}

Matrix pauli_x() { return pauli('X'); }

const KrausChannel& reset_channel() {
  static const KrausChannel ch = [] {
    Matrix k0 = Matrix::Zero(2, 2);
    Matrix k1 = Matrix::Zero(2, 2);
    k0(0, 0) = 1.0;
    k1(0, 1) = 1.0;
    return KrausChannel({k0, k1}, "reset");
  }();
  return ch;
}

std::uint64_t bit_of(int qubit, int n) { return std::uint64_t{1} << (n - 1 - qubit); }

/// Index bookkeeping for one (possibly value-controlled) operator placement.
struct Placement {
  std::vector<Index> offsets;  // target-local index -> bit pattern
  std::vector<Index> bases;    // control bits set to the value, targets zero
  std::uint64_t cmask = 0;
  std::uint64_t cval = 0;

  Placement(const std::vector<int>& targets, const std::vector<int>& controls,
            std::uint64_t control_value, int n) {
    const auto t = static_cast<int>(targets.size());
    const auto c = static_cast<int>(controls.size());
    offsets.assign(std::size_t{1} << t, 0);
    for (std::size_t l = 0; l < offsets.size(); ++l) {
      Index off = 0;
      for (int j = 0; j < t; ++j) {
        if ((l >> (t - 1 - j)) & 1U) {
          off |= static_cast<Index>(bit_of(targets[static_cast<std::size_t>(j)], n));
        }
      }
      offsets[l] = off;
    }
    for (int j = 0; j < c; ++j) {
      const std::uint64_t b = bit_of(controls[static_cast<std::size_t>(j)], n);
      cmask |= b;
      if ((control_value >> (c - 1 - j)) & 1U) cval |= b;
    }
    std::uint64_t tmask = 0;
    for (int q : targets) tmask |= bit_of(q, n);
    std::vector<std::uint64_t> free_bits;
    for (int q = 0; q < n; ++q) {
      const std::uint64_t b = bit_of(q, n);
      if (!(b & (cmask | tmask))) free_bits.push_back(b);
    }
    const std::uint64_t combos = std::uint64_t{1} << free_bits.size();
    bases.reserve(combos);
    for (std::uint64_t f = 0; f < combos; ++f) {
      std::uint64_t base = cval;
      for (std::size_t k = 0; k < free_bits.size(); ++k) {
        if ((f >> (free_bits.size() - 1 - k)) & 1U) base |= free_bits[k];
      }
      bases.push_back(static_cast<Index>(base));
    }
  }

  /// M <- A M on the rows inside the control subspace.
  void left(const Matrix& op, Matrix& m) const {
    const auto block = static_cast<Index>(offsets.size());
    Matrix gathered(block, m.cols());
    for (Index base : bases) {
      for (Index l = 0; l < block; ++l) gathered.row(l) = m.row(base + offsets[static_cast<std::size_t>(l)]);
      const Matrix result = op * gathered;
      for (Index l = 0; l < block; ++l) m.row(base + offsets[static_cast<std::size_t>(l)]) = result.row(l);
    }
  }

  /// M <- M A^dagger on the columns inside the control subspace.
  void right_adjoint(const Matrix& op, Matrix& m) const {
    const auto block = static_cast<Index>(offsets.size());
    Matrix gathered(m.rows(), block);
    const Matrix op_adj = op.adjoint();
    for (Index base : bases) {
      for (Index l = 0; l < block; ++l) gathered.col(l) = m.col(base + offsets[static_cast<std::size_t>(l)]);
      const Matrix result = gathered * op_adj;
      for (Index l = 0; l < block; ++l) m.col(base + offsets[static_cast<std::size_t>(l)]) = result.col(l);
    }
  }
};

void conjugate(const Matrix& op, const CircuitItem& item, int n, Matrix& rho) {
  const Placement p(item.targets, item.controls, item.control_value, n);
  p.left(op, rho);
  p.right_adjoint(op, rho);
}

/// Controlled channel: (P K_0 + 1 - P) rho (...)^dagger + sum_{i>0} (P K_i) rho (P K_i)^dagger.
/// The i > 0 terms only see the control-subspace block, so they are
/// evaluated on that block alone.
void apply_channel_item(const KrausChannel& ch, const CircuitItem& item, int n, Matrix& rho) {
  std::vector<int> kept;  // qubits of the control subspace, in order
  std::vector<int> local_targets;
  for (int q = 0; q < n; ++q) {
    if (std::find(item.controls.begin(), item.controls.end(), q) != item.controls.end()) continue;
    kept.push_back(q);
  }
  for (int t : item.targets) {
    local_targets.push_back(static_cast<int>(std::find(kept.begin(), kept.end(), t) - kept.begin()));
  }
  const int nk = static_cast<int>(kept.size());
  const Placement sub(std::vector<int>{}, item.controls, item.control_value, n);
  // sub.bases lists the control subspace with kept[0] as the leading bit.
  const auto& idx = sub.bases;
  const auto sdim = static_cast<Index>(idx.size());

  Matrix extra;
  if (ch.size() > 1) {
    Matrix block(sdim, sdim);
    for (Index c = 0; c < sdim; ++c) {
      for (Index r = 0; r < sdim; ++r) block(r, c) = rho(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
    }
    const Placement local(local_targets, {}, 0, nk);
    extra = Matrix::Zero(sdim, sdim);
    for (std::size_t i = 1; i < ch.size(); ++i) {
      Matrix term = block;
      const Matrix k = std::sqrt(ch.weights()[i]) * ch.kraus()[i];
      local.left(k, term);
      local.right_adjoint(k, term);
      extra += term;
    }
  }
  conjugate(std::sqrt(ch.weights()[0]) * ch.kraus()[0], item, n, rho);
  if (ch.size() > 1) {
    for (Index c = 0; c < sdim; ++c) {
      for (Index r = 0; r < sdim; ++r) rho(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]) += extra(r, c);
    }
  }
}

}  // namespace

std::vector<int> RegisterLayout::range(int begin, int count) {
  std::vector<int> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = begin + i;
  return out;
}

const char* to_string(ItemKind kind) {
  switch (kind) {
    case ItemKind::kUnitary:
      return "unitary";
    case ItemKind::kChannel:
      return "channel";
    case ItemKind::kReset:
      return "reset";
  }
  return "unknown";
}

bool CircuitItem::is_cx() const {
  return kind == ItemKind::kUnitary && name == "cx" && targets.size() == 1 &&
         controls.size() == 1 && control_value == 1;
}

bool CircuitItem::is_single_qubit_unitary() const {
  return kind == ItemKind::kUnitary && targets.size() == 1 && controls.empty();
}

Circuit::Circuit(RegisterLayout layout) : layout_(layout) {
  if (layout_.coeff_qubits < 0 || layout_.env_qubits < 0 || layout_.sys_qubits < 0 ||
      layout_.work_qubits < 0 || layout_.aux_qubits < 0) {
    throw DimensionError("register sizes must be nonnegative");
  }
  if (layout_.total() > 12) {
    std::ostringstream os;
    os << "circuit needs " << layout_.total() << " qubits; the dense simulator cap is 12";
    throw DimensionError(os.str());
  }
}

Circuit& Circuit::add(CircuitItem item) {
  const int n = num_qubits();
  if (item.kind == ItemKind::kReset) {
    if (item.targets.size() != 1 || !item.controls.empty()) {
      throw DomainError("reset items act on exactly one qubit without controls");
    }
  }
  if (item.targets.empty()) throw DomainError("circuit item '" + item.name + "' has no targets");
  std::vector<int> all = item.targets;
  all.insert(all.end(), item.controls.begin(), item.controls.end());
  for (int q : all) {
    if (q < 0 || q >= n) {
      std::ostringstream os;
      os << "circuit item '" << item.name << "' touches qubit " << q << " outside 0.." << n - 1;
      throw DimensionError(os.str());
    }
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw DomainError("circuit item '" + item.name + "' repeats a qubit in targets/controls");
  }
  if (item.controls.size() < 64 &&
      item.control_value >= (std::uint64_t{1} << item.controls.size())) {
    throw DomainError("circuit item '" + item.name + "' control value out of range");
  }
  const Index d = Index{1} << item.targets.size();
  if (item.kind == ItemKind::kUnitary) {
    if (item.matrix.rows() != d || item.matrix.cols() != d) {
      throw DimensionError("unitary item '" + item.name + "' size does not match its targets");
    }
    if (unitarity_residual(item.matrix) > tol::kUnitary) {
      throw DomainError("unitary item '" + item.name + "' is not unitary within 1e-10");
    }
  } else if (item.kind == ItemKind::kChannel) {
    if (!item.channel) throw DomainError("channel item '" + item.name + "' has no channel");
    if (item.channel->has_negative_weights()) {
      throw DomainError("channel item '" + item.name + "' has signed Kraus weights");
    }
    if (item.channel->dim() != d) {
      throw DimensionError("channel item '" + item.name + "' size does not match its targets");
    }
  }
  items_.push_back(std::move(item));
  return *this;
}

Circuit& Circuit::add_unitary(std::string name, Matrix u, std::vector<int> targets,
                              std::vector<int> controls, std::uint64_t control_value) {
  CircuitItem item;
  item.kind = ItemKind::kUnitary;
  item.name = std::move(name);
  item.matrix = std::move(u);
  item.targets = std::move(targets);
  item.controls = std::move(controls);
  item.control_value = control_value;
  return add(std::move(item));
}

Circuit& Circuit::add_channel(const KrausChannel& channel, std::vector<int> targets,
                              std::vector<int> controls, std::uint64_t control_value) {
  CircuitItem item;
  item.kind = ItemKind::kChannel;
  item.name = channel.label().empty() ? "channel" : channel.label();
  item.channel = channel;
  item.targets = std::move(targets);
  item.controls = std::move(controls);
  item.control_value = control_value;
  return add(std::move(item));
}

Circuit& Circuit::add_reset(int qubit) {
  CircuitItem item;
  item.kind = ItemKind::kReset;
  item.name = "reset";
  item.targets = {qubit};
  return add(std::move(item));
}

Circuit& Circuit::add_cx(int control, int target) {
  return add_unitary("cx", pauli_x(), {target}, {control}, 1);
}

Circuit& Circuit::append(const Circuit& other) {
  if (!(other.layout() == layout_)) throw DimensionError("append: register layouts differ");
  for (const auto& item : other.items()) items_.push_back(item);
  return *this;
}

std::size_t Circuit::channel_item_count() const {
  return static_cast<std::size_t>(std::count_if(items_.begin(), items_.end(), [](const auto& it) {
    return it.kind == ItemKind::kChannel;
  }));
}

void apply_left(const Matrix& op, const std::vector<int>& targets, const std::vector<int>& controls,
                std::uint64_t control_value, int num_qubits, Matrix& m, bool identity_elsewhere) {
  const Index dim = Index{1} << num_qubits;
  if (m.rows() != dim) throw DimensionError("apply_left: matrix size does not match qubit count");
  if (op.rows() != (Index{1} << targets.size()) || op.cols() != op.rows()) {
    throw DimensionError("apply_left: operator size does not match targets");
  }
  const Placement p(targets, controls, control_value, num_qubits);
  if (!identity_elsewhere && p.cmask != 0) {
    for (Index r = 0; r < dim; ++r) {
      if ((static_cast<std::uint64_t>(r) & p.cmask) != p.cval) m.row(r).setZero();
    }
  }
  p.left(op, m);
}

void simulate_in_place(const Circuit& circuit, Matrix& rho) {
  const int n = circuit.num_qubits();
  if (rho.rows() != (Index{1} << n) || rho.cols() != rho.rows()) {
    throw DimensionError("simulate: state dimension does not match circuit layout");
  }
  for (const auto& item : circuit.items()) {
    switch (item.kind) {
      case ItemKind::kUnitary:
        conjugate(item.matrix, item, n, rho);
        break;
      case ItemKind::kChannel:
        apply_channel_item(*item.channel, item, n, rho);
        break;
      case ItemKind::kReset:
        apply_channel_item(reset_channel(), item, n, rho);
        break;
    }
  }
}

DensityMatrix simulate_circuit(const Circuit& circuit, const DensityMatrix& rho_in) {
  Matrix rho = rho_in.matrix();
  simulate_in_place(circuit, rho);
  return DensityMatrix(DensityMatrix::qubit_dims(circuit.num_qubits()), std::move(rho));
}

Matrix circuit_unitary(const Circuit& circuit) {
  const int n = circuit.num_qubits();
  const Index dim = Index{1} << n;
  Matrix u = Matrix::Identity(dim, dim);
  for (const auto& item : circuit.items()) {
    if (item.kind != ItemKind::kUnitary) {
      throw DomainError(std::string("circuit_unitary: ") + to_string(item.kind) + " item '" +
                        item.name + "' has no unitary");
    }
    apply_left(item.matrix, item.targets, item.controls, item.control_value, n, u);
  }
  return u;
}

DensityMatrix initial_state(const RegisterLayout& layout, const DensityMatrix& rho_sys) {
  const Index dsys = Index{1} << layout.sys_qubits;
  if (rho_sys.dim() != dsys) throw DimensionError("initial_state: system state dimension mismatch");
  const Index post = Index{1} << (layout.work_qubits + layout.aux_qubits);
  const Index dim = Index{1} << layout.total();
  Matrix m = Matrix::Zero(dim, dim);
  for (Index r = 0; r < dsys; ++r) {
    for (Index c = 0; c < dsys; ++c) m(r * post, c * post) = rho_sys.matrix()(r, c);
  }
  return DensityMatrix(DensityMatrix::qubit_dims(layout.total()), std::move(m));
}

DensityMatrix system_marginal(const RegisterLayout& layout, const DensityMatrix& rho) {
  return partial_trace(rho, layout.sys());
}

Operator prep_unitary(const std::vector<double>& probs) {
  if (probs.empty()) throw DomainError("prep_unitary: empty distribution");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw DomainError("prep_unitary: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-10) throw DomainError("prep_unitary: probabilities do not sum to 1");
  const Index dim = Index{1} << ceil_log2(probs.size());
  Matrix col = Matrix::Zero(dim, 1);
  for (std::size_t a = 0; a < probs.size(); ++a) col(static_cast<Index>(a), 0) = std::sqrt(probs[a]);
  return complete_isometry(col);
}

int qubits_for_dim(Index dim) {
  if (dim < 1 || (dim & (dim - 1)) != 0) throw DimensionError("dimension is not a power of two");
  int q = 0;
  while ((Index{1} << q) < dim) ++q;
  return q;
}

namespace {

void check_components(const ConvexCombination& cc, int n_sys, const char* what) {
  if (n_sys < 1) throw DimensionError(std::string(what) + ": need at least one system qubit");
  const Index d = Index{1} << n_sys;
  for (const auto& ch : cc.channels()) {
    if (ch.dim() != d) {
      std::ostringstream os;
      os << what << ": channel '" << ch.label() << "' has dimension " << ch.dim() << ", expected "
         << d;
      throw DimensionError(os.str());
    }
    require_cptp(ch, 1e-9, what);
  }
}

std::vector<int> concat(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

Circuit build_ccc_circuit(const ConvexCombination& cc, int n_sys, CccMode mode) {
  check_components(cc, n_sys, "build_ccc_circuit");
  RegisterLayout layout;
  layout.coeff_qubits = ceil_log2(cc.size());
  layout.env_qubits = mode == CccMode::kDilated ? ceil_log2(cc.max_kraus()) : 0;
  layout.sys_qubits = n_sys;
  Circuit circuit(layout);
  const auto coeff = layout.coeff();
  if (layout.coeff_qubits > 0) circuit.add_unitary("prep", prep_unitary(cc.probs()), coeff);
  const Index env_dim = Index{1} << layout.env_qubits;
  for (std::size_t a = 0; a < cc.size(); ++a) {
    const KrausChannel& ch = cc.channels()[a];
    if (mode == CccMode::kChannel) {
      circuit.add_channel(ch, layout.sys(), coeff, a);
      continue;
    }
    const DilatedUnitary dil = stinespring_dilation(ch, env_dim);
    circuit.add_unitary("dil[" + ch.label() + "]", dil.unitary, concat(layout.env(), layout.sys()),
                        coeff, a);
  }
  return circuit;
}

Circuit build_forking_circuit(const ConvexCombination& cc, int n_sys, ForkingMode mode) {
  check_components(cc, n_sys, "build_forking_circuit");
  const std::size_t n_ch = cc.size();
  RegisterLayout layout;
  layout.sys_qubits = n_sys;
  layout.env_qubits = ceil_log2(cc.max_kraus());
  if (n_ch > 1) {
    layout.coeff_qubits = ceil_log2(n_ch);
    layout.work_qubits = static_cast<int>(n_ch) * n_sys;
    layout.aux_qubits = mode == ForkingMode::kUnshared ? 1 : 0;
  }
  Circuit circuit(layout);
  const Index env_dim = Index{1} << layout.env_qubits;
  const auto env = layout.env();

  if (n_ch == 1) {
    const DilatedUnitary dil = stinespring_dilation(cc.channels().front(), env_dim);
    circuit.add_unitary("dil[" + cc.channels().front().label() + "]", dil.unitary,
                        concat(env, layout.sys()));
    return circuit;
  }

  const auto coeff = layout.coeff();
  const auto sys = layout.sys();
  auto work = [&](std::size_t a) {
    std::vector<int> w;
    for (int q = 0; q < n_sys; ++q) w.push_back(layout.work_begin() + static_cast<int>(a) * n_sys + q);
    return w;
  };
  auto controlled_swap = [&](std::size_t a) {
    const auto w = work(a);
    if (mode == ForkingMode::kShared) {
      for (int q = 0; q < n_sys; ++q) {
        circuit.add_unitary("swap", swap_matrix(), {sys[static_cast<std::size_t>(q)], w[static_cast<std::size_t>(q)]},
                            coeff, a);
      }
      return;
    }
    const int flag = layout.aux_begin();
    circuit.add_unitary("x", pauli_x(), {flag}, coeff, a);
    for (int q = 0; q < n_sys; ++q) {
      circuit.add_unitary("swap", swap_matrix(), {sys[static_cast<std::size_t>(q)], w[static_cast<std::size_t>(q)]},
                          {flag}, 1);
    }
    circuit.add_unitary("x", pauli_x(), {flag}, coeff, a);
  };

  circuit.add_unitary("prep", prep_unitary(cc.probs()), coeff);
  for (std::size_t a = 0; a < n_ch; ++a) controlled_swap(a);
  for (std::size_t a = 0; a < n_ch; ++a) {
    if (a > 0) {
      for (int q : env) circuit.add_reset(q);
    }
    const KrausChannel& ch = cc.channels()[a];
    const DilatedUnitary dil = stinespring_dilation(ch, env_dim);
    circuit.add_unitary("dil[" + ch.label() + "]", dil.unitary, concat(env, work(a)));
  }
  for (std::size_t a = n_ch; a-- > 0;) controlled_swap(a);
  return circuit;
}

}  // namespace chanmix
