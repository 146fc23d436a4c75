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

#include "chanmix/serialize.hpp"

#include <algorithm>

#include "chanmix/error.hpp"

namespace chanmix {

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw DomainError("matrix JSON must be a nonempty list of rows");
  const auto rows = static_cast<Index>(j.size());
  const auto cols = static_cast<Index>(j.front().size());
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw DimensionError("matrix JSON rows differ in length");
    }
    for (Index c = 0; c < cols; ++c) {
      const json& e = row[static_cast<std::size_t>(c)];
      if (e.is_number()) {
        m(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw DomainError("matrix entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

json channel_to_json(const KrausChannel& channel) {
  json ops = json::array();
  for (const auto& k : channel.kraus()) ops.push_back(matrix_to_json(k));
  json j = {{"label", channel.label()}, {"dim", channel.dim()}, {"kraus", std::move(ops)}};
  if (channel.has_negative_weights() ||
      std::any_of(channel.weights().begin(), channel.weights().end(), [](double w) { return w != 1.0; })) {
    j["weights"] = channel.weights();
  }
  return j;
}

KrausChannel channel_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("channel JSON must be an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "label" && key != "dim" && key != "kraus" && key != "weights") {
      throw DomainError("channel JSON: unknown key '" + key + "'");
    }
  }
  if (!j.contains("kraus")) throw DomainError("channel JSON: missing 'kraus'");
  std::vector<Operator> ops;
  for (const auto& k : j.at("kraus")) ops.push_back(matrix_from_json(k));
  std::vector<double> weights;
  if (j.contains("weights")) weights = j.at("weights").get<std::vector<double>>();
  KrausChannel ch(std::move(ops), std::move(weights), j.value("label", std::string{}));
  if (j.contains("dim") && j.at("dim").get<Index>() != ch.dim()) {
    throw DimensionError("channel JSON: 'dim' does not match the Kraus operators");
  }
  return ch;
}

json circuit_to_json(const Circuit& circuit) {
  const RegisterLayout& l = circuit.layout();
  json items = json::array();
  for (const auto& item : circuit.items()) {
    json j = {{"kind", to_string(item.kind)},
              {"name", item.name},
              {"targets", item.targets},
              {"controls", item.controls},
              {"control_value", item.control_value}};
    if (item.kind == ItemKind::kUnitary) j["matrix"] = matrix_to_json(item.matrix);
    if (item.kind == ItemKind::kChannel) j["kraus"] = channel_to_json(*item.channel)["kraus"];
    items.push_back(std::move(j));
  }
  return {{"layout",
           {{"coeff_qubits", l.coeff_qubits},
            {"env_qubits", l.env_qubits},
            {"sys_qubits", l.sys_qubits},
            {"work_qubits", l.work_qubits},
            {"aux_qubits", l.aux_qubits}}},
          {"items", std::move(items)}};
}

Circuit circuit_from_json(const json& j) {
  const json& jl = j.at("layout");
  RegisterLayout l;
  l.coeff_qubits = jl.value("coeff_qubits", 0);
  l.env_qubits = jl.value("env_qubits", 0);
  l.sys_qubits = jl.value("sys_qubits", 0);
  l.work_qubits = jl.value("work_qubits", 0);
  l.aux_qubits = jl.value("aux_qubits", 0);
  Circuit c(l);
  for (const auto& ji : j.at("items")) {
    const auto kind = ji.at("kind").get<std::string>();
    CircuitItem item;
    item.name = ji.value("name", kind);
    item.targets = ji.at("targets").get<std::vector<int>>();
    item.controls = ji.value("controls", std::vector<int>{});
    item.control_value = ji.value("control_value", std::uint64_t{0});
    if (kind == "unitary") {
      item.kind = ItemKind::kUnitary;
      item.matrix = matrix_from_json(ji.at("matrix"));
    } else if (kind == "channel") {
      item.kind = ItemKind::kChannel;
      item.channel = channel_from_json({{"label", item.name}, {"kraus", ji.at("kraus")}});
    } else if (kind == "reset") {
      item.kind = ItemKind::kReset;
    } else {
      throw DomainError("circuit JSON: unknown item kind '" + kind + "'");
    }
    c.add(std::move(item));
  }
  return c;
}

json resources_to_json(const ResourceCount& rc) {
  return {{"qubits", rc.qubits},
          {"two_qubit_gates", rc.two_qubit_gates},
          {"single_qubit_gates", rc.single_qubit_gates},
          {"resets", rc.resets},
          {"depth", rc.depth}};
}

json quasiprob_to_json(const QuasiProbRep& rep) {
  return {{"coeffs", rep.coeffs},
          {"signs", rep.signs},
          {"probs", rep.probs},
          {"gamma", rep.gamma},
          {"residual", rep.residual}};
}

}  // namespace chanmix
