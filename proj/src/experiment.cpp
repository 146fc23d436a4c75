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

#include "chanmix/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "chanmix/channels.hpp"
#include "chanmix/circuit.hpp"
#include "chanmix/compile.hpp"
#include "chanmix/error.hpp"
#include "chanmix/lindblad.hpp"
#include "chanmix/pec.hpp"
#include "chanmix/serialize.hpp"

namespace chanmix {

namespace {

enum class FieldType { kNumber, kUint, kString, kBool, kNumberList, kUintList, kStringList };

struct Field {
  std::string name;
  FieldType type;
  json fallback;
  std::optional<double> lo{};
  std::optional<double> hi{};
  bool lo_open = false;
  std::vector<std::string> choices{};
  bool is_file = false;
};

std::vector<Field> common_fields() {
  return {
      {"seed", FieldType::kUint, 0},
      {"tol", FieldType::kNumber, 1e-8, 0.0, std::nullopt, true},
      {"output", FieldType::kString, ""},
      {"csv", FieldType::kString, ""},
  };
}

std::vector<Field> rabi_fields() {
  return {
      {"omega0", FieldType::kNumber, 1.0, 0.0},
      {"omega", FieldType::kNumber, 0.5, 0.0},
      {"gamma", FieldType::kNumber, 0.1, 0.0},
      {"dt", FieldType::kNumber, 0.05, 0.0, std::nullopt, true},
  };
}

std::vector<Field> schema(const std::string& kind) {
  std::vector<Field> f = common_fields();
  auto add = [&f](std::vector<Field> more) { f.insert(f.end(), more.begin(), more.end()); };
  if (kind == "decompose") {
    add({{"target", FieldType::kString, "x"},
         {"target_file", FieldType::kString, "", {}, {}, false, {}, true},
         {"basis_file", FieldType::kString, "", {}, {}, false, {}, true},
         {"p", FieldType::kNumber, 0.1, 0.0, 1.0}});
  } else if (kind == "pec") {
    add({{"gates", FieldType::kStringList, json::array({"h", "t", "h", "s"})},
         {"p", FieldType::kNumber, 0.1, 0.0, 1.0},
         {"observable", FieldType::kString, "Z"},
         {"initial_state", FieldType::kUint, 0},
         {"k", FieldType::kUintList, json::array({0})},
         {"block_begin", FieldType::kUint, 0},
         {"samples", FieldType::kUint, 1000, 1.0},
         {"delta", FieldType::kNumber, 0.05, 0.0, std::nullopt, true}});
  } else if (kind == "ccc") {
    add({{"channels_file", FieldType::kString, "", {}, {}, false, {}, true},
         {"probs", FieldType::kNumberList, json::array()},
         {"rabi", FieldType::kBool, false},
         {"input_state", FieldType::kUint, 0},
         {"mode", FieldType::kString, "dilated", {}, {}, false, {"dilated", "channel"}}});
    add(rabi_fields());
  } else if (kind == "lindblad") {
    add(rabi_fields());
    add({{"steps", FieldType::kUint, 200},
         {"method", FieldType::kString, "ccc", {}, {}, false, {"exact", "sampled", "ccc", "forking"}},
         {"trajectories", FieldType::kUint, 1000, 1.0},
         {"initial", FieldType::kString, "e", {}, {}, false, {"e", "g", "+", "mixed"}}});
  } else if (kind == "resources") {
    add(rabi_fields());
    add({{"steps", FieldType::kUint, 200}});
  } else {
    throw DomainError("unknown experiment kind '" + kind +
                      "' (expected decompose, pec, ccc, lindblad or resources)");
  }
  return f;
}

[[noreturn]] void field_error(const std::string& name, const std::string& what) {
  throw DomainError("config field '" + name + "': " + what);
}

void check_number(const Field& f, double v) {
  if (!std::isfinite(v)) field_error(f.name, "must be finite");
  const bool below = f.lo && (f.lo_open ? v <= *f.lo : v < *f.lo);
  const bool above = f.hi && v > *f.hi;
  if (below || above) {
    std::ostringstream os;
    os << "value " << v << " out of range " << (f.lo_open ? "(" : "[");
    if (f.lo) os << *f.lo; else os << "-inf";
    os << ", ";
    if (f.hi) os << *f.hi << "]"; else os << "inf)";
    field_error(f.name, os.str());
  }
}

json validate(const Field& f, const json& v) {
  switch (f.type) {
    case FieldType::kNumber:
      if (!v.is_number()) field_error(f.name, "expected a number");
      check_number(f, v.get<double>());
      return v.get<double>();
    case FieldType::kUint:
      if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        field_error(f.name, "expected a nonnegative integer");
      }
      check_number(f, v.get<double>());
      return v.get<std::uint64_t>();
    case FieldType::kString:
      if (!v.is_string()) field_error(f.name, "expected a string");
      if (!f.choices.empty() &&
          std::find(f.choices.begin(), f.choices.end(), v.get<std::string>()) == f.choices.end()) {
        std::string all;
        for (const auto& c : f.choices) all += (all.empty() ? "" : ", ") + c;
        field_error(f.name, "'" + v.get<std::string>() + "' is not one of " + all);
      }
      if (f.is_file && !v.get<std::string>().empty() && !std::filesystem::exists(v.get<std::string>())) {
        field_error(f.name, "file '" + v.get<std::string>() + "' does not exist");
      }
      return v;
    case FieldType::kBool:
      if (!v.is_boolean()) field_error(f.name, "expected true or false");
      return v;
    case FieldType::kNumberList:
    case FieldType::kUintList:
    case FieldType::kStringList: {
      if (!v.is_array()) field_error(f.name, "expected a list");
      json out = json::array();
      Field elem = f;
      elem.type = f.type == FieldType::kNumberList ? FieldType::kNumber
                  : f.type == FieldType::kUintList ? FieldType::kUint
                                                   : FieldType::kString;
      for (const auto& e : v) out.push_back(validate(elem, e));
      return out;
    }
  }
  return v;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw DomainError("config must be a JSON object");
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    throw DomainError("config field 'kind': missing or not a string");
  }
  ExperimentConfig cfg;
  cfg.kind_ = j.at("kind").get<std::string>();
  const auto fields = schema(cfg.kind_);
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key == "kind") continue;
    if (std::none_of(fields.begin(), fields.end(), [&](const Field& f) { return f.name == key; })) {
      throw DomainError("config field '" + key + "': unknown key for kind '" + cfg.kind_ + "'");
    }
  }
  cfg.values_ = json::object();
  for (const auto& f : fields) {
    cfg.values_[f.name] = validate(f, j.contains(f.name) ? j.at(f.name) : f.fallback);
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw DomainError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

double ExperimentConfig::number(const std::string& key) const { return values_.at(key).get<double>(); }
std::uint64_t ExperimentConfig::uint(const std::string& key) const {
  return values_.at(key).get<std::uint64_t>();
}
std::string ExperimentConfig::string(const std::string& key) const {
  return values_.at(key).get<std::string>();
}
bool ExperimentConfig::has(const std::string& key) const { return values_.contains(key); }

json ExperimentConfig::to_json() const {
  json j = values_;
  j["kind"] = kind_;
  return j;
}

json ResultRecord::to_json() const {
  return {{"config", config},
          {"outputs", outputs},
          {"versions", versions},
          {"seed", seed},
          {"wall_clock_seconds", wall_clock_seconds}};
}

ResultRecord ResultRecord::from_json(const json& j) {
  ResultRecord r;
  r.config = j.at("config");
  r.outputs = j.at("outputs");
  r.versions = j.at("versions");
  r.seed = j.at("seed").get<std::uint64_t>();
  r.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
  return r;
}

void write_atomically(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out << contents;
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw Error("failed writing '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, target);
}

Operator named_gate(const std::string& name) {
  const Complex i(0.0, 1.0);
  auto angle_of = [&](const std::string& prefix) -> std::optional<double> {
    if (name.rfind(prefix + "(", 0) != 0 || name.back() != ')') return std::nullopt;
    const std::string arg = name.substr(prefix.size() + 1, name.size() - prefix.size() - 2);
    std::size_t used = 0;
    double a = 0.0;
    try {
      a = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != arg.size() || arg.empty()) throw DomainError("bad gate angle in '" + name + "'");
    return a;
  };
  if (name == "i") return pauli('I');
  if (name == "x") return pauli('X');
  if (name == "y") return pauli('Y');
  if (name == "z") return pauli('Z');
  if (name == "h") return (pauli('X') + pauli('Z')) / std::sqrt(2.0);
  if (name == "s" || name == "t") {
    Matrix m = Matrix::Identity(2, 2);
    m(1, 1) = name == "s" ? i : std::polar(1.0, M_PI / 4);
    return m;
  }
  if (name == "cx" || name == "cz" || name == "swap") {
    Matrix m = Matrix::Identity(4, 4);
    if (name == "cx") {
      m(2, 2) = m(3, 3) = 0.0;
      m(2, 3) = m(3, 2) = 1.0;
    } else if (name == "cz") {
      m(3, 3) = -1.0;
    } else {
      m(1, 1) = m(2, 2) = 0.0;
      m(1, 2) = m(2, 1) = 1.0;
    }
    return m;
  }
  for (const char* axis : {"rx", "ry", "rz"}) {
    if (auto a = angle_of(axis)) {
      const Matrix p = pauli(static_cast<char>(std::toupper(axis[1])));
      return std::cos(*a / 2) * Matrix::Identity(2, 2) - i * std::sin(*a / 2) * p;
    }
  }
  throw DomainError("unknown gate '" + name + "'");
}

namespace {

RabiParams rabi_from(const ExperimentConfig& c) {
  RabiParams p;
  p.omega0 = c.number("omega0");
  p.Omega = c.number("omega");
  p.gamma = c.number("gamma");
  p.dt = c.number("dt");
  p.steps = c.has("steps") ? static_cast<int>(c.uint("steps")) : 1;
  p.validate();
  return p;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read '" + path + "'");
  json j;
  in >> j;
  return j;
}

std::vector<KrausChannel> channels_from_file(const std::string& path) {
  const json j = read_json_file(path);
  if (!j.is_array()) throw DomainError("'" + path + "' must hold a JSON list of channels");
  std::vector<KrausChannel> out;
  for (const auto& c : j) out.push_back(channel_from_json(c));
  return out;
}

json circuit_summary(const Circuit& c) {
  return {{"qubits", c.num_qubits()}, {"items", c.size()}, {"channel_items", c.channel_item_count()}};
}

json run_decompose(const ExperimentConfig& c) {
  std::optional<KrausChannel> target;
  std::optional<Operator> ideal;
  if (!c.string("target_file").empty()) {
    target = channel_from_json(read_json_file(c.string("target_file")));
  } else {
    ideal = named_gate(c.string("target"));
    target = KrausChannel::unitary(*ideal, c.string("target"));
  }
  NoisyBasis basis;
  if (!c.string("basis_file").empty()) {
    basis = NoisyBasis(channels_from_file(c.string("basis_file")));
  } else if (ideal) {
    basis = noisy_pauli_basis(c.number("p"), *ideal);
  } else {
    throw DomainError("config field 'basis_file': required when the target comes from target_file");
  }
  const QuasiProbRep rep = quasiprob_decompose(*target, basis, c.number("tol"));
  json out = quasiprob_to_json(rep);
  out["labels"] = basis.labels();
  return out;
}

json run_pec(const ExperimentConfig& c) {
  std::vector<std::pair<KrausChannel, NoisyBasis>> layers;
  const auto gates = c.values().at("gates").get<std::vector<std::string>>();
  if (gates.empty()) throw DomainError("config field 'gates': need at least one layer");
  for (const auto& g : gates) {
    const Operator u = named_gate(g);
    layers.emplace_back(KrausChannel::unitary(u, g), noisy_pauli_basis(c.number("p"), u));
  }
  const Index dim = layers.front().first.dim();
  const int n = qubits_for_dim(dim);
  const std::string obs = c.string("observable");
  if (static_cast<int>(obs.size()) != n) {
    throw DomainError("config field 'observable': need a Pauli string of length " + std::to_string(n));
  }
  if (c.uint("initial_state") >= static_cast<std::uint64_t>(dim)) {
    field_error("initial_state", "basis index out of range");
  }
  const LayeredDecomposition d =
      layered_decomposition(layers, DensityMatrix::basis_state(DensityMatrix::qubit_dims(n),
                                                               static_cast<Index>(c.uint("initial_state"))),
                            pauli_string(obs), c.number("tol"));
  json out;
  out["Gamma"] = d.Gamma;
  out["ideal_value"] = ideal_value(d);
  out["exact_cancellation_value"] = exact_cancellation_value(d);
  out["sample_budget"] = sample_budget(d.Gamma, c.number("delta"));
  json gammas = json::array();
  for (const auto& l : d.layers) gammas.push_back(l.rep.gamma);
  out["layer_gammas"] = gammas;
  json runs = json::array();
  const auto begin = static_cast<std::size_t>(c.uint("block_begin"));
  for (std::uint64_t k : c.values().at("k").get<std::vector<std::uint64_t>>()) {
    const HybridProtocol hp(d, begin, static_cast<std::size_t>(k));
    const HybridResult r = hp.run(static_cast<std::size_t>(c.uint("samples")), c.uint("seed"));
    json circuits = json::array();
    for (const auto& circ : r.circuits) circuits.push_back(circuit_summary(circ));
    runs.push_back({{"k", k},
                    {"estimate", r.estimate},
                    {"stderr", r.stderr_},
                    {"residual_negativity", r.residual_negativity},
                    {"logical_qubits_used", r.logical_qubits_used},
                    {"n_samples", r.n_samples},
                    {"circuits_resources", circuits}});
  }
  out["runs"] = runs;
  return out;
}

json run_ccc(const ExperimentConfig& c) {
  std::optional<ConvexCombination> cc;
  if (c.values().at("rabi").get<bool>()) {
    cc = rabi_channel_set(rabi_from(c)).mixture();
  } else {
    if (c.string("channels_file").empty()) {
      field_error("channels_file", "required unless rabi is true");
    }
    cc = ConvexCombination(channels_from_file(c.string("channels_file")),
                           c.values().at("probs").get<std::vector<double>>());
  }
  const int n_sys = qubits_for_dim(cc->dim());
  const CccMode mode = c.string("mode") == "channel" ? CccMode::kChannel : CccMode::kDilated;
  const Circuit circuit = build_ccc_circuit(*cc, n_sys, mode);
  if (c.uint("input_state") >= static_cast<std::uint64_t>(cc->dim())) {
    field_error("input_state", "basis index out of range");
  }
  const DensityMatrix rho = DensityMatrix::basis_state(DensityMatrix::qubit_dims(n_sys),
                                                       static_cast<Index>(c.uint("input_state")));
  const DensityMatrix marginal =
      system_marginal(circuit.layout(), simulate_circuit(circuit, initial_state(circuit.layout(), rho)));
  const DensityMatrix analytic = apply_channel(convex_combination(*cc), rho);
  json out;
  out["circuit"] = circuit_summary(circuit);
  out["layout"] = circuit_to_json(circuit)["layout"];
  out["system_marginal"] = matrix_to_json(marginal.matrix());
  out["trace_distance_to_mixture"] = trace_distance(marginal, analytic);
  if (mode == CccMode::kDilated) out["compiled"] = resources_to_json(count_resources(compile_to_basis(circuit)));
  return out;
}

DensityMatrix initial_qubit(const std::string& which) {
  const std::vector<int> dims{2};
  if (which == "g") return DensityMatrix::basis_state(dims, 0);
  if (which == "e") return DensityMatrix::basis_state(dims, 1);
  if (which == "mixed") return DensityMatrix::maximally_mixed(dims);
  Vector plus(2);
  plus << 1.0, 1.0;
  return DensityMatrix::pure(dims, plus);
}

json run_lindblad(const ExperimentConfig& c, std::string& csv) {
  const RabiParams p = rabi_from(c);
  const LindbladSpec spec = rabi_lindblad(p);
  const DensityMatrix rho0 = initial_qubit(c.string("initial"));
  const std::string method = c.string("method");
  std::vector<DensityMatrix> series;
  if (method == "ccc") {
    series = ccc_trajectory(p, rho0);
  } else if (method == "forking") {
    series = forking_trajectory(p, rho0);
  } else if (method == "sampled") {
    series = sampled_trajectory(p, rho0, static_cast<int>(c.uint("trajectories")), c.uint("seed"));
  } else {
    for (int s = 0; s <= p.steps; ++s) series.push_back(exact_evolve(spec, rho0, s * p.dt));
  }
  std::ostringstream os;
  os.precision(12);
  os << "t,z,x,excited,trace_distance\n";
  const Operator z = pauli('Z');
  const Operator x = pauli('X');
  double max_td = 0.0, final_td = 0.0;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const double t = static_cast<double>(s) * p.dt;
    const DensityMatrix exact = exact_evolve(spec, rho0, t);
    final_td = trace_distance(series[s], exact);
    max_td = std::max(max_td, final_td);
    os << t << ',' << expectation(series[s], z) << ',' << expectation(series[s], x) << ','
       << series[s].matrix()(1, 1).real() << ',' << final_td << '\n';
  }
  csv = os.str();
  const DensityMatrix& last = series.back();
  return {{"method", method},
          {"steps", p.steps},
          {"dt", p.dt},
          {"T", p.steps * p.dt},
          {"final", {{"z", expectation(last, z)}, {"x", expectation(last, x)}, {"excited", last.matrix()(1, 1).real()}}},
          {"final_trace_distance", final_td},
          {"max_trace_distance", max_td}};
}

json run_resources(const ExperimentConfig& c, std::string& csv) {
  const RabiParams p = rabi_from(c);
  const ConvexCombination cc = rabi_channel_set(p).mixture();
  const struct {
    const char* name;
    Circuit circuit;
  } circuits[] = {
      {"ccc", build_ccc_circuit(cc, 1)},
      {"forking_shared", build_forking_circuit(cc, 1, ForkingMode::kShared)},
      {"forking_unshared", build_forking_circuit(cc, 1, ForkingMode::kUnshared)},
  };
  json out;
  std::ostringstream os;
  os << "circuit,qubits,two_qubit_gates,single_qubit_gates,resets,depth\n";
  json per_step;
  int ccc_2q = 0;
  for (const auto& entry : circuits) {
    const ResourceCount rc = count_resources(compile_to_basis(entry.circuit));
    if (std::string(entry.name) == "ccc") ccc_2q = rc.two_qubit_gates;
    per_step[entry.name] = resources_to_json(rc);
    out["totals"][entry.name] = {{"two_qubit_gates", rc.two_qubit_gates * p.steps},
                                 {"depth", rc.depth * p.steps}};
    os << entry.name << ',' << rc.qubits << ',' << rc.two_qubit_gates << ','
       << rc.single_qubit_gates << ',' << rc.resets << ',' << rc.depth << '\n';
  }
  out["per_step"] = per_step;
  out["steps"] = p.steps;
  for (const char* f : {"forking_shared", "forking_unshared"}) {
    out["two_qubit_ratio"][f] = per_step[f]["two_qubit_gates"].get<double>() / ccc_2q;
  }
  csv = os.str();
  return out;
}

}  // namespace

ResultRecord run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  ResultRecord r;
  r.config = config.to_json();
  r.seed = config.uint("seed");
  r.versions = {{"chanmix", "0.1.0"},
                {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                              "." + std::to_string(EIGEN_MINOR_VERSION)},
                {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  const std::string& kind = config.kind();
  try {
    if (kind == "decompose") {
      r.outputs = run_decompose(config);
    } else if (kind == "pec") {
      r.outputs = run_pec(config);
    } else if (kind == "ccc") {
      r.outputs = run_ccc(config);
    } else if (kind == "lindblad") {
      r.outputs = run_lindblad(config, r.csv);
    } else {
      r.outputs = run_resources(config, r.csv);
    }
  } catch (const BasisIncompleteError&) {
    throw;
  } catch (const Error& e) {
    throw Error(kind + ": " + e.what());
  }
  r.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace chanmix
