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

// chanmix: command-line driver for the channel-mixture experiments.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "chanmix/error.hpp"
#include "chanmix/experiment.hpp"

namespace {

using chanmix::json;

struct Flag {
  std::string key;
  CLI::Option* option;
  std::function<json()> value;
};

class Subcommand {
 public:
  Subcommand(CLI::App& app, const std::string& name, const std::string& help)
      : name_(name), cmd_(app.add_subcommand(name, help)) {
    cmd_->add_option("--config", config_path_, "JSON config file; flags override its fields")
        ->check(CLI::ExistingFile);
    text("--output", "output", "JSON result path (stdout when omitted)");
    text("--csv", "csv", "CSV output path");
    uint("--seed", "seed", "RNG seed");
    number("--tol", "tol", "least-squares residual tolerance");
  }

  CLI::App* app() const { return cmd_; }
  const std::string& name() const { return name_; }

  void number(const std::string& flag, const std::string& key, const std::string& help) {
    auto v = std::make_shared<double>();
    add(flag, key, help, v);
  }
  void uint(const std::string& flag, const std::string& key, const std::string& help) {
    auto v = std::make_shared<std::uint64_t>();
    add(flag, key, help, v);
  }
  void text(const std::string& flag, const std::string& key, const std::string& help) {
    auto v = std::make_shared<std::string>();
    add(flag, key, help, v);
  }
  template <typename T>
  void list(const std::string& flag, const std::string& key, const std::string& help) {
    auto v = std::make_shared<std::vector<T>>();
    auto* opt = cmd_->add_option(flag, *v, help)->delimiter(',');
    flags_.push_back({key, opt, [v] { return json(*v); }});
  }
  void boolean(const std::string& flag, const std::string& key, const std::string& help) {
    auto v = std::make_shared<bool>(false);
    auto* opt = cmd_->add_flag(flag, *v, help);
    flags_.push_back({key, opt, [v] { return json(*v); }});
  }

  json collect() const {
    json j = config_path_.empty() ? json::object() : read(config_path_);
    j["kind"] = name_;
    for (const auto& f : flags_) {
      if (f.option->count() > 0) j[f.key] = f.value();
    }
    return j;
  }

 private:
  template <typename T>
  void add(const std::string& flag, const std::string& key, const std::string& help,
           std::shared_ptr<T> v) {
    auto* opt = cmd_->add_option(flag, *v, help);
    flags_.push_back({key, opt, [v] { return json(*v); }});
  }

  static json read(const std::string& path) {
    return chanmix::parse_config_file(path).to_json();
  }

  std::string name_;
  CLI::App* cmd_;
  std::string config_path_;
  std::vector<Flag> flags_;
};

void rabi_flags(Subcommand& s) {
  s.number("--omega0", "omega0", "Z-rotation rate");
  s.number("--omega", "omega", "X-rotation (Rabi) rate");
  s.number("--gamma", "gamma", "damping rate");
  s.number("--dt", "dt", "time step");
}

int fail(const char* type, const std::string& message, int code) {
  std::cerr << json{{"error", {{"type", type}, {"message", message}}}}.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic circuits for convex combinations of quantum channels"};
  app.require_subcommand(1);

  std::vector<Subcommand> subs;
  subs.reserve(5);

  auto& dec = subs.emplace_back(app, "decompose", "quasiprobability decomposition of a target gate");
  dec.text("--target", "target", "ideal gate name (x, h, cz, rx(0.3), ...)");
  dec.text("--target-file", "target_file", "target channel JSON");
  dec.text("--basis-file", "basis_file", "JSON list of basis channels");
  dec.number("--p", "p", "depolarizing strength of the noisy Pauli basis");

  auto& pec = subs.emplace_back(app, "pec", "error-cancellation estimate, optionally hybrid");
  pec.list<std::string>("--gates", "gates", "comma-separated layer gates");
  pec.number("--p", "p", "depolarizing strength per layer");
  pec.text("--observable", "observable", "Pauli string observable");
  pec.uint("--initial-state", "initial_state", "computational basis input index");
  pec.list<std::uint64_t>("--k", "k", "absorbed block sizes to sweep");
  pec.uint("--block-begin", "block_begin", "first absorbed layer");
  pec.uint("--samples", "samples", "Monte Carlo samples per run");
  pec.number("--delta", "delta", "target accuracy for the reported sample budget");

  auto& ccc = subs.emplace_back(app, "ccc", "simulate the convex-combination circuit once");
  ccc.text("--channels-file", "channels_file", "JSON list of component channels");
  ccc.list<double>("--probs", "probs", "comma-separated mixture probabilities");
  ccc.boolean("--rabi", "rabi", "use the damped-Rabi channel set");
  ccc.uint("--input-state", "input_state", "computational basis input index");
  ccc.text("--mode", "mode", "dilated or channel");
  rabi_flags(ccc);

  auto& lb = subs.emplace_back(app, "lindblad", "damped Rabi evolution");
  rabi_flags(lb);
  lb.uint("--steps", "steps", "number of time steps");
  lb.text("--method", "method", "exact, sampled, ccc or forking");
  lb.uint("--trajectories", "trajectories", "trajectories for the sampled method");
  lb.text("--initial", "initial", "initial state: e, g, + or mixed");

  auto& res = subs.emplace_back(app, "resources", "compiled resource counts, CCC vs forking");
  rabi_flags(res);
  res.uint("--steps", "steps", "steps used for the reported totals");

  CLI11_PARSE(app, argc, argv);

  const Subcommand* chosen = nullptr;
  for (const auto& s : subs) {
    if (s.app()->parsed()) chosen = &s;
  }

  chanmix::ExperimentConfig config;
  try {
    config = chanmix::parse_config(chosen->collect());
  } catch (const std::exception& e) {
    return fail("config", e.what(), 2);
  }

  try {
    const chanmix::ResultRecord record = chanmix::run_experiment(config);
    const std::string text = record.to_json().dump(2) + "\n";
    const std::string output = config.string("output");
    const std::string csv = config.string("csv");
    if (!csv.empty()) chanmix::write_atomically(csv, record.csv);
    if (output.empty()) {
      std::cout << text;
    } else {
      chanmix::write_atomically(output, text);
    }
  } catch (const chanmix::BasisIncompleteError& e) {
    return fail("basis_incomplete", e.what(), 1);
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), 1);
  }
  return 0;
}
