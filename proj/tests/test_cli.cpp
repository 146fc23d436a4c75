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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "chanmix/error.hpp"
#include "chanmix/experiment.hpp"
#include "chanmix/serialize.hpp"

namespace chanmix {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("chanmix_test_" + std::to_string(std::random_device{}()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json without_clock(json j) {
  j.erase("wall_clock_seconds");
  return j;
}

int run_cli(const std::string& args, const fs::path& stderr_path) {
  const std::string cmd = std::string(CHANMIX_CLI) + " " + args + " > /dev/null 2> " +
                          stderr_path.string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(ParseConfig, MinimalLindbladGetsDefaults) {
  const ExperimentConfig c = parse_config(json{{"kind", "lindblad"}});
  EXPECT_EQ(c.kind(), "lindblad");
  EXPECT_EQ(c.uint("seed"), 0U);
  EXPECT_DOUBLE_EQ(c.number("tol"), 1e-8);
  EXPECT_DOUBLE_EQ(c.number("omega0"), 1.0);
  EXPECT_DOUBLE_EQ(c.number("omega"), 0.5);
  EXPECT_DOUBLE_EQ(c.number("gamma"), 0.1);
  EXPECT_EQ(c.uint("steps"), 200U);
  EXPECT_EQ(c.string("method"), "ccc");
}

TEST(ParseConfig, RangeErrorsNameTheField) {
  try {
    parse_config(json{{"kind", "pec"}, {"p", 1.5}});
    FAIL() << "expected a range error";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("'p'"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("1.5"), std::string::npos) << e.what();
  }
}

TEST(ParseConfig, StrictSchema) {
  EXPECT_THROW(parse_config(json{{"kind", "pec"}, {"sampels", 10}}), DomainError);
  EXPECT_THROW(parse_config(json{{"kind", "teleport"}}), DomainError);
  EXPECT_THROW(parse_config(json{{"seed", 1}}), DomainError);
  EXPECT_THROW(parse_config(json{{"kind", "pec"}, {"samples", "many"}}), DomainError);
  EXPECT_THROW(parse_config(json{{"kind", "lindblad"}, {"method", "euler"}}), DomainError);
  EXPECT_THROW(parse_config(json{{"kind", "ccc"}, {"channels_file", "/nonexistent/x.json"}}),
               DomainError);
}

TEST(ParseConfig, FileRoundTrip) {
  TempDir dir;
  const json original = {{"kind", "pec"}, {"gates", {"h", "x"}}, {"k", {0, 1, 2}},
                         {"samples", 100}, {"seed", 12}, {"p", 0.05}};
  write_atomically((dir / "cfg.json").string(), original.dump());
  const ExperimentConfig a = parse_config_file((dir / "cfg.json").string());
  write_atomically((dir / "echo.json").string(), a.to_json().dump());
  const ExperimentConfig b = parse_config_file((dir / "echo.json").string());
  EXPECT_EQ(a.to_json(), b.to_json());
  EXPECT_EQ(a.uint("seed"), 12U);
}

TEST(RunExperiment, PecSweepReportsResidualNegativity) {
  const ExperimentConfig c = parse_config(
      json{{"kind", "pec"}, {"k", {0, 1, 2, 3, 4}}, {"samples", 20}, {"seed", 3}});
  const ResultRecord r = run_experiment(c);
  const double gamma = r.outputs.at("layer_gammas").at(0).get<double>();
  for (const json& run : r.outputs.at("runs")) {
    const int k = run.at("k").get<int>();
    EXPECT_NEAR(run.at("residual_negativity").get<double>(), std::pow(gamma, 4 - k),
                1e-12 * std::pow(gamma, 4 - k));
  }
  EXPECT_EQ(r.seed, 3U);
}

TEST(RunExperiment, ResourcesQubitColumn) {
  const ResultRecord r = run_experiment(parse_config(json{{"kind", "resources"}}));
  const json& per_step = r.outputs.at("per_step");
  EXPECT_EQ(per_step.at("ccc").at("qubits"), 4);
  EXPECT_GE(per_step.at("forking_shared").at("qubits").get<int>(), 7);
  EXPECT_EQ(per_step.at("forking_unshared").at("qubits"), 8);
  EXPECT_FALSE(r.csv.empty());
}

TEST(RunExperiment, DeterministicModuloClock) {
  for (const json& cfg : {json{{"kind", "pec"}, {"samples", 50}, {"seed", 8}, {"k", {0, 2}}},
                          json{{"kind", "lindblad"}, {"method", "sampled"}, {"steps", 20},
                               {"trajectories", 30}, {"seed", 4}}}) {
    const ExperimentConfig c = parse_config(cfg);
    const ResultRecord a = run_experiment(c);
    const ResultRecord b = run_experiment(c);
    EXPECT_EQ(without_clock(a.to_json()).dump(), without_clock(b.to_json()).dump());
    EXPECT_EQ(a.csv, b.csv);
  }
}

TEST(RunExperiment, RecordRoundTripsAndReproduces) {
  const ExperimentConfig c = parse_config(
      json{{"kind", "lindblad"}, {"steps", 10}, {"method", "exact"}, {"seed", 6}});
  const ResultRecord r = run_experiment(c);
  const ResultRecord back = ResultRecord::from_json(r.to_json());
  EXPECT_EQ(back.to_json(), r.to_json());
  // The echoed config alone reproduces the run.
  const ResultRecord again = run_experiment(parse_config(back.config));
  EXPECT_EQ(again.outputs, r.outputs);
}

TEST(RunExperiment, DecomposeFromFiles) {
  TempDir dir;
  const Operator x = named_gate("x");
  json basis = json::array();
  for (const char* g : {"i", "x", "y", "z"}) {
    basis.push_back(channel_to_json(KrausChannel::unitary(named_gate(g), g)));
  }
  write_atomically((dir / "target.json").string(),
                   channel_to_json(KrausChannel::unitary(x, "x")).dump());
  write_atomically((dir / "basis.json").string(), basis.dump());
  const ResultRecord r = run_experiment(parse_config(
      json{{"kind", "decompose"}, {"target_file", (dir / "target.json").string()},
           {"basis_file", (dir / "basis.json").string()}}));
  EXPECT_NEAR(r.outputs.at("gamma").get<double>(), 1.0, 1e-12);
}

TEST(WriteAtomically, ReplacesWholeFile) {
  TempDir dir;
  const std::string path = (dir / "out.txt").string();
  write_atomically(path, "first version, rather long\n");
  write_atomically(path, "second\n");
  EXPECT_EQ(slurp(path), "second\n");
  for (const auto& entry : fs::directory_iterator(dir / "")) {
    EXPECT_EQ(entry.path().filename(), "out.txt");
  }
  EXPECT_THROW(write_atomically((dir / "missing" / "x.txt").string(), "x"), std::exception);
}

TEST(Binary, ResourcesWritesJsonAndCsv) {
  TempDir dir;
  const int code = run_cli("resources --steps 10 --output " + (dir / "r.json").string() +
                               " --csv " + (dir / "r.csv").string(),
                           dir / "err.txt");
  ASSERT_EQ(code, 0) << slurp(dir / "err.txt");
  const json record = json::parse(slurp(dir / "r.json"));
  EXPECT_EQ(record.at("outputs").at("per_step").at("ccc").at("qubits"), 4);
  EXPECT_EQ(record.at("config").at("steps"), 10);
  EXPECT_NE(slurp(dir / "r.csv").find("ccc"), std::string::npos);
}

TEST(Binary, ConfigErrorsExitWithoutOutput) {
  TempDir dir;
  const int code = run_cli("pec --p 1.5 --output " + (dir / "r.json").string(), dir / "err.txt");
  EXPECT_EQ(code, 2);
  EXPECT_FALSE(fs::exists(dir / "r.json"));
  const json err = json::parse(slurp(dir / "err.txt"));
  EXPECT_EQ(err.at("error").at("type"), "config");
  EXPECT_NE(err.at("error").at("message").get<std::string>().find("'p'"), std::string::npos);
}

TEST(Binary, FlagsOverrideConfigFile) {
  TempDir dir;
  write_atomically((dir / "cfg.json").string(),
                   json{{"kind", "lindblad"}, {"steps", 50}, {"method", "exact"}}.dump());
  const int code = run_cli("lindblad --config " + (dir / "cfg.json").string() +
                               " --steps 12 --output " + (dir / "r.json").string(),
                           dir / "err.txt");
  ASSERT_EQ(code, 0) << slurp(dir / "err.txt");
  const json record = json::parse(slurp(dir / "r.json"));
  EXPECT_EQ(record.at("config").at("steps"), 12);
  EXPECT_EQ(record.at("config").at("method"), "exact");
}

TEST(Binary, SameSeedSameRecord) {
  TempDir dir;
  const std::string args = "pec --samples 40 --seed 5 --k 0,1 --output ";
  ASSERT_EQ(run_cli(args + (dir / "a.json").string(), dir / "err.txt"), 0);
  ASSERT_EQ(run_cli(args + (dir / "b.json").string(), dir / "err.txt"), 0);
  json a = without_clock(json::parse(slurp(dir / "a.json")));
  json b = without_clock(json::parse(slurp(dir / "b.json")));
  // Only the echoed output path may differ.
  a["config"].erase("output");
  b["config"].erase("output");
  EXPECT_EQ(a, b);
}

}  // namespace
}  // namespace chanmix
