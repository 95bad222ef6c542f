// Copyright 2026 The FedBench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end checks of the installed command surface. The binary path is
// injected by the build via FEDBENCH_CLI.

#include <doctest.h>

#include <nlohmann/json.hpp>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

CommandResult run_command(const std::string& args) {
  const std::string cmd = std::string(FEDBENCH_CLI) + " " + args + " 2>&1";
  std::array<char, 4096> buffer;
  CommandResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buffer.data(), buffer.size(), pipe)) {
    result.output += buffer.data();
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "fedbench_cli";
  std::filesystem::create_directories(dir);
  return dir.string();
}

std::string write_config(const std::string& name, const std::string& body) {
  const std::string path = scratch_dir() + "/" + name;
  std::ofstream(path) << body;
  return path;
}

std::string small_config(const std::string& name) {
  return "experiment:\n  name: " + name + "\n  seed: 42\n  output_dir: " +
         scratch_dir() + R"(/results
model:
  kind: logistic
  input_dim: 6
  num_classes: 3
dataset:
  source: synthetic
  num_samples: 300
  separation: 6.0
training:
  epochs: 4
  learning_rate: 0.05
)";
}

std::string grep_line(const std::string& text, const std::string& prefix) {
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    if (line.rfind(prefix, 0) == 0) return line;
  }
  return "";
}

}  // namespace

TEST_CASE("validate: good config exits 0 and prints valid") {
  const auto path = write_config("good.yaml", small_config("cli_good"));
  const auto result = run_command("validate " + path);
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("valid") != std::string::npos);
}

TEST_CASE("validate: bad config exits 2 and names the key") {
  const auto path = write_config(
      "bad.yaml", small_config("cli_bad") + "bogus_key: true\n");
  const auto result = run_command("validate " + path);
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("bogus_key") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_command("").exit_code == 2);
  CHECK(run_command("run").exit_code == 2);
  CHECK(run_command("frobnicate x").exit_code == 2);
  const auto result = run_command("compare a.json b.json");
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("--baseline") != std::string::npos);
}

TEST_CASE("run twice prints identical result_hash lines") {
  const auto path = write_config("det.yaml", small_config("cli_det"));
  const auto first = run_command("run " + path);
  const auto second = run_command("run " + path);
  REQUIRE(first.exit_code == 0);
  REQUIRE(second.exit_code == 0);
  const std::string h1 = grep_line(first.output, "result_hash:");
  const std::string h2 = grep_line(second.output, "result_hash:");
  CHECK(!h1.empty());
  CHECK(h1 == h2);
}

TEST_CASE("quiet run prints exactly the result path") {
  const auto path = write_config("quiet.yaml", small_config("cli_quiet"));
  const auto result = run_command("--quiet run " + path);
  REQUIRE(result.exit_code == 0);
  // One line, ending in .json, pointing at a real file.
  std::string out = result.output;
  REQUIRE(!out.empty());
  CHECK(out.back() == '\n');
  out.pop_back();
  CHECK(out.find('\n') == std::string::npos);
  CHECK(out.size() > 5);
  CHECK(out.substr(out.size() - 5) == ".json");
  CHECK(std::filesystem::exists(out));
}

TEST_CASE("seed preset emits three result files with distinct hashes") {
  const auto path = write_config("preset.yaml", small_config("cli_preset"));
  const auto result = run_command("--quiet run --seeds " + path);
  REQUIRE(result.exit_code == 0);
  std::istringstream lines(result.output);
  std::vector<std::string> paths;
  std::string line;
  while (std::getline(lines, line)) paths.push_back(line);
  REQUIRE(paths.size() == 3);
  std::set<std::string> hashes;
  for (const auto& p : paths) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    const auto pos = content.find("\"result_hash\"");
    REQUIRE(pos != std::string::npos);
    hashes.insert(content.substr(pos, 90));
  }
  CHECK(hashes.size() == 3);
}

TEST_CASE("plot-data emits the documented columns from result files") {
  const auto cfg_a = write_config("plot_a.yaml", small_config("cli_plot_a"));
  const auto cfg_b = write_config("plot_b.yaml", small_config("cli_plot_b"));
  const auto run_a = run_command("--quiet run " + cfg_a);
  const auto run_b = run_command("--quiet run " + cfg_b);
  REQUIRE(run_a.exit_code == 0);
  REQUIRE(run_b.exit_code == 0);
  std::string path_a = run_a.output;
  path_a.pop_back();
  std::string path_b = run_b.output;
  path_b.pop_back();
  const auto result = run_command("plot-data " + path_a + " " + path_b);
  REQUIRE(result.exit_code == 0);
  std::istringstream lines(result.output);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "config,accuracy,overhead_factor,mcc,energy_kwh");
  // Rows match the JSON inputs read back directly.
  std::ifstream in(path_a);
  const auto j = nlohmann::json::parse(in);
  std::string row;
  std::getline(lines, row);
  CHECK(row.rfind("cli_plot_a,", 0) == 0);
  const double acc = j["results"]["accuracy"].get<double>();
  char needle[32];
  std::snprintf(needle, sizeof(needle), "%.10g", acc);
  CHECK(row.find(needle) != std::string::npos);
}

TEST_CASE("partition-report prints one histogram row per client") {
  const auto path = write_config(
      "part.yaml", small_config("cli_part") + R"(federated:
  enabled: true
  num_clients: 3
  alpha: 0.1
)");
  const auto result = run_command("partition-report " + path);
  REQUIRE(result.exit_code == 0);
  int rows = 0;
  std::istringstream lines(result.output);
  std::string line;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 4);  // header + 3 clients
}
