// Copyright 2026 The spintomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Drives the installed binary exactly as a user would: spawned processes,
// real files, captured exit codes.  SPINTOMO_CLI_PATH is injected by the
// build system.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct RunResult {
  int code = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult Run(const std::string& arguments, const std::string& env = "") {
  const std::string command =
      env + (env.empty() ? "" : " ") + SPINTOMO_CLI_PATH " " + arguments +
      " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buffer[4096];
  std::size_t got = 0;
  while ((got = fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
    result.output.append(buffer, got);
  }
  const int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string ReadBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteBytes(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  REQUIRE(out.good());
  out << bytes;
}

// Fresh scratch directory per test case.
class Scratch {
 public:
  explicit Scratch(const std::string& name)
      : dir_(fs::temp_directory_path() / ("spintomo_cli_" + name)) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }
  std::string operator/(const std::string& leaf) const {
    return (dir_ / leaf).string();
  }

 private:
  fs::path dir_;
};

}  // namespace

TEST_CASE("full pipeline produces consistent, replayable artifacts") {
  Scratch dir("pipeline");
  const std::string axes = dir / "axes.json";
  const std::string record = dir / "record.json";
  const std::string state = dir / "state.json";

  RunResult made =
      Run("axes random --dim 3 --count 5 --seed 7 --out " + axes);
  REQUIRE(made.code == 0);
  CHECK(made.output.find("feasible: yes") != std::string::npos);
  CHECK(made.output.find("S_V:") != std::string::npos);
  CHECK(made.output.find("eps_V:") != std::string::npos);

  const json axes_doc = json::parse(ReadBytes(axes));
  CHECK(axes_doc.at("dim") == 3);
  CHECK(axes_doc.at("axes").size() == 5);

  SUBCASE("axes files round-trip through the serializer") {
    CHECK(axes_doc.dump(2) + "\n" == ReadBytes(axes));
  }

  SUBCASE("manifest describes the run and its outputs") {
    const json manifest = json::parse(ReadBytes(axes + ".manifest.json"));
    CHECK(manifest.at("command") == "axes random");
    CHECK(manifest.at("config").at("seed") == 7);
    CHECK(manifest.at("outputs").contains(axes));
    CHECK(manifest.at("tool_version").is_string());
  }

  REQUIRE(Run("simulate --axes " + axes + " --shots 2000 --seed 3 --out " +
              record)
              .code == 0);
  const json record_doc = json::parse(ReadBytes(record));
  CHECK(record_doc.at("dim") == 3);
  CHECK(record_doc.at("shots") == 2000);
  REQUIRE(record_doc.at("counts").size() == 5);
  for (const json& row : record_doc.at("counts")) {
    std::int64_t total = 0;
    for (const json& cell : row) total += cell.get<std::int64_t>();
    CHECK(total == 2000);
  }

  RunResult recon = Run("reconstruct --record " + record + " --out " + state);
  REQUIRE(recon.code == 0);
  CHECK(recon.output.find("distance:") != std::string::npos);
  const json state_doc = json::parse(ReadBytes(state));
  CHECK(state_doc.at("dim") == 3);
  CHECK(state_doc.contains("raw"));
  CHECK(state_doc.contains("mle"));
  CHECK(state_doc.at("distance").is_number());

  RunResult err =
      Run("error --axes " + axes + " --state " + state + " --shots 2000");
  REQUIRE(err.code == 0);
  CHECK(err.output.find("error(raw):") != std::string::npos);
  CHECK(err.output.find("error(mle):") != std::string::npos);
  CHECK(err.output.find("bound:") != std::string::npos);

  SUBCASE("reruns are byte-identical across thread counts") {
    const std::string axes_bytes = ReadBytes(axes);
    const std::string record_bytes = ReadBytes(record);
    const std::string state_bytes = ReadBytes(state);
    REQUIRE(Run("axes random --dim 3 --count 5 --seed 7 --out " + axes,
                "SPINTOMO_THREADS=1")
                .code == 0);
    REQUIRE(Run("simulate --axes " + axes + " --shots 2000 --seed 3 --out " +
                    record,
                "SPINTOMO_THREADS=6")
                .code == 0);
    REQUIRE(Run("reconstruct --record " + record + " --out " + state,
                "SPINTOMO_THREADS=2")
                .code == 0);
    CHECK(ReadBytes(axes) == axes_bytes);
    CHECK(ReadBytes(record) == record_bytes);
    CHECK(ReadBytes(state) == state_bytes);
  }

  SUBCASE("a different seed changes the record") {
    const std::string record_bytes = ReadBytes(record);
    REQUIRE(Run("simulate --axes " + axes + " --shots 2000 --seed 4 --out " +
                record)
                .code == 0);
    CHECK(ReadBytes(record) != record_bytes);
  }
}

TEST_CASE("exit codes follow the documented taxonomy") {
  Scratch dir("codes");
  const std::string axes = dir / "axes.json";
  REQUIRE(Run("axes random --dim 3 --count 5 --seed 1 --out " + axes).code ==
          0);

  SUBCASE("usage problems exit 2") {
    CHECK(Run("axes random --dim 3 --out x.json").code == 2);  // missing count
    CHECK(Run("no-such-command").code == 2);
    CHECK(Run("scales --axes " + dir / "missing.json").code == 2);
    const std::string garbage = dir / "garbage.json";
    WriteBytes(garbage, "{not json");
    CHECK(Run("scales --axes " + garbage).code == 2);
    const std::string wrong_shape = dir / "wrong.json";
    WriteBytes(wrong_shape, "{\"dim\": 3, \"axes\": [[0.1]]}\n");
    CHECK(Run("scales --axes " + wrong_shape).code == 2);
    CHECK(Run("sweep theta --dim bogus --out " + dir / "t.csv").code == 2);
    CHECK(Run("sweep theta --dim 4 --fit --out " + dir / "t.csv").code == 2);
    CHECK(Run("axes newton-young --dim 3 --theta nonsense --out " +
              dir / "n.json")
              .code == 2);
  }

  SUBCASE("infeasible designs exit 3 where feasibility is demanded") {
    CHECK(Run("axes random --dim 2 --count 2 --require-feasible --out " +
              dir / "thin.json")
              .code == 3);
    const std::string equator = dir / "equator.json";
    RunResult ny = Run("axes newton-young --dim 3 --theta 90deg --out " +
                       equator);
    CHECK(ny.code == 0);  // infeasibility is data without the flag
    CHECK(ny.output.find("eps_V: inf") != std::string::npos);

    const std::string record = dir / "short.json";
    const std::string thin = dir / "thin2.json";
    REQUIRE(Run("axes random --dim 3 --count 2 --seed 1 --out " + thin).code ==
            0);
    REQUIRE(Run("simulate --axes " + thin + " --shots 50 --seed 1 --out " +
                record)
                .code == 0);
    CHECK(Run("reconstruct --record " + record + " --out " + dir / "s.json")
              .code == 3);
    CHECK(Run("error --axes " + equator + " --state " + dir / "s.json" +
              " --shots 10")
              .code == 2);  // state file was never written above
  }

  SUBCASE("dimension conflicts exit 4") {
    const std::string qubit = dir / "qubit.json";
    json state;
    state["dim"] = 2;
    state["re"] = {{0.5, 0.0}, {0.0, 0.5}};
    state["im"] = {{0.0, 0.0}, {0.0, 0.0}};
    WriteBytes(qubit, state.dump(2) + "\n");
    CHECK(Run("simulate --axes " + axes + " --state " + qubit +
              " --shots 10 --out " + dir / "r.json")
              .code == 4);
    CHECK(Run("scales --dim 4 --axes " + axes).code == 4);
    CHECK(Run("error --axes " + axes + " --state " + qubit + " --shots 10")
              .code == 4);
  }
}

TEST_CASE("scales reports match the file and stdout contracts") {
  Scratch dir("scales");
  const std::string axes = dir / "axes.json";
  REQUIRE(Run("axes random --dim 4 --count 9 --seed 2 --out " + axes).code ==
          0);

  RunResult direct = Run("scales --axes " + axes);
  REQUIRE(direct.code == 0);
  const json report = json::parse(direct.output);
  CHECK(report.at("feasible") == true);
  CHECK(report.at("per_ell").size() == 4);
  CHECK(report.at("per_ell")[0].at("Gamma") == 0.0);
  const double s_v = report.at("S_V").get<double>();
  const double eps_v = report.at("eps_V").get<double>();
  CHECK(eps_v * eps_v < s_v * s_v / 2.0);  // quantum beats classical

  const std::string out = dir / "report.json";
  REQUIRE(Run("scales --axes " + axes + " --out " + out).code == 0);
  CHECK(json::parse(ReadBytes(out)) == report);

  // A lone axis: everything beyond degree 1 is undetermined.
  const std::string lone = dir / "lone.json";
  REQUIRE(Run("axes random --dim 2 --count 1 --seed 5 --out " + lone).code ==
          0);
  RunResult thin = Run("scales --axes " + lone);
  REQUIRE(thin.code == 0);
  const json thin_report = json::parse(thin.output);
  CHECK(thin_report.at("feasible") == false);
  CHECK(thin_report.at("S_V") == "inf");
}

TEST_CASE("sweep outputs have the promised shape") {
  Scratch dir("sweep");

  SUBCASE("beta sweep CSV and companion JSON") {
    const std::string csv = dir / "beta.csv";
    REQUIRE(
        Run("sweep beta --dim 3 --pmax 3 --candidates 40 --seed 9 --out " +
            csv)
            .code == 0);
    std::istringstream lines(ReadBytes(csv));
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(lines, line)) rows.push_back(line);
    REQUIRE(rows.size() == 5);  // header + pmax+1 rows
    CHECK(rows[0] == "p,beta_tilde");

    const json plot = json::parse(ReadBytes(dir / "beta.json"));
    CHECK(plot.at("dim") == 3);
    REQUIRE(plot.at("p").size() == 4);
    REQUIRE(plot.at("beta_tilde").size() == 4);
    REQUIRE(plot.at("best_axes").size() == 4);
    double previous = 1e300;
    for (int k = 0; k < 4; ++k) {
      CHECK(plot.at("p")[k] == k);
      const double beta = plot.at("beta_tilde")[k].get<double>();
      CHECK(beta <= previous);
      previous = beta;
      CHECK(plot.at("best_axes")[k].at("axes").size() == 5 + k);
    }

    const std::string bytes = ReadBytes(csv);
    REQUIRE(
        Run("sweep beta --dim 3 --pmax 3 --candidates 40 --seed 9 --out " +
                csv,
            "SPINTOMO_THREADS=5")
            .code == 0);
    CHECK(ReadBytes(csv) == bytes);
  }

  SUBCASE("theta sweep for one dimension") {
    const std::string csv = dir / "theta.csv";
    RunResult run = Run("sweep theta --dim 3 --out " + csv);
    REQUIRE(run.code == 0);
    CHECK(run.output.find("theta_opt:") != std::string::npos);
    std::istringstream lines(ReadBytes(csv));
    std::string line;
    int count = 0;
    bool saw_inf = false;
    while (std::getline(lines, line)) {
      if (line.find(",inf") != std::string::npos) saw_inf = true;
      ++count;
    }
    CHECK(count == 121);  // header + 120 grid points
    CHECK(saw_inf);       // the grid ends at the degenerate equator
    const json plot = json::parse(ReadBytes(dir / "theta.json"));
    const double theta_opt = plot.at("theta_opt").get<double>();
    CHECK(theta_opt > 1.0);
    CHECK(theta_opt < 1.35);
  }

  SUBCASE("theta sweep across a dimension range with a fit") {
    const std::string csv = dir / "fit.csv";
    RunResult run = Run("sweep theta --dim 3..6 --fit --out " + csv);
    REQUIRE(run.code == 0);
    CHECK(run.output.find("x: 1.39") != std::string::npos);
    const json plot = json::parse(ReadBytes(dir / "fit.json"));
    REQUIRE(plot.at("dims").size() == 4);
    CHECK(plot.at("theta_opt").size() == 4);
    const double x = plot.at("x").get<double>();
    CHECK(x > 1.19);
    CHECK(x < 1.49);
    double previous = 0.0;
    for (const json& value : plot.at("theta_opt")) {
      CHECK(value.get<double>() > previous);  // approaches pi/2 from below
      previous = value.get<double>();
    }
  }
}

TEST_CASE("angle flags accept explicit degree suffixes") {
  Scratch dir("angles");
  const std::string via_deg = dir / "deg.json";
  const std::string via_rad = dir / "rad.json";
  REQUIRE(Run("axes newton-young --dim 3 --theta 60deg --out " + via_deg)
              .code == 0);
  REQUIRE(
      Run("axes newton-young --dim 3 --theta 1.0471975511965976 --out " +
          via_rad)
          .code == 0);
  const json a = json::parse(ReadBytes(via_deg));
  const json b = json::parse(ReadBytes(via_rad));
  CHECK(a.at("axes") == b.at("axes"));
}
