// Copyright 2026 The qkit Authors.
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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "qkit/cli.hpp"
#include "qkit/io.hpp"

namespace qkit {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string normalize_wall_time(const std::string& s) {
  static const std::regex wall("\"wall_time_ms\": [^,\\n]+");
  return std::regex_replace(s, wall, "\"wall_time_ms\": 0.0");
}

struct CliRun {
  int exit_code = -1;
  std::string out;
};

// Runs the CLI binary inside `dir`, capturing stdout.
CliRun run_binary(const std::string& args, const fs::path& dir, const std::string& env = "") {
  fs::create_directories(dir);
  const fs::path out = dir / "stdout.txt";
  const std::string cmd = "cd '" + dir.string() + "' && " + env + " '" + QKIT_BINARY + "' " + args + " > '" + out.string() + "' 2> /dev/null";
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qkit_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path source(const std::string& rel) { return fs::path(QKIT_SOURCE_DIR) / rel; }

TEST(Format, Doubles) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1.0");
  EXPECT_EQ(format_double(-0.0), "0.0");
  EXPECT_EQ(format_double(1e300), "1.0000000000000001e+300");
  EXPECT_EQ(format_double(std::nan("")), "null");
  EXPECT_EQ(dump_deterministic(json{{"b", 1}, {"a", 0.5}}), "{\n  \"a\": 0.5,\n  \"b\": 1\n}\n");
}

TEST(Format, RoundTripsSeventeenDigits) {
  for (double v : {0.1, 1.0 / 3.0, -2.718281828459045, 6.02214076e23, 5e-324}) {
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
}

TEST(Tolerances, FromEnvironmentValue) {
  EXPECT_EQ(cli::tolerances_from_env(nullptr).scale, 1.0);
  EXPECT_EQ(cli::tolerances_from_env("").scale, 1.0);
  EXPECT_EQ(cli::tolerances_from_env("10").frame_reject(), 1e-7);
  EXPECT_THROW(cli::tolerances_from_env("-1"), Error);
  EXPECT_THROW(cli::tolerances_from_env("abc"), Error);
  EXPECT_THROW(cli::tolerances_from_env("inf"), Error);
}

TEST(ParseConfig, Examples) {
  const cli::Config a = cli::parse_config(std::string_view(R"({"command":"frame-check","frame":"polygon:5"})"));
  EXPECT_EQ(a.command, "frame-check");
  EXPECT_EQ(std::get<cli::FrameCheckJob>(a.job).frame.id(), "polygon:5");

  const cli::Config b = cli::parse_config(std::string_view(R"({"command":"quantize","frame":"polygon:5","f":"delta:0"})"));
  const auto& q = std::get<cli::QuantizeJob>(b.job);
  EXPECT_EQ(q.f.values(), (std::vector<complex>{1.0, 0.0, 0.0, 0.0, 0.0}));

  try {
    cli::parse_config(std::string_view(R"({"command":"frame-check","frame":"polygon:2"})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::input);
    EXPECT_NE(std::string(e.what()).find("N >= 3"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("$.frame"), std::string::npos);
  }
}

TEST(ParseConfig, StrictKeys) {
  const std::pair<const char*, const char*> cases[] = {
      {R"({"command":"frame-check","frame":"polygon:5","extra":1})", "$.extra"},
      {R"({"command":"quantize","frame":"polygon:5","f":"one","csv":"x.csv"})", "$.csv"},
      {R"({"command":"commutator","grid":{"n":64,"h":0.1}})", "$.grid.h"},
      {R"({"command":"evolve","hamiltonian":{"name":"harmonic","k":2},"x0":[1,0],"dt":0.1,"steps":2})", "$.hamiltonian.k"},
      {R"({"command":"frame-check","frame":{"points":[0],"weights":[1],"operators":[[[1,0]]],"is_density":true,"note":""}})",
       "$.frame.note"},
  };
  for (const auto& [text, key] : cases) {
    try {
      cli::parse_config(std::string_view(text));
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::input);
      EXPECT_NE(std::string(e.what()).find(key), std::string::npos) << e.what();
    }
  }
}

TEST(ParseConfig, Malformed) {
  EXPECT_THROW(cli::parse_config(std::string_view("{not json")), Error);
  EXPECT_THROW(cli::parse_config(std::string_view("[]")), Error);
  EXPECT_THROW(cli::parse_config(std::string_view("{}")), Error);
  EXPECT_THROW(cli::parse_config(std::string_view(R"({"command":"launch"})")), Error);
  EXPECT_THROW(cli::parse_config(std::string_view(R"({"command":"quantize","frame":"polygon:5"})")), Error);
  EXPECT_THROW(cli::parse_config(std::string_view(R"({"command":"evolve","hamiltonian":"harmonic","x0":[1],"dt":0.1,"steps":2})")),
               Error);
  EXPECT_THROW(cli::parse_config(std::string_view(R"({"command":"evolve","hamiltonian":"harmonic","x0":[1,0],"dt":-1,"steps":2})")),
               Error);
  EXPECT_THROW(cli::parse_config(std::string_view(R"({"command":"quantize","frame":"polygon:5","f":"delta:7"})")), Error);
  EXPECT_THROW(cli::parse_config(std::string_view(R"({"command":"quantize","frame":"polygon:5","f":[1,2]})")), Error);
  EXPECT_THROW(cli::parse_config(std::string_view(R"({"command":"frame-check","frame":"polygon:5"})"), "quantize"), Error);
}

TEST(Execute, ExitCodes) {
  EXPECT_EQ(cli::execute("frame-check", R"({"frame":"polygon:5"})").exit_code, 0);
  EXPECT_EQ(cli::execute("frame-check", R"({"frame":"polygon:2"})").exit_code, 2);
  EXPECT_EQ(cli::execute("frame-check", "{oops").exit_code, 2);
  // A frame that misses one projector: residual 0.4, well past the reject threshold.
  const std::string partial = R"({"frame":{"points":["a","b"],"weights":[1,1],
      "operators":[[[1,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]]],"is_density":false}})";
  const cli::RunReport r = cli::execute("frame-check", partial);
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(r.body["error"]["kind"], "precondition");
  EXPECT_EQ(cli::execute("quantize", partial.substr(0, partial.size() - 1) + R"(,"f":"one"})").exit_code, 1);
  // Complex f: spectrum is refused as a precondition failure.
  EXPECT_EQ(cli::execute("spectrum", R"({"frame":"polygon:5","f":[[0,1],0,0,0,0]})").exit_code, 1);
}

TEST(Execute, SpectrumOfDeltaQuantization) {
  const cli::RunReport r = cli::execute("spectrum", R"({"frame":"polygon:5","f":"delta:0"})");
  ASSERT_EQ(r.exit_code, 0);
  const std::vector<double> s = r.body["results"]["spectrum"];
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(s[0], 0.4, 1e-14);
  EXPECT_NEAR(s[1], 0.0, 1e-14);
}

TEST(Execute, FrameExportRoundTrip) {
  const cli::RunReport r = cli::execute("frame-check", R"({"frame":"polygon:7","export":true})");
  ASSERT_EQ(r.exit_code, 0);
  const json exported = json::parse(dump_deterministic(r.body))["results"]["frame"];
  const FrameFamily back = frame_from_json(exported, "$");
  const FrameFamily ref = polygon_frame(7);
  EXPECT_EQ(back.id(), ref.id());
  EXPECT_EQ(back.space().weights(), ref.space().weights());
  for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(back.op(i).entries(), ref.op(i).entries());
  // Nested row form is accepted too.
  const json nested = json::parse(R"({"points":["x","y"],"weights":[1,1],
      "operators":[[[[1,0],[0,0]],[[0,0],[0,0]]], [[[0,0],[0,0]],[[0,0],[1,0]]]],"is_density":true})");
  EXPECT_EQ(resolution_residual(frame_from_json(nested, "$")), 0.0);
}

TEST(Execute, CommutatorDefaultsAndReport) {
  const cli::RunReport r = cli::execute("commutator", R"({"grid":{"n":64,"boundary":"dirichlet"}})");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.body["results"]["grid"]["a"], -8.0);
  EXPECT_LE(r.body["residuals"]["averaging_identity"].get<double>(), 1e-14);
  EXPECT_GT(r.body["residuals"]["commutator"].get<double>(), 0.0);
  EXPECT_EQ(cli::execute("commutator", R"({"grid":{"n":4}})").exit_code, 2);
}

TEST(Binary, EvolveCsvMatchesHarmonicOracle) {
  const fs::path dir = scratch("evolve");
  const CliRun r = run_binary("evolve --config '" + source("configs/harmonic_evolve.json").string() + "'", dir);
  ASSERT_EQ(r.exit_code, 0);
  std::ifstream csv(dir / "harmonic_trajectory.csv");
  std::string line, last;
  std::getline(csv, line);
  EXPECT_EQ(line, "t,q1,p1,H");
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    last = line;
    ++rows;
  }
  EXPECT_EQ(rows, 629u);
  double t, q, p, h;
  ASSERT_EQ(std::sscanf(last.c_str(), "%lf,%lf,%lf,%lf", &t, &q, &p, &h), 4);
  EXPECT_NEAR(q, 1.0, 5e-3);
  EXPECT_NEAR(p, 0.0, 5e-3);
  EXPECT_LE(json::parse(r.out)["residuals"]["energy_drift"].get<double>(), 1e-3);
}

TEST(Binary, ErrorsAndExitCodes) {
  const fs::path dir = scratch("errors");
  std::ofstream(dir / "bad.json") << R"({"command":"frame-check","frame":"polygon:2"})";
  const CliRun bad = run_binary("frame-check --config bad.json", dir);
  EXPECT_EQ(bad.exit_code, 2);
  EXPECT_EQ(json::parse(bad.out)["error"]["kind"], "input");
  EXPECT_EQ(run_binary("frame-check", dir).exit_code, 2);
  EXPECT_EQ(run_binary("frame-check --config missing.json", dir).exit_code, 2);
  EXPECT_EQ(run_binary("teleport", dir).exit_code, 2);
  EXPECT_EQ(run_binary("--version", dir).exit_code, 0);
  EXPECT_EQ(run_binary("commutator --n 4", dir).exit_code, 2);
}

TEST(Binary, CommutatorFlags) {
  const fs::path dir = scratch("commutator");
  const CliRun r = run_binary("commutator --n 64 --boundary dirichlet --profile checkerboard --hbar 1 --out report.json", dir);
  ASSERT_EQ(r.exit_code, 0);
  const json report = json::parse(slurp(dir / "report.json"));
  EXPECT_EQ(report["results"]["grid"]["n"], 64);
  EXPECT_EQ(report["results"]["profile"], "checkerboard");
  EXPECT_NEAR(report["residuals"]["commutator"].get<double>(), 2.0, 0.05);
}

TEST(Binary, ToleranceOverride) {
  // Residual 5e-9: accepted at the default scale, rejected at a tenth of it.
  const fs::path dir = scratch("override");
  std::ofstream(dir / "frame.json") << R"({"frame":{"points":["a","b"],"weights":[1,1.000000005],
      "operators":[[[1,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[1,0]]],"is_density":true}})";
  EXPECT_EQ(run_binary("frame-check --config frame.json", dir).exit_code, 0);
  const CliRun strict = run_binary("frame-check --config frame.json", dir, "QKIT_TOL_OVERRIDE=0.1");
  EXPECT_EQ(strict.exit_code, 1);
  EXPECT_EQ(json::parse(strict.out)["tolerance_scale"], 0.1);
  EXPECT_EQ(run_binary("frame-check --config frame.json", dir, "QKIT_TOL_OVERRIDE=nope").exit_code, 2);
}

TEST(Binary, SymplecticPositionalAction) {
  const fs::path dir = scratch("symplectic");
  std::ofstream(dir / "form.json") << R"({"omega":"cotangent:2"})";
  const CliRun r = run_binary("symplectic frame --config form.json", dir);
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_LE(json::parse(r.out)["residuals"]["frame_relations"].get<double>(), 1e-10);
  EXPECT_EQ(run_binary("symplectic classify --config '" + source("configs/lagrangian_classify.json").string() + "'", dir).exit_code, 0);
  EXPECT_EQ(run_binary("symplectic frame --config '" + source("configs/lagrangian_classify.json").string() + "'", dir).exit_code, 2);
}

struct GoldenCase {
  const char* name;
  const char* command;
};

void PrintTo(const GoldenCase& c, std::ostream* os) { *os << c.name; }

class Golden : public ::testing::TestWithParam<GoldenCase> {};

TEST_P(Golden, ReportIsByteStable) {
  const auto [name, command] = GetParam();
  const fs::path dir = scratch(std::string("golden_") + name);
  const CliRun r = run_binary(std::string(command) + " --config '" + source(std::string("configs/") + name + ".json").string() + "'", dir);
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(normalize_wall_time(r.out), slurp(source(std::string("tests/golden/") + name + ".json")));
  for (const char* csv : {"seastar_symbol.csv", "harmonic_trajectory.csv"}) {
    if (fs::exists(dir / csv)) {
      EXPECT_EQ(slurp(dir / csv), slurp(source(std::string("tests/golden/") + csv)));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Configs, Golden,
                         ::testing::Values(GoldenCase{"seastar_frame_check", "frame-check"}, GoldenCase{"seastar_delta_quantize", "quantize"},
                                           GoldenCase{"seastar_symbol", "symbol"}, GoldenCase{"harmonic_evolve", "evolve"},
                                           GoldenCase{"lagrangian_classify", "symplectic"}),
                         [](const auto& info) { return std::string(info.param.name); });

}  // namespace
}  // namespace qkit
