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
// qkit <command> --config <path> [--out <path>]

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "qkit/cli.hpp"
#include "qkit/io.hpp"

namespace {

struct CommandOptions {
  std::string config_path;
  std::string out_path;
  std::string action;  // symplectic only
  std::optional<std::size_t> n;
  std::optional<double> a, b, hbar;
  std::optional<std::string> boundary, profile;
};

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  return true;
}

// Folds positional arguments and flags into the config document so every
// value goes through the same strict validation.
std::string merge_overrides(const std::string& command, const std::string& text, const CommandOptions& opt) {
  const bool has_overrides = !opt.action.empty() || opt.n || opt.a || opt.b || opt.hbar || opt.boundary || opt.profile;
  if (!has_overrides) return text;
  qkit::json doc;
  try {
    doc = qkit::json::parse(text);
  } catch (const qkit::json::parse_error&) {
    return text;
  }
  if (!doc.is_object()) return text;
  if (command == "symplectic" && !opt.action.empty()) {
    if (doc.contains("action") && doc["action"] != opt.action) {
      throw qkit::Error(qkit::ErrorKind::input, "$.action: config says " + doc["action"].dump() + " but command line says '" + opt.action + "'");
    }
    doc["action"] = opt.action;
  }
  if (command == "commutator") {
    qkit::json& grid = doc["grid"];
    if (grid.is_null()) grid = qkit::json::object();
    if (opt.n) grid["n"] = *opt.n;
    if (opt.a) grid["a"] = *opt.a;
    if (opt.b) grid["b"] = *opt.b;
    if (opt.hbar) grid["hbar"] = *opt.hbar;
    if (opt.boundary) grid["boundary"] = *opt.boundary;
    if (opt.profile) doc["profile"] = *opt.profile;
  }
  return doc.dump();
}

std::string describe(std::string_view command) {
  if (command == "frame-check") return "resolution-of-identity residual of a frame";
  if (command == "quantize") return "A_f with spectrum and lower symbol";
  if (command == "symbol") return "lower symbol table of A_f (optional CSV)";
  if (command == "spectrum") return "eigenvalues of a Hermitian A_f";
  if (command == "evolve") return "integrate a builtin Hamiltonian (optional CSV)";
  if (command == "symplectic") return "classify a subspace or build a Darboux frame";
  return "canonical commutator residual on a grid";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qkit: integral quantization, symplectic linear algebra and Hamiltonian checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qkit::kVersion));

  CommandOptions opt;
  for (std::string_view name : qkit::cli::kCommands) {
    CLI::App* sub = app.add_subcommand(std::string(name), describe(name));
    sub->add_option("--config", opt.config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_path, "write the report here instead of stdout");
    if (name == "symplectic") sub->add_option("action", opt.action, "classify | frame");
    if (name == "commutator") {
      sub->add_option("--n", opt.n, "grid points (>= 8)");
      sub->add_option("--a", opt.a, "left endpoint");
      sub->add_option("--b", opt.b, "right endpoint");
      sub->add_option("--hbar", opt.hbar, "reduced Planck constant");
      sub->add_option("--boundary", opt.boundary, "periodic | dirichlet");
      sub->add_option("--profile", opt.profile, "gaussian | checkerboard");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();

  qkit::cli::RunReport report;
  try {
    const qkit::cli::Tolerances tol = qkit::cli::tolerances_from_env(std::getenv("QKIT_TOL_OVERRIDE"));
    std::string text;
    if (opt.config_path.empty()) {
      if (command != "commutator") throw qkit::Error(qkit::ErrorKind::input, "--config is required for '" + command + "'");
      text = "{}";
    } else if (!read_file(opt.config_path, text)) {
      throw qkit::Error(qkit::ErrorKind::input, "cannot read config '" + opt.config_path + "'");
    }
    report = qkit::cli::execute(command, merge_overrides(command, text, opt), tol);
  } catch (const qkit::Error& e) {
    report.body["command"] = command;
    report.body["error"] = qkit::cli::error_json(e.kind(), e.what());
    report.body["version"] = std::string(qkit::kVersion);
    report.exit_code = qkit::cli::exit_code_for(e.kind());
  }

  if (report.body.contains("error")) {
    std::cerr << "qkit " << command << ": " << report.body["error"]["message"].get<std::string>() << "\n";
  }
  if (report.csv_path) {
    std::ofstream csv(*report.csv_path, std::ios::binary);
    if (!csv) {
      std::cerr << "qkit: cannot write CSV '" << *report.csv_path << "'\n";
      return 2;
    }
    csv << report.csv;
  }
  const std::string rendered = qkit::dump_deterministic(report.body);
  if (opt.out_path.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "qkit: cannot write report '" << opt.out_path << "'\n";
      return 2;
    }
    out << rendered;
  }
  return report.exit_code;
}
