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
#pragma once

// Batch front end: strict JSON configs in, deterministic JSON reports out.
//
// Exit codes: 0 success, 1 numerical precondition failure, 2 input error.

#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "qkit/canonical_grid.hpp"
#include "qkit/error.hpp"
#include "qkit/frames.hpp"
#include "qkit/hamiltonian.hpp"
#include "qkit/io.hpp"
#include "qkit/quantizer.hpp"
#include "qkit/symplectic.hpp"
#include "qkit/version.hpp"

namespace qkit::cli {

inline constexpr std::string_view kCommands[] = {"frame-check", "quantize", "symbol", "spectrum", "evolve", "symplectic", "commutator"};

/// Default tolerances, all multiplied by `scale` (QKIT_TOL_OVERRIDE).
struct Tolerances {
  double scale = 1.0;

  double frame_reject() const { return kFrameRejectResidual * scale; }
  double frame_warn() const { return kFrameWarnResidual * scale; }
  double density() const { return 1e-10 * scale; }
};

/// Parses the QKIT_TOL_OVERRIDE value; must be a positive finite float.
inline Tolerances tolerances_from_env(const char* value) {
  Tolerances t;
  if (value == nullptr || *value == '\0') return t;
  char* end = nullptr;
  const double v = std::strtod(value, &end);
  if (end == value || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
    fail(ErrorKind::input, std::string("QKIT_TOL_OVERRIDE: expected a positive float, got '") + value + "'");
  }
  t.scale = v;
  return t;
}

struct FrameCheckJob {
  FrameFamily frame;
  bool export_frame = false;
};

/// Shared by quantize, symbol and spectrum.
struct QuantizeJob {
  FrameFamily frame;
  ClassicalFunction f;
  std::optional<std::string> csv;
};

struct EvolveJob {
  HamiltonianSystem system;
  std::string hamiltonian;
  PhasePoint x0;
  double dt;
  std::size_t steps;
  Integrator integrator;
  std::optional<std::string> csv;
};

struct SymplecticJob {
  std::string action;  // classify | frame
  SymplecticForm form;
  std::optional<Subspace> subspace;
};

struct CommutatorJob {
  Grid grid;
  Profile profile;
};

struct Config {
  std::string command;
  json source;
  std::variant<FrameCheckJob, QuantizeJob, EvolveJob, SymplecticJob, CommutatorJob> job;
};

namespace detail {

inline const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) fail(ErrorKind::input, path + "." + key + ": required key missing");
  return obj[key];
}

inline double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) fail(ErrorKind::input, path + ": expected a number");
  return j.get<double>();
}

inline std::size_t count_at(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(ErrorKind::input, path + ": expected a non-negative integer");
  return std::size_t(j.get<long long>());
}

inline std::string string_at(const json& j, const std::string& path) {
  if (!j.is_string()) fail(ErrorKind::input, path + ": expected a string");
  return j.get<std::string>();
}

inline std::optional<std::string> optional_path(const json& doc, const char* key) {
  if (!doc.contains(key)) return std::nullopt;
  return string_at(doc[key], std::string("$.") + key);
}

inline ClassicalFunction function_from_json(const json& j, const FrameFamily& frame, const std::string& path) {
  if (j.is_string()) {
    try {
      return ClassicalFunction::builtin(j.get<std::string>(), frame.space());
    } catch (const Error& e) {
      fail(ErrorKind::input, path + ": " + e.what());
    }
  }
  if (!j.is_array()) fail(ErrorKind::input, path + ": expected a builtin name or an array of values");
  if (j.size() != frame.size()) {
    fail(ErrorKind::input, path + ": " + std::to_string(j.size()) + " values for " + std::to_string(frame.size()) + " frame points");
  }
  std::vector<complex> values;
  for (std::size_t i = 0; i < j.size(); ++i) values.push_back(complex_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  return ClassicalFunction("custom", std::move(values));
}

inline RealVector real_vector_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) fail(ErrorKind::input, path + ": expected an array of numbers");
  RealVector v(Eigen::Index(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(Eigen::Index(i)) = number_at(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

inline SymplecticForm form_from_json(const json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const auto colon = s.find(':');
    const std::string kind = s.substr(0, colon);
    const std::string digits = colon == std::string::npos ? "" : s.substr(colon + 1);
    if ((kind == "standard" || kind == "cotangent") && !digits.empty() && digits.size() < 4 &&
        digits.find_first_not_of("0123456789") == std::string::npos && std::stoul(digits) > 0) {
      const std::size_t n = std::stoul(digits);
      return kind == "standard" ? SymplecticForm::standard(n) : SymplecticForm::cotangent(n);
    }
    fail(ErrorKind::input, path + ": expected 'standard:n', 'cotangent:n' or a matrix, got '" + s + "'");
  }
  if (!j.is_array() || j.empty()) fail(ErrorKind::input, path + ": expected a square matrix");
  const std::size_t m = j.size();
  RealMatrix w(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t r = 0; r < m; ++r) {
    const RealVector row = real_vector_from_json(j[r], path + "[" + std::to_string(r) + "]");
    if (std::size_t(row.size()) != m) fail(ErrorKind::input, path + "[" + std::to_string(r) + "]: row length differs from row count");
    w.row(Eigen::Index(r)) = row.transpose();
  }
  try {
    return SymplecticForm(w);
  } catch (const Error& e) {
    fail(ErrorKind::input, path + ": " + e.what());
  }
}

inline HamiltonianSystem hamiltonian_from_json(const json& j, std::size_t n, std::string& name, const std::string& path) {
  double mass = 1.0, omega = 1.0, lambda = 1.0;
  if (j.is_string()) {
    name = j.get<std::string>();
  } else if (j.is_object()) {
    reject_unknown_keys(j, {"name", "mass", "omega", "lambda"}, path);
    name = string_at(require(j, "name", path), path + ".name");
    if (j.contains("mass")) mass = number_at(j["mass"], path + ".mass");
    if (j.contains("omega")) omega = number_at(j["omega"], path + ".omega");
    if (j.contains("lambda")) lambda = number_at(j["lambda"], path + ".lambda");
  } else {
    fail(ErrorKind::input, path + ": expected a builtin name or {\"name\": ...}");
  }
  if (name == "harmonic") return harmonic_oscillator(n, mass, omega);
  if (name == "free") return free_particle(n, mass);
  if (name == "quartic") return quartic_oscillator(n, mass, lambda);
  fail(ErrorKind::input, path + ": unknown Hamiltonian '" + name + "' (expected harmonic, free, quartic)");
}

inline Grid grid_from_json(const json& j, const std::string& path) {
  Grid g;
  if (!j.is_object()) fail(ErrorKind::input, path + ": expected an object");
  reject_unknown_keys(j, {"n", "a", "b", "hbar", "boundary"}, path);
  if (j.contains("n")) g.n_points = count_at(j["n"], path + ".n");
  if (j.contains("a")) g.a = number_at(j["a"], path + ".a");
  if (j.contains("b")) g.b = number_at(j["b"], path + ".b");
  if (j.contains("hbar")) g.hbar = number_at(j["hbar"], path + ".hbar");
  if (j.contains("boundary")) {
    const std::string b = string_at(j["boundary"], path + ".boundary");
    if (b == "periodic") {
      g.boundary = Boundary::periodic;
    } else if (b == "dirichlet") {
      g.boundary = Boundary::dirichlet;
    } else {
      fail(ErrorKind::input, path + ".boundary: expected periodic or dirichlet");
    }
  }
  try {
    g.validate();
  } catch (const Error& e) {
    fail(ErrorKind::input, path + ": " + e.what());
  }
  return g;
}

inline json function_values_to_json(const ClassicalFunction& f) {
  json values = json::array();
  const bool real = f.is_real();
  for (const complex& v : f.values()) values.push_back(real ? json(v.real()) : complex_to_json(v));
  return values;
}

inline json symbol_table(const FrameFamily& frame, const ClassicalFunction& symbol) {
  return json{{"points", frame.space().labels()}, {"values", function_values_to_json(symbol)}};
}

inline std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Strict parse and validation. `command` may be empty when the document
/// names it; when both are given they must agree.
inline Config parse_config(const json& doc, std::string_view command = {}, const Tolerances& tol = {}) {
  using namespace detail;
  if (!doc.is_object()) fail(ErrorKind::input, "$: config must be a JSON object");
  std::string cmd(command);
  if (doc.contains("command")) {
    const std::string named = string_at(doc["command"], "$.command");
    if (!cmd.empty() && named != cmd) fail(ErrorKind::input, "$.command: '" + named + "' does not match command line '" + cmd + "'");
    cmd = named;
  }
  if (cmd.empty()) fail(ErrorKind::input, "$.command: required key missing");

  if (cmd == "frame-check") {
    reject_unknown_keys(doc, {"command", "frame", "export"}, "$");
    bool export_frame = false;
    if (doc.contains("export")) {
      if (!doc["export"].is_boolean()) fail(ErrorKind::input, "$.export: expected a boolean");
      export_frame = doc["export"].get<bool>();
    }
    return Config{cmd, doc, FrameCheckJob{frame_from_json(require(doc, "frame", "$"), "$.frame", tol.density()), export_frame}};
  }
  if (cmd == "quantize" || cmd == "spectrum" || cmd == "symbol") {
    if (cmd == "symbol") {
      reject_unknown_keys(doc, {"command", "frame", "f", "csv"}, "$");
    } else {
      reject_unknown_keys(doc, {"command", "frame", "f"}, "$");
    }
    FrameFamily frame = frame_from_json(require(doc, "frame", "$"), "$.frame", tol.density());
    ClassicalFunction f = function_from_json(require(doc, "f", "$"), frame, "$.f");
    return Config{cmd, doc, QuantizeJob{std::move(frame), std::move(f), optional_path(doc, "csv")}};
  }
  if (cmd == "evolve") {
    reject_unknown_keys(doc, {"command", "hamiltonian", "x0", "dt", "steps", "integrator", "csv"}, "$");
    const RealVector x0v = real_vector_from_json(require(doc, "x0", "$"), "$.x0");
    if (x0v.size() < 2 || x0v.size() % 2 != 0) fail(ErrorKind::input, "$.x0: expected an even number (>= 2) of coordinates (q..., p...)");
    const std::size_t n = std::size_t(x0v.size()) / 2;
    std::string name;
    HamiltonianSystem sys = hamiltonian_from_json(require(doc, "hamiltonian", "$"), n, name, "$.hamiltonian");
    const double dt = number_at(require(doc, "dt", "$"), "$.dt");
    if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorKind::input, "$.dt: must be a positive finite number");
    const std::size_t steps = count_at(require(doc, "steps", "$"), "$.steps");
    if (steps < 1) fail(ErrorKind::input, "$.steps: must be >= 1");
    Integrator integrator = Integrator::stormer_verlet;
    if (doc.contains("integrator")) {
      const std::string s = string_at(doc["integrator"], "$.integrator");
      if (s == "stormer_verlet") {
        integrator = Integrator::stormer_verlet;
      } else if (s == "symplectic_euler") {
        integrator = Integrator::symplectic_euler;
      } else {
        fail(ErrorKind::input, "$.integrator: expected stormer_verlet or symplectic_euler");
      }
    }
    PhasePoint x0(x0v.data(), x0v.data() + x0v.size());
    return Config{cmd, doc, EvolveJob{std::move(sys), name, std::move(x0), dt, steps, integrator, optional_path(doc, "csv")}};
  }
  if (cmd == "symplectic") {
    reject_unknown_keys(doc, {"command", "action", "omega", "subspace"}, "$");
    const std::string action = string_at(require(doc, "action", "$"), "$.action");
    if (action != "classify" && action != "frame") fail(ErrorKind::input, "$.action: expected classify or frame");
    SymplecticForm form = form_from_json(require(doc, "omega", "$"), "$.omega");
    std::optional<Subspace> sub;
    if (action == "classify") {
      const json& s = require(doc, "subspace", "$");
      if (!s.is_array()) fail(ErrorKind::input, "$.subspace: expected an array of vectors");
      std::vector<RealVector> vectors;
      for (std::size_t i = 0; i < s.size(); ++i) vectors.push_back(real_vector_from_json(s[i], "$.subspace[" + std::to_string(i) + "]"));
      try {
        sub = Subspace(form.dim(), vectors);
      } catch (const Error& e) {
        fail(ErrorKind::input, std::string("$.subspace: ") + e.what());
      }
    } else if (doc.contains("subspace")) {
      fail(ErrorKind::input, "$.subspace: only valid with action classify");
    }
    return Config{cmd, doc, SymplecticJob{action, std::move(form), std::move(sub)}};
  }
  if (cmd == "commutator") {
    reject_unknown_keys(doc, {"command", "grid", "profile"}, "$");
    Grid g = doc.contains("grid") ? grid_from_json(doc["grid"], "$.grid") : Grid{};
    Profile profile = Profile::gaussian;
    if (doc.contains("profile")) {
      const std::string p = string_at(doc["profile"], "$.profile");
      if (p == "gaussian") {
        profile = Profile::gaussian;
      } else if (p == "checkerboard") {
        profile = Profile::checkerboard;
      } else {
        fail(ErrorKind::input, "$.profile: expected gaussian or checkerboard");
      }
    }
    return Config{cmd, doc, CommutatorJob{g, profile}};
  }
  fail(ErrorKind::input, "$.command: unknown command '" + cmd + "'");
}

inline Config parse_config(std::string_view text, std::string_view command = {}, const Tolerances& tol = {}) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::input, std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc, command, tol);
}

struct RunReport {
  json body;
  int exit_code = 0;
  std::optional<std::string> csv_path;
  std::string csv;
};

inline int exit_code_for(ErrorKind kind) {
  return kind == ErrorKind::input || kind == ErrorKind::dimension ? 2 : 1;
}

inline json error_json(ErrorKind kind, std::string_view message) {
  return json{{"kind", std::string(to_string(kind))}, {"message", std::string(message)}};
}

/// Dispatches a parsed config. Library errors propagate as qkit::Error.
inline RunReport run(const Config& config, const Tolerances& tol = {}) {
  RunReport report;
  json results = json::object();
  json residuals = json::object();

  if (const auto* job = std::get_if<FrameCheckJob>(&config.job)) {
    const double residual = resolution_residual(job->frame);
    residuals["resolution"] = residual;
    residuals["trace_identity"] = trace_identity_defect(job->frame);
    results["frame_id"] = job->frame.id();
    results["dim"] = job->frame.dim();
    results["n_points"] = job->frame.size();
    results["total_mass"] = job->frame.space().total_mass();
    results["is_density"] = job->frame.is_density();
    results["resolves_identity"] = residual <= tol.frame_reject();
    if (job->export_frame) results["frame"] = frame_to_json(job->frame);
    if (residual > tol.frame_reject()) {
      report.body["error"] = error_json(ErrorKind::precondition, "frame residual " + format_double(residual) + " exceeds " +
                                                                     format_double(tol.frame_reject()));
      report.exit_code = 1;
    }
  } else if (const auto* job = std::get_if<QuantizeJob>(&config.job)) {
    const QuantizationResult q = quantize(job->frame, job->f, tol.frame_reject(), tol.frame_warn());
    residuals["resolution_at_build"] = q.resolution_residual_at_build;
    results["frame_id"] = q.frame_id;
    results["function_id"] = q.function_id;
    results["hermitian"] = q.hermitian;
    if (config.command == "quantize") {
      results["A"] = operator_to_json(q.a);
      results["warnings"] = q.warnings;
      if (q.hermitian) results["spectrum"] = spectrum(q);
      if (job->frame.is_density()) results["lower_symbol"] = detail::symbol_table(job->frame, lower_symbol(job->frame, q.a));
    } else if (config.command == "spectrum") {
      results["spectrum"] = spectrum(q);
    } else {
      const ClassicalFunction symbol = lower_symbol(job->frame, q.a);
      results["function"] = detail::symbol_table(job->frame, job->f);
      results["lower_symbol"] = detail::symbol_table(job->frame, symbol);
      if (job->csv) {
        std::ostringstream os;
        os << "point,weight,f_re,f_im,lower_symbol_re,lower_symbol_im\n";
        for (std::size_t i = 0; i < job->frame.size(); ++i) {
          os << job->frame.space().labels()[i] << ',' << detail::csv_number(job->frame.space().weight(i)) << ','
             << detail::csv_number(job->f[i].real()) << ',' << detail::csv_number(job->f[i].imag()) << ','
             << detail::csv_number(symbol[i].real()) << ',' << detail::csv_number(symbol[i].imag()) << '\n';
        }
        report.csv_path = job->csv;
        report.csv = os.str();
      }
    }
  } else if (const auto* job = std::get_if<EvolveJob>(&config.job)) {
    const Trajectory traj = evolve(job->system, job->x0, job->dt, job->steps, job->integrator);
    results["hamiltonian"] = job->hamiltonian;
    results["integrator"] = std::string(to_string(job->integrator));
    results["n_states"] = traj.size();
    results["final_time"] = traj.times.back();
    results["final_state"] = traj.states.back();
    results["energy"] = json{{"initial", traj.energies.front()}, {"final", traj.energies.back()}};
    residuals["energy_drift"] = traj.max_energy_drift();
    if (traj.size() >= 3) residuals["energy_rate"] = observable_drift(job->system, job->system.hamiltonian(), traj);
    if (job->csv) {
      std::ostringstream os;
      traj.write_csv(os);
      report.csv_path = job->csv;
      report.csv = os.str();
    }
  } else if (const auto* job = std::get_if<SymplecticJob>(&config.job)) {
    results["action"] = job->action;
    results["dim"] = job->form.dim();
    if (job->action == "classify") {
      const SubspaceClass c = classify(job->form, *job->subspace);
      const Subspace perp = symplectic_complement(job->form, *job->subspace);
      results["tag"] = std::string(to_string(c.tag()));
      results["isotropic"] = c.isotropic;
      results["coisotropic"] = c.coisotropic;
      results["symplectic"] = c.symplectic;
      results["lagrangian"] = c.lagrangian;
      results["rank"] = job->subspace->rank();
      results["complement_rank"] = perp.rank();
      residuals["dimension_defect"] = double(job->subspace->rank() + perp.rank()) - double(job->form.dim());
    } else {
      const SymplecticFrame frame = symplectic_frame(job->form);
      json u = json::array(), v = json::array();
      double defect = 0.0;
      for (std::size_t i = 0; i < frame.u.size(); ++i) {
        u.push_back(std::vector<double>(frame.u[i].data(), frame.u[i].data() + frame.u[i].size()));
        v.push_back(std::vector<double>(frame.v[i].data(), frame.v[i].data() + frame.v[i].size()));
        for (std::size_t j = 0; j < frame.u.size(); ++j) {
          defect = std::max(defect, std::abs(eval_form(job->form, frame.u[i], frame.v[j]) - (i == j ? 1.0 : 0.0)));
          defect = std::max(defect, std::abs(eval_form(job->form, frame.u[i], frame.u[j])));
          defect = std::max(defect, std::abs(eval_form(job->form, frame.v[i], frame.v[j])));
        }
      }
      results["u"] = std::move(u);
      results["v"] = std::move(v);
      residuals["frame_relations"] = defect;
    }
  } else if (const auto* job = std::get_if<CommutatorJob>(&config.job)) {
    const Grid& g = job->grid;
    const Ket psi = grid_profile(g, job->profile);
    results["grid"] = json{{"n", g.n_points}, {"a", g.a}, {"b", g.b}, {"hbar", g.hbar}, {"boundary", std::string(to_string(g.boundary))}};
    results["profile"] = std::string(to_string(job->profile));
    results["spacing"] = g.spacing();
    residuals["commutator"] = commutator_residual(g, psi);
    const Operator cqp = commutator(position_operator(g), momentum_operator(g));
    residuals["averaging_identity"] = (cqp - complex(0.0, g.hbar) * averaging_operator(g)).max_abs();
  }

  report.body["command"] = config.command;
  report.body["config"] = config.source;
  report.body["results"] = std::move(results);
  report.body["residuals"] = std::move(residuals);
  return report;
}

/// parse_config + run with errors folded into the report. Adds version,
/// tolerance scale and wall time.
inline RunReport execute(std::string_view command, std::string_view text, const Tolerances& tol = {}) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  try {
    report = run(parse_config(text, command, tol), tol);
  } catch (const Error& e) {
    report = RunReport{};
    report.body["command"] = std::string(command);
    report.body["error"] = error_json(e.kind(), e.what());
    report.exit_code = exit_code_for(e.kind());
  } catch (const json::exception& e) {
    report = RunReport{};
    report.body["command"] = std::string(command);
    report.body["error"] = error_json(ErrorKind::input, e.what());
    report.exit_code = 2;
  }
  report.body["version"] = std::string(kVersion);
  report.body["tolerance_scale"] = tol.scale;
  const auto elapsed = std::chrono::steady_clock::now() - start;
  report.body["wall_time_ms"] = std::chrono::duration<double, std::milli>(elapsed).count();
  return report;
}

}  // namespace qkit::cli
