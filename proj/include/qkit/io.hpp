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

// JSON encodings of frames and operators, and a deterministic pretty printer
// (sorted keys, doubles with 17 significant digits).

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"

#include "qkit/error.hpp"
#include "qkit/frames.hpp"
#include "qkit/hilbert.hpp"

namespace qkit {

using json = nlohmann::json;

/// "%.17g", always with a decimal point or exponent; -0 prints as 0.0 and
/// non-finite values as null.
inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  if (v == 0.0) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

namespace detail {

inline bool is_scalar(const json& j) { return !j.is_array() && !j.is_object(); }

inline void dump_scalar(const json& j, std::string& out) {
  if (j.is_number_float()) {
    out += format_double(j.get<double>());
  } else {
    out += j.dump();
  }
}

inline void dump_pretty(const json& j, int indent, std::string& out) {
  const std::string pad(std::size_t(indent) * 2, ' ');
  const std::string inner_pad(std::size_t(indent + 1) * 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {  // std::map order: sorted keys
      if (!first) out += ",\n";
      first = false;
      out += inner_pad + json(it.key()).dump() + ": ";
      dump_pretty(it.value(), indent + 1, out);
    }
    out += "\n" + pad + "}";
  } else if (j.is_array()) {
    bool flat = true;
    for (const auto& e : j) flat = flat && is_scalar(e);
    bool pairs = !flat;
    for (const auto& e : j) pairs = pairs && e.is_array() && e.size() == 2 && is_scalar(e[0]) && is_scalar(e[1]);
    if (j.empty()) {
      out += "[]";
    } else if (flat || pairs) {
      // Scalars and [re, im] pairs stay on one line.
      out += "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ", ";
        if (flat) {
          dump_scalar(j[i], out);
        } else {
          out += "[";
          dump_scalar(j[i][0], out);
          out += ", ";
          dump_scalar(j[i][1], out);
          out += "]";
        }
      }
      out += "]";
    } else {
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner_pad;
        dump_pretty(j[i], indent + 1, out);
      }
      out += "\n" + pad + "]";
    }
  } else {
    dump_scalar(j, out);
  }
}

}  // namespace detail

inline std::string dump_deterministic(const json& j) {
  std::string out;
  detail::dump_pretty(j, 0, out);
  out += "\n";
  return out;
}

inline json complex_to_json(complex c) { return json::array({c.real(), c.imag()}); }

/// Accepts a number (real) or a [re, im] pair.
inline complex complex_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  fail(ErrorKind::input, path + ": expected a number or a [re, im] pair");
}

/// Nested rows of [re, im] pairs.
inline json operator_to_json(const Operator& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < a.dim(); ++j) row.push_back(complex_to_json(a(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Accepts nested rows or a flat row-major list of d^2 entries.
inline Operator operator_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(ErrorKind::input, path + ": expected a non-empty array");
  const bool nested = j[0].is_array() && !(j[0].size() == 2 && j[0][0].is_number());
  std::vector<complex> flat;
  std::size_t d = 0;
  if (nested) {
    d = j.size();
    for (std::size_t r = 0; r < d; ++r) {
      const std::string rp = path + "[" + std::to_string(r) + "]";
      if (!j[r].is_array() || j[r].size() != d) fail(ErrorKind::input, rp + ": expected a row of " + std::to_string(d) + " entries");
      for (std::size_t c = 0; c < d; ++c) flat.push_back(complex_from_json(j[r][c], rp + "[" + std::to_string(c) + "]"));
    }
  } else {
    const auto root = std::size_t(std::llround(std::sqrt(double(j.size()))));
    if (root * root != j.size()) fail(ErrorKind::input, path + ": flat operator needs a square number of entries, got " + std::to_string(j.size()));
    d = root;
    for (std::size_t k = 0; k < j.size(); ++k) flat.push_back(complex_from_json(j[k], path + "[" + std::to_string(k) + "]"));
  }
  ComplexMatrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) m(Eigen::Index(r), Eigen::Index(c)) = flat[r * d + c];
  return Operator(std::move(m));
}

/// {"id", "points", "weights", "operators", "is_density"}; each operator is a
/// flat row-major list of [re, im] pairs.
inline json frame_to_json(const FrameFamily& frame) {
  json ops = json::array();
  for (const Operator& m : frame.operators()) {
    json flat = json::array();
    for (std::size_t r = 0; r < m.dim(); ++r)
      for (std::size_t c = 0; c < m.dim(); ++c) flat.push_back(complex_to_json(m(r, c)));
    ops.push_back(std::move(flat));
  }
  return json{{"id", frame.id()},
              {"points", frame.space().labels()},
              {"weights", frame.space().weights()},
              {"operators", std::move(ops)},
              {"is_density", frame.is_density()}};
}

inline void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) fail(ErrorKind::input, path + "." + it.key() + ": unknown key");
  }
}

/// Frame from either the "polygon:N" shorthand or the object encoding.
inline FrameFamily frame_from_json(const json& j, const std::string& path, double density_tol = 1e-10) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.rfind("polygon:", 0) == 0) {
      const std::string digits = s.substr(8);
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 6) {
        fail(ErrorKind::input, path + ": malformed polygon shorthand '" + s + "'");
      }
      try {
        return polygon_frame(std::stoul(digits));
      } catch (const Error& e) {
        fail(ErrorKind::input, path + ": " + e.what());
      }
    }
    fail(ErrorKind::input, path + ": unknown frame shorthand '" + s + "' (expected polygon:N)");
  }
  if (!j.is_object()) fail(ErrorKind::input, path + ": expected a frame object or a 'polygon:N' string");
  reject_unknown_keys(j, {"id", "points", "weights", "operators", "is_density"}, path);
  for (const char* key : {"points", "weights", "operators", "is_density"})
    if (!j.contains(key)) fail(ErrorKind::input, path + "." + key + ": required key missing");
  if (!j["points"].is_array()) fail(ErrorKind::input, path + ".points: expected an array");
  if (j.contains("id") && !j["id"].is_string()) fail(ErrorKind::input, path + ".id: expected a string");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < j["points"].size(); ++i) {
    const json& p = j["points"][i];
    if (p.is_string()) {
      labels.push_back(p.get<std::string>());
    } else if (p.is_number_integer()) {
      labels.push_back(std::to_string(p.get<long long>()));
    } else {
      fail(ErrorKind::input, path + ".points[" + std::to_string(i) + "]: expected a string or integer label");
    }
  }
  std::vector<double> weights;
  if (!j["weights"].is_array()) fail(ErrorKind::input, path + ".weights: expected an array");
  for (std::size_t i = 0; i < j["weights"].size(); ++i) {
    if (!j["weights"][i].is_number()) fail(ErrorKind::input, path + ".weights[" + std::to_string(i) + "]: expected a number");
    weights.push_back(j["weights"][i].get<double>());
  }
  if (!j["operators"].is_array()) fail(ErrorKind::input, path + ".operators: expected an array");
  std::vector<Operator> ops;
  for (std::size_t i = 0; i < j["operators"].size(); ++i) {
    ops.push_back(operator_from_json(j["operators"][i], path + ".operators[" + std::to_string(i) + "]"));
  }
  if (!j["is_density"].is_boolean()) fail(ErrorKind::input, path + ".is_density: expected a boolean");
  const std::string id = j.contains("id") ? j["id"].get<std::string>() : std::string("custom");
  return FrameFamily(id, DiscreteMeasureSpace(std::move(labels), std::move(weights)), std::move(ops), j["is_density"].get<bool>(),
                     density_tol);
}

}  // namespace qkit
