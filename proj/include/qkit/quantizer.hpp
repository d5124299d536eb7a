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

// Integral quantization f -> A_f = sum_i nu_i f(x_i) M_i over a finite frame,
// with lower symbols, weak matrix elements and spectra.

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qkit/error.hpp"
#include "qkit/frames.hpp"
#include "qkit/hilbert.hpp"

namespace qkit {

/// Complex values on the points of a measure space, in index order.
class ClassicalFunction {
 public:
  ClassicalFunction(std::string label, std::vector<complex> values) : label_(std::move(label)), values_(std::move(values)) {}

  /// Builtins: `one`, `delta:<label>`, `index`, `cos`, `sin`. The last two are
  /// cos(2 pi i / m) and sin(2 pi i / m) for point index i of m.
  static ClassicalFunction builtin(std::string_view name, const DiscreteMeasureSpace& space) {
    const std::size_t m = space.size();
    std::vector<complex> v(m, 0.0);
    const std::string label(name);
    if (name == "one") {
      for (auto& x : v) x = 1.0;
    } else if (name == "index") {
      for (std::size_t i = 0; i < m; ++i) v[i] = double(i);
    } else if (name == "cos" || name == "sin") {
      for (std::size_t i = 0; i < m; ++i) v[i] = name == "cos" ? std::cos(polygon_angle(i, m)) : std::sin(polygon_angle(i, m));
    } else if (name.starts_with("delta:")) {
      v[space.index_of(std::string(name.substr(6)))] = 1.0;
    } else {
      fail(ErrorKind::input, "unknown builtin function '" + label + "' (expected one, delta:<point>, index, cos, sin)");
    }
    return ClassicalFunction(label, std::move(v));
  }

  static ClassicalFunction real(std::string label, const std::vector<double>& values) {
    return ClassicalFunction(std::move(label), std::vector<complex>(values.begin(), values.end()));
  }

  const std::string& label() const { return label_; }
  const std::vector<complex>& values() const { return values_; }
  complex operator[](std::size_t i) const { return values_.at(i); }
  std::size_t size() const { return values_.size(); }

  bool is_real() const {
    for (const auto& v : values_)
      if (v.imag() != 0.0) return false;
    return true;
  }

 private:
  std::string label_;
  std::vector<complex> values_;
};

struct QuantizationResult {
  Operator a;
  std::string frame_id;
  std::string function_id;
  bool hermitian = false;
  double resolution_residual_at_build = 0.0;
  std::vector<std::string> warnings;
};

/// Frames with residual above this are rejected by quantize.
inline constexpr double kFrameRejectResidual = 1e-8;
/// Frames with residual above this quantize with a warning attached.
inline constexpr double kFrameWarnResidual = 1e-10;

namespace detail {
inline void require_domain(const FrameFamily& frame, const ClassicalFunction& f, const char* where) {
  if (f.size() != frame.size()) {
    fail(ErrorKind::input, std::string(where) + ": function '" + f.label() + "' has " + std::to_string(f.size()) + " values but frame '" +
                               frame.id() + "' has " + std::to_string(frame.size()) + " points");
  }
}
}  // namespace detail

/// A_f = sum_i nu_i f(x_i) M_i, accumulated in point order.
inline QuantizationResult quantize(const FrameFamily& frame, const ClassicalFunction& f, double reject_residual = kFrameRejectResidual,
                                   double warn_residual = kFrameWarnResidual) {
  detail::require_domain(frame, f, "quantize");
  const double residual = resolution_residual(frame);
  if (residual > reject_residual) {
    fail(ErrorKind::precondition, "quantize: frame '" + frame.id() + "' does not resolve the identity (residual " + std::to_string(residual) +
                                      " > " + std::to_string(reject_residual) + ")");
  }
  const auto d = Eigen::Index(frame.dim());
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  bool frame_hermitian = true;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const complex w = frame.space().weight(i) * f[i];
    const ComplexMatrix& m = frame.op(i).entries();
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index c = 0; c < d; ++c) sum(r, c) += w * m(r, c);
    frame_hermitian = frame_hermitian && frame.op(i).hermiticity_defect() <= 1e-12;
  }
  QuantizationResult out{Operator(std::move(sum)), frame.id(), f.label(), false, residual, {}};
  out.hermitian = f.is_real() && frame_hermitian;
  if (residual > warn_residual) {
    out.warnings.push_back("frame resolution residual " + std::to_string(residual) + " exceeds " + std::to_string(warn_residual));
  }
  return out;
}

/// Lower symbol f(x_i) = tr(M_i A), the frame mean value of A. Unweighted.
inline ClassicalFunction lower_symbol(const FrameFamily& frame, const Operator& a, std::string label = "lower_symbol") {
  if (!frame.is_density()) fail(ErrorKind::precondition, "lower_symbol: frame '" + frame.id() + "' is not a density frame");
  frame.op(0).require_dim(a.dim(), "lower_symbol");
  const bool real = a.hermiticity_defect() <= 1e-12 * std::max(1.0, a.max_abs());
  const std::size_t d = a.dim();
  std::vector<complex> values;
  values.reserve(frame.size());
  for (std::size_t n = 0; n < frame.size(); ++n) {
    complex t = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k) t += frame.op(n)(i, k) * a(k, i);
    values.push_back(real ? complex(t.real(), 0.0) : t);
  }
  return ClassicalFunction(std::move(label), std::move(values));
}

/// B_f(psi1, psi2) = sum_i nu_i <psi1|M_i|psi2> f(x_i).
inline complex weak_matrix_element(const FrameFamily& frame, const ClassicalFunction& f, const Ket& psi1, const Ket& psi2) {
  detail::require_domain(frame, f, "weak_matrix_element");
  if (psi1.dim() != frame.dim() || psi2.dim() != frame.dim()) {
    fail(ErrorKind::dimension, "weak_matrix_element: kets of dims " + std::to_string(psi1.dim()) + ", " + std::to_string(psi2.dim()) +
                                   " against a frame of dim " + std::to_string(frame.dim()));
  }
  complex s = 0.0;
  for (std::size_t i = 0; i < frame.size(); ++i) s += frame.space().weight(i) * inner(psi1, frame.op(i).apply(psi2)) * f[i];
  return s;
}

/// Descending eigenvalues of a Hermitian A_f.
inline std::vector<double> spectrum(const QuantizationResult& result) {
  if (!result.hermitian) {
    fail(ErrorKind::precondition, "spectrum: A_f for '" + result.function_id +
                                      "' is not Hermitian (complex-valued function or non-Hermitian frame); "
                                      "complex spectra are not supported");
  }
  return eig_hermitian(result.a, 1e-12).eigenvalues;
}

}  // namespace qkit
