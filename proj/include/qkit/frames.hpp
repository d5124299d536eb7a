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

// Finite measure spaces and operator-valued frames x -> M(x) resolving the
// identity: sum_i nu_i M_i = I.
//
// Why polygon frames need N >= 3: with |n> = (cos t_n, sin t_n), t_n = 2 pi n / N,
//   (2/N) sum_n |n><n| = I + (1/N) [[C, S], [S, -C]],
//   C = sum_n cos(2 t_n),  S = sum_n sin(2 t_n).
// Both sums are over the N-th roots of unity raised to the power 2 and vanish
// unless N divides 2. For N = 2 they equal 2 and 0, so the sum is diag(2, 0)
// and the residual is exactly 1.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <unordered_map>
#include <vector>

#include "qkit/error.hpp"
#include "qkit/hilbert.hpp"

namespace qkit {

/// Finite point set with positive weights. Labels are opaque, unique strings;
/// all arithmetic works with indices in label order. Total mass is not
/// required to be 1.
class DiscreteMeasureSpace {
 public:
  DiscreteMeasureSpace(std::vector<std::string> labels, std::vector<double> weights)
      : labels_(std::move(labels)), weights_(std::move(weights)) {
    if (labels_.empty()) fail(ErrorKind::input, "DiscreteMeasureSpace: needs at least one point");
    if (labels_.size() != weights_.size()) {
      fail(ErrorKind::dimension, "DiscreteMeasureSpace: " + std::to_string(labels_.size()) + " labels but " +
                                     std::to_string(weights_.size()) + " weights");
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
        fail(ErrorKind::input, "DiscreteMeasureSpace: weight of point '" + labels_[i] + "' must be positive and finite");
      }
      if (!index_.emplace(labels_[i], i).second) fail(ErrorKind::input, "DiscreteMeasureSpace: duplicate label '" + labels_[i] + "'");
    }
  }

  /// Points labelled "0".."m-1", each of weight w.
  static DiscreteMeasureSpace uniform(std::size_t m, double w) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < m; ++i) labels.push_back(std::to_string(i));
    return DiscreteMeasureSpace(std::move(labels), std::vector<double>(m, w));
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_.at(i); }

  std::size_t index_of(const std::string& label) const {
    const auto it = index_.find(label);
    if (it == index_.end()) fail(ErrorKind::input, "unknown point label '" + label + "'");
    return it->second;
  }

  double total_mass() const {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<double> weights_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// sum_i nu_i f(x_i) in index order.
inline complex integrate(const DiscreteMeasureSpace& space, std::span<const complex> values) {
  if (values.size() != space.size()) {
    fail(ErrorKind::input, "integrate: function has " + std::to_string(values.size()) + " values for " + std::to_string(space.size()) +
                               " points");
  }
  complex s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += space.weight(i) * values[i];
  return s;
}

/// One operator M_i per point of a measure space, all of a common dimension.
class FrameFamily {
 public:
  /// A claimed density frame is checked operator by operator within `density_tol`.
  FrameFamily(std::string id, DiscreteMeasureSpace space, std::vector<Operator> operators, bool is_density, double density_tol = 1e-10)
      : id_(std::move(id)), space_(std::move(space)), operators_(std::move(operators)), is_density_(is_density) {
    if (operators_.size() != space_.size()) {
      fail(ErrorKind::dimension, "FrameFamily: " + std::to_string(operators_.size()) + " operators for " + std::to_string(space_.size()) +
                                     " points");
    }
    for (std::size_t i = 1; i < operators_.size(); ++i) operators_[0].require_dim(operators_[i].dim(), "FrameFamily");
    if (is_density_) {
      for (std::size_t i = 0; i < operators_.size(); ++i) {
        const DensityReport r = density_check(operators_[i], density_tol);
        if (!r.passed) {
          fail(ErrorKind::precondition, "FrameFamily: operator at '" + space_.labels()[i] + "' is not a density matrix (trace defect " +
                                            std::to_string(r.trace_defect) + ", min eigenvalue " + std::to_string(r.min_eigenvalue) +
                                            ", hermiticity defect " + std::to_string(r.hermiticity_defect) + ")");
        }
      }
    }
  }

  const std::string& id() const { return id_; }
  const DiscreteMeasureSpace& space() const { return space_; }
  const std::vector<Operator>& operators() const { return operators_; }
  const Operator& op(std::size_t i) const { return operators_.at(i); }
  bool is_density() const { return is_density_; }
  std::size_t dim() const { return operators_.front().dim(); }
  std::size_t size() const { return operators_.size(); }

 private:
  std::string id_;
  DiscreteMeasureSpace space_;
  std::vector<Operator> operators_;
  bool is_density_;
};

inline double polygon_angle(std::size_t n, std::size_t sides) {
  return 2.0 * std::numbers::pi * double(n) / double(sides);
}

/// The N projectors |2 pi n / N><2 pi n / N| on R^2, for any N >= 1.
inline std::vector<Operator> polygon_projectors(std::size_t sides) {
  std::vector<Operator> ops;
  ops.reserve(sides);
  for (std::size_t n = 0; n < sides; ++n) ops.push_back(angle_projector(polygon_angle(n, sides)));
  return ops;
}

/// Regular N-gon frame on R^2 with uniform weights 2/N. N = 5 is the sea-star.
inline FrameFamily polygon_frame(std::size_t sides) {
  if (sides < 3) {
    fail(ErrorKind::input, "polygon_frame: N = " + std::to_string(sides) +
                               " does not resolve the identity; N >= 3 is required (for N = 2, P_0 + P_pi = diag(2, 0), residual 1)");
  }
  return FrameFamily("polygon:" + std::to_string(sides), DiscreteMeasureSpace::uniform(sides, 2.0 / double(sides)),
                     polygon_projectors(sides), true);
}

/// Coherent-state frame M_i = |x_i><x_i| with |x_i> = sum_k phi_k(x_i) |e_k>.
///
/// `functions[k][i]` is phi_k at point i. The family must be orthonormal in
/// L^2(X, nu) within 1e-10, which is exactly what makes the frame resolve the
/// identity.
inline FrameFamily cs_frame(const DiscreteMeasureSpace& space, const std::vector<std::vector<complex>>& functions,
                            std::string id = "cs") {
  const std::size_t d = functions.size();
  const std::size_t m = space.size();
  if (d == 0) fail(ErrorKind::input, "cs_frame: needs at least one function");
  for (std::size_t k = 0; k < d; ++k) {
    if (functions[k].size() != m) {
      fail(ErrorKind::input, "cs_frame: function " + std::to_string(k) + " has " + std::to_string(functions[k].size()) +
                                 " values for " + std::to_string(m) + " points");
    }
  }
  double gram_defect = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < d; ++k) {
      complex g = 0.0;
      for (std::size_t i = 0; i < m; ++i) g += space.weight(i) * functions[j][i] * std::conj(functions[k][i]);
      gram_defect = std::max(gram_defect, std::abs(g - (j == k ? 1.0 : 0.0)));
    }
  }
  if (gram_defect > 1e-10) {
    fail(ErrorKind::input, "cs_frame: functions are not orthonormal in L^2(X, nu) (Gram matrix defect " + std::to_string(gram_defect) + ")");
  }
  std::vector<Operator> ops;
  ops.reserve(m);
  std::vector<complex> comps(d);
  bool unit = true;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < d; ++k) comps[k] = functions[k][i];
    const Ket x{std::span<const complex>(comps)};
    unit = unit && std::abs(x.norm() - 1.0) <= 1e-10;
    ops.push_back(outer(x, x));
  }
  // Only unit vectors |x_i> give unit-trace M_i.
  return FrameFamily(std::move(id), space, std::move(ops), unit);
}

/// || sum_i nu_i M_i - I ||_max, summed in index order.
inline double resolution_residual(const FrameFamily& frame) {
  const auto d = Eigen::Index(frame.dim());
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const double w = frame.space().weight(i);
    const ComplexMatrix& m = frame.op(i).entries();
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index c = 0; c < d; ++c) sum(r, c) += w * m(r, c);
  }
  return (Operator(std::move(sum)) - Operator::identity(frame.dim())).max_abs();
}

/// |sum_i nu_i tr M_i - d|
inline double trace_identity_defect(const FrameFamily& frame) {
  complex s = 0.0;
  for (std::size_t i = 0; i < frame.size(); ++i) s += frame.space().weight(i) * frame.op(i).trace();
  return std::abs(s - double(frame.dim()));
}

/// Values v_i indexed by points, normalized against the measure: sum nu_i v_i = 1.
struct ProbabilityDistribution {
  std::vector<double> values;
  std::vector<double> weights;

  double normalization() const {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * values[i];
    return s;
  }
};

/// v_n = tr(M_{n0} M_n). For polygon frames v_n = cos^2(2 pi (n0 - n) / N).
inline ProbabilityDistribution overlap_probability(const FrameFamily& frame, std::size_t n0) {
  if (!frame.is_density()) fail(ErrorKind::precondition, "overlap_probability: frame '" + frame.id() + "' is not a density frame");
  if (n0 >= frame.size()) fail(ErrorKind::input, "overlap_probability: point index " + std::to_string(n0) + " out of range");
  ProbabilityDistribution p;
  p.weights = frame.space().weights();
  p.values.reserve(frame.size());
  const Operator& ref = frame.op(n0);
  const std::size_t d = frame.dim();
  for (std::size_t n = 0; n < frame.size(); ++n) {
    complex t = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k) t += ref(i, k) * frame.op(n)(k, i);
    p.values.push_back(t.real());
  }
  const double total = p.normalization();
  if (std::abs(total - 1.0) > 1e-10) {
    fail(ErrorKind::precondition, "overlap_probability: frame '" + frame.id() + "' does not resolve the identity (normalization " +
                                      std::to_string(total) + ")");
  }
  return p;
}

inline ProbabilityDistribution overlap_probability(const FrameFamily& frame, const std::string& n0) {
  return overlap_probability(frame, frame.space().index_of(n0));
}

}  // namespace qkit
