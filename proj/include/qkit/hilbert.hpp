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

// Finite-dimensional complex Hilbert space: kets, dense operators, traces and
// a cyclic Jacobi eigensolver for Hermitian matrices.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qkit/error.hpp"

namespace qkit {

using complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::Matrix<complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// A column vector in C^d, d >= 1.
class Ket {
 public:
  explicit Ket(ComplexVector components) : v_(std::move(components)) {
    if (v_.size() < 1) fail(ErrorKind::dimension, "Ket: dimension must be >= 1");
  }
  Ket(std::initializer_list<complex> components) : Ket(ComplexVector(Eigen::Index(components.size()))) {
    Eigen::Index i = 0;
    for (const auto& c : components) v_(i++) = c;
  }
  explicit Ket(std::span<const complex> components) : Ket(ComplexVector(Eigen::Index(components.size()))) {
    for (std::size_t i = 0; i < components.size(); ++i) v_(Eigen::Index(i)) = components[i];
  }

  static Ket basis(std::size_t dim, std::size_t k) {
    if (k >= dim) fail(ErrorKind::input, "Ket::basis: index " + std::to_string(k) + " >= dim " + std::to_string(dim));
    ComplexVector v = ComplexVector::Zero(Eigen::Index(dim));
    v(Eigen::Index(k)) = 1.0;
    return Ket(std::move(v));
  }

  std::size_t dim() const { return std::size_t(v_.size()); }
  complex operator[](std::size_t i) const { return v_(Eigen::Index(i)); }
  const ComplexVector& components() const { return v_; }

  double norm() const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < v_.size(); ++i) s += std::norm(v_(i));
    return std::sqrt(s);
  }
  bool is_unit(double tol = 1e-12) const { return std::abs(norm() * norm() - 1.0) <= tol; }
  Ket normalized() const {
    const double n = norm();
    if (n == 0.0) fail(ErrorKind::numerical, "Ket::normalized: zero vector");
    return Ket(ComplexVector(v_ / n));
  }

  friend Ket operator+(const Ket& a, const Ket& b) {
    if (a.dim() != b.dim()) fail(ErrorKind::dimension, "Ket sum: dims " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
    return Ket(ComplexVector(a.v_ + b.v_));
  }
  friend Ket operator*(complex s, const Ket& a) { return Ket(ComplexVector(s * a.v_)); }

 private:
  ComplexVector v_;
};

/// A dense square operator on C^d.
class Operator {
 public:
  explicit Operator(ComplexMatrix entries) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols()) {
      fail(ErrorKind::dimension, "Operator: matrix is " + std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()) + ", not square");
    }
    if (m_.rows() < 1) fail(ErrorKind::dimension, "Operator: dimension must be >= 1");
  }
  Operator(std::initializer_list<std::initializer_list<complex>> rows) : Operator(from_rows(rows)) {}

  static Operator zero(std::size_t dim) { return Operator(ComplexMatrix::Zero(Eigen::Index(dim), Eigen::Index(dim))); }
  static Operator identity(std::size_t dim) { return Operator(ComplexMatrix::Identity(Eigen::Index(dim), Eigen::Index(dim))); }
  static Operator diagonal(std::span<const complex> diag) {
    Operator out = zero(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) out.m_(Eigen::Index(i), Eigen::Index(i)) = diag[i];
    return out;
  }

  std::size_t dim() const { return std::size_t(m_.rows()); }
  complex operator()(std::size_t i, std::size_t j) const { return m_(Eigen::Index(i), Eigen::Index(j)); }
  const ComplexMatrix& entries() const { return m_; }

  Operator adjoint() const { return Operator(ComplexMatrix(m_.adjoint())); }

  /// Trace, summed in index order.
  complex trace() const {
    complex t = 0.0;
    for (Eigen::Index i = 0; i < m_.rows(); ++i) t += m_(i, i);
    return t;
  }

  /// max_{ij} |A_ij|
  double max_abs() const {
    double best = 0.0;
    for (Eigen::Index i = 0; i < m_.rows(); ++i)
      for (Eigen::Index j = 0; j < m_.cols(); ++j) best = std::max(best, std::abs(m_(i, j)));
    return best;
  }

  double hermiticity_defect() const {
    double best = 0.0;
    for (Eigen::Index i = 0; i < m_.rows(); ++i)
      for (Eigen::Index j = 0; j < m_.cols(); ++j) best = std::max(best, std::abs(m_(i, j) - std::conj(m_(j, i))));
    return best;
  }

  Ket apply(const Ket& k) const {
    require_dim(k.dim(), "Operator::apply");
    return Ket(ComplexVector(m_ * k.components()));
  }

  friend Operator operator+(const Operator& a, const Operator& b) {
    a.require_dim(b.dim(), "Operator sum");
    return Operator(ComplexMatrix(a.m_ + b.m_));
  }
  friend Operator operator-(const Operator& a, const Operator& b) {
    a.require_dim(b.dim(), "Operator difference");
    return Operator(ComplexMatrix(a.m_ - b.m_));
  }
  friend Operator operator*(const Operator& a, const Operator& b) {
    a.require_dim(b.dim(), "Operator product");
    return Operator(ComplexMatrix(a.m_ * b.m_));
  }
  friend Operator operator*(complex s, const Operator& a) { return Operator(ComplexMatrix(s * a.m_)); }

  void require_dim(std::size_t other, const char* where) const {
    if (other != dim()) {
      fail(ErrorKind::dimension, std::string(where) + ": dimension mismatch (" + std::to_string(dim()) + " vs " + std::to_string(other) + ")");
    }
  }

 private:
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<complex>> rows) {
    const auto n = Eigen::Index(rows.size());
    ComplexMatrix m(n, n);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
      if (Eigen::Index(row.size()) != n) fail(ErrorKind::dimension, "Operator: ragged or non-square initializer");
      Eigen::Index j = 0;
      for (const auto& c : row) m(i, j++) = c;
      ++i;
    }
    return m;
  }

  ComplexMatrix m_;
};

/// <a|b>, conjugate-linear in the first argument.
inline complex inner(const Ket& a, const Ket& b) {
  if (a.dim() != b.dim()) {
    fail(ErrorKind::dimension, "inner: dimension mismatch (" + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
  }
  complex s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

/// |a><b|
inline Operator outer(const Ket& a, const Ket& b) {
  if (a.dim() != b.dim()) {
    fail(ErrorKind::dimension, "outer: dimension mismatch (" + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
  }
  const auto d = Eigen::Index(a.dim());
  ComplexMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = a[std::size_t(i)] * std::conj(b[std::size_t(j)]);
  return Operator(std::move(m));
}

inline Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

/// Unit vector (cos t, sin t) in R^2 viewed as a ket in C^2.
inline Ket angle_ket(double theta) { return Ket{std::cos(theta), std::sin(theta)}; }

/// Orthogonal projector |theta><theta| on R^2.
inline Operator angle_projector(double theta) {
  const Ket k = angle_ket(theta);
  return outer(k, k);
}

/// Rotation R(theta) in SO(2); R(theta)|phi> = |phi + theta>.
inline Operator rotation(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return Operator{{c, -s}, {s, c}};
}

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // descending
  std::vector<Ket> eigenvectors;    // orthonormal, eigenvectors[k] pairs with eigenvalues[k]
};

/// Spectrum of a Hermitian operator by cyclic complex Jacobi rotations.
///
/// The Hermiticity precondition is ||A - A^dagger||_max <= tol * ||A||_max.
/// Eigenvalues come back in descending order; ties keep the order in which
/// the sweep left them on the diagonal. Each eigenvector is rephased so its
/// first component of modulus > 1e-12 is real and positive.
inline EigenDecomposition eig_hermitian(const Operator& op, double tol = 1e-12) {
  const double scale = op.max_abs();
  const double defect = op.hermiticity_defect();
  if (defect > tol * scale) {
    fail(ErrorKind::precondition, "eig_hermitian: operator is not Hermitian (defect " + std::to_string(defect) +
                                      " > " + std::to_string(tol * scale) + ")");
  }
  const auto d = Eigen::Index(op.dim());
  ComplexMatrix a = 0.5 * (op.entries() + op.entries().adjoint());
  ComplexMatrix v = ComplexMatrix::Identity(d, d);

  auto off_norm2 = [&] {
    double s = 0.0;
    for (Eigen::Index p = 0; p < d; ++p)
      for (Eigen::Index q = p + 1; q < d; ++q) s += std::norm(a(p, q));
    return s;
  };
  const double frob = a.norm();
  const double eps = std::numeric_limits<double>::epsilon();

  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (off_norm2() <= (eps * frob) * (eps * frob)) break;
    for (Eigen::Index p = 0; p < d; ++p) {
      for (Eigen::Index q = p + 1; q < d; ++q) {
        const complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const complex phase = apq / mag;
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // U = diag(1, conj(phase)) * [[c, s], [-s, c]] restricted to the (p, q) plane.
        const complex upp = c, upq = s, uqp = -s * std::conj(phase), uqq = c * std::conj(phase);
        for (Eigen::Index k = 0; k < d; ++k) {
          const complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
          const complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * upp + vkq * uqp;
          v(k, q) = vkp * upq + vkq * uqq;
        }
        for (Eigen::Index k = 0; k < d; ++k) {
          const complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  if (sweep == kMaxSweeps) fail(ErrorKind::numerical, "eig_hermitian: Jacobi sweeps did not converge");

  std::vector<std::size_t> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(Eigen::Index(x), Eigen::Index(x)).real() > a(Eigen::Index(y), Eigen::Index(y)).real(); });

  EigenDecomposition out;
  out.eigenvalues.reserve(order.size());
  out.eigenvectors.reserve(order.size());
  for (const std::size_t k : order) {
    out.eigenvalues.push_back(a(Eigen::Index(k), Eigen::Index(k)).real());
    ComplexVector col = v.col(Eigen::Index(k));
    for (Eigen::Index i = 0; i < d; ++i) {
      if (std::abs(col(i)) > 1e-12) {
        col *= std::conj(col(i)) / std::abs(col(i));
        col(i) = std::abs(col(i));
        break;
      }
    }
    out.eigenvectors.emplace_back(std::move(col));
  }
  return out;
}

struct DensityReport {
  bool passed = false;
  double hermiticity_defect = 0.0;  // ||M - M^dagger||_max
  double min_eigenvalue = 0.0;      // of the Hermitian part
  double trace_defect = 0.0;        // |tr M - 1|

  double positivity_defect() const { return std::max(0.0, -min_eigenvalue); }
};

/// Diagnoses whether M is a density matrix: Hermitian, positive semidefinite
/// and of unit trace, each within `tol`. Never throws on a bad operator.
inline DensityReport density_check(const Operator& m, double tol = 1e-10) {
  DensityReport r;
  r.hermiticity_defect = m.hermiticity_defect();
  const Operator herm(ComplexMatrix(0.5 * (m.entries() + m.entries().adjoint())));
  const auto spectrum = eig_hermitian(herm, 1.0);
  r.min_eigenvalue = spectrum.eigenvalues.back();
  r.trace_defect = std::abs(m.trace() - 1.0);
  r.passed = r.hermiticity_defect <= tol && r.min_eigenvalue >= -tol && r.trace_defect <= tol;
  return r;
}

/// tr(state * A) for a density operator `state`.
inline complex expectation(const Operator& state, const Operator& observable, double tol = 1e-10) {
  state.require_dim(observable.dim(), "expectation");
  const DensityReport r = density_check(state, tol);
  if (!r.passed) {
    fail(ErrorKind::precondition, "expectation: state is not a density operator (trace defect " + std::to_string(r.trace_defect) +
                                      ", min eigenvalue " + std::to_string(r.min_eigenvalue) + ", hermiticity defect " +
                                      std::to_string(r.hermiticity_defect) + ")");
  }
  complex t = 0.0;
  const std::size_t d = state.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) t += state(i, k) * observable(k, i);
  return t;
}

}  // namespace qkit
