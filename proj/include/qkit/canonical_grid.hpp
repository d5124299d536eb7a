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

// Canonical quantization on a uniform midpoint grid: q = multiplication by x,
// p = -i hbar D with D the centered-difference matrix.
//
// For interior rows ([q, p] psi)_j = i hbar (psi_{j+1} + psi_{j-1}) / 2, i.e.
// [q, p] = i hbar Avg with Avg the nearest-neighbour average. On a periodic
// grid the two wrap-around entries differ: there x_{j+1} - x_j is (N - 1) h
// instead of -h, giving [q, p]_{N-1,0} = -i hbar (N - 1) / 2 and
// [q, p]_{0,N-1} = the same value, in place of i hbar / 2.

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qkit/error.hpp"
#include "qkit/hilbert.hpp"

namespace qkit {

enum class Boundary { periodic, dirichlet };

inline std::string_view to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "dirichlet"; }

struct Grid {
  std::size_t n_points = 128;
  double a = -8.0;
  double b = 8.0;
  Boundary boundary = Boundary::periodic;
  double hbar = 1.0;

  double spacing() const { return (b - a) / double(n_points); }
  /// x_j = a + (j + 1/2) h
  double node(std::size_t j) const { return a + (double(j) + 0.5) * spacing(); }

  void validate() const {
    if (n_points < 8) fail(ErrorKind::input, "Grid: n_points must be >= 8, got " + std::to_string(n_points));
    if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) fail(ErrorKind::input, "Grid: need finite a < b");
    if (!(hbar >= 0.0) || !std::isfinite(hbar)) fail(ErrorKind::input, "Grid: hbar must be finite and >= 0");
  }
};

inline Operator position_operator(const Grid& g) {
  g.validate();
  std::vector<complex> diag(g.n_points);
  for (std::size_t j = 0; j < g.n_points; ++j) diag[j] = g.node(j);
  return Operator::diagonal(diag);
}

/// Real antisymmetric centered-difference matrix (wraps for periodic grids).
inline ComplexMatrix difference_matrix(const Grid& g) {
  g.validate();
  const auto n = Eigen::Index(g.n_points);
  const double c = 1.0 / (2.0 * g.spacing());
  ComplexMatrix d = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j + 1 < n) d(j, j + 1) = c;
    if (j > 0) d(j, j - 1) = -c;
  }
  if (g.boundary == Boundary::periodic) {
    d(n - 1, 0) = c;
    d(0, n - 1) = -c;
  }
  return d;
}

inline Operator momentum_operator(const Grid& g) {
  return Operator(ComplexMatrix(complex(0.0, -g.hbar) * difference_matrix(g)));
}

/// Nearest-neighbour averaging matrix, Avg_{j,j+-1} = 1/2 (wrapping when periodic).
inline Operator averaging_operator(const Grid& g) {
  g.validate();
  const auto n = Eigen::Index(g.n_points);
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j + 1 < n) m(j, j + 1) = 0.5;
    if (j > 0) m(j, j - 1) = 0.5;
  }
  if (g.boundary == Boundary::periodic) {
    m(n - 1, 0) = 0.5;
    m(0, n - 1) = 0.5;
  }
  return Operator(std::move(m));
}

/// || ([q, p] - i hbar I) psi || / || psi ||, psi of unit norm. In dirichlet
/// mode the outer two cells on each side must vanish (|psi_j| <= 1e-12 max|psi|).
inline double commutator_residual(const Grid& g, const Ket& psi) {
  g.validate();
  if (psi.dim() != g.n_points) {
    fail(ErrorKind::dimension, "commutator_residual: state has " + std::to_string(psi.dim()) + " components for " +
                                   std::to_string(g.n_points) + " grid points");
  }
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-10) fail(ErrorKind::input, "commutator_residual: state must have unit norm, got " + std::to_string(norm));
  if (g.boundary == Boundary::dirichlet) {
    double peak = 0.0;
    for (std::size_t j = 0; j < psi.dim(); ++j) peak = std::max(peak, std::abs(psi[j]));
    const std::size_t n = g.n_points;
    for (std::size_t j : {std::size_t{0}, std::size_t{1}, n - 2, n - 1}) {
      if (std::abs(psi[j]) > 1e-12 * peak) {
        fail(ErrorKind::input, "commutator_residual: state touches the dirichlet boundary at cell " + std::to_string(j));
      }
    }
  }
  const Operator q = position_operator(g);
  const Operator p = momentum_operator(g);
  const Operator defect = commutator(q, p) - complex(0.0, g.hbar) * Operator::identity(g.n_points);
  return defect.apply(psi).norm() / norm;
}

enum class Profile { gaussian, checkerboard };

inline std::string_view to_string(Profile p) { return p == Profile::gaussian ? "gaussian" : "checkerboard"; }

/// Normalized test states: exp(-x^2 / 2) sampled on the nodes, or (-1)^j.
/// Dirichlet grids get their outer two cells on each side zeroed.
inline Ket grid_profile(const Grid& g, Profile profile) {
  g.validate();
  const std::size_t n = g.n_points;
  std::vector<complex> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = g.node(j);
    v[j] = profile == Profile::gaussian ? std::exp(-0.5 * x * x) : (j % 2 == 0 ? 1.0 : -1.0);
  }
  if (g.boundary == Boundary::dirichlet) v[0] = v[1] = v[n - 2] = v[n - 1] = 0.0;
  return Ket(std::span<const complex>(v)).normalized();
}

}  // namespace qkit
