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

// Linear symplectic geometry on R^{2n}: constant forms, symplectic
// complements, subspace classification, Darboux frames and canonical maps.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qkit/error.hpp"

namespace qkit {

using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Relative singular-value cutoff used by every rank and subset test.
inline constexpr double kRankTolerance = 1e-10;

namespace detail {

inline std::size_t numerical_rank(const Eigen::JacobiSVD<RealMatrix>& svd, double rel) {
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel * sv(0)) ++r;
  return r;
}

inline std::size_t numerical_rank(const RealMatrix& m, double rel = kRankTolerance) {
  if (m.size() == 0) return 0;
  return numerical_rank(Eigen::JacobiSVD<RealMatrix>(m), rel);
}

/// Orthonormal basis (as columns) of {x : m x = 0}.
inline RealMatrix null_space(const RealMatrix& m, double rel = kRankTolerance) {
  if (m.rows() == 0) return RealMatrix::Identity(m.cols(), m.cols());
  Eigen::JacobiSVD<RealMatrix> svd(m, Eigen::ComputeFullV);
  const auto r = Eigen::Index(numerical_rank(svd, rel));
  return svd.matrixV().rightCols(m.cols() - r);
}

/// Orthonormal basis (as columns) of the column space of m.
inline RealMatrix column_basis(const RealMatrix& m, double rel = kRankTolerance) {
  if (m.cols() == 0) return RealMatrix(m.rows(), 0);
  Eigen::JacobiSVD<RealMatrix> svd(m, Eigen::ComputeThinU);
  const auto r = Eigen::Index(numerical_rank(svd, rel));
  return svd.matrixU().leftCols(r);
}

inline RealMatrix hstack(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

}  // namespace detail

/// A constant symplectic form omega on R^{2n}: antisymmetric and nonsingular.
class SymplecticForm {
 public:
  explicit SymplecticForm(const RealMatrix& omega) {
    if (omega.rows() != omega.cols()) fail(ErrorKind::dimension, "SymplecticForm: matrix is not square");
    if (omega.rows() == 0 || omega.rows() % 2 != 0) {
      fail(ErrorKind::input, "SymplecticForm: dimension must be even and positive, got " + std::to_string(omega.rows()));
    }
    const double scale = std::max(1.0, omega.cwiseAbs().maxCoeff());
    const double defect = 0.5 * (omega + omega.transpose()).cwiseAbs().maxCoeff();
    if (defect > 1e-12 * scale) {
      fail(ErrorKind::input, "SymplecticForm: matrix is not antisymmetric (defect " + std::to_string(defect) + ")");
    }
    omega_ = 0.5 * (omega - omega.transpose());
    Eigen::JacobiSVD<RealMatrix> svd(omega_);
    const auto& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > 1e-10 * sv(0))) {
      fail(ErrorKind::input, "SymplecticForm: matrix is singular (singular value ratio " +
                                 std::to_string(sv(sv.size() - 1) / sv(0)) + ")");
    }
  }

  /// [[0, I], [-I, 0]] in (q, p) order, so Omega(e_i, e_{n+i}) = 1.
  static SymplecticForm standard(std::size_t n) {
    const auto k = Eigen::Index(n);
    RealMatrix w = RealMatrix::Zero(2 * k, 2 * k);
    w.topRightCorner(k, k) = RealMatrix::Identity(k, k);
    w.bottomLeftCorner(k, k) = -RealMatrix::Identity(k, k);
    return SymplecticForm(w);
  }

  /// The cotangent-bundle form dp_k ^ dq^k written in (q, p) order, i.e.
  /// Omega(a, b) = a_p . b_q - a_q . b_p. This is the negative of standard(n)
  /// and is the form under which Omega(X_f, X_g) equals the Poisson bracket
  /// {f, g} = df/dp dg/dq - df/dq dg/dp used by the hamiltonian module.
  static SymplecticForm cotangent(std::size_t n) { return SymplecticForm(RealMatrix(-standard(n).matrix())); }

  std::size_t dim() const { return std::size_t(omega_.rows()); }
  std::size_t n() const { return dim() / 2; }
  const RealMatrix& matrix() const { return omega_; }

 private:
  RealMatrix omega_;
};

/// Omega(a, b) = a^T omega b.
inline double eval_form(const SymplecticForm& form, const RealVector& a, const RealVector& b) {
  if (std::size_t(a.size()) != form.dim() || std::size_t(b.size()) != form.dim()) {
    fail(ErrorKind::dimension, "eval_form: vectors of length " + std::to_string(a.size()) + " and " + std::to_string(b.size()) +
                                   " against a form on R^" + std::to_string(form.dim()));
  }
  return a.dot(form.matrix() * b);
}

/// A linear subspace of R^m stored by an orthonormal basis (QR of the
/// spanning set). Span equality and inclusion are rank tests.
class Subspace {
 public:
  /// Columns of `span` are the spanning vectors; they must be independent.
  Subspace(std::size_t ambient_dim, const RealMatrix& span) : ambient_(ambient_dim) {
    if (std::size_t(span.rows()) != ambient_dim && span.cols() > 0) {
      fail(ErrorKind::dimension, "Subspace: vectors of length " + std::to_string(span.rows()) + " in R^" + std::to_string(ambient_dim));
    }
    if (span.cols() == 0) {
      basis_ = RealMatrix(Eigen::Index(ambient_dim), 0);
      return;
    }
    const std::size_t r = detail::numerical_rank(span);
    if (r != std::size_t(span.cols())) {
      fail(ErrorKind::input, "Subspace: spanning set of " + std::to_string(span.cols()) + " vectors has rank " + std::to_string(r));
    }
    Eigen::HouseholderQR<RealMatrix> qr(span);
    basis_ = qr.householderQ() * RealMatrix::Identity(span.rows(), span.cols());
  }

  Subspace(std::size_t ambient_dim, const std::vector<RealVector>& vectors) : Subspace(ambient_dim, stack(ambient_dim, vectors)) {}

  static Subspace zero(std::size_t ambient_dim) { return Subspace(ambient_dim, RealMatrix(Eigen::Index(ambient_dim), 0)); }
  static Subspace whole(std::size_t ambient_dim) {
    return Subspace(ambient_dim, RealMatrix(RealMatrix::Identity(Eigen::Index(ambient_dim), Eigen::Index(ambient_dim))));
  }

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t rank() const { return std::size_t(basis_.cols()); }
  const RealMatrix& basis() const { return basis_; }

 private:
  static RealMatrix stack(std::size_t ambient_dim, const std::vector<RealVector>& vectors) {
    RealMatrix m(static_cast<Eigen::Index>(ambient_dim), Eigen::Index(vectors.size()));
    for (std::size_t j = 0; j < vectors.size(); ++j) {
      if (std::size_t(vectors[j].size()) != ambient_dim) {
        fail(ErrorKind::dimension, "Subspace: vector " + std::to_string(j) + " has length " + std::to_string(vectors[j].size()) +
                                       ", expected " + std::to_string(ambient_dim));
      }
      m.col(Eigen::Index(j)) = vectors[j];
    }
    return m;
  }

  std::size_t ambient_;
  RealMatrix basis_;
};

namespace detail {
inline void require_same_space(const Subspace& f, const Subspace& g, const char* where) {
  if (f.ambient_dim() != g.ambient_dim()) {
    fail(ErrorKind::dimension, std::string(where) + ": subspaces of R^" + std::to_string(f.ambient_dim()) + " and R^" +
                                   std::to_string(g.ambient_dim()));
  }
}
inline void require_form_space(const SymplecticForm& form, const Subspace& f, const char* where) {
  if (form.dim() != f.ambient_dim()) {
    fail(ErrorKind::dimension, std::string(where) + ": subspace of R^" + std::to_string(f.ambient_dim()) + " against a form on R^" +
                                   std::to_string(form.dim()));
  }
}
}  // namespace detail

/// g subset-of f
inline bool contains(const Subspace& f, const Subspace& g) {
  detail::require_same_space(f, g, "contains");
  if (g.rank() == 0) return true;
  return detail::numerical_rank(detail::hstack(f.basis(), g.basis())) == f.rank();
}

inline bool same_span(const Subspace& f, const Subspace& g) { return f.rank() == g.rank() && contains(f, g); }

inline Subspace subspace_sum(const Subspace& f, const Subspace& g) {
  detail::require_same_space(f, g, "subspace_sum");
  return Subspace(f.ambient_dim(), detail::column_basis(detail::hstack(f.basis(), g.basis())));
}

inline Subspace intersection(const Subspace& f, const Subspace& g) {
  detail::require_same_space(f, g, "intersection");
  if (f.rank() == 0 || g.rank() == 0) return Subspace::zero(f.ambient_dim());
  // f x = g y  <=>  [F, -G] (x, y) = 0
  const RealMatrix kernel = detail::null_space(detail::hstack(f.basis(), RealMatrix(-g.basis())));
  const RealMatrix vectors = f.basis() * kernel.topRows(f.basis().cols());
  return Subspace(f.ambient_dim(), detail::column_basis(vectors));
}

/// F^perp = { a : Omega(a, b) = 0 for all b in F }.
inline Subspace symplectic_complement(const SymplecticForm& form, const Subspace& f) {
  detail::require_form_space(form, f, "symplectic_complement");
  if (f.rank() == 0) return Subspace::whole(form.dim());
  const RealMatrix constraints = (form.matrix() * f.basis()).transpose();
  return Subspace(form.dim(), detail::null_space(constraints));
}

enum class SubspaceTag { isotropic, coisotropic, lagrangian, symplectic, generic };

inline std::string_view to_string(SubspaceTag tag) {
  switch (tag) {
    case SubspaceTag::isotropic: return "isotropic";
    case SubspaceTag::coisotropic: return "coisotropic";
    case SubspaceTag::lagrangian: return "lagrangian";
    case SubspaceTag::symplectic: return "symplectic";
    case SubspaceTag::generic: return "generic";
  }
  return "generic";
}

struct SubspaceClass {
  bool isotropic = false;    // F in F^perp
  bool coisotropic = false;  // F^perp in F
  bool symplectic = false;   // F cap F^perp = {0}
  bool lagrangian = false;   // F = F^perp

  /// Most specific tag: lagrangian, then isotropic, coisotropic, symplectic.
  /// The zero subspace is reported as isotropic, the whole space as coisotropic.
  SubspaceTag tag() const {
    if (lagrangian) return SubspaceTag::lagrangian;
    if (isotropic) return SubspaceTag::isotropic;
    if (coisotropic) return SubspaceTag::coisotropic;
    if (symplectic) return SubspaceTag::symplectic;
    return SubspaceTag::generic;
  }
};

inline SubspaceClass classify(const SymplecticForm& form, const Subspace& f) {
  detail::require_form_space(form, f, "classify");
  const Subspace perp = symplectic_complement(form, f);
  SubspaceClass c;
  c.isotropic = contains(perp, f);
  c.coisotropic = contains(f, perp);
  c.lagrangian = c.isotropic && c.coisotropic;
  // dim F + dim F^perp = 2n, so a trivial intersection means the two span R^{2n}.
  c.symplectic = intersection(f, perp).rank() == 0;
  return c;
}

struct SymplecticFrame {
  std::vector<RealVector> u;
  std::vector<RealVector> v;
};

/// Darboux basis by symplectic Gram-Schmidt over the standard basis vectors.
///
/// Each round takes the remaining candidate of largest norm as u (normalized),
/// the candidate maximizing |Omega(u, .)| as its partner, rescaled so that
/// Omega(u, v) = 1, and projects the other candidates onto the symplectic
/// complement of span{u, v}. Each pair is then rescaled to |u| = |v|. Ties go
/// to the lowest candidate index, so the standard form returns u_i = e_i,
/// v_i = e_{n+i}.
inline SymplecticFrame symplectic_frame(const SymplecticForm& form) {
  const std::size_t dim = form.dim();
  const RealMatrix& w = form.matrix();
  const double scale = w.cwiseAbs().maxCoeff();
  auto omega = [&](const RealVector& a, const RealVector& b) { return a.dot(w * b); };

  std::vector<RealVector> candidates;
  for (std::size_t i = 0; i < dim; ++i) candidates.push_back(RealVector::Unit(Eigen::Index(dim), Eigen::Index(i)));

  SymplecticFrame frame;
  // Removes the span{u_j, v_j} components of c for every pair found so far.
  // Two passes, as in reorthogonalized Gram-Schmidt.
  auto project = [&](RealVector c) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < frame.u.size(); ++j) {
        const double cu = omega(c, frame.u[j]);
        const double cv = omega(c, frame.v[j]);
        c += -cv * frame.u[j] + cu * frame.v[j];
      }
    }
    return c;
  };

  while (!candidates.empty()) {
    std::size_t iu = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i)
      if (candidates[i].norm() > candidates[iu].norm()) iu = i;
    RealVector u = project(candidates[iu]);
    const double unorm = u.norm();
    if (unorm == 0.0) fail(ErrorKind::numerical, "symplectic_frame: candidate vectors collapsed to zero");
    u /= unorm;

    std::size_t iw = candidates.size();
    double best = -1.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (i == iu) continue;
      const double pairing = std::abs(omega(u, candidates[i]));
      if (pairing > best) {
        best = pairing;
        iw = i;
      }
    }
    if (iw == candidates.size()) fail(ErrorKind::numerical, "symplectic_frame: no partner candidate left");
    RealVector partner = project(candidates[iw]);
    const double pairing = omega(u, partner);
    if (std::abs(pairing) <= 1e-12 * scale * partner.norm()) {
      fail(ErrorKind::numerical, "symplectic_frame: no partner with nonzero pairing (|Omega(u, w)| = " + std::to_string(std::abs(pairing)) +
                                     ", form scale " + std::to_string(scale) + "); the form is numerically degenerate");
    }
    // Rescale the pair to equal norms; Omega(u, v) = 1 is unchanged and
    // near-degenerate forms no longer produce one huge partner.
    RealVector v = partner / pairing;
    const double balance = std::sqrt(v.norm());
    frame.u.push_back(u * balance);
    frame.v.push_back(v / balance);

    std::vector<RealVector> rest;
    for (std::size_t i = 0; i < candidates.size(); ++i)
      if (i != iu && i != iw) rest.push_back(project(candidates[i]));
    candidates = std::move(rest);
  }
  return frame;
}

struct CanonicalCheck {
  bool canonical = false;
  double defect = 0.0;  // ||S^T omega S - omega||_max
};

inline CanonicalCheck is_canonical(const SymplecticForm& form, const RealMatrix& s, double tol) {
  if (std::size_t(s.rows()) != form.dim() || std::size_t(s.cols()) != form.dim()) {
    fail(ErrorKind::dimension, "is_canonical: map is " + std::to_string(s.rows()) + "x" + std::to_string(s.cols()) + ", form is on R^" +
                                   std::to_string(form.dim()));
  }
  CanonicalCheck c;
  c.defect = (s.transpose() * form.matrix() * s - form.matrix()).cwiseAbs().maxCoeff();
  c.canonical = c.defect <= tol;
  return c;
}

}  // namespace qkit
