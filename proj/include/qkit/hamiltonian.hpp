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

// Hamiltonian mechanics on R^{2n} with coordinates ordered (q^1..q^n, p_1..p_n).
//
// Sign convention: the bracket is {f, g} = df/dp_k dg/dq^k - df/dq^k dg/dp_k,
// so {p_k, q^l} = delta_k^l and df/dt = {H, f}. The more common convention
// {q, p} = 1 is the negation of this bracket.

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qkit/error.hpp"
#include "qkit/symplectic.hpp"

namespace qkit {

using PhasePoint = std::vector<double>;

struct PhaseSpace {
  std::size_t n = 1;  // degrees of freedom

  std::size_t dim() const { return 2 * n; }
};

namespace detail {

inline std::string point_to_string(std::span<const double> x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.6g", i ? ", " : "", x[i]);
    s += buf;
  }
  return s + ")";
}

/// Fourth-order central difference of `f` along coordinate j, with step
/// h = eps^(1/3) * max(1, |x_j|).
template <class F>
double central_difference(const F& f, std::span<const double> x, std::size_t j) {
  static const double kStepScale = std::cbrt(std::numeric_limits<double>::epsilon());
  const double h = kStepScale * std::max(1.0, std::abs(x[j]));
  std::vector<double> y(x.begin(), x.end());
  auto at = [&](double offset) {
    y[j] = x[j] + offset;
    return f(std::span<const double>(y));
  };
  const double fp2 = at(2 * h), fp1 = at(h), fm1 = at(-h), fm2 = at(-2 * h);
  return (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
}

}  // namespace detail

/// A real-valued function on phase space, optionally with an analytic gradient.
///
/// An analytic gradient is checked against finite differences at 100
/// pseudo-random points of [-1, 1]^{2n} when the observable is built and must
/// agree within 1e-6 * max(1, |gradient|) componentwise.
class Observable {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;
  using Gradient = std::function<std::vector<double>(std::span<const double>)>;

  Observable(std::string label, std::size_t n, Evaluator eval, Gradient grad = {})
      : label_(std::move(label)), n_(n), eval_(std::move(eval)), grad_(std::move(grad)) {
    if (n_ == 0) fail(ErrorKind::input, "Observable '" + label_ + "': n must be >= 1");
    if (!eval_) fail(ErrorKind::input, "Observable '" + label_ + "': missing evaluator");
    if (grad_) validate_gradient();
  }

  const std::string& label() const { return label_; }
  std::size_t n() const { return n_; }
  bool has_analytic_gradient() const { return bool(grad_); }

  double operator()(std::span<const double> x) const {
    require_point(x);
    const double v = eval_(x);
    if (!std::isfinite(v)) fail(ErrorKind::numerical, "observable '" + label_ + "' is not finite at " + detail::point_to_string(x));
    return v;
  }

  std::vector<double> gradient(std::span<const double> x) const {
    require_point(x);
    std::vector<double> g;
    if (grad_) {
      g = grad_(x);
      if (g.size() != 2 * n_) {
        fail(ErrorKind::dimension, "observable '" + label_ + "': gradient has length " + std::to_string(g.size()) + ", expected " +
                                       std::to_string(2 * n_));
      }
    } else {
      g = numerical_gradient(x);
    }
    for (double gi : g)
      if (!std::isfinite(gi)) fail(ErrorKind::numerical, "observable '" + label_ + "': gradient not finite at " + detail::point_to_string(x));
    return g;
  }

  std::vector<double> numerical_gradient(std::span<const double> x) const {
    std::vector<double> g(2 * n_);
    for (std::size_t j = 0; j < 2 * n_; ++j) g[j] = detail::central_difference(eval_, x, j);
    return g;
  }

 private:
  void require_point(std::span<const double> x) const {
    if (x.size() != 2 * n_) {
      fail(ErrorKind::dimension, "observable '" + label_ + "': point has length " + std::to_string(x.size()) + ", expected " +
                                     std::to_string(2 * n_));
    }
  }

  void validate_gradient() const {
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> x(2 * n_);
    for (int trial = 0; trial < 100; ++trial) {
      for (double& xi : x) xi = uni(rng);
      const std::vector<double> analytic = grad_(x);
      if (analytic.size() != 2 * n_) fail(ErrorKind::input, "observable '" + label_ + "': gradient has the wrong length");
      const std::vector<double> numeric = numerical_gradient(x);
      for (std::size_t j = 0; j < analytic.size(); ++j) {
        if (!(std::abs(analytic[j] - numeric[j]) <= 1e-6 * std::max(1.0, std::abs(analytic[j])))) {
          fail(ErrorKind::input, "observable '" + label_ + "': analytic gradient component " + std::to_string(j) + " = " +
                                     std::to_string(analytic[j]) + " disagrees with finite differences (" + std::to_string(numeric[j]) +
                                     ") at " + detail::point_to_string(x));
        }
      }
    }
  }

  std::string label_;
  std::size_t n_;
  Evaluator eval_;
  Gradient grad_;
};

inline Observable constant_observable(std::size_t n, double c) {
  return Observable(
      "const", n, [c](std::span<const double>) { return c; }, [n](std::span<const double>) { return std::vector<double>(2 * n, 0.0); });
}

/// q^k, k in [0, n)
inline Observable position_observable(std::size_t n, std::size_t k) {
  if (k >= n) fail(ErrorKind::input, "position_observable: index out of range");
  return Observable(
      "q" + std::to_string(k + 1), n, [k](std::span<const double> x) { return x[k]; },
      [n, k](std::span<const double>) {
        std::vector<double> g(2 * n, 0.0);
        g[k] = 1.0;
        return g;
      });
}

/// p_k, k in [0, n)
inline Observable momentum_observable(std::size_t n, std::size_t k) {
  if (k >= n) fail(ErrorKind::input, "momentum_observable: index out of range");
  return Observable(
      "p" + std::to_string(k + 1), n, [n, k](std::span<const double> x) { return x[n + k]; },
      [n, k](std::span<const double>) {
        std::vector<double> g(2 * n, 0.0);
        g[n + k] = 1.0;
        return g;
      });
}

/// Polynomial in the 2n phase-space coordinates with exact derivatives.
class Polynomial {
 public:
  struct Term {
    double coefficient;
    std::vector<int> exponents;  // length 2n, (q..., p...)
  };

  explicit Polynomial(std::size_t n) : n_(n) {}

  Polynomial& add(double coefficient, std::vector<int> exponents) {
    if (exponents.size() != 2 * n_) fail(ErrorKind::dimension, "Polynomial::add: exponent vector has the wrong length");
    for (int e : exponents)
      if (e < 0) fail(ErrorKind::input, "Polynomial::add: negative exponent");
    terms_.push_back({coefficient, std::move(exponents)});
    return *this;
  }

  std::size_t n() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }

  double operator()(std::span<const double> x) const {
    double s = 0.0;
    for (const Term& t : terms_) {
      double m = t.coefficient;
      for (std::size_t i = 0; i < x.size(); ++i) m *= std::pow(x[i], t.exponents[i]);
      s += m;
    }
    return s;
  }

  std::vector<double> gradient(std::span<const double> x) const {
    std::vector<double> g(2 * n_, 0.0);
    for (const Term& t : terms_) {
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (t.exponents[j] == 0) continue;
        double m = t.coefficient * t.exponents[j];
        for (std::size_t i = 0; i < x.size(); ++i) m *= std::pow(x[i], i == j ? t.exponents[i] - 1 : t.exponents[i]);
        g[j] += m;
      }
    }
    return g;
  }

  Observable observable(std::string label) const {
    const Polynomial self = *this;
    return Observable(
        std::move(label), n_, [self](std::span<const double> x) { return self(x); },
        [self](std::span<const double> x) { return self.gradient(x); });
  }

 private:
  std::size_t n_;
  std::vector<Term> terms_;
};

namespace detail {
inline void require_compatible(const Observable& f, const Observable& g) {
  if (f.n() != g.n()) {
    fail(ErrorKind::dimension, "observables '" + f.label() + "' and '" + g.label() + "' live on different phase spaces");
  }
}
}  // namespace detail

/// {f, g}(x) = sum_k df/dp_k dg/dq^k - df/dq^k dg/dp_k. Exactly antisymmetric.
inline double poisson(const Observable& f, const Observable& g, std::span<const double> x) {
  detail::require_compatible(f, g);
  const std::size_t n = f.n();
  const std::vector<double> df = f.gradient(x);
  const std::vector<double> dg = g.gradient(x);
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += df[n + k] * dg[k] - df[k] * dg[n + k];
  return s;
}

/// The observable x -> {f, g}(x); its gradient falls back to finite differences.
inline Observable bracket(const Observable& f, const Observable& g) {
  detail::require_compatible(f, g);
  return Observable("{" + f.label() + "," + g.label() + "}", f.n(), [f, g](std::span<const double> x) { return poisson(f, g, x); });
}

/// X_f = (df/dp_1..df/dp_n, -df/dq^1..-df/dq^n).
inline std::vector<double> hamiltonian_vector_field(const Observable& f, std::span<const double> x) {
  const std::size_t n = f.n();
  const std::vector<double> df = f.gradient(x);
  std::vector<double> xf(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    xf[k] = df[n + k];
    xf[n + k] = -df[k];
  }
  return xf;
}

/// H = T + V with T depending on momenta only and V on positions only.
struct SeparableSplit {
  Observable kinetic;
  Observable potential;
};

class HamiltonianSystem {
 public:
  HamiltonianSystem(PhaseSpace space, Observable hamiltonian, std::optional<SeparableSplit> split = std::nullopt)
      : space_(space), h_(std::move(hamiltonian)), split_(std::move(split)) {
    if (h_.n() != space_.n) fail(ErrorKind::dimension, "HamiltonianSystem: Hamiltonian lives on the wrong phase space");
    if (split_) validate_split();
  }

  const PhaseSpace& space() const { return space_; }
  const Observable& hamiltonian() const { return h_; }
  const std::optional<SeparableSplit>& split() const { return split_; }

 private:
  void validate_split() const {
    detail::require_compatible(h_, split_->kinetic);
    detail::require_compatible(h_, split_->potential);
    std::mt19937_64 rng(0xc0ffeeULL);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> x(space_.dim());
    for (int trial = 0; trial < 100; ++trial) {
      for (double& xi : x) xi = uni(rng);
      const double h = h_(x);
      const double tv = split_->kinetic(x) + split_->potential(x);
      if (!(std::abs(h - tv) <= 1e-10 * std::max(1.0, std::abs(h)))) {
        fail(ErrorKind::input, "HamiltonianSystem: T + V differs from H at " + detail::point_to_string(x));
      }
    }
  }

  PhaseSpace space_;
  Observable h_;
  std::optional<SeparableSplit> split_;
};

/// Sum_k p_k^2 / (2 m) + m omega^2 (q^k)^2 / 2
inline HamiltonianSystem harmonic_oscillator(std::size_t n = 1, double mass = 1.0, double omega = 1.0) {
  if (!(mass > 0.0)) fail(ErrorKind::input, "harmonic_oscillator: mass must be > 0");
  Polynomial kinetic(n), potential(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<int> eq(2 * n, 0), ep(2 * n, 0);
    eq[k] = 2;
    ep[n + k] = 2;
    kinetic.add(0.5 / mass, ep);
    potential.add(0.5 * mass * omega * omega, eq);
  }
  Polynomial total = kinetic;
  for (const auto& t : potential.terms()) total.add(t.coefficient, t.exponents);
  return HamiltonianSystem(PhaseSpace{n}, total.observable("H"), SeparableSplit{kinetic.observable("T"), potential.observable("V")});
}

/// Sum_k p_k^2 / (2 m)
inline HamiltonianSystem free_particle(std::size_t n = 1, double mass = 1.0) {
  if (!(mass > 0.0)) fail(ErrorKind::input, "free_particle: mass must be > 0");
  Polynomial kinetic(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<int> ep(2 * n, 0);
    ep[n + k] = 2;
    kinetic.add(0.5 / mass, ep);
  }
  return HamiltonianSystem(PhaseSpace{n}, kinetic.observable("H"),
                           SeparableSplit{kinetic.observable("T"), constant_observable(n, 0.0)});
}

/// Sum_k p_k^2 / (2 m) + lambda (q^k)^4 / 4
inline HamiltonianSystem quartic_oscillator(std::size_t n = 1, double mass = 1.0, double lambda = 1.0) {
  if (!(mass > 0.0)) fail(ErrorKind::input, "quartic_oscillator: mass must be > 0");
  Polynomial kinetic(n), potential(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<int> eq(2 * n, 0), ep(2 * n, 0);
    eq[k] = 4;
    ep[n + k] = 2;
    kinetic.add(0.5 / mass, ep);
    potential.add(0.25 * lambda, eq);
  }
  Polynomial total = kinetic;
  for (const auto& t : potential.terms()) total.add(t.coefficient, t.exponents);
  return HamiltonianSystem(PhaseSpace{n}, total.observable("H"), SeparableSplit{kinetic.observable("T"), potential.observable("V")});
}

enum class Integrator { stormer_verlet, symplectic_euler };

inline std::string_view to_string(Integrator i) {
  return i == Integrator::stormer_verlet ? "stormer_verlet" : "symplectic_euler";
}

struct Trajectory {
  double dt = 0.0;
  std::vector<double> times;
  std::vector<PhasePoint> states;
  std::vector<double> energies;

  std::size_t size() const { return states.size(); }

  double max_energy_drift() const {
    double best = 0.0;
    for (double e : energies) best = std::max(best, std::abs(e - energies.front()));
    return best;
  }

  /// Columns t, q1..qn, p1..pn, H with 17 significant digits.
  void write_csv(std::ostream& os) const {
    const std::size_t n = states.empty() ? 0 : states.front().size() / 2;
    os << "t";
    for (std::size_t k = 0; k < n; ++k) os << ",q" << k + 1;
    for (std::size_t k = 0; k < n; ++k) os << ",p" << k + 1;
    os << ",H\n";
    char buf[40];
    auto put = [&](double v) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << buf;
    };
    for (std::size_t i = 0; i < states.size(); ++i) {
      put(times[i]);
      for (double xi : states[i]) {
        os << ',';
        put(xi);
      }
      os << ',';
      put(energies[i]);
      os << '\n';
    }
  }
};

namespace detail {

inline void verlet_step(const SeparableSplit& split, std::size_t n, PhasePoint& x, double dt) {
  std::vector<double> dv = split.potential.gradient(x);
  for (std::size_t k = 0; k < n; ++k) x[n + k] -= 0.5 * dt * dv[k];
  const std::vector<double> dt_kin = split.kinetic.gradient(x);
  for (std::size_t k = 0; k < n; ++k) x[k] += dt * dt_kin[n + k];
  dv = split.potential.gradient(x);
  for (std::size_t k = 0; k < n; ++k) x[n + k] -= 0.5 * dt * dv[k];
}

inline void euler_step_separable(const SeparableSplit& split, std::size_t n, PhasePoint& x, double dt) {
  const std::vector<double> dv = split.potential.gradient(x);
  for (std::size_t k = 0; k < n; ++k) x[n + k] -= dt * dv[k];
  const std::vector<double> dt_kin = split.kinetic.gradient(x);
  for (std::size_t k = 0; k < n; ++k) x[k] += dt * dt_kin[n + k];
}

// p' = p - dt dH/dq(q, p'), q' = q + dt dH/dp(q, p'); p' by fixed-point iteration.
inline void euler_step_implicit(const Observable& h, std::size_t n, PhasePoint& x, double dt, std::size_t step) {
  PhasePoint y = x;
  bool converged = false;
  for (int it = 0; it < 20 && !converged; ++it) {
    const std::vector<double> dh = h.gradient(y);
    double change = 0.0, size = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double next = x[n + k] - dt * dh[k];
      change = std::max(change, std::abs(next - y[n + k]));
      size = std::max(size, std::abs(next));
      y[n + k] = next;
    }
    converged = change <= 1e-12 * size;
  }
  if (!converged) {
    fail(ErrorKind::numerical, "evolve: implicit symplectic Euler did not converge in 20 iterations at step " + std::to_string(step));
  }
  const std::vector<double> dh = h.gradient(y);
  for (std::size_t k = 0; k < n; ++k) x[k] += dt * dh[n + k];
  for (std::size_t k = 0; k < n; ++k) x[n + k] = y[n + k];
}

}  // namespace detail

/// Applies one step of the chosen integrator in place.
inline void integrator_step(const HamiltonianSystem& sys, PhasePoint& x, double dt, Integrator integrator, std::size_t step = 0) {
  const std::size_t n = sys.space().n;
  if (integrator == Integrator::stormer_verlet) {
    if (!sys.split()) fail(ErrorKind::input, "evolve: stormer_verlet requires a separable Hamiltonian (T(p) + V(q))");
    detail::verlet_step(*sys.split(), n, x, dt);
  } else if (sys.split()) {
    detail::euler_step_separable(*sys.split(), n, x, dt);
  } else {
    detail::euler_step_implicit(sys.hamiltonian(), n, x, dt, step);
  }
}

/// Integrates Hamilton's equations for `steps` steps of size dt; times are
/// k * dt and the trajectory holds steps + 1 states including x0.
inline Trajectory evolve(const HamiltonianSystem& sys, const PhasePoint& x0, double dt, std::size_t steps, Integrator integrator) {
  if (x0.size() != sys.space().dim()) {
    fail(ErrorKind::dimension, "evolve: initial state has length " + std::to_string(x0.size()) + ", expected " +
                                   std::to_string(sys.space().dim()));
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorKind::input, "evolve: dt must be a positive finite number");
  if (steps < 1) fail(ErrorKind::input, "evolve: steps must be >= 1");
  if (integrator == Integrator::stormer_verlet && !sys.split()) {
    fail(ErrorKind::input, "evolve: stormer_verlet requires a separable Hamiltonian (T(p) + V(q))");
  }

  Trajectory traj;
  traj.dt = dt;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.energies.reserve(steps + 1);
  PhasePoint x = x0;
  traj.times.push_back(0.0);
  traj.states.push_back(x);
  traj.energies.push_back(sys.hamiltonian()(x));
  for (std::size_t k = 1; k <= steps; ++k) {
    integrator_step(sys, x, dt, integrator, k);
    for (double xi : x)
      if (!std::isfinite(xi)) fail(ErrorKind::numerical, "evolve: state became non-finite at step " + std::to_string(k));
    traj.times.push_back(double(k) * dt);
    traj.states.push_back(x);
    traj.energies.push_back(sys.hamiltonian()(x));
  }
  return traj;
}

/// max over interior samples of |centered df/dt - {H, f}|.
inline double observable_drift(const HamiltonianSystem& sys, const Observable& f, const Trajectory& traj) {
  if (traj.size() < 3) fail(ErrorKind::input, "observable_drift: trajectory needs at least 3 states");
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
    const double dfdt = (f(traj.states[k + 1]) - f(traj.states[k - 1])) / (2.0 * traj.dt);
    worst = std::max(worst, std::abs(dfdt - poisson(sys.hamiltonian(), f, traj.states[k])));
  }
  return worst;
}

/// |{f,{g,h}} - {{f,g},h} - {g,{f,h}}| at x.
inline double jacobi_residual(const Observable& f, const Observable& g, const Observable& h, std::span<const double> x) {
  const double r = poisson(f, bracket(g, h), x) - poisson(bracket(f, g), h, x) - poisson(g, bracket(f, h), x);
  return std::abs(r);
}

/// Jacobian dX_f/dx by finite differences of the Hamiltonian vector field.
inline RealMatrix vector_field_jacobian(const Observable& f, std::span<const double> x) {
  const std::size_t dim = x.size();
  RealMatrix jac(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    auto component = [&f, i](std::span<const double> y) { return hamiltonian_vector_field(f, y)[i]; };
    for (std::size_t j = 0; j < dim; ++j) jac(Eigen::Index(i), Eigen::Index(j)) = detail::central_difference(component, x, j);
  }
  return jac;
}

/// || [X_f, X_g](x) - X_{f,g}(x) ||_inf with [X, Y] = DY X - DX Y.
inline double vf_commutator_residual(const Observable& f, const Observable& g, std::span<const double> x) {
  detail::require_compatible(f, g);
  const std::size_t dim = x.size();
  const std::vector<double> xf = hamiltonian_vector_field(f, x);
  const std::vector<double> xg = hamiltonian_vector_field(g, x);
  const RealMatrix dxf = vector_field_jacobian(f, x);
  const RealMatrix dxg = vector_field_jacobian(g, x);
  const std::vector<double> xfg = hamiltonian_vector_field(bracket(f, g), x);
  const Eigen::Map<const RealVector> vf(xf.data(), Eigen::Index(dim)), vg(xg.data(), Eigen::Index(dim)),
      vfg(xfg.data(), Eigen::Index(dim));
  return (dxg * vf - dxf * vg - vfg).cwiseAbs().maxCoeff();
}

}  // namespace qkit
