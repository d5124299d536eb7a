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

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qkit/quantizer.hpp"

namespace qkit {
namespace {

FrameFamily basis_frame() {
  return cs_frame(DiscreteMeasureSpace::uniform(2, 1.0), {{1.0, 0.0}, {0.0, 1.0}}, "basis");
}

std::vector<double> random_real(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

TEST(Quantize, TrivialCommutativeQuantization) {
  const QuantizationResult r = quantize(basis_frame(), ClassicalFunction::real("f", {3.0, -2.0}));
  EXPECT_EQ(r.a.entries(), (Operator{{3.0, 0.0}, {0.0, -2.0}}.entries()));
  EXPECT_TRUE(r.hermitian);
  EXPECT_EQ(r.frame_id, "basis");
  EXPECT_EQ(r.function_id, "f");
  EXPECT_EQ(spectrum(r), (std::vector<double>{3.0, -2.0}));
}

TEST(Quantize, ConstantOneGivesIdentity) {
  const FrameFamily f = polygon_frame(5);
  const QuantizationResult r = quantize(f, ClassicalFunction::builtin("one", f.space()));
  EXPECT_LE((r.a - Operator::identity(2)).max_abs(), 1e-12);
  EXPECT_LE((r.a - Operator::identity(2)).max_abs(), r.resolution_residual_at_build + 1e-16);
  EXPECT_TRUE(r.warnings.empty());
  const std::vector<double> s = spectrum(r);
  EXPECT_NEAR(s[0], 1.0, 1e-12);
  EXPECT_NEAR(s[1], 1.0, 1e-12);
}

TEST(Quantize, DeltaAtZero) {
  const FrameFamily f = polygon_frame(5);
  const QuantizationResult r = quantize(f, ClassicalFunction::builtin("delta:0", f.space()));
  // Direct five-term sum: only the n = 0 term survives, 0.4 |0><0|.
  Operator oracle = Operator::zero(2);
  const std::vector<double> delta{1, 0, 0, 0, 0};
  for (std::size_t n = 0; n < 5; ++n) oracle = oracle + (0.4 * delta[n]) * angle_projector(polygon_angle(n, 5));
  EXPECT_LE((r.a - oracle).max_abs(), 1e-15);
  EXPECT_NEAR(r.a(0, 0).real(), 0.4, 1e-15);
  EXPECT_EQ(std::abs(r.a(0, 1)), 0.0);
  const auto [l0, l1] = oracle::symmetric2x2_eigenvalues(r.a(0, 0).real(), r.a(0, 1).real(), r.a(1, 1).real());
  const std::vector<double> s = spectrum(r);
  EXPECT_NEAR(s[0], l0, 1e-14);
  EXPECT_NEAR(s[1], l1, 1e-14);
  EXPECT_NEAR(s[0], 0.4, 1e-14);
  EXPECT_NEAR(s[1], 0.0, 1e-14);
}

TEST(Quantize, DomainMismatchAndBadFrame) {
  const FrameFamily f = polygon_frame(5);
  EXPECT_THROW(quantize(f, ClassicalFunction::real("short", {1.0, 2.0})), Error);
  const FrameFamily two("polygon:2", DiscreteMeasureSpace::uniform(2, 1.0), polygon_projectors(2), true);
  try {
    quantize(two, ClassicalFunction::real("one", {1.0, 1.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::precondition);
  }
}

TEST(Quantize, WarnsBetweenThresholds) {
  // Perturb a weight so the residual lands between 1e-10 and 1e-8.
  std::vector<double> w(5, 0.4);
  w[0] += 5e-9;
  const FrameFamily base = polygon_frame(5);
  const FrameFamily f("perturbed", DiscreteMeasureSpace(base.space().labels(), w), base.operators(), true);
  const double res = resolution_residual(f);
  ASSERT_GT(res, kFrameWarnResidual);
  ASSERT_LT(res, kFrameRejectResidual);
  const QuantizationResult r = quantize(f, ClassicalFunction::builtin("one", f.space()));
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(Quantize, ComplexFunctionIsNotHermitian) {
  const FrameFamily f = polygon_frame(5);
  const ClassicalFunction g("complex", {complex(0, 1), 0.0, 0.0, 0.0, 0.0});
  const QuantizationResult r = quantize(f, g);
  EXPECT_FALSE(r.hermitian);
  EXPECT_THROW(spectrum(r), Error);
}

TEST(Quantize, Linearity) {
  std::mt19937_64 rng(11);
  const FrameFamily f = polygon_frame(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<complex> a(7), b(7), mix(7);
    const complex alpha(u(rng), u(rng)), beta(u(rng), u(rng));
    for (std::size_t i = 0; i < 7; ++i) {
      a[i] = complex(u(rng), u(rng));
      b[i] = complex(u(rng), u(rng));
      mix[i] = alpha * a[i] + beta * b[i];
    }
    const Operator lhs = quantize(f, ClassicalFunction("mix", mix)).a;
    const Operator rhs = alpha * quantize(f, ClassicalFunction("a", a)).a + beta * quantize(f, ClassicalFunction("b", b)).a;
    EXPECT_LE((lhs - rhs).max_abs(), 1e-12);
  }
}

TEST(Quantize, PositivityAndNormBound) {
  std::mt19937_64 rng(12);
  for (std::size_t n : {3u, 5u, 16u}) {
    const FrameFamily f = polygon_frame(n);
    for (int trial = 0; trial < 50; ++trial) {
      const std::vector<double> v = random_real(rng, n, 0.0, 3.0);
      const QuantizationResult r = quantize(f, ClassicalFunction::real("f", v));
      EXPECT_LE(r.a.hermiticity_defect(), 1e-12);
      const std::vector<double> s = spectrum(r);
      EXPECT_GE(s.back(), -1e-12);
      const double fmax = *std::max_element(v.begin(), v.end());
      EXPECT_LE(s.front(), fmax * f.space().total_mass() * 1.0 + 1e-12);
    }
  }
}

TEST(LowerSymbol, Examples) {
  const FrameFamily f = polygon_frame(5);
  const ClassicalFunction one = lower_symbol(f, Operator::identity(2));
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(one[i].real(), 1.0, 1e-15);

  const ClassicalFunction d = lower_symbol(f, quantize(f, ClassicalFunction::builtin("delta:0", f.space())).a);
  // 0.4 cos^2(2 pi n / 5) with cos^2 in closed form.
  const double c1 = (3.0 - std::sqrt(5.0)) / 8.0, c2 = (3.0 + std::sqrt(5.0)) / 8.0;
  const double expect[5] = {0.4, 0.4 * c1, 0.4 * c2, 0.4 * c2, 0.4 * c1};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(d[i].real(), expect[i], 1e-12);
    EXPECT_EQ(d[i].imag(), 0.0);
  }
  EXPECT_NEAR(d[1].real(), 0.0381966, 1e-7);
  EXPECT_NEAR(d[2].real(), 0.2618034, 1e-7);

  const ClassicalFunction ab = lower_symbol(basis_frame(), Operator::diagonal(std::vector<complex>{1.5, -4.0}));
  EXPECT_EQ(ab[0], complex(1.5));
  EXPECT_EQ(ab[1], complex(-4.0));
}

TEST(LowerSymbol, Preconditions) {
  const FrameFamily nd("nd", DiscreteMeasureSpace::uniform(1, 1.0), {Operator::identity(2)}, false);
  EXPECT_THROW(lower_symbol(nd, Operator::identity(2)), Error);
  EXPECT_THROW(lower_symbol(polygon_frame(5), Operator::identity(3)), Error);
}

TEST(LowerSymbol, SeaStarSmoothingIsConvolution) {
  std::mt19937_64 rng(13);
  const FrameFamily f = polygon_frame(5);
  const std::vector<double> kernel = oracle::seastar_kernel();
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> v = random_real(rng, 5);
    const ClassicalFunction s = lower_symbol(f, quantize(f, ClassicalFunction::real("f", v)).a);
    const std::vector<double> conv = oracle::circular_convolution(v, kernel);
    const std::vector<double> closed = oracle::seastar_lower_symbol(v);
    for (std::size_t i = 0; i < 5; ++i) {
      EXPECT_NEAR(s[i].real(), conv[i], 1e-12);
      EXPECT_NEAR(s[i].real(), closed[i], 1e-12);
    }
  }
}

TEST(WeakForm, MatchesStrongForm) {
  std::mt19937_64 rng(14);
  std::normal_distribution<double> g;
  const FrameFamily f = polygon_frame(5);
  EXPECT_NEAR(std::abs(weak_matrix_element(f, ClassicalFunction::builtin("one", f.space()), Ket::basis(2, 0), Ket::basis(2, 0)) - 1.0), 0.0,
              1e-12);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<complex> fv(5);
    for (auto& x : fv) x = complex(g(rng), g(rng));
    const ClassicalFunction fn("f", fv);
    const Ket p1{complex(g(rng), g(rng)), complex(g(rng), g(rng))};
    const Ket p2{complex(g(rng), g(rng)), complex(g(rng), g(rng))};
    const complex weak = weak_matrix_element(f, fn, p1, p2);
    const complex strong = inner(p1, quantize(f, fn).a.apply(p2));
    EXPECT_LE(std::abs(weak - strong), 1e-12);
  }
  const ClassicalFunction real = ClassicalFunction::real("r", random_real(rng, 5));
  const Ket p{complex(0.3, 0.4), complex(-0.5, 0.1)};
  EXPECT_LE(std::abs(weak_matrix_element(f, real, p, p).imag()), 1e-15);
  EXPECT_THROW(weak_matrix_element(f, real, Ket{1.0, 0.0, 0.0}, p), Error);
}

TEST(Quantize, ShiftCovariance) {
  std::mt19937_64 rng(15);
  for (std::size_t n : {3u, 5u, 11u}) {
    const FrameFamily f = polygon_frame(n);
    const Operator r = rotation(polygon_angle(1, n));
    for (int trial = 0; trial < 20; ++trial) {
      const std::vector<double> v = random_real(rng, n);
      std::vector<double> shifted(n);
      for (std::size_t i = 0; i < n; ++i) shifted[i] = v[(i + n - 1) % n];
      const Operator a = quantize(f, ClassicalFunction::real("f", v)).a;
      const Operator b = quantize(f, ClassicalFunction::real("g", shifted)).a;
      EXPECT_LE((b - r * a * r.adjoint()).max_abs(), 1e-12);
    }
  }
}

TEST(ClassicalFunction, Builtins) {
  const DiscreteMeasureSpace s = polygon_frame(4).space();
  EXPECT_EQ(ClassicalFunction::builtin("index", s).values(), (std::vector<complex>{0.0, 1.0, 2.0, 3.0}));
  EXPECT_NEAR(ClassicalFunction::builtin("cos", s)[2].real(), -1.0, 1e-15);
  EXPECT_NEAR(ClassicalFunction::builtin("sin", s)[1].real(), 1.0, 1e-15);
  EXPECT_EQ(ClassicalFunction::builtin("delta:3", s)[3], complex(1.0));
  EXPECT_THROW(ClassicalFunction::builtin("delta:9", s), Error);
  EXPECT_THROW(ClassicalFunction::builtin("tan", s), Error);
}

}  // namespace
}  // namespace qkit
