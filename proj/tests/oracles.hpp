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

// Independent reference computations for tests. Nothing here calls into the
// code paths it is used to check.

#include <array>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace qkit::oracle {

/// Eigenvalues (descending) of the real symmetric 2x2 [[a, b], [b, d]] from
/// the characteristic polynomial.
inline std::pair<double, double> symmetric2x2_eigenvalues(double a, double b, double d) {
  const double tr = a + d, det = a * d - b * b;
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  return {tr / 2.0 + disc, tr / 2.0 - disc};
}

/// Circular convolution (f * k)(n) = sum_m f(m) k((n - m) mod N).
inline std::vector<double> circular_convolution(const std::vector<double>& f, const std::vector<double>& k) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t m = 0; m < n; ++m) out[i] += f[m] * k[(i + n - m) % n];
  return out;
}

/// Sea-star lower-symbol kernel (2/5) cos^2(2 pi k / 5).
inline std::vector<double> seastar_kernel() {
  std::vector<double> k(5);
  for (int i = 0; i < 5; ++i) {
    const double c = std::cos(2.0 * std::numbers::pi * i / 5.0);
    k[std::size_t(i)] = 0.4 * c * c;
  }
  return k;
}

/// The closed form (2/5) sum_m f(m) cos^2(2 (n - m) pi / 5), evaluated literally.
inline std::vector<double> seastar_lower_symbol(const std::vector<double>& f) {
  std::vector<double> out(5, 0.0);
  for (int n = 0; n < 5; ++n) {
    double s = 0.0;
    for (int m = 0; m < 5; ++m) {
      const double c = std::cos(2.0 * (n - m) * std::numbers::pi / 5.0);
      s += f[std::size_t(m)] * c * c;
    }
    out[std::size_t(n)] = 0.4 * s;
  }
  return out;
}

/// 2x2 real matrix product for hand-checkable canonical-map oracles.
using Mat2 = std::array<std::array<double, 2>, 2>;
inline Mat2 mul(const Mat2& a, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}
inline Mat2 transpose(const Mat2& a) { return {{{a[0][0], a[1][0]}, {a[0][1], a[1][1]}}}; }

}  // namespace qkit::oracle
