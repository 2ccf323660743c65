// Copyright 2026 The Helmlab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "helmlab/metric.hpp"
#include "oracle.hpp"

namespace helmlab {
namespace {

HelmlabColor rotate(const HelmlabColor& c, double t) {
  return {c.L, c.a * std::cos(t) - c.b * std::sin(t), c.a * std::sin(t) + c.b * std::cos(t)};
}

TEST(DeltaETest, HandComputedValue) {
  const DistanceParams d = default_params().distance;
  // Lbar = 0.5 so S_L = 1; Cbar = |(0.15, 0.2)| = 0.25; |dab|^2 = 0.25.
  const double sc = 1 + d.s_c * 0.25;
  const double raw = std::pow(d.w_c * 0.25 / (sc * sc), d.p / 2);
  const double expect = std::pow(raw / (1 + d.c * raw), d.q);
  EXPECT_NEAR(delta_e({0.5, 0, 0}, {0.5, 0.3, 0.4}, d), expect, 1e-15);
}

TEST(DeltaETest, MatchesOracle) {
  const DistanceParams d = default_params().distance;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> L(0, 1), ab(-0.4, 0.4);
  for (int i = 0; i < 2000; ++i) {
    const HelmlabColor x{L(rng), ab(rng), ab(rng)}, y{L(rng), ab(rng), ab(rng)};
    const double ref = oracle::delta_e({x.L, x.a, x.b}, {y.L, y.a, y.b}, d);
    EXPECT_NEAR(delta_e(x, y, d), ref, 1e-14 * std::max(1.0, ref));
  }
}

TEST(DeltaETest, IdentitySymmetryRotation) {
  const DistanceParams d = default_params().distance;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> L(0, 1), ab(-0.4, 0.4), t(-kPi, kPi);
  for (int i = 0; i < 1000; ++i) {
    const HelmlabColor x{L(rng), ab(rng), ab(rng)}, y{L(rng), ab(rng), ab(rng)};
    EXPECT_EQ(delta_e(x, x, d), 0.0);
    EXPECT_EQ(delta_e(x, y, d), delta_e(y, x, d));
    const double th = t(rng);
    EXPECT_NEAR(delta_e(rotate(x, th), rotate(y, th), d), delta_e(x, y, d), 1e-12);
  }
}

TEST(DeltaETest, MonotoneAlongRay) {
  const DistanceParams d = default_params().distance;
  const HelmlabColor x{0.6, 0.05, -0.02};
  const double ux = 0.3, uy = -0.2, uz = 0.5;
  double prev = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double s = 0.002 * k;
    const double e = delta_e(x, {x.L + s * ux, x.a + s * uy, x.b + s * uz}, d);
    EXPECT_GT(e, prev) << k;
    prev = e;
  }
}

TEST(DeltaETest, AlphaIsInert) {
  DistanceParams d = default_params().distance;
  const HelmlabColor x{0.3, 0.1, 0.0}, y{0.4, 0.0, 0.1};
  const double base = delta_e(x, y, d);
  d.alpha = 5.0;
  EXPECT_EQ(delta_e(x, y, d), base);
}

TEST(DeltaETest, ReducesToEuclidean) {
  DistanceParams plain{};
  plain.p = 1.0;  // raw distance is the squared sum to the power p/2
  const HelmlabColor x{0.2, 0.0, 0.0}, y{0.5, 0.4, 0.0};
  EXPECT_NEAR(delta_e(x, y, plain), 0.5, 1e-15);
  EXPECT_NEAR(delta_e_euclidean(x, y), 0.5, 1e-15);
}

}  // namespace
}  // namespace helmlab
