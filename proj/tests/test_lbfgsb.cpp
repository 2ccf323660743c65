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
#include <limits>
#include <vector>

#include "helmlab/lbfgsb.hpp"

namespace helmlab {
namespace {

double rosenbrock(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    s += 100 * (x[i + 1] - x[i] * x[i]) * (x[i + 1] - x[i] * x[i]) + (1 - x[i]) * (1 - x[i]);
  }
  return s;
}

void expect_nonincreasing(const std::vector<double>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_LE(trace[i], trace[i - 1]) << i;
}

TEST(LbfgsbTest, UnconstrainedQuadratic) {
  const Objective f = [](std::span<const double> x) {
    return (x[0] - 1) * (x[0] - 1) + 10 * (x[1] + 2) * (x[1] + 2) + 0.5 * (x[2] - 0.3) * (x[2] - 0.3);
  };
  const double inf = std::numeric_limits<double>::infinity();
  Lbfgsb solver(f, {-inf, -inf, -inf}, {inf, inf, inf});
  const auto r = solver.minimize({0, 0, 0});
  EXPECT_NEAR(r.x[0], 1.0, 1e-5);
  EXPECT_NEAR(r.x[1], -2.0, 1e-5);
  EXPECT_NEAR(r.x[2], 0.3, 1e-5);
  EXPECT_LT(r.f, 1e-9);
  expect_nonincreasing(r.trace);
}

TEST(LbfgsbTest, ActiveBounds) {
  // Minimum of the unconstrained problem is outside the box on two axes.
  const Objective f = [](std::span<const double> x) {
    return (x[0] - 3) * (x[0] - 3) + (x[1] + 3) * (x[1] + 3) + (x[2] - 0.5) * (x[2] - 0.5);
  };
  Lbfgsb solver(f, {-1, -1, -1}, {1, 1, 1});
  const auto r = solver.minimize({0, 0, 0});
  EXPECT_EQ(r.x[0], 1.0);
  EXPECT_EQ(r.x[1], -1.0);
  EXPECT_NEAR(r.x[2], 0.5, 1e-5);
  expect_nonincreasing(r.trace);
}

TEST(LbfgsbTest, Rosenbrock) {
  const double inf = std::numeric_limits<double>::infinity();
  LbfgsbOptions opt;
  opt.max_iters = 2000;
  Lbfgsb solver(rosenbrock, std::vector<double>(4, -inf), std::vector<double>(4, inf), opt);
  const auto r = solver.minimize({-1.2, 1.0, -1.2, 1.0});
  for (double v : r.x) EXPECT_NEAR(v, 1.0, 1e-3);
  expect_nonincreasing(r.trace);
}

TEST(LbfgsbTest, BoundedRosenbrock) {
  // With x0 <= 0.5 the constrained minimum sits on the bound at (0.5, 0.25).
  Lbfgsb solver(rosenbrock, {-2, -2}, {0.5, 2});
  const auto r = solver.minimize({-1.0, 1.5});
  EXPECT_EQ(r.x[0], 0.5);
  EXPECT_NEAR(r.x[1], 0.25, 1e-4);
  expect_nonincreasing(r.trace);
}

TEST(LbfgsbTest, ProjectsStartAndReportsTrace) {
  const Objective f = [](std::span<const double> x) { return x[0] * x[0]; };
  Lbfgsb solver(f, {1}, {2});
  EXPECT_EQ(solver.project({5.0})[0], 2.0);
  std::size_t calls = 0;
  const auto r = solver.minimize({5.0}, [&](const LbfgsbIterate&) { ++calls; });
  EXPECT_EQ(r.x[0], 1.0);
  EXPECT_EQ(r.trace.front(), 4.0);
  EXPECT_EQ(calls, r.iterations);
  EXPECT_EQ(r.trace.size(), r.iterations + 1);
}

TEST(LbfgsbTest, ZeroIterationsReturnsStart) {
  LbfgsbOptions opt;
  opt.max_iters = 0;
  const Objective f = [](std::span<const double> x) { return x[0] * x[0]; };
  Lbfgsb solver(f, {-1}, {1}, opt);
  const auto r = solver.minimize({0.7});
  EXPECT_EQ(r.x[0], 0.7);
  EXPECT_EQ(r.iterations, 0u);
}

TEST(LbfgsbTest, InfeasibleRegionIsAvoided) {
  // Objective is infinite for x < 0.2; the minimizer must stay on the finite side.
  const Objective f = [](std::span<const double> x) {
    if (x[0] < 0.2) return std::numeric_limits<double>::infinity();
    return x[0] * x[0];
  };
  Lbfgsb solver(f, {-1}, {1});
  const auto r = solver.minimize({0.9});
  EXPECT_GE(r.x[0], 0.2);
  EXPECT_LT(r.f, 0.81);
  expect_nonincreasing(r.trace);
}

TEST(LbfgsbTest, NonFiniteStartFails) {
  const Objective f = [](std::span<const double>) { return std::numeric_limits<double>::quiet_NaN(); };
  Lbfgsb solver(f, {-1}, {1});
  EXPECT_THROW(solver.minimize({0.0}), FitError);
}

TEST(LbfgsbTest, GradientMatchesAnalytic) {
  const Objective f = [](std::span<const double> x) { return std::sin(x[0]) + x[1] * x[1] * x[1]; };
  Lbfgsb solver(f, {-5, -5}, {5, 5});
  const std::vector<double> x{0.4, 1.3};
  const auto g = solver.gradient(x, f(x));
  EXPECT_NEAR(g[0], std::cos(0.4), 1e-7);
  EXPECT_NEAR(g[1], 3 * 1.3 * 1.3, 1e-6);
}

}  // namespace
}  // namespace helmlab
