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
#include <vector>

#include "helmlab/eval.hpp"
#include "oracle.hpp"

namespace helmlab {
namespace {

const ParameterSet& lut_params() {
  static const ParameterSet p = with_neutral_lut(default_params());
  return p;
}

PairDataset random_pairs(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0), d(-0.05, 0.05), dv(0.5, 5.0);
  PairDataset ds;
  for (std::size_t i = 0; i < n; ++i) {
    const SrgbColor a{u(rng), u(rng), u(rng)};
    const SrgbColor b{std::clamp(a.r + d(rng), 0.0, 1.0), std::clamp(a.g + d(rng), 0.0, 1.0),
                      std::clamp(a.b + d(rng), 0.0, 1.0)};
    ds.pairs.push_back({srgb_to_xyz(a), srgb_to_xyz(b), dv(rng), kAllSubsets[i % 7]});
  }
  return ds;
}

TEST(StressTest, HandExample) {
  // F = 3/3 = 1, residual = (1-2)^2 + 0 = 1, sum dv^2 = 1 + 9 = 10.
  const std::vector<double> de2{2, 1}, dv2{1, 3};
  const double F = (1 * 2 + 3 * 1) / 5.0;
  const double expect = 100 * std::sqrt(((1 - 2 * F) * (1 - 2 * F) + (3 - F) * (3 - F)) / 10.0);
  EXPECT_NEAR(stress(de2, dv2), expect, 1e-12);
  EXPECT_NEAR(stress(std::vector<double>{1, 1}, std::vector<double>{1, 2}), 100 * std::sqrt(0.5 / 5.0), 1e-12);
  EXPECT_NEAR(stress(std::vector<double>{1, 1}, std::vector<double>{1, 2}), 31.6228, 1e-4);
}

TEST(StressTest, MatchesBruteForceOracle) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  std::uniform_int_distribution<int> len(2, 400);
  for (int t = 0; t < 100; ++t) {
    const int n = len(rng);
    std::vector<double> de(n), dv(n);
    for (int i = 0; i < n; ++i) {
      de[i] = u(rng);
      dv[i] = u(rng);
    }
    EXPECT_NEAR(stress(de, dv), oracle::stress(de, dv), 1e-10) << t;
  }
}

TEST(StressTest, ProportionalIsZero) {
  std::vector<double> de{1, 2, 3, 4, 5, 6, 7, 8}, dv;
  for (double v : de) dv.push_back(2 * v);
  EXPECT_EQ(stress(de, dv), 0.0);
  EXPECT_EQ(stress(de, de), 0.0);
}

TEST(StressTest, ScaleInvariance) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  std::vector<double> de(64), dv(64);
  for (int i = 0; i < 64; ++i) {
    de[i] = u(rng);
    dv[i] = u(rng);
  }
  const double s = stress(de, dv);
  for (double k : {0.25, 2.0, 1024.0}) {
    std::vector<double> a = de, b = dv;
    for (double& v : a) v *= k;
    for (double& v : b) v *= k;
    EXPECT_EQ(stress(a, dv), s) << k;
    EXPECT_EQ(stress(de, b), s) << k;
  }
  for (double k : {0.3, 7.0, 1e3}) {
    std::vector<double> a = de, b = dv;
    for (double& v : a) v *= k;
    for (double& v : b) v *= k;
    EXPECT_NEAR(stress(a, dv), s, 1e-12) << k;
    EXPECT_NEAR(stress(de, b), s, 1e-12) << k;
  }
}

TEST(StressTest, InvalidInput) {
  EXPECT_THROW(stress(std::vector<double>{}, std::vector<double>{}), ValidationError);
  EXPECT_THROW(stress(std::vector<double>{1}, std::vector<double>{1, 2}), ValidationError);
  EXPECT_THROW(stress(std::vector<double>{0, 0}, std::vector<double>{1, 2}), ValidationError);
  EXPECT_THROW(stress(std::vector<double>{1, 2}, std::vector<double>{0, 2}), ValidationError);
}

TEST(StressTest, SinglePair) {
  // One pair is always proportional, up to rounding in F.
  EXPECT_NEAR(stress(std::vector<double>{0.7}, std::vector<double>{3.0}), 0.0, 1e-12);
  EXPECT_EQ(stress(std::vector<double>{0.5}, std::vector<double>{4.0}), 0.0);
}

TEST(MetricTest, NamesRoundTrip) {
  for (Metric m : kBuiltinMetrics) EXPECT_EQ(parse_metric(metric_name(m)), m);
  EXPECT_FALSE(parse_metric("nope").has_value());
}

TEST(MetricTest, DvEqualToHelmlabGivesZero) {
  PairDataset ds = random_pairs(60, 3);
  const auto de = distances(ds, Metric::kHelmlab, lut_params());
  for (std::size_t i = 0; i < ds.size(); ++i) ds.pairs[i].dv = de[i];
  EXPECT_EQ(stress(distances(ds, Metric::kHelmlab, lut_params()), ds.visual_differences()), 0.0);
  for (Metric m : {Metric::kCiede2000, Metric::kCie76, Metric::kOklab}) {
    EXPECT_GT(stress(distances(ds, m, lut_params()), ds.visual_differences()), 0.0);
  }
}

TEST(BootstrapTest, DeterministicAndOrdered) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  std::vector<double> de(100), dv(100);
  for (int i = 0; i < 100; ++i) {
    de[i] = u(rng);
    dv[i] = de[i] * (1 + 0.3 * (u(rng) - 1.5));
  }
  BootstrapOptions opt;
  opt.iters = 500;
  const auto a = bootstrap_ci(de, dv, opt), b = bootstrap_ci(de, dv, opt);
  EXPECT_EQ(a.lo, b.lo);
  EXPECT_EQ(a.hi, b.hi);
  EXPECT_LT(a.lo, a.hi);
  const double s = stress(de, dv);
  EXPECT_LT(a.lo, s);
  EXPECT_GT(a.hi, s);
  opt.seed = 43;
  EXPECT_NE(bootstrap_ci(de, dv, opt).lo, a.lo);
  opt.iters = 99;
  EXPECT_THROW(bootstrap_ci(de, dv, opt), ValidationError);
}

TEST(BootstrapTest, ProportionalDataGivesZeroInterval) {
  std::vector<double> de{1, 2, 4, 8, 16}, dv{3, 6, 12, 24, 48};
  BootstrapOptions opt;
  opt.iters = 200;
  const auto ci = bootstrap_ci(de, dv, opt);
  EXPECT_EQ(ci.lo, 0.0);
  EXPECT_EQ(ci.hi, 0.0);
}

TEST(HueAlignmentTest, WrapAndZero) {
  EXPECT_NEAR(std::abs(wrap_degrees(359.0 - 1.0)), 2.0, 1e-12);
  EXPECT_NEAR(std::abs(wrap_degrees(1.0 - 359.0)), 2.0, 1e-12);
  const ParameterSet& p = lut_params();
  const HueAlignment first = hue_alignment(p);
  std::array<double, 6> achieved{};
  for (std::size_t i = 0; i < 6; ++i) achieved[i] = first.rows[i].achieved_deg;
  const HueAlignment same = hue_alignment(p, achieved);
  EXPECT_EQ(same.rms_deg, 0.0);
  EXPECT_EQ(same.max_deg, 0.0);
  EXPECT_LE(first.rms_deg, first.max_deg);
}

TEST(MunsellCvTest, Values) {
  EXPECT_NEAR(coefficient_of_variation(std::vector<double>{1, 3}), 50.0, 1e-12);
  EXPECT_EQ(coefficient_of_variation(std::vector<double>{2, 2, 2}), 0.0);
  EXPECT_THROW(coefficient_of_variation(std::vector<double>{1}), ValidationError);
  MunsellPairs m;
  m.pairs.push_back({XyzColor{0.2, 0.2, 0.2}, XyzColor{0.25, 0.2, 0.2}});
  m.pairs.push_back({XyzColor{0.2, 0.2, 0.2}, XyzColor{0.25, 0.2, 0.2}});
  EXPECT_NEAR(munsell_cv(lut_params(), m), 0.0, 1e-12);
}

TEST(JacobianTest, IdentityPipelineHasUnitDeterminant) {
  const ParameterSet id;
  StageMask mask = StageMask::all();
  mask.neutral_correction = false;
  const JacobianStats s = jacobian_stats(id, 4, mask);
  EXPECT_EQ(s.nodes, 64u);
  EXPECT_NEAR(s.min_det, 1.0, 1e-9);
  EXPECT_NEAR(s.median_cond, 1.0, 1e-9);
}

TEST(JacobianTest, DefaultParamsAreOrientationPreserving) {
  const JacobianStats s = jacobian_stats(lut_params(), 12);
  EXPECT_GT(s.min_det, 0.0);
  EXPECT_GE(s.median_cond, 1.0);
  EXPECT_TRUE(std::isfinite(s.median_cond));
}

TEST(JacobianTest, StepIsConverged) {
  // This node lies close to a linear-core achromatic point; a step of 1e-5
  // straddles the bend there and flips the sign of the determinant.
  const ParameterSet& p = lut_params();
  const XyzColor x = srgb_to_xyz({1 / 63.0, 7 / 63.0, 9 / 63.0});
  auto det = [&](double h) {
    Eigen::Matrix3d J;
    for (int c = 0; c < 3; ++c) {
      XyzColor lo = x, hi = x;
      (c == 0 ? lo.X : c == 1 ? lo.Y : lo.Z) -= h;
      (c == 0 ? hi.X : c == 1 ? hi.Y : hi.Z) += h;
      const HelmlabColor f1 = forward(hi, p), f0 = forward(lo, p);
      J.col(c) << (f1.L - f0.L) / (2 * h), (f1.a - f0.a) / (2 * h), (f1.b - f0.b) / (2 * h);
    }
    return J.determinant();
  };
  EXPECT_GT(det(1e-6), 0.0);
  EXPECT_NEAR(det(1e-6), det(1e-7), 0.05 * std::abs(det(1e-7)));  // O(h^2) in a tight bend
  const JacobianStats fine = jacobian_stats(p, 64, StageMask::all(), 1e-6);
  const JacobianStats finer = jacobian_stats(p, 64, StageMask::all(), 1e-7);
  EXPECT_GT(fine.min_det, 0.0);
  EXPECT_NEAR(fine.min_det, finer.min_det, 1e-6);
}

TEST(GradientRatioTest, CieLabRedToBlue) {
  const double r = gradient_ratio(lut_params(), {1, 0, 0}, {0, 0, 1}, 32, GradientSpace::kCieLab);
  EXPECT_NEAR(r, 1.3, 0.2);
}

TEST(GradientRatioTest, TwoStepsAndErrors) {
  EXPECT_EQ(gradient_ratio(lut_params(), {1, 0, 0}, {0, 0, 1}, 2), 1.0);
  EXPECT_EQ(gradient_ratio(lut_params(), {1, 0, 0}, {0, 0, 1}, 2, GradientSpace::kCieLab), 1.0);
  EXPECT_THROW(gradient_ratio(lut_params(), {1, 0, 0}, {1, 0, 0}, 8), ValidationError);
  EXPECT_THROW(gradient_ratio(lut_params(), {1, 0, 0}, {0, 0, 1}, 1), ValidationError);
  EXPECT_GE(gradient_ratio(lut_params(), {1, 0, 0}, {0, 0, 1}, 16), 1.0);
}

TEST(AuditTest, GraysRoundTripRotation) {
  const ParameterSet& p = lut_params();
  EXPECT_LT(achromatic_max_chroma(p), 1e-6);
  EXPECT_LT(roundtrip_max_error(p, 2000, 1), 1e-12);
  EXPECT_LT(rotation_invariance_max(p, 2000, 2), 1e-12);
  EXPECT_EQ(random_srgb(5, 9)[4], random_srgb(5, 9)[4]);
}

TEST(AblationTest, RotationRowsAgree) {
  const PairDataset ds = random_pairs(200, 11);
  const auto rows = ablation(ds, default_params(), default_ablation_rows());
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows[0].delta, 0.0);
  EXPECT_EQ(rows[5].label, "Rotation");
  EXPECT_EQ(rows[6].label, "No rotation");
  EXPECT_NEAR(rows[5].stress, rows[6].stress, 1e-10);
  EXPECT_EQ(rows[5].stress, rows[0].stress);
  for (const auto& r : rows) EXPECT_NEAR(r.delta, r.stress - rows[0].stress, 1e-15);
  EXPECT_TRUE(ablation(ds, default_params(), {}).empty());
}

TEST(AblationTest, MaskedLutKeepsGraysNeutral) {
  StageMask m = StageMask::all();
  m.hue_correction = false;
  m.dark_compression = false;
  ParameterSet q = default_params();
  q.neutral_lut = build_neutral_lut(q, m);
  for (const XyzColor& g : gray_sweep(200)) EXPECT_LT(forward(g, q, m).chroma(), 1e-6);
}

TEST(EvaluateTest, ReportShape) {
  const PairDataset ds = random_pairs(140, 12);
  EvalOptions opt;
  opt.bootstrap_iters = 200;
  opt.roundtrip_samples = 500;
  opt.jacobian_grid = 4;
  const EvalReport r = evaluate(ds, lut_params(), opt);
  EXPECT_EQ(r.pairs, 140u);
  ASSERT_TRUE(r.overall.count("helmlab"));
  ASSERT_TRUE(r.overall.count("ciede2000"));
  EXPECT_EQ(r.overall.at("helmlab"), stress(distances(ds, Metric::kHelmlab, lut_params()), ds.visual_differences()));
  ASSERT_TRUE(r.helmlab_ci.has_value());
  EXPECT_LE(r.helmlab_ci->lo, r.helmlab_ci->hi);
  std::size_t counted = 0;
  for (const auto& s : r.subsets) counted += s.count;
  EXPECT_EQ(counted, ds.size());
  EXPECT_TRUE(r.generation.jacobian.has_value());
  EXPECT_LT(r.generation.roundtrip_max_error, 1e-12);
  const auto j = report_to_json(r);
  EXPECT_TRUE(j.contains("stress"));
  EXPECT_FALSE(report_to_text(r).empty());
  const EvalReport again = evaluate(ds, lut_params(), opt);
  EXPECT_EQ(again.helmlab_ci->lo, r.helmlab_ci->lo);
}

TEST(EvaluateTest, EmptyDatasetRejected) {
  EXPECT_THROW(evaluate(PairDataset{}, lut_params()), ValidationError);
}

}  // namespace
}  // namespace helmlab
