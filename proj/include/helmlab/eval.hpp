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

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "helmlab/baselines.hpp"
#include "helmlab/dataset.hpp"
#include "helmlab/errors.hpp"
#include "helmlab/metric.hpp"
#include "helmlab/params.hpp"
#include "helmlab/transform.hpp"
#include "helmlab/types.hpp"

namespace helmlab {

// ---- STRESS -------------------------------------------------------------

// Standardized residual sum of squares between predicted differences `de`
// and visual differences `dv`, in [0, 100]:
//   F = sum(dv de) / sum(de^2),  STRESS = 100 sqrt(sum((dv - F de)^2) / sum(dv^2)).
inline double stress(std::span<const double> de, std::span<const double> dv) {
  if (de.size() != dv.size()) throw ValidationError("stress: de and dv differ in length");
  if (de.empty()) throw ValidationError("stress: empty input");
  double sum_dvde = 0.0, sum_de2 = 0.0, sum_dv2 = 0.0;
  for (std::size_t i = 0; i < de.size(); ++i) {
    if (!(de[i] >= 0.0) || !std::isfinite(de[i])) {
      throw ValidationError("stress: predicted differences must be finite and nonnegative");
    }
    if (!(dv[i] > 0.0) || !std::isfinite(dv[i])) {
      throw ValidationError("stress: visual differences must be finite and positive");
    }
    sum_dvde += dv[i] * de[i];
    sum_de2 += de[i] * de[i];
    sum_dv2 += dv[i] * dv[i];
  }
  if (sum_de2 == 0.0) throw ValidationError("stress: degenerate input, all predicted differences are zero");
  const double F = sum_dvde / sum_de2;
  double residual = 0.0;
  for (std::size_t i = 0; i < de.size(); ++i) {
    const double r = dv[i] - F * de[i];
    residual += r * r;
  }
  return 100.0 * std::sqrt(residual / sum_dv2);
}

// ---- Metrics over a dataset ------------------------------------------------

enum class Metric { kHelmlab, kHelmlabEuclidean, kCiede2000, kCie76, kCie94, kCmc, kOklab, kSrgb };

inline constexpr std::array<Metric, 8> kBuiltinMetrics = {
    Metric::kHelmlab, Metric::kHelmlabEuclidean, Metric::kCiede2000, Metric::kCie76,
    Metric::kCie94,   Metric::kCmc,              Metric::kOklab,     Metric::kSrgb};

inline constexpr std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::kHelmlab: return "helmlab";
    case Metric::kHelmlabEuclidean: return "helmlab-euclidean";
    case Metric::kCiede2000: return "ciede2000";
    case Metric::kCie76: return "cie76";
    case Metric::kCie94: return "cie94";
    case Metric::kCmc: return "cmc";
    case Metric::kOklab: return "oklab";
    case Metric::kSrgb: return "srgb";
  }
  return "";
}

inline std::optional<Metric> parse_metric(std::string_view name) {
  for (Metric m : kBuiltinMetrics)
    if (metric_name(m) == name) return m;
  if (name == "helmlab-euclid") return Metric::kHelmlabEuclidean;
  if (name == "de2000") return Metric::kCiede2000;
  return std::nullopt;
}

// Difference between two XYZ colors under a metric. Helmlab metrics need a
// parameter set carrying a neutral LUT (unless the mask disables stage 10).
inline double color_difference(const XyzColor& x, const XyzColor& y, Metric m,
                               const ParameterSet& p, const StageMask& mask = StageMask::all()) {
  switch (m) {
    case Metric::kHelmlab: return delta_e(forward(x, p, mask), forward(y, p, mask), p.distance);
    case Metric::kHelmlabEuclidean:
      return delta_e_euclidean(forward(x, p, mask), forward(y, p, mask));
    case Metric::kCiede2000: return ciede2000(xyz_to_cielab(x), xyz_to_cielab(y));
    case Metric::kCie76: return cie76(xyz_to_cielab(x), xyz_to_cielab(y));
    case Metric::kCie94: return cie94(xyz_to_cielab(x), xyz_to_cielab(y));
    case Metric::kCmc: return cmc(xyz_to_cielab(x), xyz_to_cielab(y));
    case Metric::kOklab: return oklab_distance(oklab_from_xyz(x), oklab_from_xyz(y));
    case Metric::kSrgb: {
      const SrgbColor s = xyz_to_srgb(x), t = xyz_to_srgb(y);
      return std::sqrt((s.r - t.r) * (s.r - t.r) + (s.g - t.g) * (s.g - t.g) + (s.b - t.b) * (s.b - t.b));
    }
  }
  return 0.0;
}

inline std::vector<double> distances(const PairDataset& ds, Metric m, const ParameterSet& p,
                                     const StageMask& mask = StageMask::all()) {
  std::vector<double> out;
  out.reserve(ds.size());
  for (const auto& pair : ds.pairs) out.push_back(color_difference(pair.first, pair.second, m, p, mask));
  return out;
}

// Pairs whose CIE Lab mean hue falls in the blue-magenta band [240, 340] deg.
inline bool in_blue_band(const ColorPair& pair) {
  const CieLabColor x = xyz_to_cielab(pair.first), y = xyz_to_cielab(pair.second);
  const double h = cielab_hue_deg(0.5 * (x.a + y.a), 0.5 * (x.b + y.b));
  return h >= 240.0 && h <= 340.0;
}

// ---- Bootstrap -------------------------------------------------------------

struct BootstrapOptions {
  std::size_t iters = 10000;
  double level = 0.95;
  std::uint64_t seed = 42;
};

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.95;
  std::size_t iters = 0;
  std::uint64_t seed = 0;
};

namespace detail {

// Linear-interpolated percentile of sorted data, q in [0, 1].
inline double percentile_sorted(const std::vector<double>& v, double q) {
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const std::size_t j = std::min(i + 1, v.size() - 1);
  const double t = pos - static_cast<double>(i);
  return v[i] + t * (v[j] - v[i]);
}

}  // namespace detail

// Paired percentile bootstrap of STRESS: pairs are resampled with replacement.
inline ConfidenceInterval bootstrap_ci(std::span<const double> de, std::span<const double> dv,
                                       const BootstrapOptions& opt = {}) {
  if (opt.iters < 100) throw ValidationError("bootstrap: at least 100 iterations are required");
  if (!(opt.level > 0.0 && opt.level < 1.0)) throw ValidationError("bootstrap: level must be in (0, 1)");
  if (de.size() != dv.size() || de.empty()) throw ValidationError("bootstrap: bad input sizes");
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::size_t> pick(0, de.size() - 1);
  std::vector<double> sde(de.size()), sdv(dv.size()), values;
  values.reserve(opt.iters);
  for (std::size_t it = 0; it < opt.iters; ++it) {
    bool any = false;
    for (std::size_t k = 0; k < de.size(); ++k) {
      const std::size_t i = pick(rng);
      sde[k] = de[i];
      sdv[k] = dv[i];
      any = any || de[i] != 0.0;
    }
    if (any) values.push_back(stress(sde, sdv));
  }
  if (values.empty()) throw ValidationError("bootstrap: every resample was degenerate");
  std::sort(values.begin(), values.end());
  const double tail = 0.5 * (1.0 - opt.level);
  return {detail::percentile_sorted(values, tail), detail::percentile_sorted(values, 1.0 - tail),
          opt.level, opt.iters, opt.seed};
}

inline ConfidenceInterval bootstrap_ci(const PairDataset& ds,
                                       const std::function<double(const ColorPair&)>& metric,
                                       const BootstrapOptions& opt = {}) {
  std::vector<double> de;
  de.reserve(ds.size());
  for (const auto& p : ds.pairs) de.push_back(metric(p));
  const auto dv = ds.visual_differences();
  return bootstrap_ci(de, dv, opt);
}

// ---- Generation-quality audits ----------------------------------------------

struct HueRow {
  std::string name;
  double achieved_deg = 0.0;
  double target_deg = 0.0;
  double error_deg = 0.0;
};

struct HueAlignment {
  double rms_deg = 0.0;
  double max_deg = 0.0;
  std::array<HueRow, 6> rows;
};

inline constexpr std::array<std::string_view, 6> kPrimaryNames = {"R", "Y", "G", "C", "B", "M"};

inline constexpr std::array<SrgbColor, 6> kPrimaries = {
    SrgbColor{1, 0, 0}, SrgbColor{1, 1, 0}, SrgbColor{0, 1, 0},
    SrgbColor{0, 1, 1}, SrgbColor{0, 0, 1}, SrgbColor{1, 0, 1}};

// CIE Lab hue angles (degrees) of the sRGB primaries and secondaries.
inline std::array<double, 6> default_hue_targets() {
  std::array<double, 6> t{};
  for (std::size_t i = 0; i < 6; ++i) {
    const CieLabColor lab = xyz_to_cielab(srgb_to_xyz(kPrimaries[i]));
    t[i] = cielab_hue_deg(lab.a, lab.b);
  }
  return t;
}

inline HueAlignment hue_alignment(const ParameterSet& p,
                                  const std::array<double, 6>& targets_deg = default_hue_targets()) {
  HueAlignment out;
  double sq = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    const HelmlabColor c = forward(srgb_to_xyz(kPrimaries[i]), p);
    double h = rad_to_deg(c.hue());
    if (h < 0.0) h += 360.0;
    const double err = wrap_degrees(h - targets_deg[i]);
    out.rows[i] = {std::string(kPrimaryNames[i]), h, targets_deg[i], err};
    sq += err * err;
    out.max_deg = std::max(out.max_deg, std::abs(err));
  }
  out.rms_deg = std::sqrt(sq / 6.0);
  return out;
}

enum class GradientSpace { kHelmlab, kCieLab };

// Max/min CIEDE2000 step ratio along a gradient interpolated linearly in
// `space` between two sRGB endpoints. `steps` counts colors, so two steps
// make a single interval and the ratio is 1.
inline double gradient_ratio(const ParameterSet& p, const SrgbColor& from, const SrgbColor& to,
                             std::size_t steps, GradientSpace space = GradientSpace::kHelmlab) {
  if (steps < 2) throw ValidationError("gradient_ratio: need at least two steps");
  if (from == to) throw ValidationError("gradient_ratio: endpoints are identical");
  const XyzColor x0 = srgb_to_xyz(from), x1 = srgb_to_xyz(to);
  std::vector<CieLabColor> ramp;
  ramp.reserve(steps);
  if (space == GradientSpace::kCieLab) {
    const CieLabColor a = xyz_to_cielab(x0), b = xyz_to_cielab(x1);
    for (std::size_t i = 0; i < steps; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(steps - 1);
      ramp.push_back({a.L + t * (b.L - a.L), a.a + t * (b.a - a.a), a.b + t * (b.b - a.b)});
    }
  } else {
    const HelmlabColor a = forward(x0, p), b = forward(x1, p);
    for (std::size_t i = 0; i < steps; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(steps - 1);
      const HelmlabColor c{a.L + t * (b.L - a.L), a.a + t * (b.a - a.a), a.b + t * (b.b - a.b)};
      ramp.push_back(xyz_to_cielab(inverse(c, p)));
    }
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i + 1 < ramp.size(); ++i) {
    const double d = ciede2000(ramp[i], ramp[i + 1]);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  if (!(lo > 0.0)) throw NumericError("gradient_ratio", "zero-length gradient step");
  return hi / lo;
}

// Population coefficient of variation, in percent.
inline double coefficient_of_variation(std::span<const double> v) {
  if (v.size() < 2) throw ValidationError("coefficient of variation needs at least two values");
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (mean == 0.0) throw ValidationError("coefficient of variation undefined for zero mean");
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= static_cast<double>(v.size());
  return 100.0 * std::sqrt(var) / mean;
}

inline double munsell_cv(const ParameterSet& p, const MunsellPairs& m) {
  if (m.pairs.size() < 2) throw ValidationError("munsell_cv: need at least two neighbor pairs");
  std::vector<double> d;
  d.reserve(m.pairs.size());
  for (const auto& [x, y] : m.pairs) d.push_back(delta_e(forward(x, p), forward(y, p), p.distance));
  return coefficient_of_variation(d);
}

inline double munsell_cv(const ParameterSet& p, std::string_view munsell_file) {
  return munsell_cv(p, load_munsell(munsell_file));
}

struct JacobianStats {
  double min_det = 0.0;
  double median_cond = 0.0;
  SrgbColor min_det_node;
  std::size_t nodes = 0;
};

// Central-difference Jacobian of the forward map with respect to XYZ,
// evaluated at the XYZ image of every node of a grid^3 lattice over
// gamma-encoded sRGB. Near colors whose linear-core chroma is tiny the
// hue-dependent stages bend on a scale of a few 1e-5 in XYZ, so the step
// has to stay well below that.
inline JacobianStats jacobian_stats(const ParameterSet& p, std::size_t grid,
                                    const StageMask& mask = StageMask::all(), double step = 1e-6) {
  if (grid < 2) throw ValidationError("jacobian_stats: grid must be at least 2");
  JacobianStats out;
  out.min_det = std::numeric_limits<double>::infinity();
  std::vector<double> conds;
  conds.reserve(grid * grid * grid);
  const double scale = 1.0 / static_cast<double>(grid - 1);
  for (std::size_t i = 0; i < grid; ++i) {
    for (std::size_t j = 0; j < grid; ++j) {
      for (std::size_t k = 0; k < grid; ++k) {
        const SrgbColor node{i * scale, j * scale, k * scale};
        const XyzColor x = srgb_to_xyz(node);
        Eigen::Matrix3d J;
        for (int c = 0; c < 3; ++c) {
          XyzColor lo = x, hi = x;
          double* lo_c = c == 0 ? &lo.X : c == 1 ? &lo.Y : &lo.Z;
          double* hi_c = c == 0 ? &hi.X : c == 1 ? &hi.Y : &hi.Z;
          *lo_c -= step;
          *hi_c += step;
          const HelmlabColor f1 = forward(hi, p, mask), f0 = forward(lo, p, mask);
          J(0, c) = (f1.L - f0.L) / (2 * step);
          J(1, c) = (f1.a - f0.a) / (2 * step);
          J(2, c) = (f1.b - f0.b) / (2 * step);
        }
        if (!J.allFinite()) {
          char buf[96];
          std::snprintf(buf, sizeof buf, "non-finite Jacobian at sRGB node (%g, %g, %g)", node.r,
                        node.g, node.b);
          throw NumericError("jacobian", buf);
        }
        const double det = J.determinant();
        if (det < out.min_det) {
          out.min_det = det;
          out.min_det_node = node;
        }
        Eigen::JacobiSVD<Eigen::Matrix3d> svd(J);
        const auto& s = svd.singularValues();
        conds.push_back(s[2] > 0.0 ? s[0] / s[2] : std::numeric_limits<double>::infinity());
      }
    }
  }
  out.nodes = conds.size();
  std::sort(conds.begin(), conds.end());
  const std::size_t n = conds.size();
  out.median_cond = n % 2 ? conds[n / 2] : 0.5 * (conds[n / 2 - 1] + conds[n / 2]);
  return out;
}

// Largest chroma over `count` log-spaced grays with Y in [0.001, 2].
inline double achromatic_max_chroma(const ParameterSet& p, std::size_t count = 1024) {
  double m = 0.0;
  for (const XyzColor& g : gray_sweep(count)) m = std::max(m, forward(g, p).chroma());
  return m;
}

inline std::vector<SrgbColor> random_srgb(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SrgbColor> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = u(rng), g = u(rng), b = u(rng);
    out.push_back({r, g, b});
  }
  return out;
}

// max over samples of || inverse(forward(x)) - x ||_inf for random sRGB x.
inline double roundtrip_max_error(const ParameterSet& p, std::size_t samples, std::uint64_t seed) {
  double worst = 0.0;
  for (const SrgbColor& s : random_srgb(samples, seed)) {
    const XyzColor x = srgb_to_xyz(s);
    const XyzColor y = inverse(forward(x, p), p);
    worst = std::max({worst, std::abs(x.X - y.X), std::abs(x.Y - y.Y), std::abs(x.Z - y.Z)});
  }
  return worst;
}

// max |dE(rotated) - dE(unrotated)| over random sRGB pairs.
inline double rotation_invariance_max(const ParameterSet& p, std::size_t pairs, std::uint64_t seed) {
  StageMask unrotated;
  unrotated.rotation = false;
  const auto colors = random_srgb(2 * pairs, seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const XyzColor x = srgb_to_xyz(colors[2 * i]), y = srgb_to_xyz(colors[2 * i + 1]);
    const double with = delta_e(forward(x, p), forward(y, p), p.distance);
    const double without = delta_e(forward(x, p, unrotated), forward(y, p, unrotated), p.distance);
    worst = std::max(worst, std::abs(with - without));
  }
  return worst;
}

// ---- Ablation ------------------------------------------------------------

struct AblationRow {
  std::string label;
  StageMask mask;
  bool euclidean = false;
};

struct AblationResult {
  std::string label;
  double stress = 0.0;
  double delta = 0.0;  // relative to the first row
};

inline std::vector<AblationRow> default_ablation_rows() {
  std::vector<AblationRow> rows;
  rows.push_back({"Full Helmlab", StageMask::all(), false});
  rows.push_back({"Euclidean distance only", StageMask::all(), true});
  StageMask m = StageMask::all();
  m.helmholtz_kohlrausch = false;
  rows.push_back({"No H-K embedding", m, false});
  m = StageMask::all();
  m.hue_correction = false;
  rows.push_back({"No hue correction", m, false});
  m = StageMask::all();
  m.dark_compression = false;
  rows.push_back({"No dark L compression", m, false});
  rows.push_back({"Rotation", StageMask::all(), false});
  m = StageMask::all();
  m.rotation = false;
  rows.push_back({"No rotation", m, false});
  return rows;
}

// Helmlab distances under a stage mask; the neutral LUT is rebuilt for the
// masked pipeline so grays stay neutral, every other parameter is frozen.
inline std::vector<double> ablated_distances(const PairDataset& ds, const ParameterSet& p,
                                             const AblationRow& row) {
  ParameterSet q = p;
  if (row.mask.neutral_correction) q.neutral_lut = build_neutral_lut(p, row.mask);
  return distances(ds, row.euclidean ? Metric::kHelmlabEuclidean : Metric::kHelmlab, q, row.mask);
}

inline std::vector<AblationResult> ablation(const PairDataset& ds, const ParameterSet& p,
                                            const std::vector<AblationRow>& rows) {
  std::vector<AblationResult> out;
  const auto dv = ds.visual_differences();
  for (const auto& row : rows) {
    const double s = stress(ablated_distances(ds, p, row), dv);
    out.push_back({row.label, s, out.empty() ? 0.0 : s - out.front().stress});
  }
  return out;
}

// ---- Full evaluation report ----------------------------------------------

struct SubsetRow {
  Subset subset = Subset::kOther;
  std::size_t count = 0;
  std::map<std::string, double> stress;  // metric name -> STRESS
};

struct GenerationMetrics {
  double achromatic_max_chroma = 0.0;
  HueAlignment hue;
  double roundtrip_max_error = 0.0;
  std::optional<double> munsell_cv;
  std::optional<JacobianStats> jacobian;
  std::optional<double> gradient_ratio_helmlab;
  std::optional<double> gradient_ratio_cielab;
};

struct EvalOptions {
  std::size_t bootstrap_iters = 1000;  // 0 disables the bootstrap
  double bootstrap_level = 0.95;
  std::uint64_t seed = 42;
  std::size_t roundtrip_samples = 10000;
  std::size_t jacobian_grid = 0;  // 0 skips the Jacobian audit
  std::size_t gradient_steps = 32;
  std::optional<MunsellPairs> munsell;
  std::array<double, 6> hue_targets = default_hue_targets();
};

struct EvalReport {
  std::size_t pairs = 0;
  std::vector<std::string> metrics;       // evaluation order
  std::map<std::string, double> overall;  // metric name -> STRESS
  std::vector<SubsetRow> subsets;
  std::optional<ConfidenceInterval> helmlab_ci;
  std::optional<ConfidenceInterval> ciede2000_ci;
  GenerationMetrics generation;
  std::uint64_t seed = 0;
};

// `p` must carry a neutral LUT (see with_neutral_lut).
inline EvalReport evaluate(const PairDataset& ds, const ParameterSet& p, const EvalOptions& opt = {}) {
  if (ds.empty()) throw ValidationError("evaluate: empty dataset");
  EvalReport r;
  r.pairs = ds.size();
  r.seed = opt.seed;
  const auto dv = ds.visual_differences();

  std::map<std::string, std::vector<double>> de;
  for (Metric m : kBuiltinMetrics) {
    const std::string name(metric_name(m));
    de[name] = distances(ds, m, p);
    r.metrics.push_back(name);
  }
  for (const auto& [name, col] : ds.external_de) {
    if (de.count(name)) continue;
    de[name] = col;
    r.metrics.push_back(name);
  }
  for (const auto& name : r.metrics) r.overall[name] = stress(de[name], dv);

  for (Subset s : kAllSubsets) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < ds.size(); ++i)
      if (ds.pairs[i].subset == s) idx.push_back(i);
    if (idx.empty()) continue;
    SubsetRow row{s, idx.size(), {}};
    std::vector<double> sdv, sde;
    for (std::size_t i : idx) sdv.push_back(dv[i]);
    for (const auto& name : r.metrics) {
      sde.clear();
      for (std::size_t i : idx) sde.push_back(de[name][i]);
      bool nonzero = std::any_of(sde.begin(), sde.end(), [](double v) { return v != 0.0; });
      if (nonzero) row.stress[name] = stress(sde, sdv);
    }
    r.subsets.push_back(std::move(row));
  }

  if (opt.bootstrap_iters > 0) {
    const BootstrapOptions bo{opt.bootstrap_iters, opt.bootstrap_level, opt.seed};
    r.helmlab_ci = bootstrap_ci(de["helmlab"], dv, bo);
    r.ciede2000_ci = bootstrap_ci(de["ciede2000"], dv, bo);
  }

  auto& g = r.generation;
  g.achromatic_max_chroma = achromatic_max_chroma(p);
  g.hue = hue_alignment(p, opt.hue_targets);
  if (opt.roundtrip_samples > 0) g.roundtrip_max_error = roundtrip_max_error(p, opt.roundtrip_samples, opt.seed);
  if (opt.munsell) g.munsell_cv = munsell_cv(p, *opt.munsell);
  if (opt.jacobian_grid > 0) g.jacobian = jacobian_stats(p, opt.jacobian_grid);
  if (opt.gradient_steps >= 2) {
    g.gradient_ratio_helmlab = gradient_ratio(p, {1, 0, 0}, {0, 0, 1}, opt.gradient_steps);
    g.gradient_ratio_cielab =
        gradient_ratio(p, {1, 0, 0}, {0, 0, 1}, opt.gradient_steps, GradientSpace::kCieLab);
  }
  return r;
}

inline nlohmann::json ci_to_json(const ConfidenceInterval& ci) {
  return {{"lo", ci.lo}, {"hi", ci.hi}, {"level", ci.level}, {"iters", ci.iters}, {"seed", ci.seed}};
}

inline nlohmann::json report_to_json(const EvalReport& r) {
  using nlohmann::json;
  json j;
  j["pairs"] = r.pairs;
  j["seed"] = r.seed;
  j["stress"] = r.overall;
  json subsets = json::array();
  for (const auto& row : r.subsets) {
    subsets.push_back({{"subset", subset_name(row.subset)}, {"n", row.count}, {"stress", row.stress}});
  }
  j["subsets"] = subsets;
  if (r.helmlab_ci) j["bootstrap"]["helmlab"] = ci_to_json(*r.helmlab_ci);
  if (r.ciede2000_ci) j["bootstrap"]["ciede2000"] = ci_to_json(*r.ciede2000_ci);
  const auto& g = r.generation;
  json gen;
  gen["achromatic_max_chroma"] = g.achromatic_max_chroma;
  gen["hue_rms_deg"] = g.hue.rms_deg;
  gen["hue_max_deg"] = g.hue.max_deg;
  json hues = json::array();
  for (const auto& row : g.hue.rows) {
    hues.push_back({{"color", row.name}, {"achieved_deg", row.achieved_deg},
                    {"target_deg", row.target_deg}, {"error_deg", row.error_deg}});
  }
  gen["hue_table"] = hues;
  gen["roundtrip_max_error"] = g.roundtrip_max_error;
  if (g.munsell_cv) gen["munsell_cv_percent"] = *g.munsell_cv;
  if (g.jacobian) {
    gen["jacobian"] = {{"min_det", g.jacobian->min_det},
                       {"median_cond", g.jacobian->median_cond},
                       {"nodes", g.jacobian->nodes}};
  }
  if (g.gradient_ratio_helmlab) gen["gradient_ratio_helmlab"] = *g.gradient_ratio_helmlab;
  if (g.gradient_ratio_cielab) gen["gradient_ratio_cielab"] = *g.gradient_ratio_cielab;
  j["generation"] = gen;
  return j;
}

inline std::string report_to_text(const EvalReport& r) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "pairs: %zu  seed: %llu\n\n", r.pairs,
                static_cast<unsigned long long>(r.seed));
  out += buf;
  out += "metric               STRESS\n";
  for (const auto& name : r.metrics) {
    std::snprintf(buf, sizeof buf, "%-20s %7.2f\n", name.c_str(), r.overall.at(name));
    out += buf;
  }
  if (r.helmlab_ci) {
    std::snprintf(buf, sizeof buf, "\nhelmlab %.0f%% CI:   [%.2f, %.2f]  (%zu resamples)\n",
                  100 * r.helmlab_ci->level, r.helmlab_ci->lo, r.helmlab_ci->hi, r.helmlab_ci->iters);
    out += buf;
  }
  if (r.ciede2000_ci) {
    std::snprintf(buf, sizeof buf, "ciede2000 %.0f%% CI: [%.2f, %.2f]\n", 100 * r.ciede2000_ci->level,
                  r.ciede2000_ci->lo, r.ciede2000_ci->hi);
    out += buf;
  }
  out += "\nsubset          n      helmlab  ciede2000\n";
  for (const auto& row : r.subsets) {
    auto get = [&](const char* m) {
      auto it = row.stress.find(m);
      return it == row.stress.end() ? std::nan("") : it->second;
    };
    std::snprintf(buf, sizeof buf, "%-12s %6zu  %9.2f  %9.2f\n", std::string(subset_name(row.subset)).c_str(),
                  row.count, get("helmlab"), get("ciede2000"));
    out += buf;
  }
  const auto& g = r.generation;
  out += "\ngeneration metrics\n";
  std::snprintf(buf, sizeof buf, "  achromatic max C      %.3e\n  hue RMS / max (deg)   %.1f / %.1f\n",
                g.achromatic_max_chroma, g.hue.rms_deg, g.hue.max_deg);
  out += buf;
  std::snprintf(buf, sizeof buf, "  round-trip max error  %.3e\n", g.roundtrip_max_error);
  out += buf;
  if (g.munsell_cv) {
    std::snprintf(buf, sizeof buf, "  Munsell CV            %.1f%%\n", *g.munsell_cv);
    out += buf;
  }
  if (g.jacobian) {
    std::snprintf(buf, sizeof buf, "  Jacobian min det      %.3f  (median cond %.2f, %zu nodes)\n",
                  g.jacobian->min_det, g.jacobian->median_cond, g.jacobian->nodes);
    out += buf;
  }
  if (g.gradient_ratio_helmlab && g.gradient_ratio_cielab) {
    std::snprintf(buf, sizeof buf, "  red-blue gradient ratio  helmlab %.2f  cielab %.2f\n",
                  *g.gradient_ratio_helmlab, *g.gradient_ratio_cielab);
    out += buf;
  }
  return out;
}

}  // namespace helmlab
