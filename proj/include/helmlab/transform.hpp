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

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "helmlab/errors.hpp"
#include "helmlab/params.hpp"
#include "helmlab/pchip.hpp"
#include "helmlab/types.hpp"

namespace helmlab {

// Enables or disables the optional pipeline stages (4 through 11). Stages
// 1-3 (matrix, power compression, matrix) always run.
struct StageMask {
  bool hue_correction = true;        // 4
  bool helmholtz_kohlrausch = true;  // 5
  bool lightness_cubic = true;       // 6, cubic and hue-additive term
  bool dark_compression = true;      // 6, dark-region compression
  bool chroma_hue_scaling = true;    // 7a
  bool chroma_power = true;          // 7b
  bool chroma_lightness = true;      // 7c
  bool chroma_hue_lightness = true;  // 7d
  bool hue_lightness = true;         // 9
  bool neutral_correction = true;    // 10
  bool rotation = true;              // 11

  static StageMask all() { return {}; }

  // Only the two matrices and the power compression.
  static StageMask linear_core() {
    return {false, false, false, false, false, false, false, false, false, false, false};
  }

  // Stages 1-9: what the neutral-correction LUT is built from.
  StageMask before_neutral_correction() const {
    StageMask m = *this;
    m.neutral_correction = false;
    m.rotation = false;
    return m;
  }

  friend bool operator==(const StageMask&, const StageMask&) = default;
};

// atan2(b, a) in (-pi, pi], with (0, 0) -> 0.
inline double stage_hue_angle(double a, double b) {
  if (a == 0.0 && b == 0.0) return 0.0;
  return std::atan2(b, a);
}

namespace detail {

inline constexpr int kNewtonMaxIterations = 50;
inline constexpr double kNewtonTolerance = 1e-13;
inline constexpr double kChromaPowerFloor = 1e-12;

// sum_k cos[k] cos((k+1)h) + sin[k] sin((k+1)h)
inline double fourier(const std::array<double, 4>& c, const std::array<double, 4>& s, double h) {
  double v = 0.0;
  for (int k = 0; k < 4; ++k) v += c[k] * std::cos((k + 1) * h) + s[k] * std::sin((k + 1) * h);
  return v;
}

inline double fourier_derivative(const std::array<double, 4>& c, const std::array<double, 4>& s,
                                 double h) {
  double v = 0.0;
  for (int k = 0; k < 4; ++k) {
    v += (k + 1) * (s[k] * std::cos((k + 1) * h) - c[k] * std::sin((k + 1) * h));
  }
  return v;
}

inline double harmonic2(double c1, double s1, double c2, double s2, double h) {
  return c1 * std::cos(h) + s1 * std::sin(h) + c2 * std::cos(2 * h) + s2 * std::sin(2 * h);
}

inline void rotate(HelmlabColor& c, double angle) {
  const double cs = std::cos(angle);
  const double sn = std::sin(angle);
  const double a = c.a * cs - c.b * sn;
  const double b = c.a * sn + c.b * cs;
  c.a = a;
  c.b = b;
}

inline void scale_chroma(HelmlabColor& c, double s) {
  c.a *= s;
  c.b *= s;
}

inline void require_finite(const HelmlabColor& c, const char* stage) {
  if (!std::isfinite(c.L) || !std::isfinite(c.a) || !std::isfinite(c.b)) {
    throw NumericError(stage, "non-finite intermediate value");
  }
}

template <class F, class DF>
double newton(F f, DF df, double x, const char* stage) {
  double fx = f(x);
  for (int it = 0; it < kNewtonMaxIterations && !(std::abs(fx) < kNewtonTolerance); ++it) {
    const double d = df(x);
    if (!std::isfinite(d) || d == 0.0) break;
    x -= fx / d;
    fx = f(x);
    if (!std::isfinite(fx)) break;
  }
  if (!(std::abs(fx) < kNewtonTolerance)) throw ConvergenceError(stage, std::abs(fx));
  // One more step takes the quadratically converging iterate to rounding level.
  const double d = df(x);
  if (std::isfinite(d) && d != 0.0) {
    const double polished = x - fx / d;
    if (std::abs(f(polished)) <= std::abs(fx)) x = polished;
  }
  return x;
}

inline double signed_pow(double v, double e) {
  return std::copysign(std::pow(std::abs(v), e), v);
}

// ---- Forward stages -------------------------------------------------------

inline void hue_correction(HelmlabColor& c, const ParameterSet& p) {
  const double h = stage_hue_angle(c.a, c.b);
  rotate(c, fourier(p.hue_corr.cos, p.hue_corr.sin, h));
}

inline double hk_increment(const HelmlabColor& c, const ParameterSet& p) {
  const auto& hk = p.hk;
  const double h = stage_hue_angle(c.a, c.b);
  const double weight = hk.weight * (1.0 + p.surround.value * p.surround.hk);
  return weight * std::pow(c.chroma(), hk.power) *
         (1.0 + harmonic2(hk.cos1, hk.sin1, hk.cos2, hk.sin2, h));
}

inline double cubic_lightness(double L, double hue_term, const LightnessParams& lp) {
  return L + lp.cubic * L * L * L + lp.quadratic * L * L + lp.linear * L + L * (1.0 - L) * hue_term;
}

inline double dark_strength(double h, const ParameterSet& p) {
  const auto& lp = p.lightness;
  return lp.dark * (1.0 + p.surround.value * p.surround.dark) *
         (1.0 + lp.dark_cos * std::cos(h) + lp.dark_sin * std::sin(h));
}

inline double dark_compress(double L, double lambda) {
  return L * std::exp(lambda * L * (1.0 - L) * (1.0 - L));
}

inline double chroma_hue_scale(double h, const ParameterSet& p) {
  return std::exp(fourier(p.chroma.scale_cos, p.chroma.scale_sin, h)) *
         (1.0 + p.surround.value * p.surround.chroma);
}

inline double chroma_exponent_offset(double h, const ChromaParams& cp) {
  return harmonic2(cp.power_cos1, cp.power_sin1, cp.power_cos2, cp.power_sin2, h);
}

inline double chroma_lightness_scale(double L, const ParameterSet& p) {
  const double d = L - 0.5;
  return std::exp(p.chroma.lightness_linear * d + p.chroma.lightness_quadratic * d * d) *
         (1.0 + p.surround.value * p.surround.chroma_lightness);
}

inline double chroma_hue_lightness_scale(double L, double h, const ChromaParams& cp) {
  return std::exp((L - 0.5) * harmonic2(cp.hl_cos1, cp.hl_sin1, cp.hl_cos2, cp.hl_sin2, h));
}

inline double hue_lightness_exponent(double h, const HueLightnessParams& g) {
  return harmonic2(g.cos1, g.sin1, g.cos2, g.sin2, h);
}

}  // namespace detail

// Maps XYZ (D65, Y = 1 white) to Helmlab coordinates.
inline HelmlabColor forward(const XyzColor& x, const ParameterSet& p,
                            const StageMask& mask = StageMask::all()) {
  using namespace detail;
  if (mask.neutral_correction && !p.neutral_lut) {
    throw ConfigurationError("neutral correction enabled but the parameter set has no LUT");
  }

  // 1-3: cone-like response, signed power compression, opponent projection.
  Eigen::Vector3d c = p.m1 * Eigen::Vector3d(x.X, x.Y, x.Z);
  for (int i = 0; i < 3; ++i) c[i] = signed_pow(c[i], p.gamma[i]);
  const Eigen::Vector3d lab = p.m2 * c;
  HelmlabColor out{lab[0], lab[1], lab[2]};
  require_finite(out, "stage 1-3 (linear core)");

  if (mask.hue_correction) {
    hue_correction(out, p);
    require_finite(out, "stage 4 (hue correction)");
  }
  if (mask.helmholtz_kohlrausch) {
    out.L += hk_increment(out, p);
    require_finite(out, "stage 5 (Helmholtz-Kohlrausch)");
  }
  if (mask.lightness_cubic || mask.dark_compression) {
    const double h = stage_hue_angle(out.a, out.b);
    const auto& lp = p.lightness;
    if (mask.lightness_cubic) {
      out.L = cubic_lightness(out.L, lp.hue_cos * std::cos(h) + lp.hue_sin * std::sin(h), lp);
    }
    if (mask.dark_compression) out.L = dark_compress(out.L, dark_strength(h, p));
    require_finite(out, "stage 6 (lightness refinement)");
  }
  if (mask.chroma_hue_scaling) {
    scale_chroma(out, chroma_hue_scale(stage_hue_angle(out.a, out.b), p));
    require_finite(out, "stage 7a (hue-dependent chroma scaling)");
  }
  if (mask.chroma_power) {
    const double C = out.chroma();
    if (C >= kChromaPowerFloor) {
      const double eps = chroma_exponent_offset(stage_hue_angle(out.a, out.b), p.chroma);
      scale_chroma(out, std::pow(C, eps));
    }
    require_finite(out, "stage 7b (chroma power)");
  }
  if (mask.chroma_lightness) {
    scale_chroma(out, chroma_lightness_scale(out.L, p));
    require_finite(out, "stage 7c (L-dependent chroma scaling)");
  }
  if (mask.chroma_hue_lightness) {
    scale_chroma(out, chroma_hue_lightness_scale(out.L, stage_hue_angle(out.a, out.b), p.chroma));
    require_finite(out, "stage 7d (hue-lightness interaction)");
  }
  if (mask.hue_lightness) {
    out.L *= std::exp(hue_lightness_exponent(stage_hue_angle(out.a, out.b), p.hue_l));
    require_finite(out, "stage 9 (hue-dependent lightness)");
  }
  if (mask.neutral_correction) {
    const auto r = (*p.neutral_lut)(out.L);
    out.a -= r.a;
    out.b -= r.b;
    require_finite(out, "stage 10 (neutral correction)");
  }
  if (mask.rotation) rotate(out, deg_to_rad(p.rotation_phi_deg));
  return out;
}

// Exact inverse of `forward` under the same mask.
inline XyzColor inverse(const HelmlabColor& hl, const ParameterSet& p,
                        const StageMask& mask = StageMask::all()) {
  using namespace detail;
  if (mask.neutral_correction && !p.neutral_lut) {
    throw ConfigurationError("neutral correction enabled but the parameter set has no LUT");
  }
  require_finite(hl, "inverse input");
  HelmlabColor c = hl;

  if (mask.rotation) rotate(c, -deg_to_rad(p.rotation_phi_deg));
  if (mask.neutral_correction) {
    const auto r = (*p.neutral_lut)(c.L);
    c.a += r.a;
    c.b += r.b;
  }
  if (mask.hue_lightness) {
    c.L /= std::exp(hue_lightness_exponent(stage_hue_angle(c.a, c.b), p.hue_l));
  }
  if (mask.chroma_hue_lightness) {
    scale_chroma(c, 1.0 / chroma_hue_lightness_scale(c.L, stage_hue_angle(c.a, c.b), p.chroma));
  }
  if (mask.chroma_lightness) scale_chroma(c, 1.0 / chroma_lightness_scale(c.L, p));
  if (mask.chroma_power) {
    const double Cp = c.chroma();
    if (Cp > 0.0) {
      const double eps = chroma_exponent_offset(stage_hue_angle(c.a, c.b), p.chroma);
      const double C = std::pow(Cp, 1.0 / (1.0 + eps));
      // Below the floor the forward stage left chroma untouched.
      if (C >= kChromaPowerFloor) scale_chroma(c, C / Cp);
    }
  }
  if (mask.chroma_hue_scaling) scale_chroma(c, 1.0 / chroma_hue_scale(stage_hue_angle(c.a, c.b), p));
  require_finite(c, "inverse stage 7-9");

  if (mask.lightness_cubic || mask.dark_compression) {
    const double h = stage_hue_angle(c.a, c.b);
    const auto& lp = p.lightness;
    if (mask.dark_compression) {
      const double lambda = dark_strength(h, p);
      const double target = c.L;
      c.L = newton(
          [&](double u) { return dark_compress(u, lambda) - target; },
          [&](double u) {
            return std::exp(lambda * u * (1 - u) * (1 - u)) *
                   (1.0 + lambda * u * (1 - u) * (1 - 3 * u));
          },
          target, "stage 6 (dark compression) inverse");
    }
    if (mask.lightness_cubic) {
      const double hue_term = lp.hue_cos * std::cos(h) + lp.hue_sin * std::sin(h);
      const double target = c.L;
      c.L = newton(
          [&](double u) { return cubic_lightness(u, hue_term, lp) - target; },
          [&](double u) {
            return 1.0 + 3 * lp.cubic * u * u + 2 * lp.quadratic * u + lp.linear +
                   (1.0 - 2 * u) * hue_term;
          },
          target / (1.0 + lp.linear + 0.25 * hue_term), "stage 6 (lightness cubic) inverse");
    }
  }
  if (mask.helmholtz_kohlrausch) c.L -= hk_increment(c, p);
  if (mask.hue_correction && (c.a != 0.0 || c.b != 0.0)) {
    const double target = std::atan2(c.b, c.a);
    const auto& hc = p.hue_corr;
    const double h = newton(
        [&](double u) { return std::remainder(u + fourier(hc.cos, hc.sin, u) - target, 2 * kPi); },
        [&](double u) { return 1.0 + fourier_derivative(hc.cos, hc.sin, u); }, target,
        "stage 4 (hue correction) inverse");
    rotate(c, -fourier(hc.cos, hc.sin, h));
  }
  require_finite(c, "inverse stage 4-6");

  Eigen::Vector3d v = p.m2.inverse() * Eigen::Vector3d(c.L, c.a, c.b);
  for (int i = 0; i < 3; ++i) v[i] = signed_pow(v[i], 1.0 / p.gamma[i]);
  const Eigen::Vector3d xyz = p.m1.inverse() * v;
  XyzColor out{xyz[0], xyz[1], xyz[2]};
  if (!std::isfinite(out.X) || !std::isfinite(out.Y) || !std::isfinite(out.Z)) {
    throw NumericError("inverse stage 1-3 (linear core)", "non-finite intermediate value");
  }
  return out;
}

inline constexpr std::size_t kNeutralLutNodes = 256;
inline constexpr double kGrayMinY = 0.001;
inline constexpr double kGrayMaxY = 2.0;

// Gray stimuli k * white with Y log-spaced over [min_y, max_y].
inline std::vector<XyzColor> gray_sweep(std::size_t count, double min_y = kGrayMinY,
                                        double max_y = kGrayMaxY) {
  std::vector<XyzColor> out;
  out.reserve(count);
  const double ratio = std::log(max_y / min_y);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    const double Y = (i + 1 == count) ? max_y : min_y * std::exp(ratio * t);
    out.push_back({kD65White.X * Y, Y, kD65White.Z * Y});
  }
  return out;
}

// Runs the gray sweep through stages 1-9 (as enabled by `mask`) and records
// the residual chroma as a function of lightness.
inline NeutralCorrectionLut build_neutral_lut(const ParameterSet& p,
                                              const StageMask& mask = StageMask::all()) {
  const StageMask pre = mask.before_neutral_correction();
  std::vector<double> L, a, b;
  L.reserve(kNeutralLutNodes);
  a.reserve(kNeutralLutNodes);
  b.reserve(kNeutralLutNodes);
  for (const XyzColor& g : gray_sweep(kNeutralLutNodes)) {
    const HelmlabColor c = forward(g, p, pre);
    if (!L.empty() && !(c.L > L.back())) {
      throw LutConstructionError("gray lightness is not strictly increasing at Y = " +
                                 std::to_string(g.Y));
    }
    if (L.empty() && !(c.L > 0.0)) {
      throw LutConstructionError("darkest gray has non-positive lightness");
    }
    L.push_back(c.L);
    a.push_back(c.a);
    b.push_back(c.b);
  }
  return NeutralCorrectionLut(std::move(L), std::move(a), std::move(b));
}

// Copy of `p` with a freshly built neutral-correction LUT.
inline ParameterSet with_neutral_lut(ParameterSet p, const StageMask& mask = StageMask::all()) {
  p.neutral_lut = build_neutral_lut(p, mask);
  return p;
}

}  // namespace helmlab
