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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "helmlab/baselines.hpp"
#include "helmlab/errors.hpp"
#include "helmlab/params.hpp"
#include "helmlab/transform.hpp"
#include "helmlab/types.hpp"

namespace helmlab {

struct GamutSpec {
  Gamut target = Gamut::kSrgb;
  double epsilon = kGamutEpsilon;
};

struct GamutMapped {
  HelmlabColor color;
  bool mapped = false;             // chroma was reduced
  bool lightness_clamped = false;  // even the gray at this L was out of gamut
};

inline constexpr int kGamutSearchMaxIters = 60;
inline constexpr double kGamutSearchTolerance = 1e-12;

// Display encoding of a Helmlab color, or nullopt if the inverse fails.
inline std::optional<SrgbColor> to_display(const HelmlabColor& c, const ParameterSet& p, Gamut g) {
  try {
    return xyz_to_rgb(inverse(c, p), g);
  } catch (const Error&) {
    return std::nullopt;
  }
}

inline bool displayable(const HelmlabColor& c, const ParameterSet& p, const GamutSpec& spec = {}) {
  const auto rgb = to_display(c, p, spec.target);
  return rgb && in_gamut(*rgb, spec.epsilon);
}

// Helmlab lightness of the darkest and lightest displayable grays. Both
// gamuts share the D65 white, so the range is target independent.
inline std::pair<double, double> gray_lightness_range(const ParameterSet& p) {
  return {forward(XyzColor{0, 0, 0}, p).L, forward(kD65White, p).L};
}

// Largest chroma scale t in [0, 1] that keeps (L, t a, t b) displayable,
// found by bisection; hue and L are untouched.
inline GamutMapped gamut_map(const HelmlabColor& c, const ParameterSet& p, const GamutSpec& spec = {}) {
  if (displayable(c, p, spec)) return {c, false, false};
  GamutMapped out;
  out.mapped = true;
  HelmlabColor gray{c.L, 0.0, 0.0};
  if (!displayable(gray, p, spec)) {
    const auto [lo_l, hi_l] = gray_lightness_range(p);
    out.color = {std::clamp(c.L, lo_l, hi_l), 0.0, 0.0};
    out.lightness_clamped = true;
    return out;
  }
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < kGamutSearchMaxIters && hi - lo > kGamutSearchTolerance; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (displayable({c.L, mid * c.a, mid * c.b}, p, spec)) lo = mid;
    else hi = mid;
  }
  out.color = {c.L, lo * c.a, lo * c.b};
  return out;
}

// Gamut-mapped, clamped display color.
inline SrgbColor display_color(const HelmlabColor& c, const ParameterSet& p, Gamut g = Gamut::kSrgb) {
  const GamutMapped m = gamut_map(c, p, {g, kGamutEpsilon});
  const auto rgb = to_display(m.color, p, g);
  if (!rgb) throw NumericError("gamut-map", "mapped color has no display image");
  return clamp01(*rgb);
}

// WCAG contrast as rendered: both colors gamut-mapped to sRGB and
// quantized to 8 bits.
inline double rendered_contrast(const HelmlabColor& fg, const HelmlabColor& bg, const ParameterSet& p) {
  return contrast_ratio(quantize8(display_color(fg, p)), quantize8(display_color(bg, p)));
}

inline constexpr int kContrastSearchMaxIters = 60;
inline constexpr double kContrastSearchTolerance = 1e-6;

// Moves fg along L (hue and chroma kept, then gamut-mapped) until its
// rendered contrast against bg reaches min_ratio, preferring the smaller
// lightness change.
inline HelmlabColor ensure_contrast(const HelmlabColor& fg, const HelmlabColor& bg, double min_ratio,
                                    const ParameterSet& p) {
  if (!(min_ratio >= 1.0 && min_ratio <= 21.0)) throw ValidationError("min_ratio must lie in [1, 21]");
  if (rendered_contrast(fg, bg, p) >= min_ratio) return fg;
  auto at = [&](double L) { return HelmlabColor{L, fg.a, fg.b}; };
  auto ok = [&](double L) { return rendered_contrast(at(L), bg, p) >= min_ratio; };
  const auto [l_min, l_max] = gray_lightness_range(p);

  // Bisect between a failing L and a passing endpoint.
  auto search = [&](double fail, double pass) {
    for (int i = 0; i < kContrastSearchMaxIters && std::abs(pass - fail) > kContrastSearchTolerance; ++i) {
      const double mid = 0.5 * (fail + pass);
      (ok(mid) ? pass : fail) = mid;
    }
    return pass;
  };
  std::optional<double> up, down;
  if (fg.L < l_max && ok(l_max)) up = search(fg.L, l_max);
  if (fg.L > l_min && ok(l_min)) down = search(fg.L, l_min);
  if (!up && !down) {
    const double best = std::max(rendered_contrast(at(l_max), bg, p), rendered_contrast(at(l_min), bg, p));
    throw UnachievableError("contrast ratio is not reachable at any lightness", best);
  }
  double L;
  if (up && down) L = (*up - fg.L) <= (fg.L - *down) ? *up : *down;
  else L = up ? *up : *down;
  return gamut_map(at(L), p).color;
}

// ---- Palettes ---------------------------------------------------------------

enum class PaletteKind { kLightnessRamp, kHueRing, kSemanticScale };

inline std::optional<PaletteKind> parse_palette_kind(std::string_view s) {
  if (s == "ramp" || s == "lightness-ramp") return PaletteKind::kLightnessRamp;
  if (s == "ring" || s == "hue-ring") return PaletteKind::kHueRing;
  if (s == "scale" || s == "semantic-scale") return PaletteKind::kSemanticScale;
  return std::nullopt;
}

struct PaletteSpec {
  PaletteKind kind = PaletteKind::kSemanticScale;
  std::size_t steps = 11;  // ignored by the semantic scale
  double l_start = 0.97;
  double l_end = 0.10;
  Gamut target = Gamut::kSrgb;
};

inline constexpr std::array<int, 11> kScaleStops = {50, 100, 200, 300, 400, 500, 600, 700, 800, 900, 950};

// Palette coordinates before gamut mapping.
inline std::vector<HelmlabColor> palette_coords(const PaletteSpec& spec, const HelmlabColor& anchor) {
  const std::size_t n = spec.kind == PaletteKind::kSemanticScale ? kScaleStops.size() : spec.steps;
  if (n < 2) throw ValidationError("palette needs at least two steps");
  std::vector<HelmlabColor> out;
  out.reserve(n);
  const double C = anchor.chroma(), h = anchor.hue();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    if (spec.kind == PaletteKind::kHueRing) {
      const double hi = h + 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
      out.push_back({anchor.L, C * std::cos(hi), C * std::sin(hi)});
    } else {
      out.push_back({spec.l_start + t * (spec.l_end - spec.l_start), anchor.a, anchor.b});
    }
  }
  return out;
}

inline std::vector<HelmlabColor> palette_mapped(const PaletteSpec& spec, const HelmlabColor& anchor,
                                                const ParameterSet& p) {
  auto coords = palette_coords(spec, anchor);
  for (auto& c : coords) c = gamut_map(c, p, {spec.target, kGamutEpsilon}).color;
  return coords;
}

// Display colors in the spec's target gamut.
inline std::vector<SrgbColor> palette(const PaletteSpec& spec, const HelmlabColor& anchor, const ParameterSet& p) {
  std::vector<SrgbColor> out;
  for (const auto& c : palette_mapped(spec, anchor, p)) out.push_back(clamp01(xyz_to_rgb(inverse(c, p), spec.target)));
  return out;
}

// ---- Light/dark adaptation ------------------------------------------------

inline constexpr double kLightSurround = 0.7;
inline constexpr double kDarkSurround = 0.2;

// Soft lightness inversion: L' = (1 - k) L + k (1 - L) with k = |to - from|.
// At the default surrounds k = 0.5 and every L collapses to 0.5.
inline HelmlabColor adapt_mode(const HelmlabColor& c, double from_s, double to_s, const ParameterSet& p,
                               Gamut target = Gamut::kSrgb) {
  if (!(from_s >= 0.0 && from_s <= 1.0 && to_s >= 0.0 && to_s <= 1.0)) {
    throw ValidationError("surround values must lie in [0, 1]");
  }
  if (from_s == to_s) return c;
  const double k = std::clamp(std::abs(to_s - from_s), 0.0, 1.0);
  const HelmlabColor moved{(1.0 - k) * c.L + k * (1.0 - c.L), c.a, c.b};
  return gamut_map(moved, p, {target, kGamutEpsilon}).color;
}

}  // namespace helmlab
