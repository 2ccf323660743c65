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

#include <cmath>
#include <numbers>

namespace helmlab {

// CIE 1931 tristimulus values, D65-relative with Y = 1 for reference white.
struct XyzColor {
  double X = 0.0;
  double Y = 0.0;
  double Z = 0.0;

  friend bool operator==(const XyzColor&, const XyzColor&) = default;
};

// Coordinates in the Helmlab space.
struct HelmlabColor {
  double L = 0.0;
  double a = 0.0;
  double b = 0.0;

  double chroma() const { return std::hypot(a, b); }
  // Radians in (-pi, pi]; the origin has hue 0.
  double hue() const { return (a == 0.0 && b == 0.0) ? 0.0 : std::atan2(b, a); }

  friend bool operator==(const HelmlabColor&, const HelmlabColor&) = default;
};

// Gamma-encoded display RGB, nominally in [0, 1]. Used for both sRGB and
// Display-P3 encodings (they share the transfer function).
struct SrgbColor {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;

  friend bool operator==(const SrgbColor&, const SrgbColor&) = default;
};

using P3Color = SrgbColor;

// CIE 1976 L*a*b* relative to D65.
struct CieLabColor {
  double L = 0.0;
  double a = 0.0;
  double b = 0.0;
};

struct OklabColor {
  double L = 0.0;
  double a = 0.0;
  double b = 0.0;
};

inline constexpr double kPi = std::numbers::pi;

// D65 white from its chromaticity (0.3127, 0.3290), normalized to Y = 1.
inline constexpr double kD65x = 0.3127;
inline constexpr double kD65y = 0.3290;
inline constexpr XyzColor kD65White{kD65x / kD65y, 1.0, (1.0 - kD65x - kD65y) / kD65y};

inline constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

// Wraps an angle difference in degrees into (-180, 180].
inline double wrap_degrees(double d) {
  d = std::fmod(d, 360.0);
  if (d > 180.0) d -= 360.0;
  if (d <= -180.0) d += 360.0;
  return d;
}

}  // namespace helmlab
