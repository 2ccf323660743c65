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
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>

#include "helmlab/errors.hpp"
#include "helmlab/types.hpp"

namespace helmlab {

enum class Gamut { kSrgb, kDisplayP3 };

namespace detail {

// RGB -> XYZ matrix from primary chromaticities and the D65 white.
inline Eigen::Matrix3d rgb_to_xyz_matrix(double rx, double ry, double gx, double gy, double bx,
                                         double by) {
  auto column = [](double x, double y) { return Eigen::Vector3d(x / y, 1.0, (1.0 - x - y) / y); };
  Eigen::Matrix3d prim;
  prim.col(0) = column(rx, ry);
  prim.col(1) = column(gx, gy);
  prim.col(2) = column(bx, by);
  const Eigen::Vector3d white(kD65White.X, kD65White.Y, kD65White.Z);
  const Eigen::Vector3d s = prim.partialPivLu().solve(white);
  return prim * s.asDiagonal();
}

struct RgbSpace {
  Eigen::Matrix3d to_xyz;
  Eigen::Matrix3d from_xyz;
};

inline const RgbSpace& srgb_space() {
  static const RgbSpace s = [] {
    RgbSpace r;
    r.to_xyz = rgb_to_xyz_matrix(0.64, 0.33, 0.30, 0.60, 0.15, 0.06);
    r.from_xyz = r.to_xyz.inverse();
    return r;
  }();
  return s;
}

inline const RgbSpace& p3_space() {
  static const RgbSpace s = [] {
    RgbSpace r;
    r.to_xyz = rgb_to_xyz_matrix(0.680, 0.320, 0.265, 0.690, 0.150, 0.060);
    r.from_xyz = r.to_xyz.inverse();
    return r;
  }();
  return s;
}

inline const RgbSpace& rgb_space(Gamut g) { return g == Gamut::kSrgb ? srgb_space() : p3_space(); }

}  // namespace detail

// IEC 61966-2-1 transfer function, odd-extended to negative values.
inline double srgb_decode(double v) {
  const double a = std::abs(v);
  const double lin = a <= 0.04045 ? a / 12.92 : std::pow((a + 0.055) / 1.055, 2.4);
  return std::copysign(lin, v);
}

inline double srgb_encode(double v) {
  const double a = std::abs(v);
  const double enc = a <= 0.04045 / 12.92 ? a * 12.92 : 1.055 * std::pow(a, 1.0 / 2.4) - 0.055;
  return std::copysign(enc, v);
}

inline Eigen::Vector3d linear_rgb(const SrgbColor& s) {
  return {srgb_decode(s.r), srgb_decode(s.g), srgb_decode(s.b)};
}

inline XyzColor rgb_to_xyz(const SrgbColor& s, Gamut g) {
  const Eigen::Vector3d v = detail::rgb_space(g).to_xyz * linear_rgb(s);
  return {v[0], v[1], v[2]};
}

inline SrgbColor xyz_to_rgb(const XyzColor& x, Gamut g) {
  const Eigen::Vector3d v = detail::rgb_space(g).from_xyz * Eigen::Vector3d(x.X, x.Y, x.Z);
  return {srgb_encode(v[0]), srgb_encode(v[1]), srgb_encode(v[2])};
}

inline XyzColor srgb_to_xyz(const SrgbColor& s) { return rgb_to_xyz(s, Gamut::kSrgb); }
inline SrgbColor xyz_to_srgb(const XyzColor& x) { return xyz_to_rgb(x, Gamut::kSrgb); }
inline XyzColor p3_to_xyz(const P3Color& s) { return rgb_to_xyz(s, Gamut::kDisplayP3); }
inline P3Color xyz_to_p3(const XyzColor& x) { return xyz_to_rgb(x, Gamut::kDisplayP3); }

inline constexpr double kGamutEpsilon = 1e-9;

inline bool in_gamut(const SrgbColor& s, double eps = kGamutEpsilon) {
  auto ok = [eps](double v) { return v >= -eps && v <= 1.0 + eps; };
  return ok(s.r) && ok(s.g) && ok(s.b);
}

inline SrgbColor clamp01(const SrgbColor& s) {
  return {std::clamp(s.r, 0.0, 1.0), std::clamp(s.g, 0.0, 1.0), std::clamp(s.b, 0.0, 1.0)};
}

// 8-bit quantization with round-half-to-even.
inline int to_byte(double v) {
  return static_cast<int>(std::nearbyint(std::clamp(v, 0.0, 1.0) * 255.0));
}

inline SrgbColor quantize8(const SrgbColor& s) {
  return {to_byte(s.r) / 255.0, to_byte(s.g) / 255.0, to_byte(s.b) / 255.0};
}

inline std::string to_hex(const SrgbColor& s) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", to_byte(s.r), to_byte(s.g), to_byte(s.b));
  return buf;
}

inline SrgbColor parse_hex(std::string_view hex) {
  if (!hex.empty() && hex.front() == '#') hex.remove_prefix(1);
  if (hex.size() != 6) throw ParseError("hex color must have six digits: '" + std::string(hex) + "'");
  int v[3];
  for (int i = 0; i < 3; ++i) {
    unsigned x = 0;
    for (int j = 0; j < 2; ++j) {
      const char ch = hex[2 * i + j];
      x <<= 4;
      if (ch >= '0' && ch <= '9') x |= ch - '0';
      else if (ch >= 'a' && ch <= 'f') x |= ch - 'a' + 10;
      else if (ch >= 'A' && ch <= 'F') x |= ch - 'A' + 10;
      else throw ParseError("invalid hex digit in color '" + std::string(hex) + "'");
    }
    v[i] = static_cast<int>(x);
  }
  return {v[0] / 255.0, v[1] / 255.0, v[2] / 255.0};
}

// WCAG 2.x relative luminance of an sRGB color.
inline double relative_luminance(const SrgbColor& s) {
  const Eigen::Vector3d lin = linear_rgb(clamp01(s));
  return 0.2126 * lin[0] + 0.7152 * lin[1] + 0.0722 * lin[2];
}

inline double contrast_ratio(const SrgbColor& x, const SrgbColor& y) {
  const double lx = relative_luminance(x);
  const double ly = relative_luminance(y);
  return (std::max(lx, ly) + 0.05) / (std::min(lx, ly) + 0.05);
}

// ---- CIE 1976 L*a*b* ------------------------------------------------------

inline CieLabColor xyz_to_cielab(const XyzColor& x) {
  constexpr double kEps = 216.0 / 24389.0;
  constexpr double kKappa = 24389.0 / 27.0;
  auto f = [](double t) { return t > kEps ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0; };
  const double fx = f(x.X / kD65White.X);
  const double fy = f(x.Y / kD65White.Y);
  const double fz = f(x.Z / kD65White.Z);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

inline XyzColor cielab_to_xyz(const CieLabColor& lab) {
  constexpr double kEps = 216.0 / 24389.0;
  constexpr double kKappa = 24389.0 / 27.0;
  const double fy = (lab.L + 16.0) / 116.0;
  const double fx = fy + lab.a / 500.0;
  const double fz = fy - lab.b / 200.0;
  auto finv = [](double t) {
    const double t3 = t * t * t;
    return t3 > kEps ? t3 : (116.0 * t - 16.0) / kKappa;
  };
  const double yr = lab.L > kKappa * kEps ? fy * fy * fy : lab.L / kKappa;
  return {finv(fx) * kD65White.X, yr * kD65White.Y, finv(fz) * kD65White.Z};
}

// Hue angle of a CIE Lab color in degrees, [0, 360).
inline double cielab_hue_deg(double a, double b) {
  if (a == 0.0 && b == 0.0) return 0.0;
  double h = rad_to_deg(std::atan2(b, a));
  return h < 0.0 ? h + 360.0 : h;
}

inline double cie76(const CieLabColor& x, const CieLabColor& y) {
  const double dL = x.L - y.L, da = x.a - y.a, db = x.b - y.b;
  return std::sqrt(dL * dL + da * da + db * db);
}

namespace detail {

// Squared hue difference from the chroma and a/b components, clamped at 0.
inline double delta_h_squared(const CieLabColor& x, const CieLabColor& y, double C1, double C2) {
  const double da = x.a - y.a, db = x.b - y.b, dC = C1 - C2;
  return std::max(0.0, da * da + db * db - dC * dC);
}

}  // namespace detail

// CIE94 with graphic-arts constants; `reference` is the first argument.
inline double cie94(const CieLabColor& reference, const CieLabColor& sample) {
  constexpr double kK1 = 0.045, kK2 = 0.015;
  const double C1 = std::hypot(reference.a, reference.b);
  const double C2 = std::hypot(sample.a, sample.b);
  const double dL = reference.L - sample.L;
  const double dC = C1 - C2;
  const double dH2 = detail::delta_h_squared(reference, sample, C1, C2);
  const double SC = 1.0 + kK1 * C1;
  const double SH = 1.0 + kK2 * C1;
  return std::sqrt(dL * dL + (dC / SC) * (dC / SC) + dH2 / (SH * SH));
}

// CMC l:c with l = 2, c = 1; `reference` is the first argument.
inline double cmc(const CieLabColor& reference, const CieLabColor& sample, double l = 2.0,
                  double c = 1.0) {
  const double L1 = reference.L;
  const double C1 = std::hypot(reference.a, reference.b);
  const double C2 = std::hypot(sample.a, sample.b);
  const double dL = L1 - sample.L;
  const double dC = C1 - C2;
  const double dH2 = detail::delta_h_squared(reference, sample, C1, C2);
  const double H1 = cielab_hue_deg(reference.a, reference.b);
  const double SL = L1 < 16.0 ? 0.511 : 0.040975 * L1 / (1.0 + 0.01765 * L1);
  const double SC = 0.0638 * C1 / (1.0 + 0.0131 * C1) + 0.638;
  const double C14 = C1 * C1 * C1 * C1;
  const double F = std::sqrt(C14 / (C14 + 1900.0));
  const double T = (H1 >= 164.0 && H1 <= 345.0)
                       ? 0.56 + std::abs(0.2 * std::cos(deg_to_rad(H1 + 168.0)))
                       : 0.36 + std::abs(0.4 * std::cos(deg_to_rad(H1 + 35.0)));
  const double SH = SC * (F * T + 1.0 - F);
  const double tL = dL / (l * SL), tC = dC / (c * SC);
  return std::sqrt(tL * tL + tC * tC + dH2 / (SH * SH));
}

// CIEDE2000 with kL = kC = kH = 1.
inline double ciede2000(const CieLabColor& x, const CieLabColor& y) {
  constexpr double k25pow7 = 6103515625.0;
  const double C1ab = std::hypot(x.a, x.b);
  const double C2ab = std::hypot(y.a, y.b);
  const double Cbar = 0.5 * (C1ab + C2ab);
  const double Cbar7 = std::pow(Cbar, 7.0);
  const double G = 0.5 * (1.0 - std::sqrt(Cbar7 / (Cbar7 + k25pow7)));
  const double a1 = (1.0 + G) * x.a;
  const double a2 = (1.0 + G) * y.a;
  const double C1 = std::hypot(a1, x.b);
  const double C2 = std::hypot(a2, y.b);
  auto hue = [](double b, double a) {
    if (a == 0.0 && b == 0.0) return 0.0;
    double h = rad_to_deg(std::atan2(b, a));
    return h < 0.0 ? h + 360.0 : h;
  };
  const double h1 = hue(x.b, a1);
  const double h2 = hue(y.b, a2);

  const double dL = y.L - x.L;
  const double dC = C2 - C1;
  double dh = 0.0;
  if (C1 * C2 != 0.0) {
    dh = h2 - h1;
    if (dh > 180.0) dh -= 360.0;
    else if (dh < -180.0) dh += 360.0;
  }
  const double dH = 2.0 * std::sqrt(C1 * C2) * std::sin(deg_to_rad(dh / 2.0));

  const double Lbar = 0.5 * (x.L + y.L);
  const double Cpbar = 0.5 * (C1 + C2);
  double hbar = h1 + h2;
  if (C1 * C2 != 0.0) {
    if (std::abs(h1 - h2) <= 180.0) hbar = 0.5 * (h1 + h2);
    else if (h1 + h2 < 360.0) hbar = 0.5 * (h1 + h2 + 360.0);
    else hbar = 0.5 * (h1 + h2 - 360.0);
  }
  const double T = 1.0 - 0.17 * std::cos(deg_to_rad(hbar - 30.0)) +
                   0.24 * std::cos(deg_to_rad(2.0 * hbar)) +
                   0.32 * std::cos(deg_to_rad(3.0 * hbar + 6.0)) -
                   0.20 * std::cos(deg_to_rad(4.0 * hbar - 63.0));
  const double dTheta = 30.0 * std::exp(-std::pow((hbar - 275.0) / 25.0, 2.0));
  const double Cpbar7 = std::pow(Cpbar, 7.0);
  const double RC = 2.0 * std::sqrt(Cpbar7 / (Cpbar7 + k25pow7));
  const double L50 = (Lbar - 50.0) * (Lbar - 50.0);
  const double SL = 1.0 + 0.015 * L50 / std::sqrt(20.0 + L50);
  const double SC = 1.0 + 0.045 * Cpbar;
  const double SH = 1.0 + 0.015 * Cpbar * T;
  const double RT = -std::sin(deg_to_rad(2.0 * dTheta)) * RC;
  const double tL = dL / SL, tC = dC / SC, tH = dH / SH;
  return std::sqrt(tL * tL + tC * tC + tH * tH + RT * tC * tH);
}

// ---- Oklab ------------------------------------------------------------------

namespace detail {

inline const Eigen::Matrix3d& oklab_m1() {
  static const Eigen::Matrix3d m = (Eigen::Matrix3d() << 0.8189330101, 0.3618667424, -0.1288597137,
                                    0.0329845436, 0.9293118715, 0.0361456387, 0.0482003018,
                                    0.2643662691, 0.6338517070)
                                       .finished();
  return m;
}

inline const Eigen::Matrix3d& oklab_m2() {
  static const Eigen::Matrix3d m = (Eigen::Matrix3d() << 0.2104542553, 0.7936177850, -0.0040720468,
                                    1.9779984951, -2.4285922050, 0.4505937099, 0.0259040371,
                                    0.7827717662, -0.8086757660)
                                       .finished();
  return m;
}

}  // namespace detail

inline OklabColor oklab_from_xyz(const XyzColor& x) {
  Eigen::Vector3d lms = detail::oklab_m1() * Eigen::Vector3d(x.X, x.Y, x.Z);
  for (int i = 0; i < 3; ++i) lms[i] = std::cbrt(lms[i]);
  const Eigen::Vector3d lab = detail::oklab_m2() * lms;
  return {lab[0], lab[1], lab[2]};
}

inline XyzColor oklab_to_xyz(const OklabColor& o) {
  Eigen::Vector3d lms = detail::oklab_m2().inverse() * Eigen::Vector3d(o.L, o.a, o.b);
  for (int i = 0; i < 3; ++i) lms[i] = lms[i] * lms[i] * lms[i];
  const Eigen::Vector3d xyz = detail::oklab_m1().inverse() * lms;
  return {xyz[0], xyz[1], xyz[2]};
}

inline double oklab_distance(const OklabColor& x, const OklabColor& y) {
  const double dL = x.L - y.L, da = x.a - y.a, db = x.b - y.b;
  return std::sqrt(dL * dL + da * da + db * db);
}

}  // namespace helmlab
