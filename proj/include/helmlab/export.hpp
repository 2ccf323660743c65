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

#include <cctype>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "helmlab/baselines.hpp"
#include "helmlab/design.hpp"
#include "helmlab/errors.hpp"
#include "helmlab/params.hpp"
#include "helmlab/transform.hpp"
#include "helmlab/types.hpp"

namespace helmlab {

struct Token {
  std::string name;  // slug: [a-z0-9-]
  HelmlabColor color;
  std::optional<int> stop;  // scale stop such as 500
  std::string role;         // free-form semantic tag

  friend bool operator==(const Token&, const Token&) = default;
};

struct TokenSet {
  std::vector<Token> tokens;
};

inline bool is_slug(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!((ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') || ch == '-')) return false;
  return true;
}

inline void validate(const TokenSet& ts) {
  std::set<std::string_view> seen;
  for (const auto& t : ts.tokens) {
    if (!is_slug(t.name)) throw ValidationError("token name '" + t.name + "' is not a slug of [a-z0-9-]");
    if (!seen.insert(t.name).second) throw ValidationError("duplicate token name '" + t.name + "'");
    if (!std::isfinite(t.color.L) || !std::isfinite(t.color.a) || !std::isfinite(t.color.b)) {
      throw ValidationError("token '" + t.name + "' has non-finite coordinates");
    }
  }
}

enum class TokenFormat { kCss, kAndroid, kIos, kTailwind, kJson };

inline std::optional<TokenFormat> parse_token_format(std::string_view s) {
  if (s == "css") return TokenFormat::kCss;
  if (s == "android") return TokenFormat::kAndroid;
  if (s == "ios") return TokenFormat::kIos;
  if (s == "tailwind") return TokenFormat::kTailwind;
  if (s == "json") return TokenFormat::kJson;
  return std::nullopt;
}

namespace detail {

struct ResolvedToken {
  const Token* token;
  SrgbColor srgb;  // gamut-mapped to sRGB
  SrgbColor p3;    // gamut-mapped to Display P3
  bool srgb_mapped;
  bool p3_mapped;
};

inline std::vector<ResolvedToken> resolve(const TokenSet& ts, const ParameterSet& p) {
  std::vector<ResolvedToken> out;
  for (const auto& t : ts.tokens) {
    const GamutMapped s = gamut_map(t.color, p, {Gamut::kSrgb, kGamutEpsilon});
    const GamutMapped q = gamut_map(t.color, p, {Gamut::kDisplayP3, kGamutEpsilon});
    out.push_back({&t, clamp01(xyz_to_srgb(inverse(s.color, p))), clamp01(xyz_to_p3(inverse(q.color, p))),
                   s.mapped, q.mapped});
  }
  return out;
}

inline std::vector<std::string> warnings(const std::vector<ResolvedToken>& rs) {
  std::vector<std::string> w;
  for (const auto& r : rs) {
    if (r.srgb_mapped) w.push_back(r.token->name + " was outside the sRGB gamut and has been gamut-mapped");
    if (r.p3_mapped) w.push_back(r.token->name + " was outside the Display P3 gamut and has been gamut-mapped");
  }
  return w;
}

inline std::string fmt(const char* f, double a, double b, double c) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

inline std::string argb_hex(const SrgbColor& s) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "#FF%02X%02X%02X", to_byte(s.r), to_byte(s.g), to_byte(s.b));
  return buf;
}

inline std::string swift_identifier(std::string_view slug) {
  std::string out;
  bool upper = false;
  for (char ch : slug) {
    if (ch == '-') {
      upper = !out.empty();
      continue;
    }
    out += upper ? static_cast<char>(std::toupper(static_cast<unsigned char>(ch))) : ch;
    upper = false;
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front()))) out = "color" + out;
  return out;
}

inline std::string android_name(std::string_view slug) {
  std::string out(slug);
  for (char& ch : out)
    if (ch == '-') ch = '_';
  if (std::isdigit(static_cast<unsigned char>(out.front()))) out = "color_" + out;
  return out;
}

// Family name for a stop-carrying token: "primary-500" -> "primary".
inline std::string family(const Token& t) {
  if (!t.stop) return t.name;
  const std::string suffix = "-" + std::to_string(*t.stop);
  if (t.name.size() > suffix.size() && t.name.compare(t.name.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return t.name.substr(0, t.name.size() - suffix.size());
  }
  return t.name;
}

inline void check_unique(const std::vector<std::string>& names, std::string_view format) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) {
      throw ValidationError("token names collide as '" + n + "' in " + std::string(format) + " output");
    }
  }
}

inline std::string export_css(const std::vector<ResolvedToken>& rs) {
  std::string out = "/* Helmlab design tokens */\n";
  for (const auto& w : warnings(rs)) out += "/* warning: " + w + " */\n";
  out += ":root {\n";
  for (const auto& r : rs) {
    const OklabColor o = oklab_from_xyz(srgb_to_xyz(r.srgb));
    const double C = std::hypot(o.a, o.b);
    double h = rad_to_deg(std::atan2(o.b, o.a));
    if (h < 0.0) h += 360.0;
    if (C < 1e-9) h = 0.0;
    out += "  --" + r.token->name + ": oklch(" + fmt("%.5f %.5f %.3f", o.L, C, h) + ");\n";
    out += "  --" + r.token->name + "-p3: color(display-p3 " + fmt("%.6f %.6f %.6f", r.p3.r, r.p3.g, r.p3.b) + ");\n";
  }
  out += "}\n";
  return out;
}

inline std::string export_android(const std::vector<ResolvedToken>& rs) {
  std::vector<std::string> names;
  for (const auto& r : rs) names.push_back(android_name(r.token->name));
  check_unique(names, "android");
  std::string out = "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<!-- Helmlab design tokens -->\n";
  for (const auto& w : warnings(rs)) out += "<!-- warning: " + w + " -->\n";
  out += "<resources>\n";
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const HelmlabColor& c = rs[i].token->color;
    double h = rad_to_deg(c.hue());
    if (h < 0.0) h += 360.0;
    out += "    <!-- " + fmt("tone %.1f chroma %.4f hue %.1f", 100.0 * c.L, c.chroma(), h) + " -->\n";
    out += "    <color name=\"" + names[i] + "\">" + argb_hex(rs[i].srgb) + "</color>\n";
  }
  out += "</resources>\n";
  return out;
}

inline std::string export_ios(const std::vector<ResolvedToken>& rs) {
  std::vector<std::string> names;
  for (const auto& r : rs) names.push_back(swift_identifier(r.token->name));
  check_unique(names, "ios");
  std::string out = "// Helmlab design tokens\n";
  for (const auto& w : warnings(rs)) out += "// warning: " + w + "\n";
  out += "import SwiftUI\n\nextension Color {\n";
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const SrgbColor& c = rs[i].p3;
    out += "    static let " + names[i] + " = Color(.displayP3, " +
           fmt("red: %.6f, green: %.6f, blue: %.6f", c.r, c.g, c.b) + ", opacity: 1)\n";
  }
  out += "}\n";
  return out;
}

inline std::string export_tailwind(const std::vector<ResolvedToken>& rs) {
  nlohmann::ordered_json colors = nlohmann::ordered_json::object();
  for (const auto& r : rs) {
    const std::string hex = to_hex(r.srgb);
    if (r.token->stop) {
      auto& fam = colors[family(*r.token)];
      if (!fam.is_null() && !fam.is_object()) {
        throw ValidationError("token family '" + family(*r.token) + "' clashes with a plain token");
      }
      const std::string stop = std::to_string(*r.token->stop);
      if (fam.contains(stop)) throw ValidationError("duplicate stop " + stop + " in '" + family(*r.token) + "'");
      fam[stop] = hex;
    } else {
      if (colors.contains(r.token->name)) {
        throw ValidationError("token '" + r.token->name + "' clashes with a scale family");
      }
      colors[r.token->name] = hex;
    }
  }
  std::string body = colors.dump(2);
  std::string indented;
  for (char ch : body) {
    indented += ch;
    if (ch == '\n') indented += "      ";
  }
  std::string out = "// Helmlab design tokens\n";
  for (const auto& w : warnings(rs)) out += "// warning: " + w + "\n";
  out += "module.exports = {\n  theme: {\n    extend: {\n      colors: " + indented + ",\n    },\n  },\n};\n";
  return out;
}

inline std::string export_json(const std::vector<ResolvedToken>& rs) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["format"] = "helmlab-tokens";
  doc["version"] = 1;
  doc["warnings"] = warnings(rs);
  ordered_json arr = ordered_json::array();
  for (const auto& r : rs) {
    const Token& t = *r.token;
    ordered_json e;
    e["name"] = t.name;
    e["helmlab"] = {t.color.L, t.color.a, t.color.b};
    e["hex"] = to_hex(r.srgb);
    e["srgb"] = {r.srgb.r, r.srgb.g, r.srgb.b};
    e["p3"] = {r.p3.r, r.p3.g, r.p3.b};
    if (t.stop) e["stop"] = *t.stop;
    if (!t.role.empty()) e["role"] = t.role;
    arr.push_back(std::move(e));
  }
  doc["tokens"] = std::move(arr);
  return doc.dump(2) + "\n";
}

}  // namespace detail

inline std::string export_tokens(const TokenSet& ts, TokenFormat format, const ParameterSet& p) {
  validate(ts);
  const auto rs = detail::resolve(ts, p);
  switch (format) {
    case TokenFormat::kCss: return detail::export_css(rs);
    case TokenFormat::kAndroid: return detail::export_android(rs);
    case TokenFormat::kIos: return detail::export_ios(rs);
    case TokenFormat::kTailwind: return detail::export_tailwind(rs);
    case TokenFormat::kJson: return detail::export_json(rs);
  }
  return {};
}

// Reads the json export format back into a token set.
inline TokenSet import_tokens_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("token document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("tokens") || !doc["tokens"].is_array()) {
    throw ParseError("token document must have a 'tokens' array");
  }
  TokenSet ts;
  for (const auto& e : doc["tokens"]) {
    if (!e.is_object() || !e.contains("name") || !e["name"].is_string()) throw ParseError("token entry needs a 'name'");
    const auto& h = e.contains("helmlab") ? e["helmlab"] : nlohmann::json();
    if (!h.is_array() || h.size() != 3 || !h[0].is_number() || !h[1].is_number() || !h[2].is_number()) {
      throw ParseError("token '" + e["name"].get<std::string>() + "': 'helmlab' must be three numbers");
    }
    Token t{e["name"].get<std::string>(), {h[0].get<double>(), h[1].get<double>(), h[2].get<double>()}, {}, {}};
    if (e.contains("stop")) {
      if (!e["stop"].is_number_integer()) throw ParseError("token '" + t.name + "': 'stop' must be an integer");
      t.stop = e["stop"].get<int>();
    }
    if (e.contains("role")) {
      if (!e["role"].is_string()) throw ParseError("token '" + t.name + "': 'role' must be a string");
      t.role = e["role"].get<std::string>();
    }
    ts.tokens.push_back(std::move(t));
  }
  validate(ts);
  return ts;
}

// Semantic scale tokens "<name>-50" .. "<name>-950" around an anchor.
inline TokenSet scale_tokens(std::string_view name, const HelmlabColor& anchor, const ParameterSet& p,
                             Gamut target = Gamut::kSrgb) {
  PaletteSpec spec;
  spec.kind = PaletteKind::kSemanticScale;
  spec.target = target;
  const auto colors = palette_mapped(spec, anchor, p);
  TokenSet ts;
  for (std::size_t i = 0; i < colors.size(); ++i) {
    ts.tokens.push_back({std::string(name) + "-" + std::to_string(kScaleStops[i]), colors[i], kScaleStops[i], std::string(name)});
  }
  validate(ts);
  return ts;
}

}  // namespace helmlab
