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
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "helmlab/errors.hpp"
#include "helmlab/pchip.hpp"

namespace helmlab {

// Stage 4: rotation of the chromatic vector by a 4-harmonic function of hue.
struct HueCorrectionParams {
  std::array<double, 4> cos{};  // alpha_1..4
  std::array<double, 4> sin{};  // beta_1..4
};

// Stage 5: L += weight * C^power * (1 + f(h)),
// f(h) = cos1 cos h + sin1 sin h + cos2 cos 2h + sin2 sin 2h.
struct HkParams {
  double weight = 0.0;
  double power = 1.0;
  double cos1 = 0.0;
  double sin1 = 0.0;
  double cos2 = 0.0;
  double sin2 = 0.0;
};

// Stage 6: cubic lightness residual with a 1-harmonic hue term, then
// dark-region exponential compression with hue-modulated strength.
struct LightnessParams {
  double cubic = 0.0;
  double quadratic = 0.0;
  double linear = 0.0;
  double hue_cos = 0.0;
  double hue_sin = 0.0;
  double dark = 0.0;
  double dark_cos = 0.0;
  double dark_sin = 0.0;
};

// Stages 7-8, in application order.
struct ChromaParams {
  std::array<double, 4> scale_cos{};  // (a) hue-dependent scaling
  std::array<double, 4> scale_sin{};
  double power_cos1 = 0.0;  // (b) chroma exponent offset eps(h)
  double power_sin1 = 0.0;
  double power_cos2 = 0.0;
  double power_sin2 = 0.0;
  double lightness_linear = 0.0;  // (c) L-dependent scaling
  double lightness_quadratic = 0.0;
  double hl_cos1 = 0.0;  // (d) hue x lightness interaction
  double hl_sin1 = 0.0;
  double hl_cos2 = 0.0;
  double hl_sin2 = 0.0;
};

// Stage 9: L *= exp(g(h)).
struct HueLightnessParams {
  double cos1 = 0.0;
  double cos2 = 0.0;
  double sin1 = 0.0;
  double sin2 = 0.0;
};

// Pair-dependent distance metric coefficients.
struct DistanceParams {
  double s_l = 0.0;
  double s_c = 0.0;
  double p = 2.0;    // Minkowski exponent
  double w_c = 1.0;  // chroma weight
  double c = 0.0;    // compression
  double q = 1.0;    // post-power
  double alpha = 0.0;  // linear term; stored, not applied
};

// Surround modulation. Each coefficient scales its stage by (1 + S * coef);
// all coefficients are zero in this release.
struct SurroundParams {
  double value = 0.5;
  double hk = 0.0;
  double dark = 0.0;
  double chroma = 0.0;
  double chroma_lightness = 0.0;

  friend bool operator==(const SurroundParams&, const SurroundParams&) = default;
};

struct ParameterSet {
  Eigen::Matrix3d m1 = Eigen::Matrix3d::Identity();
  Eigen::Vector3d gamma = Eigen::Vector3d::Ones();
  Eigen::Matrix3d m2 = Eigen::Matrix3d::Identity();
  HueCorrectionParams hue_corr;
  HkParams hk;
  LightnessParams lightness;
  ChromaParams chroma;
  HueLightnessParams hue_l;
  DistanceParams distance;
  SurroundParams surround;
  double rotation_phi_deg = 0.0;
  std::optional<NeutralCorrectionLut> neutral_lut;
  // Per-scalar flag: true when the value is printed in the published table,
  // false for documented placeholders. Empty for user-supplied documents.
  std::map<std::string, bool> paper_exact;
};

// The learned parameter groups, in pipeline order.
enum class Group { kM1, kGamma, kM2, kHueCorr, kHk, kLightness, kChroma, kHueL, kDistance };

inline constexpr std::array<Group, 9> kAllGroups = {
    Group::kM1,        Group::kGamma,  Group::kM2,   Group::kHueCorr,  Group::kHk,
    Group::kLightness, Group::kChroma, Group::kHueL, Group::kDistance};

inline constexpr std::string_view group_name(Group g) {
  switch (g) {
    case Group::kM1: return "m1";
    case Group::kGamma: return "gamma";
    case Group::kM2: return "m2";
    case Group::kHueCorr: return "hue_corr";
    case Group::kHk: return "hk";
    case Group::kLightness: return "lightness";
    case Group::kChroma: return "chroma";
    case Group::kHueL: return "hue_l";
    case Group::kDistance: return "distance";
  }
  return "";
}

inline constexpr std::size_t group_size(Group g) {
  switch (g) {
    case Group::kM1: return 9;
    case Group::kGamma: return 3;
    case Group::kM2: return 9;
    case Group::kHueCorr: return 8;
    case Group::kHk: return 6;
    case Group::kLightness: return 8;
    case Group::kChroma: return 18;
    case Group::kHueL: return 4;
    case Group::kDistance: return 7;
  }
  return 0;
}

inline constexpr std::size_t counted_parameter_count() {
  std::size_t n = 0;
  for (Group g : kAllGroups) n += group_size(g);
  return n;
}

static_assert(counted_parameter_count() == 72);

// Scalar names within a group, in serialization order.
inline std::vector<std::string_view> group_scalar_names(Group g) {
  switch (g) {
    case Group::kM1:
    case Group::kM2:
      return {"00", "01", "02", "10", "11", "12", "20", "21", "22"};
    case Group::kGamma:
      return {"0", "1", "2"};
    case Group::kHueCorr:
      return {"alpha1", "alpha2", "alpha3", "alpha4", "beta1", "beta2", "beta3", "beta4"};
    case Group::kHk:
      return {"w", "p", "m", "s1", "c2", "s2"};
    case Group::kLightness:
      return {"p1", "p2", "p3", "Lh_c1", "Lh_s1", "lambda_d", "h_c", "h_s"};
    case Group::kChroma:
      return {"alpha1",   "alpha2",   "alpha3",   "alpha4",   "beta1", "beta2",
              "beta3",    "beta4",    "eps_c1",   "eps_s1",   "eps_c2", "eps_s2",
              "l1",       "l2",       "hl_c1",    "hl_s1",    "hl_c2", "hl_s2"};
    case Group::kHueL:
      return {"g_c1", "g_c2", "g_s1", "g_s2"};
    case Group::kDistance:
      return {"sL", "sC", "p", "wC", "c", "q", "alpha"};
  }
  return {};
}

// Mutable references to the scalars of one group, in serialization order.
inline std::vector<double*> group_refs(ParameterSet& p, Group g) {
  switch (g) {
    case Group::kM1:
    case Group::kM2: {
      Eigen::Matrix3d& m = (g == Group::kM1) ? p.m1 : p.m2;
      std::vector<double*> r;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.push_back(&m(i, j));
      return r;
    }
    case Group::kGamma:
      return {&p.gamma[0], &p.gamma[1], &p.gamma[2]};
    case Group::kHueCorr: {
      auto& h = p.hue_corr;
      return {&h.cos[0], &h.cos[1], &h.cos[2], &h.cos[3],
              &h.sin[0], &h.sin[1], &h.sin[2], &h.sin[3]};
    }
    case Group::kHk: {
      auto& h = p.hk;
      return {&h.weight, &h.power, &h.cos1, &h.sin1, &h.cos2, &h.sin2};
    }
    case Group::kLightness: {
      auto& l = p.lightness;
      return {&l.cubic, &l.quadratic, &l.linear, &l.hue_cos,
              &l.hue_sin, &l.dark, &l.dark_cos, &l.dark_sin};
    }
    case Group::kChroma: {
      auto& c = p.chroma;
      return {&c.scale_cos[0], &c.scale_cos[1], &c.scale_cos[2], &c.scale_cos[3],
              &c.scale_sin[0], &c.scale_sin[1], &c.scale_sin[2], &c.scale_sin[3],
              &c.power_cos1,   &c.power_sin1,   &c.power_cos2,   &c.power_sin2,
              &c.lightness_linear, &c.lightness_quadratic,
              &c.hl_cos1, &c.hl_sin1, &c.hl_cos2, &c.hl_sin2};
    }
    case Group::kHueL: {
      auto& h = p.hue_l;
      return {&h.cos1, &h.cos2, &h.sin1, &h.sin2};
    }
    case Group::kDistance: {
      auto& d = p.distance;
      return {&d.s_l, &d.s_c, &d.p, &d.w_c, &d.c, &d.q, &d.alpha};
    }
  }
  return {};
}

inline std::vector<double> group_values(const ParameterSet& p, Group g) {
  std::vector<double> out;
  for (double* v : group_refs(const_cast<ParameterSet&>(p), g)) out.push_back(*v);
  return out;
}

// "group.scalar" names of the 72 counted parameters.
inline std::vector<std::string> parameter_names() {
  std::vector<std::string> names;
  for (Group g : kAllGroups) {
    for (auto s : group_scalar_names(g)) {
      names.push_back(std::string(group_name(g)) + "." + std::string(s));
    }
  }
  return names;
}

// Flattens the counted parameters in canonical order.
inline Eigen::VectorXd to_vector(const ParameterSet& p) {
  Eigen::VectorXd v(counted_parameter_count());
  Eigen::Index i = 0;
  for (Group g : kAllGroups)
    for (double x : group_values(p, g)) v[i++] = x;
  return v;
}

// Overwrites the counted parameters of `base` from a flat vector. Structural
// fields (rotation, surround, neutral LUT, provenance) are carried over.
inline ParameterSet from_vector(const ParameterSet& base, const Eigen::VectorXd& v) {
  if (v.size() != static_cast<Eigen::Index>(counted_parameter_count())) {
    throw ValidationError("parameter vector must have 72 entries");
  }
  ParameterSet p = base;
  Eigen::Index i = 0;
  for (Group g : kAllGroups)
    for (double* ref : group_refs(p, g)) *ref = v[i++];
  return p;
}

// Field-for-field equality, including the structural extras.
inline bool operator==(const ParameterSet& x, const ParameterSet& y) {
  return to_vector(x) == to_vector(y) && x.surround == y.surround &&
         x.rotation_phi_deg == y.rotation_phi_deg && x.neutral_lut == y.neutral_lut &&
         x.paper_exact == y.paper_exact;
}

// Throws ValidationError on the first violated invariant.
inline void validate(const ParameterSet& p) {
  for (Group g : kAllGroups) {
    for (double x : group_values(p, g)) {
      if (!std::isfinite(x)) {
        throw ValidationError("non-finite value in group '" + std::string(group_name(g)) + "'");
      }
    }
  }
  if (!(std::abs(p.m1.determinant()) > 1e-9)) throw ValidationError("m1 is singular (|det| <= 1e-9)");
  if (!(std::abs(p.m2.determinant()) > 1e-9)) throw ValidationError("m2 is singular (|det| <= 1e-9)");
  for (int i = 0; i < 3; ++i) {
    if (!(p.gamma[i] > 0.0 && p.gamma[i] <= 2.0)) {
      throw ValidationError("gamma[" + std::to_string(i) + "] must lie in (0, 2]");
    }
  }
  if (!(p.distance.q > 0.0)) throw ValidationError("distance.q must be positive");
  if (!(p.distance.c >= 0.0)) throw ValidationError("distance.c must be nonnegative");
  if (!(p.distance.p > 0.0)) throw ValidationError("distance.p must be positive");
  if (!std::isfinite(p.rotation_phi_deg)) throw ValidationError("rotation_phi_deg must be finite");
  const auto& s = p.surround;
  if (!(std::isfinite(s.value) && std::isfinite(s.hk) && std::isfinite(s.dark) &&
        std::isfinite(s.chroma) && std::isfinite(s.chroma_lightness))) {
    throw ValidationError("surround block must be finite");
  }
}

// Published values where the table prints them; small documented
// placeholders (|x| <= 0.1) elsewhere, flagged in `paper_exact`.
inline ParameterSet default_params() {
  ParameterSet p;
  p.m1 << 0.734, 0.240, -0.158,
          -0.330, 1.235, -0.000,
          0.086, 0.341, 0.832;
  p.gamma = {0.389, 0.416, 0.424};
  p.m2 << -0.420, 0.485, 0.642,
          1.933, -2.718, 0.764,
          0.006, 1.628, -1.261;

  p.hue_corr.cos = {0.03, -0.02, 0.01, 0.005};
  p.hue_corr.sin = {-0.04, 0.015, -0.01, 0.005};

  p.hk = {0.389, 0.849, -0.494, 0.05, -0.03, 0.02};

  p.lightness = {0.222, -0.727, 0.695, 0.04, -0.03, 0.1, 0.05, -0.05};

  auto& c = p.chroma;
  c.scale_cos = {0.02, -0.03, 0.01, 0.0};
  c.scale_sin = {0.03, 0.01, -0.02, 0.005};
  c.power_cos1 = 0.03;
  c.power_sin1 = -0.02;
  c.power_cos2 = 0.01;
  c.power_sin2 = 0.01;
  c.lightness_linear = 0.05;
  c.lightness_quadratic = -0.04;
  c.hl_cos1 = 0.02;
  c.hl_sin1 = -0.01;
  c.hl_cos2 = 0.015;
  c.hl_sin2 = -0.005;

  p.hue_l = {0.03, -0.02, 0.04, 0.01};

  p.distance = {1.01e-3, 0.022, 0.804, 1.046, 1.590, 1.100, 0.000};
  p.rotation_phi_deg = -28.2;

  for (Group g : kAllGroups) {
    for (auto s : group_scalar_names(g)) {
      const std::string name = std::string(group_name(g)) + "." + std::string(s);
      bool exact = true;
      switch (g) {
        case Group::kHueCorr:
        case Group::kChroma:
        case Group::kHueL:
          exact = false;
          break;
        case Group::kHk:
          exact = (s == "w" || s == "p" || s == "m");
          break;
        case Group::kLightness:
          exact = (s == "p1" || s == "p2" || s == "p3");
          break;
        default:
          break;
      }
      p.paper_exact[name] = exact;
    }
  }
  return p;
}

// True when every counted parameter carries a paper-exact flag.
inline bool is_paper_exact(const ParameterSet& p) {
  if (p.paper_exact.size() != counted_parameter_count()) return false;
  for (const auto& [name, exact] : p.paper_exact)
    if (!exact) return false;
  return true;
}

namespace detail {

using nlohmann::json;

inline const json& require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ValidationError(std::string("missing required block '") + key + "'");
  return *it;
}

inline double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ParseError("field '" + field + "' must be a number");
  return v.get<double>();
}

inline std::vector<double> number_array(const json& v, const std::string& field,
                                        std::optional<std::size_t> expected) {
  if (!v.is_array()) throw ParseError("field '" + field + "' must be an array");
  if (expected && v.size() != *expected) {
    throw ParseError("field '" + field + "' must have " + std::to_string(*expected) +
                     " entries, got " + std::to_string(v.size()));
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline Eigen::Matrix3d matrix(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 3) throw ParseError("field '" + field + "' must be 3 rows of 3");
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i) {
    auto row = number_array(v[i], field + "[" + std::to_string(i) + "]", 3);
    for (int j = 0; j < 3; ++j) m(i, j) = row[j];
  }
  return m;
}

inline json matrix_json(const Eigen::Matrix3d& m) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) rows.push_back({m(i, 0), m(i, 1), m(i, 2)});
  return rows;
}

inline void assign_group(ParameterSet& p, Group g, const std::vector<double>& values) {
  auto refs = group_refs(p, g);
  for (std::size_t i = 0; i < refs.size(); ++i) *refs[i] = values[i];
}

}  // namespace detail

inline nlohmann::json params_to_json(const ParameterSet& p) {
  using nlohmann::json;
  json doc = json::object();
  doc["m1"] = detail::matrix_json(p.m1);
  doc["gamma"] = {p.gamma[0], p.gamma[1], p.gamma[2]};
  doc["m2"] = detail::matrix_json(p.m2);
  doc["hue_corr"] = group_values(p, Group::kHueCorr);
  doc["hk"] = group_values(p, Group::kHk);
  doc["lightness"] = group_values(p, Group::kLightness);
  doc["chroma"] = group_values(p, Group::kChroma);
  doc["hue_l"] = group_values(p, Group::kHueL);
  const auto& d = p.distance;
  doc["distance"] = {{"sL", d.s_l}, {"sC", d.s_c}, {"p", d.p}, {"wC", d.w_c},
                     {"c", d.c},    {"q", d.q},    {"alpha", d.alpha}};
  const auto& s = p.surround;
  doc["surround"] = {{"S", s.value}, {"hk", s.hk}, {"dark", s.dark},
                     {"chroma", s.chroma}, {"lchroma", s.chroma_lightness}};
  doc["rotation_phi_deg"] = p.rotation_phi_deg;
  if (p.neutral_lut) {
    doc["neutral_lut"] = {{"L", p.neutral_lut->lightness()},
                          {"a_err", p.neutral_lut->a_err()},
                          {"b_err", p.neutral_lut->b_err()}};
  }
  if (!p.paper_exact.empty()) doc["provenance"] = p.paper_exact;
  return doc;
}

inline ParameterSet params_from_json(const nlohmann::json& doc) {
  using detail::number;
  using detail::number_array;
  if (!doc.is_object()) throw ParseError("parameter document must be an object");

  ParameterSet p;
  p.m1 = detail::matrix(detail::require(doc, "m1"), "m1");
  detail::assign_group(p, Group::kGamma, number_array(detail::require(doc, "gamma"), "gamma", 3));
  p.m2 = detail::matrix(detail::require(doc, "m2"), "m2");
  for (Group g : {Group::kHueCorr, Group::kHk, Group::kLightness, Group::kChroma, Group::kHueL}) {
    const std::string key(group_name(g));
    detail::assign_group(p, g, number_array(detail::require(doc, key.c_str()), key, group_size(g)));
  }

  const auto& dist = detail::require(doc, "distance");
  if (!dist.is_object()) throw ParseError("field 'distance' must be an object");
  std::vector<double> dv;
  for (auto name : group_scalar_names(Group::kDistance)) {
    const std::string key(name);
    auto it = dist.find(key);
    if (it == dist.end()) throw ValidationError("missing required field 'distance." + key + "'");
    dv.push_back(number(*it, "distance." + key));
  }
  detail::assign_group(p, Group::kDistance, dv);

  if (auto it = doc.find("surround"); it != doc.end()) {
    if (!it->is_object()) throw ParseError("field 'surround' must be an object");
    auto get = [&](const char* key, double fallback) {
      auto f = it->find(key);
      return f == it->end() ? fallback : number(*f, std::string("surround.") + key);
    };
    p.surround.value = get("S", 0.5);
    p.surround.hk = get("hk", 0.0);
    p.surround.dark = get("dark", 0.0);
    p.surround.chroma = get("chroma", 0.0);
    p.surround.chroma_lightness = get("lchroma", 0.0);
  }

  p.rotation_phi_deg = number(detail::require(doc, "rotation_phi_deg"), "rotation_phi_deg");

  if (auto it = doc.find("neutral_lut"); it != doc.end() && !it->is_null()) {
    if (!it->is_object()) throw ParseError("field 'neutral_lut' must be an object");
    auto L = number_array(detail::require(*it, "L"), "neutral_lut.L", std::nullopt);
    auto a = number_array(detail::require(*it, "a_err"), "neutral_lut.a_err", L.size());
    auto b = number_array(detail::require(*it, "b_err"), "neutral_lut.b_err", L.size());
    try {
      p.neutral_lut.emplace(std::move(L), std::move(a), std::move(b));
    } catch (const std::invalid_argument& e) {
      throw ValidationError(std::string("neutral_lut: ") + e.what());
    }
  }

  if (auto it = doc.find("provenance"); it != doc.end()) {
    if (!it->is_object()) throw ParseError("field 'provenance' must be an object");
    for (const auto& [k, v] : it->items()) {
      if (!v.is_boolean()) throw ParseError("field 'provenance." + k + "' must be a boolean");
      p.paper_exact[k] = v.get<bool>();
    }
  }

  validate(p);
  return p;
}

inline ParameterSet load_params(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("parameter document is not valid JSON: ") + e.what());
  }
  return params_from_json(doc);
}

inline std::string save_params(const ParameterSet& p) { return params_to_json(p).dump(2) + "\n"; }

}  // namespace helmlab
