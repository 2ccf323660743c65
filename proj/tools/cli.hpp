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

// Command-line front end. Kept in a header so the test suite can drive
// run() directly with string streams.

#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "helmlab/helmlab.hpp"

namespace helmlab::cli {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
}

struct ParsedColor {
  XyzColor xyz;
  std::optional<HelmlabColor> helmlab;  // set for helmlab(...) input
};

// Parses "#rrggbb", "xyz(x,y,z)" or "helmlab(L,a,b)".
inline ParsedColor parse_color(std::string_view s, const ParameterSet& p) {
  s = detail::trim(s);
  if (!s.empty() && s.front() == '#') return {srgb_to_xyz(parse_hex(s)), std::nullopt};
  auto triple = [&](std::string_view prefix) -> std::optional<std::array<double, 3>> {
    if (s.size() < prefix.size() + 2 || s.substr(0, prefix.size()) != prefix || s.back() != ')') return std::nullopt;
    const auto body = s.substr(prefix.size(), s.size() - prefix.size() - 1);
    const auto parts = detail::split_csv(body);
    if (parts.size() != 3) throw ParseError("expected three components in '" + std::string(s) + "'");
    std::array<double, 3> v{};
    for (int i = 0; i < 3; ++i) {
      if (!detail::try_parse_double(detail::trim(parts[i]), v[i])) {
        throw ParseError("bad number in color '" + std::string(s) + "'");
      }
    }
    return v;
  };
  if (auto v = triple("xyz(")) return {{(*v)[0], (*v)[1], (*v)[2]}, std::nullopt};
  if (auto v = triple("helmlab(")) {
    const HelmlabColor c{(*v)[0], (*v)[1], (*v)[2]};
    return {inverse(c, p), c};
  }
  throw ParseError("unrecognized color '" + std::string(s) + "' (use #rrggbb, xyz(x,y,z) or helmlab(L,a,b))");
}

inline HelmlabColor to_helmlab(const ParsedColor& c, const ParameterSet& p) {
  return c.helmlab ? *c.helmlab : forward(c.xyz, p);
}

inline std::string num(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

struct Globals {
  std::string params_file;
  std::string format = "text";
  std::uint64_t seed = 42;
  std::string target = "srgb";
};

inline ParameterSet load_active_params(const Globals& g) {
  std::string path = g.params_file;
  if (path.empty()) {
    if (const char* env = std::getenv("HELMLAB_PARAMS"); env && *env) path = env;
  }
  ParameterSet p = path.empty() ? default_params() : load_params(read_file(path));
  if (!p.neutral_lut) p = with_neutral_lut(std::move(p));
  return p;
}

inline Gamut target_gamut(const Globals& g) { return g.target == "p3" ? Gamut::kDisplayP3 : Gamut::kSrgb; }

inline nlohmann::json color_json(const HelmlabColor& c) { return {c.L, c.a, c.b}; }

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Helmlab perceptual color space toolkit", "helmlab"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--params", g.params_file, "Parameter file (falls back to $HELMLAB_PARAMS)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  auto* seed_opt = app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--target", g.target, "Display gamut")->check(CLI::IsMember({"srgb", "p3"}));

  // convert
  auto* convert = app.add_subcommand("convert", "Convert a color to Helmlab and back");
  std::string convert_color;
  convert->add_option("color", convert_color, "#rrggbb, xyz(x,y,z) or helmlab(L,a,b)")->required();

  // distance
  auto* distance = app.add_subcommand("distance", "Color difference between two colors");
  std::vector<std::string> distance_colors;
  std::string distance_metric = "helmlab";
  distance->add_option("colors", distance_colors, "Two colors")->required()->expected(2);
  distance->add_option("--metric", distance_metric, "Metric name");

  // stress
  auto* stress_cmd = app.add_subcommand("stress", "Evaluate STRESS on a pair dataset");
  std::string dataset_file, stress_metric, munsell_file;
  std::size_t bootstrap = 1000, jacobian_grid = 0;
  stress_cmd->add_option("--dataset", dataset_file, "Pair dataset CSV")->required();
  stress_cmd->add_option("--metric", stress_metric, "Report only this metric");
  stress_cmd->add_option("--bootstrap", bootstrap, "Bootstrap resamples (0 disables)")->capture_default_str();
  stress_cmd->add_option("--munsell", munsell_file, "Munsell chain CSV");
  stress_cmd->add_option("--jacobian-grid", jacobian_grid, "Jacobian grid size (0 skips)");

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Refit parameters on a pair dataset");
  std::string fit_dataset, he_file, config_file, fit_out, fit_report, fit_munsell;
  std::optional<std::size_t> restarts, iters;
  fit_cmd->add_option("--dataset", fit_dataset, "Training dataset CSV")->required();
  fit_cmd->add_option("--he", he_file, "Auxiliary dataset CSV");
  fit_cmd->add_option("--config", config_file, "Fit configuration document");
  fit_cmd->add_option("--restarts", restarts, "Random restarts");
  fit_cmd->add_option("--iters", iters, "Iterations per restart");
  fit_cmd->add_option("--munsell", fit_munsell, "Munsell chain CSV for the uniformity term");
  fit_cmd->add_option("--out", fit_out, "Write fitted parameters here");
  fit_cmd->add_option("--report", fit_report, "Write the full fit report here");

  // ablate
  auto* ablate = app.add_subcommand("ablate", "Frozen ablation table");
  std::string ablate_dataset;
  ablate->add_option("--dataset", ablate_dataset, "Pair dataset CSV")->required();

  // palette
  auto* palette_cmd = app.add_subcommand("palette", "Generate a palette around an anchor color");
  std::string palette_anchor, palette_kind = "scale";
  std::size_t palette_steps = 11;
  palette_cmd->add_option("anchor", palette_anchor, "Anchor color")->required();
  palette_cmd->add_option("--kind", palette_kind, "scale, ramp or ring")
      ->check(CLI::IsMember({"scale", "ramp", "ring", "semantic-scale", "lightness-ramp", "hue-ring"}));
  palette_cmd->add_option("--steps", palette_steps, "Steps for ramp and ring")->capture_default_str();

  // tokens
  auto* tokens_cmd = app.add_subcommand("tokens", "Export design tokens");
  std::string tokens_anchor, tokens_name = "primary", tokens_export = "css", tokens_from;
  tokens_cmd->add_option("anchor", tokens_anchor, "Anchor color for a semantic scale");
  tokens_cmd->add_option("--name", tokens_name, "Token family name")->capture_default_str();
  tokens_cmd->add_option("--export", tokens_export, "css, android, ios, tailwind or json")
      ->check(CLI::IsMember({"css", "android", "ios", "tailwind", "json"}));
  tokens_cmd->add_option("--from", tokens_from, "Token document (json export format)");

  // check
  auto* check = app.add_subcommand("check", "Run the invariant audit");
  std::size_t check_samples = 10000, check_grid = 16;
  check->add_option("--samples", check_samples, "Round-trip and rotation samples")->capture_default_str();
  check->add_option("--grid", check_grid, "Jacobian grid size")->capture_default_str();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  const bool json = g.format == "json";
  try {
    const ParameterSet p = load_active_params(g);

    if (*convert) {
      const ParsedColor c = parse_color(convert_color, p);
      const HelmlabColor h = to_helmlab(c, p);
      const XyzColor back = inverse(h, p);
      const SrgbColor s = xyz_to_srgb(back);
      const bool ok = in_gamut(s);
      double hue = rad_to_deg(h.hue());
      if (hue < 0.0) hue += 360.0;
      if (json) {
        nlohmann::json j = {{"helmlab", color_json(h)},
                            {"chroma", h.chroma()},
                            {"hue_deg", hue},
                            {"xyz", {back.X, back.Y, back.Z}},
                            {"srgb", {s.r, s.g, s.b}},
                            {"in_srgb_gamut", ok}};
        if (ok) j["hex"] = to_hex(s);
        out << j.dump(2) << "\n";
      } else {
        out << "helmlab  L " << num(h.L) << "  a " << num(h.a) << "  b " << num(h.b) << "\n";
        out << "         C " << num(h.chroma()) << "  h " << num(hue, 2) << " deg\n";
        out << "xyz      " << num(back.X) << " " << num(back.Y) << " " << num(back.Z) << "\n";
        out << "srgb     " << num(s.r) << " " << num(s.g) << " " << num(s.b);
        out << (ok ? "  " + to_hex(s) : std::string("  (out of gamut)")) << "\n";
      }
      return 0;
    }

    if (*distance) {
      const auto m = parse_metric(distance_metric);
      if (!m) throw ValidationError("unknown metric '" + distance_metric + "'");
      const ParsedColor x = parse_color(distance_colors[0], p), y = parse_color(distance_colors[1], p);
      double d;
      if (*m == Metric::kHelmlab) d = delta_e(to_helmlab(x, p), to_helmlab(y, p), p.distance);
      else if (*m == Metric::kHelmlabEuclidean) d = delta_e_euclidean(to_helmlab(x, p), to_helmlab(y, p));
      else d = color_difference(x.xyz, y.xyz, *m, p);
      if (json) out << nlohmann::json{{"metric", metric_name(*m)}, {"delta_e", d}}.dump(2) << "\n";
      else out << metric_name(*m) << " " << num(d, 8) << "\n";
      return 0;
    }

    if (*stress_cmd) {
      const PairDataset ds = load_dataset(read_file(dataset_file));
      if (!stress_metric.empty()) {
        std::vector<double> de;
        if (auto m = parse_metric(stress_metric)) {
          de = distances(ds, *m, p);
        } else if (auto it = ds.external_de.find(stress_metric); it != ds.external_de.end()) {
          de = it->second;
        } else {
          throw ValidationError("unknown metric '" + stress_metric + "'");
        }
        const double s = stress(de, ds.visual_differences());
        if (json) out << nlohmann::json{{"metric", stress_metric}, {"pairs", ds.size()}, {"stress", s}}.dump(2) << "\n";
        else out << stress_metric << " STRESS " << num(s, 2) << "  (" << ds.size() << " pairs)\n";
        return 0;
      }
      EvalOptions opt;
      opt.seed = g.seed;
      opt.bootstrap_iters = bootstrap;
      opt.jacobian_grid = jacobian_grid;
      if (!munsell_file.empty()) opt.munsell = load_munsell(read_file(munsell_file));
      const EvalReport r = evaluate(ds, p, opt);
      out << (json ? report_to_json(r).dump(2) + "\n" : report_to_text(r));
      return 0;
    }

    if (*fit_cmd) {
      FitConfig cfg = config_file.empty() ? FitConfig{} : load_fit_config(read_file(config_file));
      if (restarts) cfg.options.restarts = *restarts;
      if (iters) cfg.options.iters = *iters;
      if (config_file.empty() || seed_opt->count() > 0) cfg.options.seed = g.seed;
      if (!fit_munsell.empty()) cfg.loss.munsell = load_munsell(read_file(fit_munsell));
      if (!json) cfg.options.log = [&](const std::string& line) { err << line << "\n"; };
      const PairDataset train = load_dataset(read_file(fit_dataset));
      std::optional<PairDataset> he;
      if (!he_file.empty()) he = load_dataset(read_file(he_file));
      const FitResult r = fit(train, he ? &*he : nullptr, p, cfg.loss, cfg.options);
      if (!fit_out.empty()) write_file(fit_out, save_params(r.best));
      if (!fit_report.empty()) write_file(fit_report, fit_result_to_json(r).dump(2) + "\n");
      if (json) {
        out << fit_result_to_json(r).dump(2) << "\n";
      } else {
        out << "seed " << r.seed << "  restarts " << r.restarts.size() << "  best restart " << r.best_restart << "\n";
        for (const auto& rr : r.restarts) {
          out << "  restart " << rr.restart << ": ";
          if (rr.failed) out << "failed (" << rr.message << ")\n";
          else out << "loss " << num(rr.final_loss, 4) << " after " << rr.iterations << " iterations (" << rr.message << ")\n";
        }
        const auto& b = r.best_breakdown;
        out << "loss " << num(b.total, 4) << " = train " << num(b.train, 4) << " + he " << num(b.he, 4)
            << " + blue " << num(b.blue, 4) << " + roundtrip " << num(b.roundtrip, 4) << " + achromatic "
            << num(b.achromatic, 4) << " + munsell " << num(b.munsell, 4) << "\n";
        if (!fit_out.empty()) out << "parameters written to " << fit_out << "\n";
      }
      return 0;
    }

    if (*ablate) {
      const PairDataset ds = load_dataset(read_file(ablate_dataset));
      const auto rows = ablation(ds, p, default_ablation_rows());
      if (json) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : rows) j.push_back({{"config", r.label}, {"stress", r.stress}, {"delta", r.delta}});
        out << j.dump(2) << "\n";
      } else {
        char buf[128];
        out << "configuration              STRESS    delta\n";
        for (const auto& r : rows) {
          std::snprintf(buf, sizeof buf, "%-24s %8.2f  %+7.2f\n", r.label.c_str(), r.stress, r.delta);
          out << buf;
        }
      }
      return 0;
    }

    if (*palette_cmd) {
      PaletteSpec spec;
      spec.kind = *parse_palette_kind(palette_kind);
      spec.steps = palette_steps;
      spec.target = target_gamut(g);
      const HelmlabColor anchor = to_helmlab(parse_color(palette_anchor, p), p);
      const auto coords = palette_mapped(spec, anchor, p);
      const auto colors = palette(spec, anchor, p);
      nlohmann::json j = nlohmann::json::array();
      for (std::size_t i = 0; i < colors.size(); ++i) {
        const std::string label = spec.kind == PaletteKind::kSemanticScale ? std::to_string(kScaleStops[i])
                                                                          : std::to_string(i);
        if (json) {
          j.push_back({{"step", label}, {"helmlab", color_json(coords[i])},
                       {"rgb", {colors[i].r, colors[i].g, colors[i].b}}, {"hex", to_hex(colors[i])}});
        } else {
          char buf[160];
          std::snprintf(buf, sizeof buf, "%-5s %s  L %.4f  C %.4f\n", label.c_str(), to_hex(colors[i]).c_str(),
                        coords[i].L, coords[i].chroma());
          out << buf;
        }
      }
      if (json) out << j.dump(2) << "\n";
      return 0;
    }

    if (*tokens_cmd) {
      TokenSet ts;
      if (!tokens_from.empty()) {
        ts = import_tokens_json(read_file(tokens_from));
      } else {
        if (tokens_anchor.empty()) throw ValidationError("tokens: give an anchor color or --from FILE");
        ts = scale_tokens(tokens_name, to_helmlab(parse_color(tokens_anchor, p), p), p, target_gamut(g));
      }
      out << export_tokens(ts, *parse_token_format(tokens_export), p);
      return 0;
    }

    if (*check) {
      struct Row {
        std::string name;
        double value;
        double limit;
        bool pass;
      };
      std::vector<Row> rows;
      const double rt = roundtrip_max_error(p, check_samples, g.seed);
      rows.push_back({"round-trip max error", rt, 1e-12, rt < 1e-12});
      const double ach = achromatic_max_chroma(p);
      rows.push_back({"achromatic max chroma", ach, 1e-6, ach < 1e-6});
      const double rot = rotation_invariance_max(p, check_samples, g.seed);
      rows.push_back({"rotation invariance", rot, 1e-12, rot < 1e-12});
      const JacobianStats js = jacobian_stats(p, check_grid);
      rows.push_back({"jacobian min det", js.min_det, 0.0, js.min_det > 0.0});
      bool all = true;
      for (const auto& r : rows) all = all && r.pass;
      if (json) {
        nlohmann::json j = {{"pass", all}, {"seed", g.seed}, {"jacobian_median_cond", js.median_cond}};
        for (const auto& r : rows) j["audits"].push_back({{"name", r.name}, {"value", r.value}, {"limit", r.limit}, {"pass", r.pass}});
        out << j.dump(2) << "\n";
      } else {
        char buf[160];
        out << "seed " << g.seed << "\n";
        for (const auto& r : rows) {
          std::snprintf(buf, sizeof buf, "%-4s %-24s %.3e  (limit %.0e)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                        r.value, r.limit);
          out << buf;
        }
      }
      return all ? 0 : 2;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    if (auto* u = dynamic_cast<const UnachievableError*>(&e)) err << "best achievable: " << u->best_achievable() << "\n";
    return exit_code_for(e);
  }
  return 0;
}

}  // namespace helmlab::cli
