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
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "helmlab/baselines.hpp"
#include "helmlab/dataset.hpp"
#include "helmlab/errors.hpp"
#include "helmlab/eval.hpp"
#include "helmlab/lbfgsb.hpp"
#include "helmlab/metric.hpp"
#include "helmlab/params.hpp"
#include "helmlab/transform.hpp"

namespace helmlab {

struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;
};

// Box for each of the 72 counted parameters, in to_vector order.
inline Bounds default_bounds() {
  Bounds b;
  auto add = [&](std::size_t n, double lo, double hi) {
    b.lower.insert(b.lower.end(), n, lo);
    b.upper.insert(b.upper.end(), n, hi);
  };
  add(9, -5, 5);      // m1
  add(3, 0.1, 1.5);   // gamma
  add(9, -5, 5);      // m2
  add(8, -1, 1);      // hue_corr
  add(1, 0, 5);       // hk.w
  add(1, 0.2, 2);     // hk.p
  add(4, -1, 1);      // hk hue modulation
  add(3, -5, 5);      // lightness cubic
  add(2, -1, 1);      // lightness hue term
  add(1, -5, 5);      // lambda_d
  add(2, -1, 1);      // dark hue modulation
  add(12, -1, 1);     // chroma hue scaling and power harmonics
  add(2, -5, 5);      // l1, l2
  add(4, -1, 1);      // hue x lightness
  add(4, -1, 1);      // hue_l
  add(2, 0, 5);       // sL, sC
  add(1, 0.2, 2);     // p
  add(2, 0, 5);       // wC, c
  add(1, 0.2, 2);     // q
  add(1, 0, 5);       // alpha
  return b;
}

struct LossConfig {
  double he_weight = 0.05;
  double blue_weight = 0.1;
  double full_blue_weight = 0.5;
  double roundtrip_weight = 100.0;
  double achromatic_weight = 500.0;
  double munsell_weight = 0.1;
  double munsell_cv_floor = 20.0;
  bool use_he = true;
  bool use_blue = true;
  bool use_roundtrip = true;
  bool use_achromatic = true;
  bool use_munsell = true;
  std::optional<MunsellPairs> munsell;
  Bounds bounds = default_bounds();

  // Only the training STRESS.
  static LossConfig stress_only() {
    LossConfig c;
    c.use_he = c.use_blue = c.use_roundtrip = c.use_achromatic = c.use_munsell = false;
    return c;
  }
};

inline void validate(const LossConfig& c) {
  for (double w : {c.he_weight, c.blue_weight, c.full_blue_weight, c.roundtrip_weight,
                   c.achromatic_weight, c.munsell_weight}) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("loss weights must be finite and nonnegative");
  }
  const std::size_t n = counted_parameter_count();
  if (c.bounds.lower.size() != n || c.bounds.upper.size() != n) {
    throw ValidationError("bounds must cover all 72 parameters");
  }
}

// Weighted contributions; total is their sum in declaration order. The raw
// fields keep the unweighted quantities for reporting.
struct LossBreakdown {
  double train = 0.0;
  double he = 0.0;
  double blue = 0.0;
  double roundtrip = 0.0;
  double achromatic = 0.0;
  double munsell = 0.0;
  double total = 0.0;

  double stress_train = 0.0;
  std::optional<double> stress_he, stress_rit, stress_leeds, stress_full_blue;
  double roundtrip_penalty = 0.0;
  double achromatic_penalty = 0.0;
  std::optional<double> munsell_cv;
  bool feasible = true;
  std::string failure;
};

inline constexpr std::size_t kRoundtripProbeSide = 8;
inline constexpr std::size_t kAchromaticProbes = 64;
inline constexpr double kRoundtripSlack = 1e-10;

// The training objective with its probe sets and subset indices cached, so
// repeated evaluation inside the optimizer only pays for the transform.
class LossFunction {
 public:
  LossFunction(const PairDataset& train, const PairDataset* he, LossConfig cfg)
      : train_(train), he_(he), cfg_(std::move(cfg)) {
    if (train_.empty()) throw ValidationError("loss: training set is empty");
    validate(cfg_);
    dv_ = train_.visual_differences();
    for (std::size_t i = 0; i < train_.size(); ++i) {
      const auto& pr = train_.pairs[i];
      if (pr.subset == Subset::kRitDupont) rit_.push_back(i);
      if (pr.subset == Subset::kLeeds) leeds_.push_back(i);
      if (in_blue_band(pr)) blue_.push_back(i);
    }
    if (he_ && !he_->empty()) he_dv_ = he_->visual_differences();
    const std::size_t s = kRoundtripProbeSide;
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j)
        for (std::size_t k = 0; k < s; ++k) {
          const double d = static_cast<double>(s - 1);
          probes_.push_back(srgb_to_xyz({i / d, j / d, k / d}));
        }
    grays_ = gray_sweep(kAchromaticProbes);
  }

  const LossConfig& config() const { return cfg_; }

  LossBreakdown operator()(const ParameterSet& params) const {
    LossBreakdown b;
    try {
      validate(params);
      const ParameterSet p = with_neutral_lut(params);
      const auto de = distances(train_, Metric::kHelmlab, p);
      b.stress_train = stress(de, dv_);
      b.train = b.stress_train;
      if (cfg_.use_he && cfg_.he_weight > 0.0 && he_ && !he_->empty()) {
        b.stress_he = stress(distances(*he_, Metric::kHelmlab, p), he_dv_);
        b.he = cfg_.he_weight * *b.stress_he;
      }
      if (cfg_.use_blue && cfg_.blue_weight > 0.0) {
        b.stress_rit = subset_stress(de, rit_);
        b.stress_leeds = subset_stress(de, leeds_);
        b.stress_full_blue = subset_stress(de, blue_);
        b.blue = cfg_.blue_weight * (b.stress_rit.value_or(0.0) + b.stress_leeds.value_or(0.0) +
                                     cfg_.full_blue_weight * b.stress_full_blue.value_or(0.0));
      }
      if (cfg_.use_roundtrip && cfg_.roundtrip_weight > 0.0) {
        b.roundtrip_penalty = roundtrip_penalty(p);
        b.roundtrip = cfg_.roundtrip_weight * b.roundtrip_penalty;
      }
      if (cfg_.use_achromatic && cfg_.achromatic_weight > 0.0) {
        for (const XyzColor& g : grays_) b.achromatic_penalty = std::max(b.achromatic_penalty, forward(g, p).chroma());
        b.achromatic = cfg_.achromatic_weight * b.achromatic_penalty;
      }
      if (cfg_.use_munsell && cfg_.munsell_weight > 0.0 && cfg_.munsell) {
        b.munsell_cv = munsell_cv(p, *cfg_.munsell);
        b.munsell = cfg_.munsell_weight * std::max(*b.munsell_cv - cfg_.munsell_cv_floor, 0.0);
      }
      b.total = b.train + b.he + b.blue + b.roundtrip + b.achromatic + b.munsell;
      if (!std::isfinite(b.total)) throw NumericError("loss", "non-finite total");
    } catch (const Error& e) {
      b.feasible = false;
      b.failure = e.what();
      b.total = std::numeric_limits<double>::infinity();
    }
    return b;
  }

 private:
  std::optional<double> subset_stress(const std::vector<double>& de, const std::vector<std::size_t>& idx) const {
    if (idx.empty()) return std::nullopt;
    std::vector<double> sde, sdv;
    for (std::size_t i : idx) {
      sde.push_back(de[i]);
      sdv.push_back(dv_[i]);
    }
    if (std::all_of(sde.begin(), sde.end(), [](double v) { return v == 0.0; })) return std::nullopt;
    return stress(sde, sdv);
  }

  double roundtrip_penalty(const ParameterSet& p) const {
    double sum = 0.0;
    for (const XyzColor& x : probes_) {
      try {
        const XyzColor y = inverse(forward(x, p), p);
        const double err = std::max({std::abs(x.X - y.X), std::abs(x.Y - y.Y), std::abs(x.Z - y.Z)});
        sum += std::isfinite(err) ? std::max(err - kRoundtripSlack, 0.0) : 1.0;
      } catch (const ConvergenceError&) {
        sum += 1.0;
      }
    }
    return sum / static_cast<double>(probes_.size());
  }

  const PairDataset& train_;
  const PairDataset* he_;
  LossConfig cfg_;
  std::vector<double> dv_, he_dv_;
  std::vector<std::size_t> rit_, leeds_, blue_;
  std::vector<XyzColor> probes_, grays_;
};

inline LossBreakdown loss(const ParameterSet& p, const PairDataset& train, const PairDataset* he,
                          const LossConfig& cfg) {
  return LossFunction(train, he, cfg)(p);
}

// ---- Fitting ---------------------------------------------------------------

struct FitOptions {
  std::size_t restarts = 1;
  std::size_t iters = 500;
  std::uint64_t seed = 42;
  std::size_t memory = 10;
  std::size_t checkpoint_every = 100;
  double perturbation = 0.1;  // fraction of box width for restarts k > 0
  std::function<void(const std::string&)> log;
};

inline constexpr std::size_t kMaxStartDraws = 100;

struct Checkpoint {
  std::size_t restart = 0;
  std::size_t iteration = 0;
  LossBreakdown breakdown;
};

struct RestartResult {
  std::size_t restart = 0;
  bool failed = false;
  std::string message;
  std::vector<double> trace;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  double final_loss = std::numeric_limits<double>::infinity();
};

struct FitResult {
  ParameterSet best;  // carries a freshly built neutral LUT
  LossBreakdown best_breakdown;
  std::size_t best_restart = 0;
  std::vector<RestartResult> restarts;
  std::vector<Checkpoint> checkpoints;
  std::uint64_t seed = 0;
};

inline FitResult fit(const PairDataset& train, const PairDataset* he, const ParameterSet& init,
                     const LossConfig& cfg, const FitOptions& opt = {}) {
  if (opt.restarts < 1) throw ValidationError("fit: restarts must be at least 1");
  const LossFunction objective(train, he, cfg);
  const auto& lo = cfg.bounds.lower;
  const auto& hi = cfg.bounds.upper;
  const Eigen::VectorXd v0 = to_vector(init);
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  auto to_params = [&](std::span<const double> x) {
    return from_vector(init, Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())));
  };

  FitResult result;
  result.seed = opt.seed;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_x;

  for (std::size_t k = 0; k < opt.restarts; ++k) {
    std::vector<double> x0(v0.data(), v0.data() + v0.size());
    if (k > 0) {
      // Draws that land where the loss is undefined (e.g. a non-monotone
      // gray axis) are redrawn; the last draw is kept if none is feasible.
      for (std::size_t draw = 0; draw < kMaxStartDraws; ++draw) {
        for (std::size_t i = 0; i < x0.size(); ++i) {
          x0[i] = std::clamp(v0[i] + unit(rng) * opt.perturbation * (hi[i] - lo[i]), lo[i], hi[i]);
        }
        if (std::isfinite(objective(to_params(x0)).total)) break;
      }
    }
    RestartResult rr;
    rr.restart = k;
    LbfgsbOptions lo_opt;
    lo_opt.max_iters = opt.iters;
    lo_opt.memory = opt.memory;
    Lbfgsb solver([&](std::span<const double> x) { return objective(to_params(x)).total; }, lo, hi, lo_opt);
    try {
      x0 = solver.project(std::move(x0));
      result.checkpoints.push_back({k, 0, objective(to_params(x0))});
      const auto r = solver.minimize(x0, [&](const LbfgsbIterate& s) {
        if (opt.checkpoint_every > 0 && s.iteration % opt.checkpoint_every == 0) {
          result.checkpoints.push_back({k, s.iteration, objective(to_params(s.x))});
          if (opt.log) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "restart %zu  iter %zu  loss %.6f", k, s.iteration, s.f);
            opt.log(buf);
          }
        }
      });
      rr.message = r.message;
      rr.trace = r.trace;
      rr.iterations = r.iterations;
      rr.evaluations = r.evaluations;
      rr.final_loss = r.f;
      if (r.f < best) {
        best = r.f;
        best_x = r.x;
        result.best_restart = k;
      }
    } catch (const Error& e) {
      rr.failed = true;
      rr.message = e.what();
      if (opt.log) opt.log("restart " + std::to_string(k) + " failed: " + rr.message);
    }
    result.restarts.push_back(std::move(rr));
  }
  if (best_x.empty()) throw FitError("fit: every restart failed");
  result.best = with_neutral_lut(to_params(best_x));
  result.best.paper_exact.clear();
  result.best_breakdown = objective(result.best);
  return result;
}

// ---- Cross-validation -----------------------------------------------------

struct FoldResult {
  std::size_t fold = 0;
  std::size_t train_pairs = 0;
  std::size_t validation_pairs = 0;
  double train_stress = 0.0;
  double validation_stress = 0.0;
  double gap = 0.0;  // validation minus train
};

struct CrossValidation {
  double mean_gap = 0.0;
  double std_gap = 0.0;  // sample standard deviation across folds
  std::vector<FoldResult> folds;
  std::uint64_t seed = 0;
};

// Shuffled partition of [0, n) into `folds` contiguous blocks.
inline std::vector<std::vector<std::size_t>> fold_partition(std::size_t n, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw ValidationError("cross-validation needs at least two folds");
  if (n < folds) throw ValidationError("cross-validation needs at least one pair per fold");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(idx[i - 1], idx[pick(rng)]);
  }
  std::vector<std::vector<std::size_t>> out(folds);
  for (std::size_t f = 0; f < folds; ++f) {
    out[f].assign(idx.begin() + static_cast<std::ptrdiff_t>(f * n / folds),
                  idx.begin() + static_cast<std::ptrdiff_t>((f + 1) * n / folds));
  }
  return out;
}

inline CrossValidation cross_validate(const PairDataset& ds, const PairDataset* he, const ParameterSet& init,
                                      const LossConfig& cfg, std::size_t folds, const FitOptions& opt = {}) {
  const auto parts = fold_partition(ds.size(), folds, opt.seed);
  CrossValidation cv;
  cv.seed = opt.seed;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> train_idx;
    for (std::size_t g = 0; g < folds; ++g)
      if (g != f) train_idx.insert(train_idx.end(), parts[g].begin(), parts[g].end());
    std::sort(train_idx.begin(), train_idx.end());
    std::vector<std::size_t> val_idx = parts[f];
    std::sort(val_idx.begin(), val_idx.end());
    const PairDataset train = ds.select(train_idx), val = ds.select(val_idx);
    const FitResult r = fit(train, he, init, cfg, opt);
    FoldResult fr;
    fr.fold = f;
    fr.train_pairs = train.size();
    fr.validation_pairs = val.size();
    fr.train_stress = stress(distances(train, Metric::kHelmlab, r.best), train.visual_differences());
    fr.validation_stress = stress(distances(val, Metric::kHelmlab, r.best), val.visual_differences());
    fr.gap = fr.validation_stress - fr.train_stress;
    cv.folds.push_back(fr);
  }
  double mean = 0.0;
  for (const auto& f : cv.folds) mean += f.gap;
  mean /= static_cast<double>(folds);
  double var = 0.0;
  for (const auto& f : cv.folds) var += (f.gap - mean) * (f.gap - mean);
  cv.mean_gap = mean;
  cv.std_gap = std::sqrt(var / static_cast<double>(folds - 1));
  return cv;
}

// ---- Configuration and report documents ------------------------------------

struct FitConfig {
  LossConfig loss;
  FitOptions options;
};

inline FitConfig fit_config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("fit configuration must be an object");
  FitConfig c;
  auto count = [&](const char* key, std::size_t& out) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number_unsigned()) throw ParseError(std::string("field '") + key + "' must be a nonnegative integer");
    out = doc[key].get<std::size_t>();
  };
  count("restarts", c.options.restarts);
  count("iters", c.options.iters);
  count("memory", c.options.memory);
  count("checkpoint_every", c.options.checkpoint_every);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ParseError("field 'seed' must be a nonnegative integer");
    c.options.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("loss")) {
    const auto& l = doc["loss"];
    if (!l.is_object()) throw ParseError("field 'loss' must be an object");
    auto num = [&](const char* key, double& out) {
      if (!l.contains(key)) return;
      if (!l[key].is_number()) throw ParseError(std::string("field 'loss.") + key + "' must be a number");
      out = l[key].get<double>();
    };
    auto flag = [&](const char* key, bool& out) {
      if (!l.contains(key)) return;
      if (!l[key].is_boolean()) throw ParseError(std::string("field 'loss.") + key + "' must be a boolean");
      out = l[key].get<bool>();
    };
    num("he", c.loss.he_weight);
    num("blue", c.loss.blue_weight);
    num("full_blue", c.loss.full_blue_weight);
    num("roundtrip", c.loss.roundtrip_weight);
    num("achromatic", c.loss.achromatic_weight);
    num("munsell", c.loss.munsell_weight);
    num("munsell_cv_floor", c.loss.munsell_cv_floor);
    flag("use_he", c.loss.use_he);
    flag("use_blue", c.loss.use_blue);
    flag("use_roundtrip", c.loss.use_roundtrip);
    flag("use_achromatic", c.loss.use_achromatic);
    flag("use_munsell", c.loss.use_munsell);
  }
  if (doc.contains("bounds")) {
    const auto& b = doc["bounds"];
    if (!b.is_object()) throw ParseError("field 'bounds' must be an object");
    const auto names = parameter_names();
    for (const auto& [key, val] : b.items()) {
      const auto it = std::find(names.begin(), names.end(), key);
      if (it == names.end()) throw ParseError("bounds: unknown parameter '" + key + "'");
      if (!val.is_array() || val.size() != 2 || !val[0].is_number() || !val[1].is_number()) {
        throw ParseError("bounds: '" + key + "' must be [lower, upper]");
      }
      const auto i = static_cast<std::size_t>(it - names.begin());
      c.loss.bounds.lower[i] = val[0].get<double>();
      c.loss.bounds.upper[i] = val[1].get<double>();
    }
  }
  validate(c.loss);
  return c;
}

inline FitConfig load_fit_config(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("fit configuration: ") + e.what());
  }
  return fit_config_from_json(doc);
}

inline nlohmann::json breakdown_to_json(const LossBreakdown& b) {
  nlohmann::json j = {{"total", b.total},          {"train", b.train},
                      {"he", b.he},                {"blue", b.blue},
                      {"roundtrip", b.roundtrip},  {"achromatic", b.achromatic},
                      {"munsell", b.munsell},      {"stress_train", b.stress_train},
                      {"roundtrip_penalty", b.roundtrip_penalty},
                      {"achromatic_penalty", b.achromatic_penalty},
                      {"feasible", b.feasible}};
  if (b.stress_he) j["stress_he"] = *b.stress_he;
  if (b.stress_rit) j["stress_rit"] = *b.stress_rit;
  if (b.stress_leeds) j["stress_leeds"] = *b.stress_leeds;
  if (b.stress_full_blue) j["stress_full_blue"] = *b.stress_full_blue;
  if (b.munsell_cv) j["munsell_cv"] = *b.munsell_cv;
  if (!b.feasible) j["failure"] = b.failure;
  return j;
}

inline nlohmann::json fit_result_to_json(const FitResult& r) {
  nlohmann::json j;
  j["seed"] = r.seed;
  j["best_restart"] = r.best_restart;
  j["loss"] = breakdown_to_json(r.best_breakdown);
  j["params"] = params_to_json(r.best);
  auto& rs = j["restarts"] = nlohmann::json::array();
  for (const auto& x : r.restarts) {
    rs.push_back({{"restart", x.restart}, {"failed", x.failed}, {"message", x.message},
                  {"iterations", x.iterations}, {"evaluations", x.evaluations},
                  {"final_loss", std::isfinite(x.final_loss) ? nlohmann::json(x.final_loss) : nlohmann::json()},
                  {"trace", x.trace}});
  }
  auto& cs = j["checkpoints"] = nlohmann::json::array();
  for (const auto& c : r.checkpoints) {
    cs.push_back({{"restart", c.restart}, {"iteration", c.iteration}, {"loss", breakdown_to_json(c.breakdown)}});
  }
  return j;
}

}  // namespace helmlab
