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

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "cli.hpp"

namespace helmlab {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kPairs = HELMLAB_DATA_DIR "/sample_pairs.csv";

TEST(CliTest, DistanceOfIdenticalColorsIsZero) {
  const Result r = run_cli({"distance", "--metric", "helmlab", "#808080", "#808080"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "helmlab 0.00000000\n");
  const Result j = run_cli({"--format", "json", "distance", "--metric", "ciede2000", "#ff0000", "#00ff00"});
  ASSERT_EQ(j.code, 0) << j.err;
  const auto doc = nlohmann::json::parse(j.out);
  EXPECT_NEAR(doc["delta_e"].get<double>(),
              ciede2000(xyz_to_cielab(srgb_to_xyz({1, 0, 0})), xyz_to_cielab(srgb_to_xyz({0, 1, 0}))), 1e-12);
}

TEST(CliTest, ConvertRoundTrips) {
  const Result r = run_cli({"--format", "json", "convert", "#3366cc"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["hex"], "#3366cc");
  EXPECT_TRUE(j["in_srgb_gamut"].get<bool>());
  const Result x = run_cli({"convert", "xyz(0.2, 0.3, 0.4)"});
  EXPECT_EQ(x.code, 0) << x.err;
  EXPECT_NE(x.out.find("xyz      0.200000 0.300000 0.400000"), std::string::npos) << x.out;
  const Result h = run_cli({"convert", "helmlab(0.5,0,0)"});
  EXPECT_EQ(h.code, 0) << h.err;
}

TEST(CliTest, BadInputExitsWithOne) {
  EXPECT_EQ(run_cli({"convert", "#12"}).code, 1);
  EXPECT_EQ(run_cli({"distance", "--metric", "nope", "#000000", "#ffffff"}).code, 1);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 1);
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"stress", "--dataset", "/nonexistent.csv"}).code, 1);
  EXPECT_EQ(run_cli({"--params", "/nonexistent.json", "convert", "#000000"}).code, 1);
  EXPECT_EQ(run_cli({"--format", "yaml", "convert", "#000000"}).code, 1);
}

TEST(CliTest, CheckPasses) {
  const Result r = run_cli({"check", "--samples", "2000", "--grid", "8"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("seed 42"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(CliTest, StressReports) {
  const Result r = run_cli({"--format", "json", "stress", "--dataset", kPairs, "--metric", "ciede2000"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_GT(j["stress"].get<double>(), 0.0);
  EXPECT_LT(j["stress"].get<double>(), 10.0);
  const Result ext = run_cli({"stress", "--dataset", kPairs, "--metric", "de_ciede2000"});
  EXPECT_EQ(ext.code, 1);
  const Result ext2 = run_cli({"stress", "--dataset", kPairs, "--metric", "ciede2000"});
  EXPECT_EQ(ext2.code, 0);
  const Result full = run_cli({"stress", "--dataset", kPairs, "--bootstrap", "200"});
  ASSERT_EQ(full.code, 0) << full.err;
  EXPECT_NE(full.out.find("helmlab"), std::string::npos);
  EXPECT_EQ(full.out, run_cli({"stress", "--dataset", kPairs, "--bootstrap", "200"}).out);
}

TEST(CliTest, AblateTable) {
  const Result r = run_cli({"--format", "json", "ablate", "--dataset", kPairs});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 7u);
  EXPECT_EQ(j[0]["config"], "Full Helmlab");
}

TEST(CliTest, PaletteAndTokens) {
  const Result p = run_cli({"palette", "#3366cc"});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_NE(p.out.find("950"), std::string::npos);
  const Result ring = run_cli({"--format", "json", "palette", "#3366cc", "--kind", "ring", "--steps", "6"});
  ASSERT_EQ(ring.code, 0) << ring.err;
  EXPECT_EQ(nlohmann::json::parse(ring.out).size(), 6u);
  const Result t = run_cli({"tokens", "#3366cc", "--name", "brand", "--export", "css"});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_NE(t.out.find("--brand-500: oklch("), std::string::npos);
  EXPECT_EQ(run_cli({"tokens", "#3366cc", "--export", "scss"}).code, 1);
  EXPECT_EQ(run_cli({"tokens"}).code, 1);
}

TEST(CliTest, TokensFromDocument) {
  const auto path = std::filesystem::temp_directory_path() / "helmlab_cli_tokens.json";
  const Result j = run_cli({"tokens", "#3366cc", "--name", "brand", "--export", "json"});
  ASSERT_EQ(j.code, 0) << j.err;
  cli::write_file(path.string(), j.out);
  const Result again = run_cli({"tokens", "--from", path.string(), "--export", "json"});
  EXPECT_EQ(again.code, 0) << again.err;
  EXPECT_EQ(again.out, j.out);
  std::filesystem::remove(path);
}

TEST(CliTest, FitWritesParameters) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto out = dir / "helmlab_cli_fit.json";
  const auto cfg = dir / "helmlab_cli_fit_config.json";
  cli::write_file(cfg.string(), R"({"loss": {"use_roundtrip": false, "use_achromatic": false, "use_blue": false}})");
  const Result r = run_cli({"fit", "--dataset", kPairs, "--config", cfg.string(), "--iters", "1", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("seed 42"), std::string::npos);
  EXPECT_NO_THROW(load_params(cli::read_file(out.string())));
  const Result c = run_cli({"--params", out.string(), "check", "--samples", "500", "--grid", "4"});
  EXPECT_EQ(c.code, 0) << c.out << c.err;
  std::filesystem::remove(out);
  std::filesystem::remove(cfg);
}

TEST(CliTest, ParamsFromEnvironment) {
  const auto path = std::filesystem::temp_directory_path() / "helmlab_cli_env.json";
  ParameterSet q = default_params();
  q.distance.q = 1.0;
  q.distance.c = 0.0;
  q.distance.p = 1.0;
  q.distance.s_l = 0.0;
  q.distance.s_c = 0.0;
  q.distance.w_c = 1.0;
  cli::write_file(path.string(), save_params(q));
  setenv("HELMLAB_PARAMS", path.c_str(), 1);
  const Result r = run_cli({"--format", "json", "distance", "helmlab(0.5,0,0)", "helmlab(0.5,0.3,0.4)"});
  unsetenv("HELMLAB_PARAMS");
  std::filesystem::remove(path);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(nlohmann::json::parse(r.out)["delta_e"].get<double>(), 0.5, 1e-12);
}

}  // namespace
}  // namespace helmlab
