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

#include <cmath>
#include <string>

#include "helmlab/params.hpp"
#include "helmlab/transform.hpp"

namespace helmlab {
namespace {

TEST(ParamsTest, CountedParametersTotal72) {
  std::size_t total = 0;
  for (Group g : kAllGroups) total += group_size(g);
  EXPECT_EQ(total, 72u);
  EXPECT_EQ(parameter_names().size(), 72u);
  EXPECT_EQ(to_vector(default_params()).size(), 72);
}

TEST(ParamsTest, DefaultsCarryPublishedValues) {
  const ParameterSet p = default_params();
  EXPECT_EQ(p.gamma[0], 0.389);
  EXPECT_EQ(p.gamma[1], 0.416);
  EXPECT_EQ(p.gamma[2], 0.424);
  EXPECT_EQ(p.hk.weight, 0.389);
  EXPECT_EQ(p.hk.power, 0.849);
  EXPECT_EQ(p.distance.s_l, 1.01e-3);
  EXPECT_EQ(p.distance.s_c, 0.022);
  EXPECT_EQ(p.distance.p, 0.804);
  EXPECT_EQ(p.distance.w_c, 1.046);
  EXPECT_EQ(p.distance.c, 1.590);
  EXPECT_EQ(p.distance.q, 1.100);
  EXPECT_EQ(p.distance.alpha, 0.0);
  EXPECT_EQ(p.rotation_phi_deg, -28.2);
}

TEST(ParamsTest, ProvenanceSeparatesPlaceholders) {
  const ParameterSet p = default_params();
  ASSERT_EQ(p.paper_exact.size(), 72u);
  EXPECT_FALSE(p.paper_exact.at("hue_corr.alpha1"));
  EXPECT_TRUE(p.paper_exact.at("hk.w"));
  EXPECT_TRUE(p.paper_exact.at("gamma.0"));
  EXPECT_FALSE(is_paper_exact(p));

  const auto names = parameter_names();
  const Eigen::VectorXd v = to_vector(p);
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!p.paper_exact.at(names[i])) EXPECT_LE(std::abs(v[static_cast<Eigen::Index>(i)]), 0.1) << names[i];
  }
}

TEST(ParamsTest, SaveLoadIsExact) {
  const ParameterSet p = with_neutral_lut(default_params());
  const ParameterSet q = load_params(save_params(p));
  EXPECT_TRUE(p == q);
  EXPECT_EQ(save_params(q), save_params(p));
}

TEST(ParamsTest, SaveLoadKeepsFullPrecision) {
  ParameterSet p = default_params();
  p.hue_corr.cos[2] = 0.1 + 1e-17 * 3;  // not representable with few digits
  p.m1(1, 2) = std::nextafter(0.25, 1.0);
  p.rotation_phi_deg = 1.0 / 3.0;
  const ParameterSet q = load_params(save_params(p));
  EXPECT_EQ(q.hue_corr.cos[2], p.hue_corr.cos[2]);
  EXPECT_EQ(q.m1(1, 2), p.m1(1, 2));
  EXPECT_EQ(q.rotation_phi_deg, p.rotation_phi_deg);
}

TEST(ParamsTest, SavedDocumentShowsRotationAngle) {
  const std::string text = save_params(default_params());
  EXPECT_NE(text.find("-28.2"), std::string::npos);
}

TEST(ParamsTest, ZeroSurroundIsWrittenExplicitly) {
  const auto doc = params_to_json(default_params());
  ASSERT_TRUE(doc.contains("surround"));
  EXPECT_EQ(doc["surround"]["hk"], 0.0);
  EXPECT_EQ(doc["surround"]["lchroma"], 0.0);
}

nlohmann::json minimal_document() { return params_to_json(default_params()); }

TEST(ParamsTest, LoadReadsGamma) {
  auto doc = minimal_document();
  doc["gamma"] = {0.389, 0.416, 0.424};
  const ParameterSet p = load_params(doc.dump());
  EXPECT_EQ(p.gamma[0], 0.389);
  EXPECT_EQ(p.gamma[2], 0.424);
}

TEST(ParamsTest, OptionalBlocksDefault) {
  auto doc = minimal_document();
  doc.erase("surround");
  doc.erase("provenance");
  const ParameterSet p = load_params(doc.dump());
  EXPECT_EQ(p.surround.hk, 0.0);
  EXPECT_EQ(p.surround.value, 0.5);
  EXPECT_FALSE(p.neutral_lut.has_value());
  EXPECT_TRUE(p.paper_exact.empty());
}

TEST(ParamsTest, MissingDistanceIsValidationError) {
  auto doc = minimal_document();
  doc.erase("distance");
  EXPECT_THROW(load_params(doc.dump()), ValidationError);
}

TEST(ParamsTest, SingularMatrixRejected) {
  auto doc = minimal_document();
  doc["m2"][1] = {0.0, 0.0, 0.0};
  EXPECT_THROW(load_params(doc.dump()), ValidationError);
}

TEST(ParamsTest, SchemaErrorsNameTheField) {
  auto doc = minimal_document();
  doc["hk"] = {1.0, 2.0};
  try {
    load_params(doc.dump());
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("hk"), std::string::npos);
  }
  doc = minimal_document();
  doc["distance"]["q"] = "big";
  try {
    load_params(doc.dump());
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("distance.q"), std::string::npos);
  }
  EXPECT_THROW(load_params("{not json"), ParseError);
}

TEST(ParamsTest, InvariantViolationsRejected) {
  auto doc = minimal_document();
  doc["gamma"][1] = 0.0;
  EXPECT_THROW(load_params(doc.dump()), ValidationError);
  doc = minimal_document();
  doc["distance"]["q"] = 0.0;
  EXPECT_THROW(load_params(doc.dump()), ValidationError);
  doc = minimal_document();
  doc["distance"]["c"] = -0.1;
  EXPECT_THROW(load_params(doc.dump()), ValidationError);
}

TEST(ParamsTest, DeterminantThreshold) {
  ParameterSet p = default_params();
  p.m1 = Eigen::Matrix3d::Identity() * 0.9e-3;  // det 7.3e-10
  EXPECT_THROW(validate(p), ValidationError);
  p.m1 = Eigen::Matrix3d::Identity() * 1.1e-3;
  EXPECT_NO_THROW(validate(p));
}

TEST(ParamsTest, VectorRoundTrip) {
  const ParameterSet p = default_params();
  Eigen::VectorXd v = to_vector(p);
  v[40] += 0.01;
  const ParameterSet q = from_vector(p, v);
  EXPECT_EQ(to_vector(q), v);
  EXPECT_EQ(q.rotation_phi_deg, p.rotation_phi_deg);
  EXPECT_THROW(from_vector(p, Eigen::VectorXd::Zero(5)), ValidationError);
}

}  // namespace
}  // namespace helmlab
