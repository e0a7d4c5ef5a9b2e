// Copyright 2026 The dsatms Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <regex>

#include "dsatms/clause_file.hpp"
#include "dsatms/io.hpp"
#include "dsatms/svg.hpp"

namespace dsatms::recognition {
namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
  return n;
}

std::string fixture_svg() {
  auto an = build_clauses(parse_scene(read_file(std::string(DSATMS_DATA_DIR) + "/puppet_scene.json")),
                          default_puppet_model());
  auto ranked = interpret(an);
  return render_svg(an.scene, assignments(an, ranked.at(0)));
}

TEST(Svg, EmptySceneIsAValidEmptyCanvas) {
  auto svg = render_svg({});
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\""), std::string::npos);
  EXPECT_EQ(count(svg, "<polygon"), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Svg, FixtureInterpretationShadesEveryPart) {
  auto svg = fixture_svg();
  EXPECT_EQ(count(svg, "class=\"part\""), 15u);
  EXPECT_EQ(count(svg, "class=\"outline\""), 0u);
  EXPECT_EQ(count(svg, "<text"), 15u);
  EXPECT_NE(svg.find(">F:right_thigh</text>"), std::string::npos);
}

TEST(Svg, UnassignedRectanglesAreOutlines) {
  auto scene = parse_scene(read_file(std::string(DSATMS_DATA_DIR) + "/puppet_scene.json"));
  auto svg = render_svg(scene);
  EXPECT_EQ(count(svg, "class=\"outline\""), 15u);
  EXPECT_EQ(count(svg, "<text"), 0u);
}

TEST(Svg, Deterministic) { EXPECT_EQ(fixture_svg(), fixture_svg()); }

TEST(Svg, MatchesGolden) { EXPECT_EQ(fixture_svg(), read_file(std::string(DSATMS_GOLDEN_DIR) + "/puppet_scene.svg")); }

TEST(Svg, TagsBalanceAndCoordinatesStayOnCanvas) {
  auto svg = fixture_svg();
  EXPECT_EQ(count(svg, "<polygon"), count(svg, "</polygon>"));
  EXPECT_EQ(count(svg, "<text"), count(svg, "</text>"));
  std::smatch m;
  ASSERT_TRUE(std::regex_search(svg, m, std::regex("width=\"([0-9.]+)\" height=\"([0-9.]+)\"")));
  double w = std::stod(m[1]), h = std::stod(m[2]);
  std::regex pair("([0-9.-]+),([0-9.-]+)");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), pair); it != std::sregex_iterator(); ++it) {
    double x = std::stod((*it)[1]), y = std::stod((*it)[2]);
    EXPECT_GE(x, 0.0);
    EXPECT_LE(x, w);
    EXPECT_GE(y, 0.0);
    EXPECT_LE(y, h);
  }
}

TEST(Svg, EscapesMarkup) {
  auto svg = render_svg({{"a<&>\"", {0, 0}, 1, 1, 0}}, {{"a<&>\"", "p"}});
  EXPECT_NE(svg.find("a&lt;&amp;&gt;&quot;"), std::string::npos);
  EXPECT_EQ(svg.find("a<&"), std::string::npos);
}

}  // namespace
}  // namespace dsatms::recognition
