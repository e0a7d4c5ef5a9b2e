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

#include "dsatms/clause_file.hpp"
#include "test_support.hpp"

namespace dsatms {
namespace {

using testing::assumptions;

int error_line(const std::string& text) {
  try {
    parse_clauses(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

TEST(ClauseFile, ParsesEveryDirective) {
  auto d = parse_clauses(
      "# header\n"
      "assume A1 0.5\n"
      "assume A2   # no mass yet\n"
      "\n"
      "premise x1\n"
      "rule x1 & A1 => x2\n"
      "rule x2&A2=>!y\n"
      "contra x2 & !y\n");
  ASSERT_EQ(d.size(), 6u);
  EXPECT_EQ(d[0].kind, ClauseDirective::Kind::assume);
  EXPECT_EQ(d[0].assumption, "A1");
  EXPECT_EQ(d[0].mass, 0.5);
  EXPECT_EQ(d[0].line, 2);
  EXPECT_FALSE(d[1].mass.has_value());
  EXPECT_EQ(d[2].kind, ClauseDirective::Kind::premise);
  EXPECT_EQ(*d[2].consequent, LiteralId("x1"));
  EXPECT_EQ(d[3].antecedents, (std::vector<LiteralId>{"x1", "A1"}));
  EXPECT_EQ(*d[4].consequent, LiteralId("y", true));
  EXPECT_EQ(d[5].kind, ClauseDirective::Kind::contra);
  EXPECT_EQ(d[5].antecedents, (std::vector<LiteralId>{"x2", LiteralId("y", true)}));
  EXPECT_EQ(d[5].line, 8);
}

TEST(ClauseFile, EmptyInput) {
  EXPECT_TRUE(parse_clauses("").empty());
  EXPECT_TRUE(parse_clauses("\n  # only a comment\n\n").empty());
}

TEST(ClauseFile, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("assume A1 1.5\n"), 1);
  EXPECT_EQ(error_line("assume A1 0.5\nassume A2 -0.1\n"), 2);
  EXPECT_EQ(error_line("assume A1 half\n"), 1);
  EXPECT_EQ(error_line("assume A1 0.5 0.6\n"), 1);
  EXPECT_EQ(error_line("assume !A1\n"), 1);
  EXPECT_EQ(error_line("\n\nrule a & b c\n"), 3);
  EXPECT_EQ(error_line("rule a & & b => c\n"), 1);
  EXPECT_EQ(error_line("rule a => \n"), 1);
  EXPECT_EQ(error_line("contra a\n"), 1);
  EXPECT_EQ(error_line("contra a & b & c\n"), 1);
  EXPECT_EQ(error_line("premise a b\n"), 1);
  EXPECT_EQ(error_line("assert a\n"), 1);
  try {
    parse_clauses("\nassume A1 1.5\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(ClauseFile, LoadsChainExampleLikeTheApi) {
  auto db = load_clause_file(std::string(DSATMS_DATA_DIR) + "/example1.clauses");
  Engine reference;
  testing::load_example1(reference);
  for (const char* lit : {"x1", "x2", "x3", "x4", "x5"})
    EXPECT_EQ(db.engine.label_of(LiteralId(lit)), reference.label_of(LiteralId(lit))) << lit;
  EXPECT_EQ(db.engine.label_of(LiteralId("x3")), Label({assumptions({1, 2})}));
  EXPECT_EQ(db.masses.at(AssumptionId{1}), 0.7);
  EXPECT_NEAR(belief_of_label(db.engine.label_of(LiteralId("x2")), db.masses), 0.5, 1e-12);
}

TEST(ClauseFile, LoadsContradictionExampleNogood) {
  auto db = load_clause_file(std::string(DSATMS_DATA_DIR) + "/example2.clauses");
  EXPECT_EQ(db.engine.nogoods(), Label({assumptions({1, 3, 6})}));
  EXPECT_NEAR(belief_of_label(db.engine.nogoods(), db.masses), 0.16, 1e-12);
}

TEST(ClauseFile, SemanticErrorsNameTheLine) {
  auto expect_semantic = [](const std::string& text, const std::string& where) {
    try {
      load_clauses(parse_clauses(text));
      FAIL() << text;
    } catch (const SemanticError& e) {
      EXPECT_NE(std::string(e.what()).find(where), std::string::npos) << e.what();
    }
  };
  expect_semantic("assume A1 0.5\nassume A1 0.6\n", "line 2");
  expect_semantic("assume A1\nrule x => A1\n", "line 2");
  expect_semantic("premise x\ncontra x & y\n", "line 2");
}

TEST(ClauseFile, DirectivesApplyInOrder) {
  // The rule fires once its antecedent appears later in the file.
  auto db = load_clauses(parse_clauses("assume A1\nrule x & A1 => y\npremise x\n"));
  EXPECT_EQ(db.engine.label_of(LiteralId("y")), Label({assumptions({1})}));
}

TEST(ClauseFile, MissingFileIsAParseError) {
  EXPECT_THROW(load_clause_file("/nonexistent/file.clauses"), ParseError);
}

}  // namespace
}  // namespace dsatms
