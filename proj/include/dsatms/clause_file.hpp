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

#pragma once

// Line-oriented clause files:
//
//   assume <id> [<mass>]
//   premise <lit>
//   rule <lit> [& <lit> ...] => <lit>
//   contra <lit> & <lit>
//
// A literal is an identifier with an optional `!` prefix marking negation.
// `#` starts a comment. Directives are applied in file order.

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dsatms/atms.hpp"
#include "dsatms/belief.hpp"
#include "dsatms/error.hpp"

namespace dsatms {

struct ClauseDirective {
  enum class Kind { assume, premise, rule, contra };
  Kind kind = Kind::assume;
  int line = 0;
  std::string assumption;
  std::optional<double> mass;
  std::vector<LiteralId> antecedents;  // rule antecedents, or the contra pair
  std::optional<LiteralId> consequent;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '.' || c == '-')) return false;
  return true;
}

inline LiteralId literal(std::string_view token, int line) {
  token = trim(token);
  std::string_view name = token.starts_with('!') ? token.substr(1) : token;
  if (!identifier(name)) throw ParseError("invalid literal '" + std::string(token) + "'", line);
  return LiteralId::parse(std::string(token));
}

inline std::vector<LiteralId> conjunction(std::string_view text, int line) {
  std::vector<LiteralId> out;
  for (std::size_t pos = 0;;) {
    auto amp = text.find('&', pos);
    out.push_back(literal(text.substr(pos, amp == std::string_view::npos ? amp : amp - pos), line));
    if (amp == std::string_view::npos) break;
    pos = amp + 1;
  }
  return out;
}

inline double mass_value(std::string_view token, int line) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || end != token.data() + token.size() || !std::isfinite(v))
    throw ParseError("invalid mass '" + std::string(token) + "'", line);
  if (v < 0.0 || v > 1.0) throw ParseError("mass " + std::string(token) + " is outside [0,1]", line);
  return v;
}

}  // namespace detail

inline std::vector<ClauseDirective> parse_clauses(std::string_view text) {
  std::vector<ClauseDirective> out;
  int line_no = 0;
  for (std::size_t pos = 0; pos <= text.size();) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    auto space = line.find_first_of(" \t");
    std::string_view keyword = line.substr(0, space);
    std::string_view rest = space == std::string_view::npos ? std::string_view{} : detail::trim(line.substr(space));
    ClauseDirective d;
    d.line = line_no;
    if (keyword == "assume") {
      d.kind = ClauseDirective::Kind::assume;
      auto sep = rest.find_first_of(" \t");
      std::string_view id = rest.substr(0, sep);
      if (!detail::identifier(id)) throw ParseError("assume needs an assumption name", line_no);
      d.assumption = std::string(id);
      if (sep != std::string_view::npos) {
        std::string_view m = detail::trim(rest.substr(sep));
        if (m.find_first_of(" \t") != std::string_view::npos) throw ParseError("trailing tokens after mass", line_no);
        d.mass = detail::mass_value(m, line_no);
      }
    } else if (keyword == "premise") {
      d.kind = ClauseDirective::Kind::premise;
      if (rest.find_first_of(" \t&") != std::string_view::npos) throw ParseError("premise takes one literal", line_no);
      d.consequent = detail::literal(rest, line_no);
    } else if (keyword == "rule") {
      d.kind = ClauseDirective::Kind::rule;
      auto arrow = rest.find("=>");
      if (arrow == std::string_view::npos) throw ParseError("rule needs '=>'", line_no);
      d.antecedents = detail::conjunction(rest.substr(0, arrow), line_no);
      d.consequent = detail::literal(rest.substr(arrow + 2), line_no);
    } else if (keyword == "contra") {
      d.kind = ClauseDirective::Kind::contra;
      d.antecedents = detail::conjunction(rest, line_no);
      if (d.antecedents.size() != 2) throw ParseError("contra takes two literals joined by '&'", line_no);
    } else {
      throw ParseError("unknown directive '" + std::string(keyword) + "'", line_no);
    }
    out.push_back(std::move(d));
  }
  return out;
}

struct ClauseDatabase {
  Engine engine;
  MassAssignment masses;
};

inline ClauseDatabase load_clauses(const std::vector<ClauseDirective>& directives) {
  ClauseDatabase db;
  for (const auto& d : directives) {
    try {
      switch (d.kind) {
        case ClauseDirective::Kind::assume: {
          auto id = db.engine.add_assumption(d.assumption);
          if (d.mass) db.masses.set(id, *d.mass);
          break;
        }
        case ClauseDirective::Kind::premise: db.engine.add_premise(*d.consequent); break;
        case ClauseDirective::Kind::rule: db.engine.add_rule(d.antecedents, *d.consequent); break;
        case ClauseDirective::Kind::contra: db.engine.record_contradiction(d.antecedents[0], d.antecedents[1]); break;
      }
    } catch (const SemanticError& e) {
      throw SemanticError("line " + std::to_string(d.line) + ": " + e.what());
    }
  }
  return db;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ClauseDatabase load_clause_file(const std::string& path) { return load_clauses(parse_clauses(read_file(path))); }

}  // namespace dsatms
