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

// Text reports and the command-line driver.

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dsatms/belief.hpp"
#include "dsatms/clause_file.hpp"
#include "dsatms/error.hpp"
#include "dsatms/io.hpp"
#include "dsatms/recognition.hpp"
#include "dsatms/svg.hpp"

namespace dsatms {

enum ExitCode : int { kExitOk = 0, kExitParse = 2, kExitSemantic = 3, kExitConflict = 4 };

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  std::string s = buf;
  if (s == "-0.000000000") s = "0.000000000";
  return s;
}

inline std::string format_environment(const Environment& e, const Engine& engine) {
  std::string out = "{";
  for (auto a : e) out += (out.size() > 1 ? "," : "") + engine.assumption_name(a);
  return out + "}";
}

inline std::string format_label(const Label& l, const Engine& engine) {
  if (l.empty()) return "(none)";
  std::string out;
  for (const auto& e : l) out += (out.empty() ? "" : " ") + format_environment(e, engine);
  return out;
}

// Every derived literal in creation order, then the nogoods.
inline std::string labels_report(const Engine& engine) {
  std::string out;
  if (engine.node_count() == 0) return out;
  for (Engine::NodeIndex n = 0; n < engine.node_count(); ++n) {
    if (engine.is_assumption(n)) continue;
    out += engine.literal(n).str() + ": " + format_label(engine.label_of(n), engine) + "\n";
  }
  out += "nogoods: " + format_label(engine.nogoods(), engine) + "\n";
  return out;
}

struct BeliefOptions {
  std::optional<std::string> literal;
  bool raw = false;
  bool oracle = false;
};

inline std::string belief_report(const Engine& engine, const MassAssignment& masses, const BeliefOptions& opt) {
  for (std::size_t i = 0; i < engine.assumption_count(); ++i) {
    auto a = static_cast<AssumptionId>(i);
    if (!masses.has(a)) throw SemanticError("assumption " + engine.assumption_name(a) + " has no mass");
  }
  std::vector<Engine::NodeIndex> nodes;
  if (opt.literal) {
    nodes.push_back(engine.node_of(LiteralId::parse(*opt.literal)));
  } else {
    for (Engine::NodeIndex n = 0; n < engine.node_count(); ++n)
      if (!engine.is_assumption(n)) nodes.push_back(n);
  }
  const Label& nogoods = engine.nogoods();
  double conflict = belief_of_label(nogoods, masses);
  if (!opt.raw && 1.0 - conflict <= kConflictTolerance) throw ConflictError("total conflict");
  std::vector<double> oracle;
  if (opt.oracle) oracle = brute_force_beliefs(engine.program(), masses, !opt.raw);

  std::string out;
  for (auto n : nodes) {
    const Label& l = engine.label_of(n);
    double b = opt.raw ? belief_of_label(l, masses) : conditioned_belief(l, nogoods, masses);
    out += engine.literal(n).str() + ": " + format_number(b);
    if (opt.oracle)
      out += " oracle " + format_number(oracle[n]) + " diff " + format_number(std::abs(b - oracle[n]));
    out += "\n";
  }
  out += "nogoods: " + format_number(conflict) + "\n";
  return out;
}

inline std::string recognize_report(const recognition::Analysis& an,
                                    const std::vector<recognition::Interpretation>& ranked, std::size_t top) {
  if (ranked.empty()) return "no interpretations\n";
  std::string out;
  for (std::size_t i = 0; i < ranked.size() && i < top; ++i) {
    const auto& it = ranked[i];
    out += std::to_string(i + 1) + ", " + format_number(it.belief) + ", " + (it.complete ? "complete" : "partial") + ",";
    for (const auto& a : recognition::assignments(an, it)) out += " " + a.rect + ":" + a.part;
    out += "\n";
  }
  if (!ranked.front().conditioned) out += "note: nogoods carry total conflict; beliefs are unconditioned\n";
  return out;
}

// Runs one command; returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Truth maintenance with belief functions, and puppet recognition over rectangle scenes"};
  app.require_subcommand(1);

  std::string clause_path, scene_path, model_path, svg_path, literal;
  BeliefOptions belief_opt;
  std::size_t top = 1;

  auto* labels = app.add_subcommand("labels", "Print the label of every literal and the nogoods");
  labels->add_option("clauses", clause_path, "Clause file")->required();

  auto* belief = app.add_subcommand("belief", "Print the belief of every literal");
  belief->add_option("clauses", clause_path, "Clause file")->required();
  belief->add_option("--literal", literal, "Report only this literal");
  auto* raw = belief->add_flag("--raw", belief_opt.raw, "Unconditioned belief");
  belief->add_flag("--conditioned", "Belief conditioned on the nogoods (default)")->excludes(raw);
  belief->add_flag("--oracle", belief_opt.oracle, "Also compute by exhaustive enumeration");

  auto* recognize = app.add_subcommand("recognize", "Rank puppet interpretations of a scene");
  recognize->add_option("scene", scene_path, "Scene JSON file")->required();
  recognize->add_option("model", model_path, "Model JSON file (default: built-in puppet)");
  recognize->add_option("--top", top, "Number of interpretations to print")->check(CLI::PositiveNumber);
  recognize->add_option("--svg", svg_path, "Write the top interpretation as SVG");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }

  try {
    if (labels->parsed()) {
      out << labels_report(load_clause_file(clause_path).engine);
    } else if (belief->parsed()) {
      if (!literal.empty()) belief_opt.literal = literal;
      auto db = load_clause_file(clause_path);
      out << belief_report(db.engine, db.masses, belief_opt);
    } else {
      auto scene = recognition::parse_scene(read_file(scene_path));
      auto model = model_path.empty() ? recognition::default_puppet_model()
                                      : recognition::parse_model(read_file(model_path));
      auto an = recognition::build_clauses(std::move(scene), std::move(model));
      auto ranked = recognition::interpret(an);
      out << recognize_report(an, ranked, top);
      if (!svg_path.empty()) {
        std::vector<recognition::Assignment> shaded;
        if (!ranked.empty()) shaded = recognition::assignments(an, ranked.front());
        std::ofstream f(svg_path, std::ios::binary);
        if (!f) throw SemanticError("cannot write '" + svg_path + "'");
        f << recognition::render_svg(an.scene, shaded);
      }
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ConflictError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConflict;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitSemantic;
  }
  return kExitOk;
}

}  // namespace dsatms
