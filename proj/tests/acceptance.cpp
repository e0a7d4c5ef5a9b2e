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

// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dsatms/belief.hpp"
#include "dsatms/clause_file.hpp"
#include "dsatms/cli.hpp"
#include "dsatms/io.hpp"
#include "dsatms/recognition.hpp"
#include "dsatms/reliability.hpp"
#include "test_support.hpp"

namespace {

using namespace dsatms;
using testing::assumptions;

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
  void near(double got, double want, double tol, const std::string& what) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: got %.12f want %.12f", what.c_str(), got, want);
    expect(std::abs(got - want) <= tol, buf);
  }
};

std::string data(const char* name) { return std::string(DSATMS_DATA_DIR) + "/" + name; }

Check chain_example() {
  Check c;
  auto db = load_clause_file(data("example1.clauses"));
  const auto& e = db.engine;
  c.expect(e.label_of(LiteralId("x2")) == Label({assumptions({1})}), "label x2");
  c.expect(e.label_of(LiteralId("x3")) == Label({assumptions({1, 2})}), "label x3");
  c.expect(e.label_of(LiteralId("x4")) == Label({assumptions({3})}), "label x4");
  c.near(belief_of_label(e.label_of(LiteralId("x2")), db.masses), 0.5, 1e-9, "Bel x2");
  c.near(belief_of_label(e.label_of(LiteralId("x3")), db.masses), 0.5 * 0.7, 1e-9, "Bel x3");
  c.near(belief_of_label(e.label_of(LiteralId("x4")), db.masses), 0.8, 1e-9, "Bel x4");
  return c;
}

Check chain_example_x5() {
  Check c;
  auto db = load_clause_file(data("example1.clauses"));
  const Label& x5 = db.engine.label_of(LiteralId("x5"));
  c.expect(x5 == Label({assumptions({3, 4}), assumptions({1, 3, 5})}), "propagated label x5");
  const double m1 = 0.5, m3 = 0.8, m4 = 0.6, m5 = 0.9;
  double oracle = brute_force_belief(db.engine.program(), db.masses, db.engine.node_of(LiteralId("x5")), false);
  c.near(oracle, m3 * m4 + m1 * m3 * m5 - m1 * m3 * m4 * m5, 1e-12, "oracle x5 vs expansion");
  c.near(belief_of_label(x5, db.masses), 0.624, 1e-9, "Bel x5 propagated");
  c.near(belief_of_label(x5, db.masses), oracle, 1e-9, "Bel x5 vs oracle");
  Label alternative({assumptions({1, 5}), assumptions({1, 3, 4})});
  double expansion = m1 * m5 + m1 * m3 * m4 - m1 * m3 * m4 * m5;
  c.near(belief_of_label(alternative, db.masses), 0.474, 1e-9, "Bel of alternative label");
  c.near(belief_of_label(alternative, db.masses), expansion, 1e-9, "alternative label vs expansion");
  c.expect(std::abs(belief_of_label(alternative, db.masses) - 0.51) > 0.01 && std::abs(oracle - 0.51) > 0.01,
           "0.51 unexpectedly reproduced");
  return c;
}

Check contradiction_example() {
  Check c;
  auto db = load_clause_file(data("example2.clauses"));
  const auto& e = db.engine;
  c.expect(e.nogoods() == Label({assumptions({1, 3, 6})}), "nogood set");
  c.near(belief_of_label(e.nogoods(), db.masses), 0.16, 1e-9, "Bel nogoods");
  // Exact rationals of the conditioned values.
  const std::pair<const char*, double> want[] = {{"x2", 17.0 / 42}, {"x4", 16.0 / 21}, {"x3", 0.238 / 0.84}};
  auto oracle = brute_force_beliefs(e.program(), db.masses, true);
  for (auto [lit, value] : want) {
    auto n = e.node_of(LiteralId(lit));
    double got = conditioned_belief(e.label_of(n), e.nogoods(), db.masses);
    c.near(got, value, 1e-9, std::string("conditioned Bel ") + lit);
    c.near(got, oracle[n], 1e-9, std::string("oracle ") + lit);
  }
  return c;
}

Check weights() {
  Check c;
  using recognition::Band;
  recognition::WeightConfig cfg;
  const std::pair<std::vector<Band>, double> cases[] = {
      {{Band::high, Band::high, Band::high, Band::high}, 1.0},
      {{Band::high, Band::high, Band::high, Band::low}, 0.625},
      {{Band::high, Band::high, Band::low, Band::low}, 0.390625},
      {{Band::low, Band::low, Band::low, Band::low}, 0.152587890625},
  };
  for (const auto& [bands, value] : cases) c.near(recognition::hypothesis_weight(bands, cfg), value, 1e-12, "weight");
  return c;
}

Check reliability_agreement() {
  Check c;
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 500; ++trial) {
    auto d = testing::random_dnf(rng, 12, 8);
    auto p = testing::random_probabilities(rng, 12);
    double e = reliability::prob_enum(d, p);
    c.near(reliability::prob_inclusion_exclusion(d, p), e, 1e-9, "inclusion-exclusion");
    c.near(reliability::prob_sdp(d, p), e, 1e-9, "disjoint products");
  }
  return c;
}

Check oracle_equivalence() {
  Check c;
  std::mt19937_64 rng(31415);
  // Databases whose nogoods cover every world are checked raw only; keep
  // drawing until 150 have a defined conditioned belief.
  int conditioned_cases = 0;
  for (int trial = 0; conditioned_cases < 150 && trial < 2000; ++trial) {
    auto db = testing::random_database(rng, 12, 30);
    Engine e;
    testing::load(e, db, testing::identity_order(db.justifications.size()));
    auto m = testing::masses_of(db);
    auto raw = brute_force_beliefs(e.program(), m, false);
    std::vector<double> cond;
    try {
      cond = brute_force_beliefs(e.program(), m, true);
    } catch (const ConflictError&) {
      // Every world contradictory: conditioning is undefined on both sides.
      bool raised = false;
      try {
        conditioned_belief(Label{}, e.nogoods(), m);
      } catch (const ConflictError&) {
        raised = true;
      }
      c.expect(raised, "total conflict not raised by conditioned_belief");
    }
    conditioned_cases += !cond.empty();
    for (std::size_t n = 0; n < e.node_count(); ++n) {
      const Label& l = e.label_of(static_cast<Engine::NodeIndex>(n));
      c.near(belief_of_label(l, m), raw[n], 1e-9, "raw " + e.literal(n).str());
      if (!cond.empty())
        c.near(conditioned_belief(l, e.nogoods(), m), cond[n], 1e-9, "conditioned " + e.literal(n).str());
    }
  }
  c.expect(conditioned_cases >= 150, "too few databases with defined conditioning");
  return c;
}

bool same_mass(const FrameMass& a, const FrameMass& b, double tol) {
  for (auto [s, v] : a.masses())
    if (std::abs(v - b.mass(s)) > tol) return false;
  for (auto [s, v] : b.masses())
    if (std::abs(v - a.mass(s)) > tol) return false;
  return true;
}

Check combination() {
  Check c;
  std::mt19937_64 rng(1618);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 1 + trial % 4;
    auto a = testing::random_frame_mass(rng, n), b = testing::random_frame_mass(rng, n),
         d = testing::random_frame_mass(rng, n);
    c.expect(same_mass(ds_combine(a, b), ds_combine(b, a), 1e-9), "commutativity");
    c.expect(same_mass(ds_combine(ds_combine(a, b), d), ds_combine(a, ds_combine(b, d)), 1e-9), "associativity");
    auto v = ds_combine(a, FrameMass::vacuous(n));
    c.expect(v.masses() == a.masses(), "vacuous identity");
  }
  bool raised = false;
  try {
    ds_combine(FrameMass(2, {{0b01, 1.0}}), FrameMass(2, {{0b10, 1.0}}));
  } catch (const ConflictError&) {
    raised = true;
  }
  c.expect(raised, "total conflict not raised");
  return c;
}

bool labels_exact(const Engine& e, const testing::RandomDatabase& db, const std::vector<Justification>& loaded) {
  auto expected = testing::exhaustive_labels(db, loaded);
  if (!(e.nogoods() == expected.nogoods)) return false;
  for (std::size_t n = 0; n < e.node_count(); ++n) {
    const LiteralId& lit = e.literal(n);
    const Label& got = e.label_of(static_cast<Engine::NodeIndex>(n));
    for (const auto& env : got) {
      auto cl = testing::closure(loaded, testing::assumption_set(e, env));
      if (!cl.derived.contains(lit) || cl.contradiction || e.nogoods().subsumes(env)) return false;
    }
    for (const auto& x : got)
      for (const auto& y : got)
        if (!(x == y) && x.is_subset_of(y)) return false;
    auto it = expected.labels.find(lit);
    if (!(got == (it == expected.labels.end() ? Label{} : it->second))) return false;
  }
  return true;
}

Check label_invariants() {
  Check c;
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 60; ++trial) {
    auto db = testing::random_database(rng, 12, 30);
    auto order = testing::identity_order(db.justifications.size());
    std::shuffle(order.begin(), order.end(), rng);
    Engine e;
    for (const auto& a : db.assumptions) e.add_assumption(a);
    std::vector<Justification> loaded;
    for (auto i : order) {
      e.add_justification(db.justifications[i]);
      loaded.push_back(db.justifications[i]);
      c.expect(labels_exact(e, db, loaded), "labels after mutation, trial " + std::to_string(trial));
    }
    std::shuffle(order.begin(), order.end(), rng);
    Engine other;
    testing::load(other, db, order);
    c.expect(other.nogoods() == e.nogoods(), "order independence of nogoods");
    for (std::size_t n = 0; n < e.node_count(); ++n)
      c.expect(other.label_of(e.literal(n)) == e.label_of(static_cast<Engine::NodeIndex>(n)),
               "order independence of labels");
  }
  return c;
}

Check recognition_fixture() {
  Check c;
  auto model = recognition::parse_model(read_file(data("puppet_model.json")));
  auto ranked = recognition::interpret(recognition::parse_scene(read_file(data("puppet_scene.json"))), model);
  c.expect(ranked.size() == 1, "expected exactly one interpretation, got " + std::to_string(ranked.size()));
  if (!ranked.empty()) {
    c.expect(ranked[0].complete, "interpretation incomplete");
    c.expect(format_number(ranked[0].belief) == "1.000000000", "belief " + format_number(ranked[0].belief));
  }
  auto degraded =
      recognition::interpret(recognition::parse_scene(read_file(data("puppet_scene_degraded_thigh.json"))), model);
  c.expect(!degraded.empty(), "no interpretation of degraded scene");
  if (!degraded.empty()) {
    c.near(degraded[0].belief, 0.625, 1e-12, "degraded top belief");
    c.expect(format_number(degraded[0].belief) == "0.625000000", "degraded belief " + format_number(degraded[0].belief));
  }
  return c;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // 0 when untimed
  std::function<Check()> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "chain example labels and beliefs", 1.0, chain_example},
      {2, "chain example x5: propagated label 0.624, alternative label 0.474", 0.0, chain_example_x5},
      {3, "contradiction example nogood and conditioned beliefs", 0.0, contradiction_example},
      {4, "hypothesis weights for the four band patterns", 0.0, weights},
      {5, "reliability evaluators agree on 500 random DNFs", 10.0, reliability_agreement},
      {6, "label beliefs equal the enumeration oracle on 150+ random databases", 30.0, oracle_equivalence},
      {7, "Dempster combination properties", 0.0, combination},
      {8, "label invariants after every mutation and order independence", 0.0, label_invariants},
      {9, "recognition fixture beliefs 1.0 and 0.625", 2.0, recognition_fixture},
  };
  int failures = 0;
  for (const auto& cr : criteria) {
    auto start = std::chrono::steady_clock::now();
    Check c;
    try {
      c = cr.run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.limit_seconds > 0 && seconds >= cr.limit_seconds) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "runtime %.3f s exceeds %.0f s", seconds, cr.limit_seconds);
      c.expect(false, buf);
    }
    std::printf("%s %d %s (%.3f s)%s%s\n", c.ok ? "PASS" : "FAIL", cr.id, cr.name, seconds, c.ok ? "" : ": ",
                c.detail.c_str());
    failures += !c.ok;
  }
  return failures == 0 ? 0 : 1;
}
