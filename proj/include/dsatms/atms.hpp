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

// Assumption-based truth maintenance over Horn justifications.
//
// Every node carries a label: the minimal set of assumption environments
// from which the node follows. Labels are kept sound, complete, minimal and
// consistent with the nogood database after every mutation. Propagation is
// worklist-driven from the justification that changed; a full-recomputation
// mode re-derives everything from scratch after each mutation and must agree.
//
// Mutations are single-writer; const queries may run concurrently between
// mutations. Returned labels are value snapshots.

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsatms/environment.hpp"
#include "dsatms/error.hpp"

namespace dsatms {

struct LiteralId {
  std::string name;
  bool negative = false;

  LiteralId() = default;
  LiteralId(std::string n, bool neg = false) : name(std::move(n)), negative(neg) {}
  LiteralId(const char* n) : name(n) {}

  // "!x6" denotes the negative literal of x6.
  static LiteralId parse(std::string_view text) {
    if (!text.empty() && text.front() == '!') return LiteralId(std::string(text.substr(1)), true);
    return LiteralId(std::string(text));
  }

  std::string str() const { return negative ? "!" + name : name; }

  LiteralId complement() const { return LiteralId(name, !negative); }

  friend auto operator<=>(const LiteralId&, const LiteralId&) = default;
};

// A Horn clause: the conjunction of antecedents implies the consequent, or a
// contradiction when the consequent is empty. No antecedents means premise.
struct Justification {
  std::vector<LiteralId> antecedents;
  std::optional<LiteralId> consequent;
};

// Clause set stripped of labels; input to the derivability oracle.
struct HornProgram {
  struct Clause {
    std::vector<std::uint32_t> antecedents;
    std::optional<std::uint32_t> consequent;  // empty: contradiction
  };
  std::size_t node_count = 0;
  std::vector<std::uint32_t> assumption_nodes;  // by AssumptionId
  std::vector<Clause> clauses;
};

enum class Propagation { incremental, full_recompute };

class Engine {
 public:
  using NodeIndex = std::uint32_t;

  explicit Engine(Propagation mode = Propagation::incremental) : mode_(mode) {}

  AssumptionId add_assumption(std::string_view name) {
    LiteralId lit{std::string(name)};
    if (index_.contains(lit)) throw SemanticError("duplicate declaration of '" + lit.str() + "'");
    auto id = static_cast<AssumptionId>(assumption_nodes_.size());
    NodeIndex n = make_node(lit);
    nodes_[n].assumption = id;
    nodes_[n].label = Label{Environment{id}};
    assumption_nodes_.push_back(n);
    if (mode_ == Propagation::full_recompute) recompute_all();
    return id;
  }

  void add_justification(const Justification& j) {
    if (j.consequent) {
      if (auto it = index_.find(*j.consequent); it != index_.end() && nodes_[it->second].assumption)
        throw SemanticError("assumption '" + j.consequent->str() + "' cannot be the consequent of a justification");
    }
    for (std::size_t a = 0; a < j.antecedents.size(); ++a)
      for (std::size_t b = a + 1; b < j.antecedents.size(); ++b)
        if (j.antecedents[a] == j.antecedents[b].complement())
          throw SemanticError("antecedents contain complementary pair '" + j.antecedents[a].name + "'");

    StoredJustification stored;
    for (const auto& lit : j.antecedents) stored.antecedents.push_back(intern(lit));
    std::sort(stored.antecedents.begin(), stored.antecedents.end());
    stored.antecedents.erase(std::unique(stored.antecedents.begin(), stored.antecedents.end()),
                             stored.antecedents.end());
    if (j.consequent) stored.consequent = intern(*j.consequent);

    auto ji = justifications_.size();
    for (auto n : stored.antecedents) nodes_[n].consumers.push_back(ji);
    if (stored.consequent) nodes_[*stored.consequent].premise |= stored.antecedents.empty();
    justifications_.push_back(std::move(stored));

    if (mode_ == Propagation::full_recompute) {
      recompute_all();
    } else {
      enqueue(ji);
      run();
    }
  }

  void add_premise(const LiteralId& lit) { add_justification({{}, lit}); }

  void add_rule(std::vector<LiteralId> antecedents, LiteralId consequent) {
    add_justification({std::move(antecedents), std::move(consequent)});
  }

  // Declares a and b mutually contradictory. Installed as a justification
  // with no consequent, so later growth of either label extends the nogoods.
  void record_contradiction(const LiteralId& a, const LiteralId& b) {
    for (const auto* lit : {&a, &b})
      if (!index_.contains(*lit)) throw SemanticError("unknown literal '" + lit->str() + "'");
    add_justification({{a, b}, std::nullopt});
  }

  Label label_of(const LiteralId& lit) const { return nodes_[node_of(lit)].label; }
  const Label& label_of(NodeIndex n) const { return nodes_.at(n).label; }

  const Label& nogoods() const { return nogoods_; }

  bool contains(const LiteralId& lit) const { return index_.contains(lit); }

  NodeIndex node_of(const LiteralId& lit) const {
    auto it = index_.find(lit);
    if (it == index_.end()) throw SemanticError("unknown literal '" + lit.str() + "'");
    return it->second;
  }

  std::size_t node_count() const { return nodes_.size(); }
  const LiteralId& literal(NodeIndex n) const { return nodes_.at(n).literal; }
  bool is_assumption(NodeIndex n) const { return nodes_.at(n).assumption.has_value(); }
  bool is_premise(NodeIndex n) const { return nodes_.at(n).premise; }

  std::size_t assumption_count() const { return assumption_nodes_.size(); }
  const std::string& assumption_name(AssumptionId a) const { return nodes_[assumption_nodes_.at(index_of(a))].literal.name; }

  std::optional<AssumptionId> find_assumption(std::string_view name) const {
    auto it = index_.find(LiteralId{std::string(name)});
    if (it == index_.end()) return std::nullopt;
    return nodes_[it->second].assumption;
  }

  std::size_t justification_count() const { return justifications_.size(); }

  // Labels of all nodes, in node order.
  std::vector<Label> labels() const {
    std::vector<Label> out;
    out.reserve(nodes_.size());
    for (const auto& n : nodes_) out.push_back(n.label);
    return out;
  }

  HornProgram program() const {
    HornProgram p;
    p.node_count = nodes_.size();
    p.assumption_nodes = assumption_nodes_;
    for (const auto& j : justifications_) p.clauses.push_back({j.antecedents, j.consequent});
    return p;
  }

  // Discards every derived label and the nogoods, then re-derives them from
  // the stored justifications.
  void recompute_all() {
    for (auto& n : nodes_) n.label = n.assumption ? Label{Environment{*n.assumption}} : Label{};
    nogoods_ = Label{};
    for (std::size_t j = 0; j < justifications_.size(); ++j) enqueue(j);
    run();
  }

 private:
  struct Node {
    LiteralId literal;
    std::optional<AssumptionId> assumption;
    Label label;
    std::vector<std::size_t> consumers;
    bool premise = false;
  };

  struct StoredJustification {
    std::vector<NodeIndex> antecedents;
    std::optional<NodeIndex> consequent;
  };

  NodeIndex make_node(const LiteralId& lit) {
    auto n = static_cast<NodeIndex>(nodes_.size());
    nodes_.push_back(Node{lit, std::nullopt, {}, {}, false});
    index_.emplace(lit, n);
    return n;
  }

  NodeIndex intern(const LiteralId& lit) {
    auto it = index_.find(lit);
    return it != index_.end() ? it->second : make_node(lit);
  }

  void enqueue(std::size_t j) {
    if (queued_.size() < justifications_.size()) queued_.resize(justifications_.size(), false);
    if (queued_[j]) return;
    queued_[j] = true;
    worklist_.push_back(j);
  }

  void run() {
    while (!worklist_.empty()) {
      auto j = worklist_.front();
      worklist_.pop_front();
      queued_[j] = false;
      fire(j);
    }
  }

  void fire(std::size_t ji) {
    const auto& j = justifications_[ji];
    std::vector<Label> inputs;
    inputs.reserve(j.antecedents.size());
    for (auto n : j.antecedents) inputs.push_back(nodes_[n].label);
    Label derived = combine_antecedent_labels(inputs, Environment{}, nogoods_);
    if (derived.empty()) return;

    if (!j.consequent) {
      Label merged = label_union(nogoods_, derived);
      if (merged == nogoods_) return;
      nogoods_ = std::move(merged);
      for (auto& n : nodes_) n.label = filter_consistent(n.label, nogoods_);
      return;
    }
    Node& target = nodes_[*j.consequent];
    Label merged = label_union(target.label, derived);
    if (merged == target.label) return;
    target.label = std::move(merged);
    for (auto c : target.consumers) enqueue(c);
  }

  Propagation mode_;
  std::vector<Node> nodes_;
  std::map<LiteralId, NodeIndex> index_;
  std::vector<NodeIndex> assumption_nodes_;
  std::vector<StoredJustification> justifications_;
  Label nogoods_;
  std::deque<std::size_t> worklist_;
  std::vector<bool> queued_;
};

}  // namespace dsatms
