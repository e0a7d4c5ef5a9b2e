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

// Dempster-Shafer layer over the truth-maintenance engine.
//
// Masses live on assumptions only and are taken as independent, so the mass
// of an environment is the product of its members' masses and the belief of
// a label is the probability that at least one of its environments holds.
// Conditioning on the nogood database follows Dempster's rule of
// conditioning expressed on labels:
//
//   Bel(x | not nogoods) = (Bel[L(x) u nogoods] - Bel[nogoods]) / (1 - Bel[nogoods])
//
// The frame-level functions (FrameMass, ds_combine, frame_belief) work on an
// explicit frame of discernment of at most 64 elements and serve as the
// set-theoretic counterpart of the label computations.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dsatms/atms.hpp"
#include "dsatms/environment.hpp"
#include "dsatms/error.hpp"
#include "dsatms/reliability.hpp"

namespace dsatms {

inline constexpr double kConflictTolerance = 1e-12;

class MassAssignment {
 public:
  MassAssignment() = default;

  void set(AssumptionId a, double mass) {
    if (!(mass >= 0.0 && mass <= 1.0))
      throw SemanticError("mass " + std::to_string(mass) + " for assumption #" + std::to_string(index_of(a)) +
                          " is outside [0,1]");
    auto i = index_of(a);
    if (i >= masses_.size()) masses_.resize(i + 1);
    masses_[i] = mass;
  }

  bool has(AssumptionId a) const { return index_of(a) < masses_.size() && masses_[index_of(a)].has_value(); }

  double at(AssumptionId a) const {
    if (!has(a)) throw SemanticError("no mass assigned to assumption #" + std::to_string(index_of(a)));
    return *masses_[index_of(a)];
  }

  // Dense probability vector covering every assumption in `label`; missing
  // entries are rejected, unreferenced ones default to 0.
  std::vector<double> dense_for(const Label& label) const {
    std::vector<double> p(masses_.size(), 0.0);
    for (std::size_t i = 0; i < masses_.size(); ++i)
      if (masses_[i]) p[i] = *masses_[i];
    for (const auto& e : label)
      for (auto a : e) at(a);
    return p;
  }

  std::size_t size() const { return masses_.size(); }

 private:
  std::vector<std::optional<double>> masses_;
};

inline double env_mass(const Environment& e, const MassAssignment& m) {
  double r = 1.0;
  for (auto a : e) r *= m.at(a);
  return r;
}

enum class Evaluator { disjoint_products, inclusion_exclusion, enumeration };

inline double belief_of_label(const Label& label, const MassAssignment& m,
                              Evaluator how = Evaluator::disjoint_products) {
  if (label.empty()) return 0.0;
  auto p = m.dense_for(label);
  reliability::Dnf dnf(label);
  switch (how) {
    case Evaluator::inclusion_exclusion: return reliability::prob_inclusion_exclusion(dnf, p);
    case Evaluator::enumeration: return reliability::prob_enum(dnf, p);
    case Evaluator::disjoint_products: break;
  }
  return reliability::prob_sdp(dnf, p);
}

inline double conditioned_belief(const Label& label, const Label& nogoods, const MassAssignment& m) {
  double conflict = belief_of_label(nogoods, m);
  if (1.0 - conflict <= kConflictTolerance)
    throw ConflictError("total conflict: belief of the nogood set is 1");
  double joint = belief_of_label(label_union(label, nogoods), m);
  return (joint - conflict) / (1.0 - conflict);
}

// --- Derivability oracle --------------------------------------------------

inline constexpr std::size_t kMaxOracleAssumptions = 24;

// Beliefs of every node by enumerating all truth assignments to the
// assumptions and forward-chaining the clause set in each world.
//
// Raw belief of x is the weight of worlds containing a consistent set of
// assumptions from which x follows; with no contradiction clauses this is
// plain derivability. Conditioned belief drops contradictory worlds and
// renormalizes over the rest.
inline std::vector<double> brute_force_beliefs(const HornProgram& program, const MassAssignment& m,
                                               bool conditioned) {
  const std::size_t n = program.assumption_nodes.size();
  if (n > kMaxOracleAssumptions)
    throw LimitError("oracle over " + std::to_string(n) + " assumptions exceeds limit of " +
                     std::to_string(kMaxOracleAssumptions));
  std::vector<double> mass(n);
  for (std::size_t i = 0; i < n; ++i) mass[i] = m.at(static_cast<AssumptionId>(i));

  const std::uint64_t worlds = std::uint64_t{1} << n;
  const bool has_contradictions = std::any_of(program.clauses.begin(), program.clauses.end(),
                                              [](const auto& c) { return !c.consequent.has_value(); });
  const bool need_subsets = has_contradictions && !conditioned;

  std::vector<double> weight(worlds);
  std::vector<char> contradictory(worlds);
  // need_subsets: reach[v][S] = x_v follows from S and S is consistent.
  std::vector<std::vector<bool>> reach(need_subsets ? program.node_count : 0, std::vector<bool>(worlds));
  std::vector<double> derivable(program.node_count, 0.0);
  std::vector<char> truth(program.node_count);

  for (std::uint64_t world = 0; world < worlds; ++world) {
    double w = 1.0;
    std::fill(truth.begin(), truth.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      bool on = (world >> i) & 1u;
      w *= on ? mass[i] : 1.0 - mass[i];
      truth[program.assumption_nodes[i]] = on;
    }
    bool contradiction = false;
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& c : program.clauses) {
        bool fires = std::all_of(c.antecedents.begin(), c.antecedents.end(), [&](auto a) { return truth[a] != 0; });
        if (!fires) continue;
        if (!c.consequent) {
          contradiction = true;
        } else if (!truth[*c.consequent]) {
          truth[*c.consequent] = 1;
          changed = true;
        }
      }
    }
    weight[world] = w;
    contradictory[world] = contradiction;
    if (need_subsets) {
      if (!contradiction)
        for (std::size_t v = 0; v < program.node_count; ++v) reach[v][world] = truth[v] != 0;
    } else if (!(conditioned && contradiction)) {
      for (std::size_t v = 0; v < program.node_count; ++v)
        if (truth[v]) derivable[v] += w;
    }
  }

  if (need_subsets) {
    for (std::size_t v = 0; v < program.node_count; ++v) {
      auto& r = reach[v];
      // Upward closure: r[W] = OR over S subset of W of r[S].
      for (std::size_t bit = 0; bit < n; ++bit)
        for (std::uint64_t s = 0; s < worlds; ++s)
          if ((s >> bit & 1u) && r[s ^ (std::uint64_t{1} << bit)]) r[s] = true;
      for (std::uint64_t s = 0; s < worlds; ++s)
        if (r[s]) derivable[v] += weight[s];
    }
  }
  if (conditioned) {
    double consistent_weight = 0.0;
    for (std::uint64_t s = 0; s < worlds; ++s)
      if (!contradictory[s]) consistent_weight += weight[s];
    if (consistent_weight <= kConflictTolerance) throw ConflictError("total conflict: every world is contradictory");
    for (auto& d : derivable) d /= consistent_weight;
  }
  return derivable;
}

inline double brute_force_belief(const HornProgram& program, const MassAssignment& m, std::uint32_t node,
                                 bool conditioned) {
  if (node >= program.node_count) throw SemanticError("node index out of range");
  return brute_force_beliefs(program, m, conditioned)[node];
}

// --- Frame-level mass functions --------------------------------------------

// Bit i set means focal proposition i of the frame is in the subset.
using Subset = std::uint64_t;

inline constexpr std::size_t kMaxFrameSize = 64;

inline Subset full_subset(std::size_t frame_size) {
  return frame_size >= 64 ? ~Subset{0} : (Subset{1} << frame_size) - 1;
}

class FrameMass {
 public:
  FrameMass(std::size_t frame_size, std::map<Subset, double> masses)
      : frame_size_(frame_size), masses_(std::move(masses)) {
    validate();
  }

  // All mass on the whole frame: total ignorance.
  static FrameMass vacuous(std::size_t frame_size) { return FrameMass(frame_size, {{full_subset(frame_size), 1.0}}); }

  std::size_t frame_size() const { return frame_size_; }
  Subset frame() const { return full_subset(frame_size_); }
  const std::map<Subset, double>& masses() const { return masses_; }

  double mass(Subset s) const {
    auto it = masses_.find(s);
    return it == masses_.end() ? 0.0 : it->second;
  }

 private:
  void validate() const {
    if (frame_size_ == 0 || frame_size_ > kMaxFrameSize)
      throw SemanticError("frame size must be in [1, 64], got " + std::to_string(frame_size_));
    double total = 0.0;
    for (auto [s, v] : masses_) {
      if (s & ~full_subset(frame_size_)) throw SemanticError("focal subset outside the frame");
      if (!(v >= 0.0)) throw SemanticError("negative mass");
      if (s == 0 && v != 0.0) throw SemanticError("empty subset carries mass");
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) throw SemanticError("masses sum to " + std::to_string(total) + ", not 1");
  }

  std::size_t frame_size_;
  std::map<Subset, double> masses_;
};

inline FrameMass ds_combine(const FrameMass& m1, const FrameMass& m2) {
  if (m1.frame_size() != m2.frame_size()) throw SemanticError("cannot combine mass functions over different frames");
  std::map<Subset, double> joint;
  double conflict = 0.0;
  for (auto [a, va] : m1.masses())
    for (auto [b, vb] : m2.masses()) {
      double w = va * vb;
      if (w == 0.0) continue;
      Subset s = a & b;
      if (s == 0)
        conflict += w;
      else
        joint[s] += w;
    }
  if (1.0 - conflict <= kConflictTolerance) throw ConflictError("total conflict: evidence is not combinable");
  for (auto& [s, v] : joint) v /= 1.0 - conflict;
  return FrameMass(m1.frame_size(), std::move(joint));
}

inline double frame_belief(const FrameMass& m, Subset subset) {
  double total = 0.0;
  for (auto [s, v] : m.masses())
    if (s != 0 && (s & ~subset) == 0) total += v;
  return total;
}

// Dempster's rule of conditioning at the frame level:
//   Bel(a | b) = (Bel(a u ~b) - Bel(~b)) / (1 - Bel(~b))
inline double frame_conditioned_belief(const FrameMass& m, Subset a, Subset b) {
  Subset not_b = m.frame() & ~b;
  double excluded = frame_belief(m, not_b);
  if (1.0 - excluded <= kConflictTolerance) throw ConflictError("total conflict: conditioning event has no belief");
  return (frame_belief(m, a | not_b) - excluded) / (1.0 - excluded);
}

}  // namespace dsatms
