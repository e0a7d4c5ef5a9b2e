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

// Model-based recognition of puppet figures in scenes of overlapping
// rectangles, driven by the truth-maintenance engine.
//
// Seeds are single-rectangle part hypotheses found by unary rules. Growth
// follows the model's attachment tree in both directions: a hypothesis for
// one part proposes the neighbouring part on every overlapping rectangle
// whose geometric filters all pass. Each proposal becomes a fresh assumption
// weighted by the filters' bands and a justification
//
//     assumption /\ existing-hypothesis => proposed-hypothesis
//
// Two hypotheses on one rectangle, or one part on two rectangles, are
// recorded as contradictions. Interpretations are the maximal connected,
// injective, consistent hypothesis sets, ranked by conditioned belief.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dsatms/atms.hpp"
#include "dsatms/belief.hpp"
#include "dsatms/error.hpp"
#include "dsatms/geometry.hpp"

namespace dsatms::recognition {

using geometry::Rectangle;
using Scene = std::vector<Rectangle>;

enum class Band { high, low, fail };

inline const char* to_string(Band b) {
  switch (b) {
    case Band::high: return "high";
    case Band::low: return "low";
    case Band::fail: return "fail";
  }
  return "?";
}

enum class FilterKind { angle_of_overlap, relative_area, relative_overlap_area, axial_ratio };

// For angle filters [lo, hi] is the counter-clockwise arc from lo to hi,
// wrapping through 0 when lo > hi. For the ratio filters it is the closed
// range between the two bounds, in either order.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

enum class Reference { child, parent };

struct FilterSpec {
  FilterKind kind = FilterKind::relative_area;
  std::vector<Interval> high;
  std::vector<Interval> low;
  Reference relative_to = Reference::child;  // relative_overlap_area only

  friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

namespace detail {

constexpr double kTwoPi = 2 * std::numbers::pi;

// Linear pieces of an interval on the real line (angles: within [0, 2pi]).
inline std::vector<Interval> pieces(FilterKind kind, Interval iv) {
  if (kind != FilterKind::angle_of_overlap) return {{std::min(iv.lo, iv.hi), std::max(iv.lo, iv.hi)}};
  double lo = geometry::normalize_angle(iv.lo), hi = geometry::normalize_angle(iv.hi);
  if (lo <= hi && !(hi == 0.0 && lo > 0.0)) return {{lo, hi}};
  if (hi == 0.0) return {{lo, kTwoPi}, {0.0, 0.0}};
  return {{lo, kTwoPi}, {0.0, hi}};
}

inline bool member(const FilterSpec& f, const std::vector<Interval>& set, double value) {
  for (const auto& iv : set)
    for (const auto& p : pieces(f.kind, iv))
      if (value >= p.lo && value <= p.hi) return true;
  return false;
}

}  // namespace detail

// High and low bands may touch at a boundary (high wins there) but must not
// share interior points.
inline void validate(const FilterSpec& f) {
  for (const auto& h : f.high)
    for (const auto& l : f.low)
      for (const auto& hp : detail::pieces(f.kind, h))
        for (const auto& lp : detail::pieces(f.kind, l))
          if (std::min(hp.hi, lp.hi) - std::max(hp.lo, lp.lo) > 1e-12)
            throw SemanticError("filter bands overlap: high and low share an interior range");
  if (f.high.empty() && f.low.empty()) throw SemanticError("filter has no acceptable range");
}

inline Band classify(const FilterSpec& f, double value) {
  if (f.kind == FilterKind::angle_of_overlap) value = geometry::normalize_angle(value);
  if (detail::member(f, f.high, value)) return Band::high;
  if (detail::member(f, f.low, value)) return Band::low;
  return Band::fail;
}

inline double filter_value(const FilterSpec& f, const Rectangle& parent, const Rectangle& child) {
  switch (f.kind) {
    case FilterKind::angle_of_overlap: return geometry::normalize_angle(child.angle - parent.angle);
    case FilterKind::relative_area: return child.area() / parent.area();
    case FilterKind::relative_overlap_area:
      return geometry::overlap_area(parent, child) / (f.relative_to == Reference::child ? child : parent).area();
    case FilterKind::axial_ratio: return child.width / child.height;
  }
  return 0.0;
}

inline Band eval_filter(const FilterSpec& f, const Rectangle& parent, const Rectangle& child) {
  return classify(f, filter_value(f, parent, child));
}

struct WeightConfig {
  double p_high = 0.8;
  double p_low = 0.5;
  double seed_weight = 1.0;

  void validate() const {
    if (!(p_low > 0.0 && p_low <= p_high && p_high <= 1.0))
      throw SemanticError("weights must satisfy 0 < p_low <= p_high <= 1");
    if (!(seed_weight >= 0.0 && seed_weight <= 1.0)) throw SemanticError("seed weight must be in [0,1]");
  }

  friend bool operator==(const WeightConfig&, const WeightConfig&) = default;
};

// Product of per-band probabilities normalized by the all-high product, so a
// hypothesis passing every filter in its high band weighs exactly 1.
inline double hypothesis_weight(std::span<const Band> bands, const WeightConfig& cfg) {
  if (bands.empty()) throw SemanticError("hypothesis weight needs at least one band");
  double w = 1.0;
  for (Band b : bands) {
    if (b == Band::fail) throw SemanticError("failed filter in hypothesis weight");
    w *= (b == Band::high ? cfg.p_high : cfg.p_low) / cfg.p_high;
  }
  return w;
}

// Unary acceptance rule for a seed part; every present field must hold.
struct SeedRule {
  std::string part;
  std::optional<int> min_smaller_overlaps;
  bool largest_among_overlaps = false;
  std::optional<int> overlap_count;
  bool neighbor_larger = false;
  // The single neighbour must overlap a seed of this part, near the end its
  // width axis points to.
  std::optional<std::string> neighbor_overlaps_seed;
  double neighbor_end_fraction = 0.5;

  friend bool operator==(const SeedRule&, const SeedRule&) = default;
};

struct Attachment {
  std::string parent;
  std::string child;
  std::vector<FilterSpec> filters;

  friend bool operator==(const Attachment&, const Attachment&) = default;
};

struct PuppetModel {
  std::vector<std::string> parts;
  std::vector<Attachment> attachments;
  std::vector<SeedRule> seeds;
  WeightConfig weights;
  std::size_t interpretation_limit = 1000;
  std::size_t search_node_limit = 1'000'000;

  std::optional<std::size_t> part_index(std::string_view name) const {
    auto it = std::find(parts.begin(), parts.end(), name);
    if (it == parts.end()) return std::nullopt;
    return static_cast<std::size_t>(it - parts.begin());
  }

  std::size_t require_part(std::string_view name) const {
    auto i = part_index(name);
    if (!i) throw SemanticError("unknown part '" + std::string(name) + "'");
    return *i;
  }

  // Attachments must form one tree over all parts; at least one seed.
  void validate() const {
    if (parts.empty()) throw SemanticError("model has no parts");
    std::set<std::string> unique(parts.begin(), parts.end());
    if (unique.size() != parts.size()) throw SemanticError("duplicate part name");
    std::vector<int> parent_count(parts.size(), 0);
    for (const auto& a : attachments) {
      require_part(a.parent);
      ++parent_count[require_part(a.child)];
      if (a.filters.empty()) throw SemanticError("attachment " + a.parent + "->" + a.child + " has no filters");
      for (const auto& f : a.filters) recognition::validate(f);
    }
    if (attachments.size() + 1 != parts.size()) throw SemanticError("attachments do not form a tree");
    int roots = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parent_count[i] > 1) throw SemanticError("part '" + parts[i] + "' has two parents");
      roots += parent_count[i] == 0;
    }
    if (roots != 1) throw SemanticError("attachments do not form a tree");
    // n-1 edges, one root and single parents: connected iff acyclic.
    std::vector<char> seen(parts.size(), 0);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < parts.size(); ++i)
      if (parent_count[i] == 0) stack.push_back(i);
    while (!stack.empty()) {
      auto p = stack.back();
      stack.pop_back();
      if (seen[p]) continue;
      seen[p] = 1;
      for (const auto& a : attachments)
        if (a.parent == parts[p]) stack.push_back(require_part(a.child));
    }
    if (std::count(seen.begin(), seen.end(), 1) != static_cast<long>(parts.size()))
      throw SemanticError("attachments do not form a tree");
    if (seeds.empty()) throw SemanticError("model has no seed rules");
    for (const auto& s : seeds) {
      require_part(s.part);
      if (s.neighbor_overlaps_seed) require_part(*s.neighbor_overlaps_seed);
    }
    weights.validate();
  }
};

// --- default puppet ---------------------------------------------------------

namespace presets {

constexpr double pi = std::numbers::pi;

inline FilterSpec angle(std::vector<Interval> high, std::vector<Interval> low) {
  return {FilterKind::angle_of_overlap, std::move(high), std::move(low)};
}

inline FilterSpec ratio(FilterKind kind, Interval high, std::vector<Interval> low) {
  return {kind, {high}, std::move(low)};
}

// Growth continuing along the parent's axis: within 45 degrees high, 90 acceptable.
inline FilterSpec aligned() { return angle({{7 * pi / 4, pi / 4}}, {{3 * pi / 2, 7 * pi / 4}, {pi / 4, pi / 2}}); }

struct Bands {
  Interval high;
  std::vector<Interval> low;
};

inline std::vector<FilterSpec> filters(FilterSpec angle_filter, Bands area, Bands overlap, Bands axial) {
  return {std::move(angle_filter), ratio(FilterKind::relative_area, area.high, area.low),
          ratio(FilterKind::relative_overlap_area, overlap.high, overlap.low),
          ratio(FilterKind::axial_ratio, axial.high, axial.low)};
}

}  // namespace presets

// Fifteen-part puppet rooted at the trunk. Both thighs share their ratio
// bands; the left thigh's angle arcs mirror the right's across the trunk
// axis. Bands of the other parts are defaults sized for the bundled fixtures.
inline PuppetModel default_puppet_model() {
  using namespace presets;
  PuppetModel m;
  m.parts = {"head",          "neck",         "trunk",          "left_upper_arm", "left_forearm",
             "left_hand",     "right_upper_arm", "right_forearm", "right_hand",   "left_thigh",
             "left_calf",     "left_foot",    "right_thigh",    "right_calf",     "right_foot"};

  const Bands limb_axial{{3.0, 5.0}, {{2.0, 3.0}, {5.0, 6.0}}};
  const Bands upper_arm_area{{0.105, 0.145}, {{0.095, 0.105}, {0.145, 0.16}}};
  const Bands upper_arm_overlap{{0.15, 0.35}, {{0.05, 0.15}, {0.35, 0.5}}};
  const Bands forearm_area{{0.6, 1.1}, {{0.4, 0.6}, {1.1, 1.3}}};
  const Bands narrow_overlap{{0.05, 0.2}, {{0.02, 0.05}, {0.2, 0.4}}};
  const Bands hand_area{{0.15, 0.35}, {{0.1, 0.15}, {0.35, 0.5}}};
  const Bands end_overlap{{0.1, 0.3}, {{0.05, 0.1}, {0.3, 0.5}}};
  const Bands hand_axial{{0.9, 1.6}, {{0.7, 0.9}, {1.6, 2.0}}};
  const Bands thigh_area{{0.25, 0.4}, {{0.4, 0.6}, {0.15, 0.25}}};
  const Bands thigh_overlap{{0.1, 0.3}, {{0.3, 0.5}, {0.0, 0.1}}};
  const Bands thigh_axial{{2.0, 4.5}, {{1.5, 2.0}, {4.5, 6.0}}};
  const Bands calf_area{{0.4, 0.8}, {{0.3, 0.4}, {0.8, 1.0}}};
  const Bands calf_axial{{3.0, 5.5}, {{2.0, 3.0}, {5.5, 7.0}}};
  const Bands foot_area{{0.12, 0.3}, {{0.08, 0.12}, {0.3, 0.4}}};
  const Bands foot_axial{{1.3, 2.2}, {{1.0, 1.3}, {2.2, 2.5}}};

  const FilterSpec left_of_trunk = angle({{pi / 4, 3 * pi / 4}}, {{0, pi / 4}, {3 * pi / 4, pi}});
  const FilterSpec right_of_trunk = angle({{5 * pi / 4, 7 * pi / 4}}, {{pi, 5 * pi / 4}, {7 * pi / 4, 0}});
  const FilterSpec right_thigh_angle = angle({{5 * pi / 4, 0}}, {{0, pi / 4}, {pi, 5 * pi / 4}});
  const FilterSpec left_thigh_angle = angle({{0, 3 * pi / 4}}, {{3 * pi / 4, pi}, {7 * pi / 4, 0}});

  m.attachments = {
      {"trunk", "neck",
       filters(aligned(), {{0.045, 0.075}, {{0.03, 0.045}, {0.075, 0.09}}},
               {{0.08, 0.3}, {{0.02, 0.08}, {0.3, 0.5}}}, {{0.8, 1.6}, {{0.6, 0.8}, {1.6, 2.5}}})},
      {"neck", "head",
       filters(aligned(), {{0.55, 0.9}, {{0.4, 0.55}, {0.9, 1.0}}}, {{0.04, 0.25}, {{0.01, 0.04}, {0.25, 0.4}}},
               {{0.75, 1.35}, {{0.6, 0.75}, {1.35, 1.7}}})},
      {"trunk", "left_upper_arm", filters(left_of_trunk, upper_arm_area, upper_arm_overlap, limb_axial)},
      {"left_upper_arm", "left_forearm", filters(aligned(), forearm_area, narrow_overlap, limb_axial)},
      {"left_forearm", "left_hand", filters(aligned(), hand_area, end_overlap, hand_axial)},
      {"trunk", "right_upper_arm", filters(right_of_trunk, upper_arm_area, upper_arm_overlap, limb_axial)},
      {"right_upper_arm", "right_forearm", filters(aligned(), forearm_area, narrow_overlap, limb_axial)},
      {"right_forearm", "right_hand", filters(aligned(), hand_area, end_overlap, hand_axial)},
      {"trunk", "left_thigh", filters(left_thigh_angle, thigh_area, thigh_overlap, thigh_axial)},
      {"left_thigh", "left_calf", filters(aligned(), calf_area, narrow_overlap, calf_axial)},
      {"left_calf", "left_foot", filters(aligned(), foot_area, end_overlap, foot_axial)},
      {"trunk", "right_thigh", filters(right_thigh_angle, thigh_area, thigh_overlap, thigh_axial)},
      {"right_thigh", "right_calf", filters(aligned(), calf_area, narrow_overlap, calf_axial)},
      {"right_calf", "right_foot", filters(aligned(), foot_area, end_overlap, foot_axial)},
  };

  SeedRule trunk;
  trunk.part = "trunk";
  trunk.min_smaller_overlaps = 5;
  trunk.largest_among_overlaps = true;
  SeedRule head;
  head.part = "head";
  head.overlap_count = 1;
  head.neighbor_larger = true;
  head.neighbor_overlaps_seed = "trunk";
  m.seeds = {trunk, head};
  return m;
}

// --- scene analysis ---------------------------------------------------------

inline void validate_scene(const Scene& scene) {
  std::set<std::string> ids;
  for (const auto& r : scene) {
    if (!(r.width > 0.0 && r.height > 0.0)) throw SemanticError("rectangle '" + r.id + "' must have positive size");
    if (!ids.insert(r.id).second) throw SemanticError("duplicate rectangle id '" + r.id + "'");
  }
}

struct PartHypothesis {
  std::size_t rect = 0;  // index into the scene
  std::size_t part = 0;  // index into the model's parts

  friend auto operator<=>(const PartHypothesis&, const PartHypothesis&) = default;
};

inline LiteralId node_name(const Scene& scene, const PuppetModel& model, const PartHypothesis& h) {
  return LiteralId(scene[h.rect].id + ":" + model.parts[h.part]);
}

namespace detail {

inline std::vector<std::vector<std::size_t>> overlap_lists(const Scene& scene) {
  std::vector<std::vector<std::size_t>> out(scene.size());
  for (std::size_t i = 0; i < scene.size(); ++i)
    for (std::size_t j = i + 1; j < scene.size(); ++j)
      if (geometry::overlaps(scene[i], scene[j])) {
        out[i].push_back(j);
        out[j].push_back(i);
      }
  return out;
}

}  // namespace detail

// Seeds ordered by rectangle, then by part.
inline std::vector<PartHypothesis> find_seeds(const Scene& scene, const PuppetModel& model) {
  auto neighbours = detail::overlap_lists(scene);
  std::map<std::size_t, std::vector<std::size_t>> accepted;  // part -> rects

  auto passes_local = [&](const SeedRule& rule, std::size_t r) {
    const auto& nb = neighbours[r];
    double area = scene[r].area();
    if (rule.min_smaller_overlaps) {
      auto smaller = std::count_if(nb.begin(), nb.end(), [&](auto n) { return scene[n].area() < area; });
      if (smaller < *rule.min_smaller_overlaps) return false;
    }
    if (rule.largest_among_overlaps &&
        std::any_of(nb.begin(), nb.end(), [&](auto n) { return scene[n].area() >= area; }))
      return false;
    if (rule.overlap_count && static_cast<int>(nb.size()) != *rule.overlap_count) return false;
    if (rule.neighbor_larger && std::any_of(nb.begin(), nb.end(), [&](auto n) { return scene[n].area() <= area; }))
      return false;
    return true;
  };

  auto passes_anchor = [&](const SeedRule& rule, std::size_t r) {
    if (!rule.neighbor_overlaps_seed) return true;
    auto anchors = accepted[model.require_part(*rule.neighbor_overlaps_seed)];
    for (auto n : neighbours[r])
      for (auto anchor : anchors) {
        if (n == anchor || !geometry::overlaps(scene[n], scene[anchor])) continue;
        const Rectangle& a = scene[anchor];
        double along = geometry::dot(scene[n].center - a.center, a.axis());
        if (along >= rule.neighbor_end_fraction * a.width / 2) return true;
      }
    return false;
  };

  // Rules anchored on another seed part run after the rules they depend on.
  std::vector<const SeedRule*> ordered;
  for (const auto& s : model.seeds)
    if (!s.neighbor_overlaps_seed) ordered.push_back(&s);
  for (const auto& s : model.seeds)
    if (s.neighbor_overlaps_seed) ordered.push_back(&s);

  for (const SeedRule* rule : ordered) {
    auto part = model.require_part(rule->part);
    for (std::size_t r = 0; r < scene.size(); ++r)
      if (passes_local(*rule, r) && passes_anchor(*rule, r)) accepted[part].push_back(r);
  }
  std::vector<PartHypothesis> seeds;
  for (const auto& [part, rects] : accepted)
    for (auto r : rects) seeds.push_back({r, part});
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  return seeds;
}

// One weighted assumption created during growth.
struct AssumptionRecord {
  AssumptionId id{};
  double weight = 1.0;
  std::vector<Band> bands;           // empty for seeds
  std::size_t source = 0;             // hypothesis index; == target for seeds
  std::size_t target = 0;
};

struct Analysis {
  Scene scene;
  PuppetModel model;
  Engine engine;
  MassAssignment masses;
  std::vector<PartHypothesis> hypotheses;  // creation order
  std::vector<Engine::NodeIndex> nodes;    // parallel to hypotheses
  std::vector<AssumptionRecord> assumptions;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // hypothesis graph, undirected
  std::vector<std::pair<std::size_t, std::size_t>> exclusions;
  std::vector<std::size_t> seeds;  // hypothesis indices

  LiteralId name(std::size_t h) const { return node_name(scene, model, hypotheses[h]); }
};

inline Analysis build_clauses(Scene scene, PuppetModel model) {
  validate_scene(scene);
  model.validate();
  Analysis an;
  an.scene = std::move(scene);
  an.model = std::move(model);
  const Scene& sc = an.scene;
  const PuppetModel& md = an.model;
  auto neighbours = detail::overlap_lists(sc);

  std::map<PartHypothesis, std::size_t> index;
  std::set<std::pair<std::size_t, std::size_t>> linked;
  auto hypothesis = [&](PartHypothesis h) {
    auto [it, inserted] = index.emplace(h, an.hypotheses.size());
    if (inserted) an.hypotheses.push_back(h);
    return std::pair{it->second, inserted};
  };
  auto new_assumption = [&](double weight) {
    auto id = an.engine.add_assumption("A" + std::to_string(an.engine.assumption_count() + 1));
    an.masses.set(id, weight);
    return id;
  };

  for (const auto& s : find_seeds(sc, md)) {
    auto [h, inserted] = hypothesis(s);
    if (!inserted) continue;
    auto id = new_assumption(md.weights.seed_weight);
    an.engine.add_rule({LiteralId(an.engine.assumption_name(id))}, an.name(h));
    an.assumptions.push_back({id, md.weights.seed_weight, {}, h, h});
    an.seeds.push_back(h);
  }

  // Sweep the attachments in model order until no new link appears; each
  // sweep extends every hypothesis on either end of the attachment.
  auto grow = [&](std::size_t from, const Attachment& a, bool from_parent) {
    bool changed = false;
    const PartHypothesis h = an.hypotheses[from];
    auto other = md.require_part(from_parent ? a.child : a.parent);
    for (auto r : neighbours[h.rect]) {
      const Rectangle& parent = from_parent ? sc[h.rect] : sc[r];
      const Rectangle& child = from_parent ? sc[r] : sc[h.rect];
      std::vector<Band> bands;
      for (const auto& f : a.filters) bands.push_back(eval_filter(f, parent, child));
      if (std::find(bands.begin(), bands.end(), Band::fail) != bands.end()) continue;
      auto to = hypothesis({r, other}).first;
      if (!linked.insert(std::minmax(from, to)).second) continue;
      double weight = hypothesis_weight(bands, md.weights);
      auto id = new_assumption(weight);
      an.engine.add_rule({LiteralId(an.engine.assumption_name(id)), an.name(from)}, an.name(to));
      an.assumptions.push_back({id, weight, std::move(bands), from, to});
      an.edges.emplace_back(from, to);
      changed = true;
    }
    return changed;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& a : md.attachments) {
      auto p = md.require_part(a.parent), c = md.require_part(a.child);
      for (std::size_t h = 0; h < an.hypotheses.size(); ++h) {
        if (an.hypotheses[h].part == p) changed |= grow(h, a, true);
        if (an.hypotheses[h].part == c) changed |= grow(h, a, false);
      }
    }
  }

  for (std::size_t h = 0; h < an.hypotheses.size(); ++h) an.nodes.push_back(an.engine.node_of(an.name(h)));

  for (std::size_t a = 0; a < an.hypotheses.size(); ++a)
    for (std::size_t b = a + 1; b < an.hypotheses.size(); ++b) {
      const auto& x = an.hypotheses[a];
      const auto& y = an.hypotheses[b];
      if (x.rect == y.rect || x.part == y.part) {
        an.engine.record_contradiction(an.name(a), an.name(b));
        an.exclusions.emplace_back(a, b);
      }
    }
  return an;
}

struct Interpretation {
  std::vector<PartHypothesis> hypotheses;  // sorted by part index
  Label support;
  double belief = 0.0;
  bool complete = false;
  bool conditioned = true;  // false when the nogoods carry total conflict
};

namespace detail {

class InterpretationSearch {
 public:
  explicit InterpretationSearch(const Analysis& an) : an_(an), n_(an.hypotheses.size()) {
    adjacency_.resize(n_);
    for (auto [a, b] : an.edges) {
      adjacency_[a].push_back(b);
      adjacency_[b].push_back(a);
    }
    for (auto& adj : adjacency_) {
      std::sort(adj.begin(), adj.end());
      adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
    std::set<AssumptionId> in_nogoods;
    for (const auto& e : an.engine.nogoods())
      for (auto a : e) in_nogoods.insert(a);
    free_.assign(n_, true);
    for (std::size_t h = 0; h < n_; ++h) {
      for (std::size_t k = 0; k < n_; ++k)
        if (k != h && conflicts(h, k)) free_[h] = false;
      for (const auto& e : label(h))
        for (auto a : e)
          if (in_nogoods.contains(a)) free_[h] = false;
    }
  }

  std::vector<std::vector<std::size_t>> run() {
    for (std::size_t start = 0; start < n_ && !stopped(); ++start) {
      if (label(start).empty()) continue;
      State s;
      s.members = {start};
      s.support = label(start);
      s.excluded.assign(n_, false);
      for (std::size_t u = 0; u < start; ++u) s.excluded[u] = true;
      extend(std::move(s));
    }
    return std::move(found_);
  }

 private:
  struct State {
    std::vector<std::size_t> members;
    Label support;
    std::vector<bool> excluded;
  };

  const Label& label(std::size_t h) const { return an_.engine.label_of(an_.nodes[h]); }

  bool conflicts(std::size_t a, std::size_t b) const {
    const auto& x = an_.hypotheses[a];
    const auto& y = an_.hypotheses[b];
    return x.rect == y.rect || x.part == y.part;
  }

  bool stopped() const {
    return found_.size() >= an_.model.interpretation_limit || visited_ >= an_.model.search_node_limit;
  }

  // Support after adding h, or empty when h cannot join.
  std::optional<Label> join(const State& s, std::size_t h) const {
    if (std::find(s.members.begin(), s.members.end(), h) != s.members.end()) return std::nullopt;
    for (auto m : s.members)
      if (conflicts(m, h)) return std::nullopt;
    bool adjacent = std::any_of(s.members.begin(), s.members.end(), [&](auto m) {
      return std::binary_search(adjacency_[m].begin(), adjacency_[m].end(), h);
    });
    if (!adjacent) return std::nullopt;
    const Label parts[] = {s.support, label(h)};
    Label joined = combine_antecedent_labels(parts, Environment{}, an_.engine.nogoods());
    if (joined.empty()) return std::nullopt;
    return joined;
  }

  void extend(State s) {
    if (stopped()) return;
    ++visited_;
    for (std::size_t c = 0; c < n_; ++c) {
      if (s.excluded[c]) continue;
      auto joined = join(s, c);
      if (!joined) continue;
      State with = s;
      with.members.push_back(c);
      with.support = std::move(*joined);
      extend(std::move(with));
      if (free_[c]) return;  // every maximal set reachable from s contains c
      s.excluded[c] = true;
      extend(std::move(s));
      return;
    }
    // No candidate left: keep s only if nothing at all can be added.
    for (std::size_t c = 0; c < n_; ++c)
      if (join(s, c)) return;
    auto members = s.members;
    std::sort(members.begin(), members.end());
    found_.push_back(std::move(members));
  }

  const Analysis& an_;
  std::size_t n_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<bool> free_;
  std::vector<std::vector<std::size_t>> found_;
  std::size_t visited_ = 0;
};

}  // namespace detail

// Ranked best first: belief, then number of parts, then assignment order.
// Beliefs are conditioned on the nogoods; if those carry total conflict the
// conditioned value is undefined and the unconditioned belief is used.
inline std::vector<Interpretation> interpret(const Analysis& an) {
  std::vector<Interpretation> out;
  const Label& nogoods = an.engine.nogoods();
  const bool total_conflict = 1.0 - belief_of_label(nogoods, an.masses) <= kConflictTolerance;
  for (const auto& members : detail::InterpretationSearch(an).run()) {
    Interpretation it;
    std::vector<Label> labels;
    for (auto h : members) {
      it.hypotheses.push_back(an.hypotheses[h]);
      labels.push_back(an.engine.label_of(an.nodes[h]));
    }
    std::sort(it.hypotheses.begin(), it.hypotheses.end(),
              [](const auto& a, const auto& b) { return std::pair{a.part, a.rect} < std::pair{b.part, b.rect}; });
    it.support = combine_antecedent_labels(labels, Environment{}, nogoods);
    it.conditioned = !total_conflict;
    it.belief = total_conflict ? belief_of_label(it.support, an.masses)
                               : conditioned_belief(it.support, nogoods, an.masses);
    it.complete = it.hypotheses.size() == an.model.parts.size();
    out.push_back(std::move(it));
  }
  std::stable_sort(out.begin(), out.end(), [](const Interpretation& a, const Interpretation& b) {
    if (a.belief != b.belief) return a.belief > b.belief;
    if (a.hypotheses.size() != b.hypotheses.size()) return a.hypotheses.size() > b.hypotheses.size();
    auto key = [](const Interpretation& i) {
      std::vector<std::pair<std::size_t, std::size_t>> k;
      for (const auto& h : i.hypotheses) k.emplace_back(h.part, h.rect);
      return k;
    };
    return key(a) < key(b);
  });
  return out;
}

inline std::vector<Interpretation> interpret(Scene scene, PuppetModel model) {
  return interpret(build_clauses(std::move(scene), std::move(model)));
}

}  // namespace dsatms::recognition
