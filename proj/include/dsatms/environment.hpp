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

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace dsatms {

// Index of an assumption in declaration order.
enum class AssumptionId : std::uint32_t {};

constexpr std::uint32_t index_of(AssumptionId a) { return static_cast<std::uint32_t>(a); }

// A conjunction of assumptions, kept sorted and duplicate-free.
class Environment {
 public:
  Environment() = default;
  Environment(std::initializer_list<AssumptionId> ids) : members_(ids) { canonicalize(); }
  explicit Environment(std::vector<AssumptionId> ids) : members_(std::move(ids)) { canonicalize(); }

  std::span<const AssumptionId> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  bool contains(AssumptionId a) const { return std::binary_search(members_.begin(), members_.end(), a); }

  bool is_subset_of(const Environment& other) const {
    return size() <= other.size() &&
           std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
  }

  friend bool operator==(const Environment&, const Environment&) = default;

  // Size first, then lexicographic. This is the canonical order inside labels.
  friend std::strong_ordering operator<=>(const Environment& a, const Environment& b) {
    if (a.size() != b.size()) return a.size() <=> b.size();
    return a.members_ <=> b.members_;
  }

  friend Environment env_union(const Environment& a, const Environment& b) {
    Environment out;
    out.members_.reserve(a.size() + b.size());
    std::set_union(a.members_.begin(), a.members_.end(), b.members_.begin(), b.members_.end(),
                   std::back_inserter(out.members_));
    return out;
  }

 private:
  void canonicalize() {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }

  std::vector<AssumptionId> members_;
};

// A subsumption-free set of environments in canonical order. Used both for
// node labels and for the nogood database.
class Label {
 public:
  Label() = default;
  Label(std::initializer_list<Environment> envs) : Label(std::vector<Environment>(envs)) {}
  explicit Label(std::vector<Environment> envs);

  static Label premise() { return Label{Environment{}}; }

  std::span<const Environment> environments() const { return envs_; }
  std::size_t size() const { return envs_.size(); }
  bool empty() const { return envs_.empty(); }
  auto begin() const { return envs_.begin(); }
  auto end() const { return envs_.end(); }

  // True when some environment of this label is a subset of e.
  bool subsumes(const Environment& e) const {
    return std::any_of(envs_.begin(), envs_.end(), [&](const Environment& x) { return x.is_subset_of(e); });
  }

  friend bool operator==(const Label&, const Label&) = default;

 private:
  std::vector<Environment> envs_;
};

// Removes duplicates and proper supersets; result is in canonical order.
inline Label minimize(std::vector<Environment> envs) { return Label(std::move(envs)); }

inline Label::Label(std::vector<Environment> envs) {
  std::sort(envs.begin(), envs.end());
  envs.erase(std::unique(envs.begin(), envs.end()), envs.end());
  // Sorted by size, so any subset of an environment precedes it.
  for (auto& e : envs) {
    bool subsumed = std::any_of(envs_.begin(), envs_.end(), [&](const Environment& k) { return k.is_subset_of(e); });
    if (!subsumed) envs_.push_back(std::move(e));
  }
}

// Environments of `label` that are not supersets of any nogood.
inline Label filter_consistent(const Label& label, const Label& nogoods) {
  if (nogoods.empty()) return label;
  std::vector<Environment> kept;
  for (const auto& e : label)
    if (!nogoods.subsumes(e)) kept.push_back(e);
  return Label(std::move(kept));
}

// Conjunctive support update: every way of picking one environment per
// antecedent label, unioned together with `direct`, then minimized and
// filtered against `nogoods`. An empty label anywhere in the list yields the
// empty label.
inline Label combine_antecedent_labels(std::span<const Label> labels, const Environment& direct,
                                       const Label& nogoods = {}) {
  if (nogoods.subsumes(direct)) return {};
  std::vector<Environment> partial{direct};
  for (const auto& label : labels) {
    if (label.empty()) return {};
    std::vector<Environment> next;
    next.reserve(partial.size() * label.size());
    for (const auto& p : partial)
      for (const auto& e : label) {
        Environment u = env_union(p, e);
        if (!nogoods.subsumes(u)) next.push_back(std::move(u));
      }
    // Minimizing between steps is safe: subsumption is preserved by union.
    Label reduced(std::move(next));
    partial.assign(reduced.begin(), reduced.end());
    if (partial.empty()) return {};
  }
  return Label(std::move(partial));
}

// Union of two environment sets viewed as one label.
inline Label label_union(const Label& a, const Label& b) {
  std::vector<Environment> all(a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  return Label(std::move(all));
}

}  // namespace dsatms
