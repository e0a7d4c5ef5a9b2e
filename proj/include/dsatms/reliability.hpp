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

// Probability that a monotone DNF over independent Boolean variables is true.
// This is the classical network-reliability problem on path sets: each term
// is one path, each variable one component that works with probability p.
//
// Three evaluators are provided. prob_enum sums satisfying assignments and
// is the oracle. prob_inclusion_exclusion expands over term subsets and is
// practical for a handful of terms. to_disjoint rewrites the DNF into a sum
// of disjoint products (Abraham's method), after which the probability is a
// plain sum; this is the default used by the belief layer.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dsatms/environment.hpp"
#include "dsatms/error.hpp"

namespace dsatms::reliability {

// Variable probabilities, indexed by assumption index.
using Probabilities = std::span<const double>;

inline constexpr std::size_t kMaxEnumVariables = 24;
inline constexpr std::size_t kDefaultMaxInclusionExclusionTerms = 20;

struct Dnf {
  std::vector<Environment> terms;

  Dnf() = default;
  Dnf(std::initializer_list<Environment> t) : terms(t) {}
  explicit Dnf(std::vector<Environment> t) : terms(std::move(t)) {}
  explicit Dnf(const Label& label) : terms(label.begin(), label.end()) {}

  // Sorted distinct variables mentioned by any term.
  std::vector<AssumptionId> universe() const {
    std::vector<AssumptionId> vars;
    for (const auto& t : terms) vars.insert(vars.end(), t.begin(), t.end());
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
  }

  Label minimized() const { return Label(terms); }
};

// Conjunction of variables that must be true and variables that must be false.
struct SignedTerm {
  Environment positive;
  Environment negative;

  friend bool operator==(const SignedTerm&, const SignedTerm&) = default;
};

struct DisjointDnf {
  std::vector<SignedTerm> terms;
};

namespace detail {

inline double prob(Probabilities p, AssumptionId a) {
  auto i = index_of(a);
  if (i >= p.size()) throw SemanticError("no probability for variable " + std::to_string(i));
  return p[i];
}

inline double product(const Environment& e, Probabilities p) {
  double r = 1.0;
  for (auto a : e) r *= prob(p, a);
  return r;
}

}  // namespace detail

inline double prob_enum(const Dnf& d, Probabilities p) {
  auto vars = d.universe();
  if (vars.size() > kMaxEnumVariables)
    throw LimitError("enumeration over " + std::to_string(vars.size()) + " variables exceeds limit of " +
                     std::to_string(kMaxEnumVariables));
  if (d.terms.empty()) return 0.0;

  std::vector<std::uint32_t> term_masks;
  term_masks.reserve(d.terms.size());
  for (const auto& t : d.terms) {
    std::uint32_t m = 0;
    for (auto a : t) m |= 1u << (std::lower_bound(vars.begin(), vars.end(), a) - vars.begin());
    term_masks.push_back(m);
  }
  std::vector<double> pv;
  for (auto a : vars) pv.push_back(detail::prob(p, a));

  const std::uint32_t worlds = 1u << vars.size();
  double total = 0.0;
  for (std::uint32_t w = 0; w < worlds; ++w) {
    bool sat = false;
    for (auto m : term_masks)
      if ((w & m) == m) {
        sat = true;
        break;
      }
    if (!sat) continue;
    double weight = 1.0;
    for (std::size_t i = 0; i < vars.size(); ++i) weight *= (w >> i & 1u) ? pv[i] : 1.0 - pv[i];
    total += weight;
  }
  return total;
}

inline double prob_inclusion_exclusion(const Dnf& d, Probabilities p,
                                       std::size_t max_terms = kDefaultMaxInclusionExclusionTerms) {
  const Label terms = d.minimized();
  if (terms.size() > max_terms)
    throw LimitError("inclusion-exclusion over " + std::to_string(terms.size()) + " terms exceeds limit of " +
                     std::to_string(max_terms) + "; use the disjoint-products evaluator");
  auto envs = terms.environments();
  double total = 0.0;
  // Depth-first over nonempty subsets, carrying the union of chosen terms.
  auto visit = [&](auto&& self, std::size_t next, const Environment& acc, int chosen) -> void {
    for (std::size_t i = next; i < envs.size(); ++i) {
      Environment u = env_union(acc, envs[i]);
      double term = detail::product(u, p);
      total += (chosen % 2 == 0) ? term : -term;
      self(self, i + 1, u, chosen + 1);
    }
  };
  visit(visit, 0, Environment{}, 0);
  return total;
}

inline DisjointDnf to_disjoint(const Dnf& d) {
  const Label ordered = d.minimized();
  auto terms = ordered.environments();
  DisjointDnf out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    std::vector<SignedTerm> products{SignedTerm{terms[i], {}}};
    for (std::size_t j = 0; j < i && !products.empty(); ++j) {
      const Environment& earlier = terms[j];
      std::vector<SignedTerm> next;
      for (auto& prod : products) {
        bool conflicts = std::any_of(earlier.begin(), earlier.end(),
                                     [&](AssumptionId a) { return prod.negative.contains(a); });
        if (conflicts) {
          next.push_back(std::move(prod));
          continue;
        }
        std::vector<AssumptionId> missing;
        for (auto a : earlier)
          if (!prod.positive.contains(a)) missing.push_back(a);
        if (missing.empty()) continue;  // covered by the earlier term
        // prod & !(m1 & ... & mk) == prod&!m1 | prod&m1&!m2 | ... , pairwise disjoint.
        std::vector<AssumptionId> pos(prod.positive.begin(), prod.positive.end());
        for (auto m : missing) {
          std::vector<AssumptionId> neg(prod.negative.begin(), prod.negative.end());
          neg.push_back(m);
          next.push_back(SignedTerm{Environment(pos), Environment(std::move(neg))});
          pos.push_back(m);
        }
      }
      products = std::move(next);
    }
    out.terms.insert(out.terms.end(), std::make_move_iterator(products.begin()),
                     std::make_move_iterator(products.end()));
  }
  return out;
}

inline double evaluate(const SignedTerm& t, Probabilities p) {
  double r = detail::product(t.positive, p);
  for (auto a : t.negative) r *= 1.0 - detail::prob(p, a);
  return r;
}

inline double evaluate(const DisjointDnf& d, Probabilities p) {
  double total = 0.0;
  for (const auto& t : d.terms) total += evaluate(t, p);
  return total;
}

// Two signed terms are disjoint when one requires a variable the other forbids.
inline bool disjoint(const SignedTerm& a, const SignedTerm& b) {
  auto clash = [](const Environment& pos, const Environment& neg) {
    return std::any_of(pos.begin(), pos.end(), [&](AssumptionId x) { return neg.contains(x); });
  };
  return clash(a.positive, b.negative) || clash(b.positive, a.negative);
}

inline bool pairwise_disjoint(const DisjointDnf& d) {
  for (std::size_t i = 0; i < d.terms.size(); ++i)
    for (std::size_t j = i + 1; j < d.terms.size(); ++j)
      if (!disjoint(d.terms[i], d.terms[j])) return false;
  return true;
}

inline double prob_sdp(const Dnf& d, Probabilities p) { return evaluate(to_disjoint(d), p); }

}  // namespace dsatms::reliability
