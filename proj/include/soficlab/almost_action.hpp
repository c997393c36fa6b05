// Copyright 2026 The soficlab Authors
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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "soficlab/errors.hpp"
#include "soficlab/graph.hpp"
#include "soficlab/group.hpp"
#include "soficlab/permutation.hpp"

namespace soficlab {

inline constexpr std::size_t kDefaultFiniteSetCap = 200;

// How sigma_elem turns a group element into a permutation. Recorded with
// every action so measurements can be reproduced elsewhere.
inline constexpr const char* kNormalFormRule =
    "shortlex-geodesic; g = s1...sk acts as sigma(s1)o...o sigma(sk)";

// One permutation per generator of `model` on {0, ..., n-1}. sigma(s^-1) is
// always sigma(s)^-1.
class AlmostAction {
 public:
  AlmostAction(GroupModel model, std::vector<Permutation> generators)
      : model_(std::move(model)), sigma_(std::move(generators)) {
    if (sigma_.size() != model_.rank()) {
      throw invalid_input("almost action needs one permutation per generator");
    }
    for (const auto& p : sigma_) {
      if (p.size() != sigma_.front().size()) throw invalid_input("permutations of different sizes");
    }
    inverse_.reserve(sigma_.size());
    for (const auto& p : sigma_) inverse_.push_back(p.inverse());
  }

  std::size_t size() const noexcept { return sigma_.empty() ? 0 : sigma_.front().size(); }
  const GroupModel& model() const noexcept { return model_; }
  const std::vector<Permutation>& generators() const noexcept { return sigma_; }
  const Permutation& letter(Letter l) const {
    if (l.symbol >= sigma_.size()) throw invalid_input("unknown generator symbol " + std::to_string(l.symbol));
    return l.inverse ? inverse_[l.symbol] : sigma_[l.symbol];
  }
  std::string normal_form_rule() const { return kNormalFormRule; }

  friend bool operator==(const AlmostAction& a, const AlmostAction& b) {
    return a.model_.generators() == b.model_.generators() && a.model_.kind_name() == b.model_.kind_name() &&
           a.sigma_ == b.sigma_;
  }

 private:
  GroupModel model_;
  std::vector<Permutation> sigma_;
  std::vector<Permutation> inverse_;
};

// The free group F_S acting through the letters of w: s1 is applied first,
// so sigma_of(w w') = sigma_of(w') o sigma_of(w).
inline Permutation sigma_of(const AlmostAction& action, const Word& w) {
  std::vector<Vertex> img(action.size());
  for (std::size_t x = 0; x < img.size(); ++x) img[x] = static_cast<Vertex>(x);
  for (const auto& l : w) {
    const auto& p = action.letter(l);
    for (auto& y : img) y = p(y);
  }
  return Permutation(std::move(img));
}

// sigma(g) for g with normal form s1...sk: sigma(s1) o ... o sigma(sk), i.e.
// the letters are applied right to left, as in the product g.x.
inline Permutation sigma_elem(const AlmostAction& action, const Element& g) {
  const Word nf = action.model().normal_form(g);
  return sigma_of(action, Word(nf.rbegin(), nf.rend()));
}

struct GoodSetReport {
  std::vector<Vertex> good;       // Y, ascending
  std::size_t carrier_size = 0;   // |X|
  std::vector<Element> finite_set;  // F
  double defect = 0.0;            // 1 - |Y|/|X|
};

namespace detail {

class SigmaCache {
 public:
  explicit SigmaCache(const AlmostAction& action) : action_(action) {}

  const Permutation& operator()(const Element& g) {
    auto it = cache_.find(g);
    if (it == cache_.end()) it = cache_.emplace(g, sigma_elem(action_, g)).first;
    return it->second;
  }

 private:
  const AlmostAction& action_;
  std::unordered_map<Element, Permutation, ElementHash> cache_;
};

inline void check_finite_set(std::span<const Element> F, std::size_t cap) {
  if (F.empty()) throw invalid_input("finite set F must be nonempty");
  if (F.size() > cap) throw resource_error("finite set F too large", cap);
}

}  // namespace detail

// Points where the action is multiplicative and free on F:
//   sigma(g)sigma(h)(y) = sigma(gh)(y) for g, h in F, and
//   sigma(g)(y) != y for g in F \ {e}.
inline GoodSetReport good_set(const AlmostAction& action, std::span<const Element> F,
                              std::size_t cap = kDefaultFiniteSetCap) {
  detail::check_finite_set(F, cap);
  const auto& model = action.model();
  const std::size_t n = action.size();
  detail::SigmaCache sigma(action);
  std::vector<bool> bad(n, false);

  for (const auto& g : F) {
    if (model.is_identity(g)) continue;
    const auto& pg = sigma(g);
    for (Vertex y = 0; y < n; ++y) {
      if (pg(y) == y) bad[y] = true;
    }
  }
  for (const auto& g : F) {
    for (const auto& h : F) {
      // unordered_map nodes are stable, so these references survive inserts
      const auto& pg = sigma(g);
      const auto& ph = sigma(h);
      const auto& pgh = sigma(model.multiply(g, h));
      for (Vertex y = 0; y < n; ++y) {
        if (pg(ph(y)) != pgh(y)) bad[y] = true;
      }
    }
  }

  GoodSetReport report;
  report.carrier_size = n;
  report.finite_set.assign(F.begin(), F.end());
  for (Vertex y = 0; y < n; ++y) {
    if (!bad[y]) report.good.push_back(y);
  }
  report.defect = n == 0 ? 0.0 : 1.0 - static_cast<double>(report.good.size()) / static_cast<double>(n);
  return report;
}

// Edge (x, sigma(s)x) labelled s for every generator s and point x.
inline LabeledGraph build_labeled_graph(const AlmostAction& action) {
  std::vector<LabeledEdge> edges;
  edges.reserve(action.size() * action.model().rank());
  for (std::uint32_t s = 0; s < action.model().rank(); ++s) {
    const auto& p = action.generators()[s];
    for (Vertex x = 0; x < action.size(); ++x) edges.push_back({x, p(x), s});
  }
  std::vector<EdgeLabel> labels;
  for (const auto& name : action.model().generators().names()) labels.push_back({name, false});
  return LabeledGraph(action.size(), std::move(labels), std::move(edges));
}

// Restriction of `action` to `vertices` (ascending): images leaving the set
// are dropped and the partial bijections completed in ascending order.
inline AlmostAction restrict_action(const AlmostAction& action, std::span<const Vertex> vertices) {
  std::vector<std::uint32_t> local(action.size(), UINT32_MAX);
  for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<std::uint32_t>(i);
  std::vector<Permutation> gens;
  for (const auto& p : action.generators()) {
    std::vector<std::optional<Vertex>> partial(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const auto y = local[p(vertices[i])];
      if (y != UINT32_MAX) partial[i] = y;
    }
    gens.push_back(complete_ascending(partial));
  }
  return AlmostAction(action.model(), std::move(gens));
}

// Picks a connected component C of the labelled graph with
// |Y n C| >= (1 - eps)|C| (largest good-set density, then largest size, then
// smallest vertex) and returns the action restricted to C.
inline AlmostAction repair_connected(const AlmostAction& action, std::span<const Element> F, double eps,
                                     std::size_t cap = kDefaultFiniteSetCap) {
  const auto report = good_set(action, F, cap);
  const auto graph = build_labeled_graph(action);
  const auto comps = connected_components(graph);

  std::vector<std::size_t> size(comps.count, 0), good(comps.count, 0);
  for (Vertex v = 0; v < action.size(); ++v) ++size[comps.id[v]];
  for (Vertex y : report.good) ++good[comps.id[y]];

  std::optional<std::size_t> best;
  for (std::size_t c = 0; c < comps.count; ++c) {
    const double needed = (1.0 - eps) * static_cast<double>(size[c]);
    if (static_cast<double>(good[c]) + 1e-9 < needed) continue;
    if (!best) {
      best = c;
      continue;
    }
    const auto lhs = static_cast<unsigned __int128>(good[c]) * size[*best];
    const auto rhs = static_cast<unsigned __int128>(good[*best]) * size[c];
    if (lhs > rhs || (lhs == rhs && size[c] > size[*best])) best = c;
  }
  if (!best) throw invalid_input("no connected component meets the good-set density bound");
  if (comps.count == 1) return action;

  std::vector<Vertex> members;
  for (Vertex v = 0; v < action.size(); ++v) {
    if (comps.id[v] == *best) members.push_back(v);
  }
  return restrict_action(action, members);
}

// Z_F: intersection of sigma(g)(Y_F) over g in F; ascending.
inline std::vector<Vertex> finite_core(const AlmostAction& action, std::span<const Element> F,
                                       std::size_t cap = kDefaultFiniteSetCap) {
  const auto report = good_set(action, F, cap);
  std::vector<Element> distinct(F.begin(), F.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<std::size_t> hits(action.size(), 0);
  detail::SigmaCache sigma(action);
  for (const auto& g : distinct) {
    const auto& pg = sigma(g);
    for (Vertex y : report.good) ++hits[pg(y)];
  }
  std::vector<Vertex> core;
  for (Vertex x = 0; x < action.size(); ++x) {
    if (hits[x] == distinct.size()) core.push_back(x);
  }
  return core;
}

}  // namespace soficlab
