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
#include <type_traits>
#include <vector>

#include "soficlab/almost_action.hpp"
#include "soficlab/errors.hpp"
#include "soficlab/family.hpp"
#include "soficlab/group.hpp"
#include "soficlab/permutation.hpp"
#include "soficlab/random.hpp"

namespace soficlab {

namespace detail {

inline void check_increasing(std::span<const std::size_t> sizes, const char* what) {
  if (sizes.empty()) throw invalid_input(std::string(what) + ": no stage sizes given");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw invalid_input(std::string(what) + ": stage sizes must increase");
  }
}

inline std::size_t checked_power(std::size_t base, int exp, std::size_t cap) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > cap / base) throw resource_error("stage carrier too large", cap);
    r *= base;
  }
  return r;
}

}  // namespace detail

inline constexpr std::size_t kDefaultVertexCap = 10'000'000;

// Stage k: (Z/n_k)^d with generator j translating coordinate j. Point
// x has index sum_j x_j n^j.
inline ApproximationFamily quotient_approximation(const GroupModel& model, std::span<const std::size_t> moduli,
                                                  std::size_t cap = kDefaultVertexCap) {
  detail::check_increasing(moduli, "quotient_approximation");
  int rank = 0;
  if (const auto* fa = std::get_if<kinds::FreeAbelian>(&model.kind())) {
    rank = fa->rank;
  } else if (const auto* cp = std::get_if<kinds::CyclicPower>(&model.kind())) {
    rank = cp->rank;
    for (auto n : moduli) {
      if (cp->modulus % static_cast<std::int64_t>(n) != 0) {
        throw invalid_input("quotient modulus must divide the cyclic modulus");
      }
    }
  } else {
    throw invalid_input("quotient_approximation supports free_abelian and cyclic_power models");
  }
  ApproximationFamily family;
  family.model = model;
  family.construction = "quotient";
  for (auto n : moduli) {
    if (n < 3) throw invalid_input("quotient modulus must be >= 3");
    const std::size_t size = detail::checked_power(n, rank, cap);
    std::vector<Permutation> gens;
    std::size_t stride = 1;
    for (int j = 0; j < rank; ++j) {
      std::vector<Vertex> img(size);
      for (std::size_t x = 0; x < size; ++x) {
        const std::size_t coord = (x / stride) % n;
        img[x] = static_cast<Vertex>(coord + 1 == n ? x - coord * stride : x + stride);
      }
      gens.emplace_back(std::move(img));
      stride *= n;
    }
    family.stages.push_back(Stage::from_action(AlmostAction(model, std::move(gens))));
    family.stages.back().metadata["modulus"] = static_cast<double>(n);
  }
  return family;
}

// Stage k: the box [0, n_k)^d with translations where they stay inside,
// completed to permutations by the ascending-index rule.
inline ApproximationFamily folner_approximation(const GroupModel& model, std::span<const std::size_t> box_sizes,
                                                std::size_t cap = kDefaultVertexCap) {
  detail::check_increasing(box_sizes, "folner_approximation");
  const auto* fa = std::get_if<kinds::FreeAbelian>(&model.kind());
  if (!fa) throw invalid_input("folner_approximation requires a free_abelian model");
  ApproximationFamily family;
  family.model = model;
  family.construction = "folner";
  for (auto n : box_sizes) {
    if (n < 3) throw invalid_input("Folner box side must be >= 3");
    const std::size_t size = detail::checked_power(n, fa->rank, cap);
    std::vector<Permutation> gens;
    std::size_t stride = 1;
    for (int j = 0; j < fa->rank; ++j) {
      std::vector<std::optional<Vertex>> partial(size);
      for (std::size_t x = 0; x < size; ++x) {
        if ((x / stride) % n + 1 < n) partial[x] = static_cast<Vertex>(x + stride);
      }
      gens.push_back(complete_ascending(partial));
      stride *= n;
    }
    family.stages.push_back(Stage::from_action(AlmostAction(model, std::move(gens))));
    family.stages.back().metadata["box_side"] = static_cast<double>(n);
  }
  return family;
}

// k independent uniform permutations of {0..n-1}, drawn in generator order
// from one engine seeded with `seed`. Acts for the free group of rank k.
inline AlmostAction random_permutation_approximation(int k, std::size_t n, std::uint64_t seed) {
  if (k < 1) throw invalid_input("random approximation needs k >= 1");
  if (n < 2) throw invalid_input("random approximation needs n >= 2");
  Rng rng(seed);
  std::vector<Permutation> gens;
  for (int s = 0; s < k; ++s) {
    std::vector<Vertex> img(n);
    for (std::size_t x = 0; x < n; ++x) img[x] = static_cast<Vertex>(x);
    shuffle(std::span<Vertex>(img), rng);
    gens.emplace_back(std::move(img));
  }
  return AlmostAction(GroupModel::free_group(k), std::move(gens));
}

// Random stages for the free group, each restricted to its largest
// connected component (repair with F = {e}).
inline ApproximationFamily random_family(int k, std::span<const std::size_t> sizes, std::uint64_t master_seed) {
  detail::check_increasing(sizes, "random_family");
  ApproximationFamily family;
  family.model = GroupModel::free_group(k);
  family.construction = "random";
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const auto seed = stage_seed(master_seed, i);
    auto action = random_permutation_approximation(k, sizes[i], seed);
    const std::vector<Element> trivial{action.model().identity()};
    auto repaired = repair_connected(action, trivial, 0.0);
    family.stages.push_back(Stage::from_action(std::move(repaired), seed));
    family.stages.back().metadata["requested_size"] = static_cast<double>(sizes[i]);
  }
  return family;
}

struct CubicGraph {
  LabeledGraph graph;        // labels: "a" (Hamiltonian cycle), "t" (matching, involution)
  std::size_t girth = 0;
  std::size_t attempts = 0;
};

namespace detail {

// Hamiltonian cycle order[0] -> order[1] -> ... plus a perfect matching.
class CycleMatching {
 public:
  CycleMatching(std::size_t n, Rng& rng) : next_(n), prev_(n), mate_(n) {
    std::vector<Vertex> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<Vertex>(i);
    shuffle(std::span<Vertex>(order), rng);
    for (std::size_t i = 0; i < n; ++i) {
      next_[order[i]] = order[(i + 1) % n];
      prev_[order[(i + 1) % n]] = order[i];
    }
    std::vector<Vertex> pairing(order);
    shuffle(std::span<Vertex>(pairing), rng);
    for (std::size_t i = 0; i + 1 < n; i += 2) {
      mate_[pairing[i]] = pairing[i + 1];
      mate_[pairing[i + 1]] = pairing[i];
    }
  }

  std::size_t size() const { return next_.size(); }
  Vertex mate(Vertex v) const { return mate_[v]; }

  // Shortest cycle through the matching edge {v, mate(v)}; parallel edges
  // count as 2-cycles. Search depth is bounded by `limit`.
  std::size_t cycle_through(Vertex v, std::size_t limit) {
    const Vertex target = mate_[v];
    if (next_[v] == target || prev_[v] == target) return 2;
    if (dist_.size() != size()) dist_.assign(size(), kUnreached);
    std::size_t found = SIZE_MAX;
    queue_.assign(1, v);
    dist_[v] = 0;
    for (std::size_t head = 0; head < queue_.size() && found == SIZE_MAX; ++head) {
      const Vertex x = queue_[head];
      if (static_cast<std::size_t>(dist_[x]) + 2 > limit) break;
      const Vertex nbrs[3] = {next_[x], prev_[x], mate_[x]};
      for (int i = 0; i < 3; ++i) {
        if (x == v && i == 2) continue;  // skip the edge itself
        const Vertex y = nbrs[i];
        if (dist_[y] != kUnreached) continue;
        dist_[y] = dist_[x] + 1;
        if (y == target) {
          found = static_cast<std::size_t>(dist_[y]) + 1;
          break;
        }
        queue_.push_back(y);
      }
    }
    for (Vertex x : queue_) dist_[x] = kUnreached;
    dist_[target] = kUnreached;
    return found;
  }

  // Replaces {u, mate u}, {x, mate x} by {u, x}, {mate u, mate x}.
  void swap_mates(Vertex u, Vertex x) {
    const Vertex mu = mate_[u], mx = mate_[x];
    mate_[u] = x;
    mate_[x] = u;
    mate_[mu] = mx;
    mate_[mx] = mu;
  }

  std::size_t girth(std::size_t limit) {
    std::size_t g = size();
    for (Vertex v = 0; v < size(); ++v) g = std::min(g, cycle_through(v, std::min(limit, g)));
    return g;
  }

  LabeledGraph to_graph() const {
    std::vector<LabeledEdge> edges;
    for (Vertex v = 0; v < size(); ++v) edges.push_back({v, next_[v], 0});
    for (Vertex v = 0; v < size(); ++v) {
      if (v < mate_[v]) edges.push_back({v, mate_[v], 1});
    }
    return LabeledGraph(size(), {{"a", false}, {"t", true}}, std::move(edges));
  }

 private:
  std::vector<Vertex> next_, prev_, mate_;
  std::vector<int> dist_;
  std::vector<Vertex> queue_;
};

}  // namespace detail

// Cubic graph on n vertices (n even, n >= 4): random Hamiltonian cycle plus
// random perfect matching, then matching switches that remove short cycles
// level by level up to `girth_target`. Each of `max_attempts` attempts
// restarts from fresh randomness; the graph with the largest girth is kept.
inline CubicGraph high_girth_cubic(std::size_t n, std::size_t girth_target, Rng& rng,
                                   std::size_t max_attempts = 8) {
  if (n < 4 || n % 2 != 0) throw invalid_input("cubic graph size must be even and >= 4");
  const std::size_t target = std::min(girth_target, n);
  std::optional<detail::CycleMatching> best;
  std::size_t best_girth = 0, attempts = 0;
  for (; attempts < max_attempts && best_girth < target; ++attempts) {
    detail::CycleMatching cm(n, rng);
    // Raise the girth one level at a time; a switch only creates cycles
    // through its two new edges, so earlier levels stay intact.
    const std::size_t tries_per_edge = 4 * n;
    for (std::size_t level = 3; level <= target; ++level) {
      bool complete = true;
      for (Vertex u = 0; u < n; ++u) {
        if (u > cm.mate(u) || cm.cycle_through(u, level) >= level) continue;
        bool fixed = false;
        for (std::size_t t = 0; t < tries_per_edge && !fixed; ++t) {
          const auto x = static_cast<Vertex>(uniform_below(rng, n));
          if (x == u || x == cm.mate(u)) continue;
          const Vertex mu = cm.mate(u);
          cm.swap_mates(u, x);
          fixed = cm.cycle_through(u, level) >= level && cm.cycle_through(mu, level) >= level;
          if (!fixed) cm.swap_mates(u, mu);  // undo
        }
        complete = complete && fixed;
      }
      if (!complete) break;
    }
    const std::size_t g = cm.girth(n);
    if (!best || g > best_girth) {
      best = std::move(cm);
      best_girth = g;
    }
  }
  return {best->to_graph(), best_girth, attempts};
}

// Disjoint union of `a` directed cycles of length n and (b - a) cubic graphs
// on n vertices (labels "a" and involution "t"), for each size n. The
// vertex mass of the cycle part is exactly a/b.
inline ApproximationFamily mixed_family(std::size_t a, std::size_t b, std::span<const std::size_t> sizes,
                                        std::size_t girth_target, std::uint64_t master_seed,
                                        std::size_t max_attempts = 8) {
  if (a < 1 || a > b) throw invalid_input("mixed_family needs 1 <= a <= b");
  detail::check_increasing(sizes, "mixed_family");
  ApproximationFamily family;
  family.construction = "mixed";
  const std::vector<EdgeLabel> labels{{"a", false}, {"t", true}};
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const std::size_t n = sizes[i];
    if (n < 4 || (b > a && n % 2 != 0)) throw invalid_input("mixed_family sizes must be even and >= 4");
    const auto seed = stage_seed(master_seed, i);
    Rng rng(seed);
    std::vector<LabeledGraph> parts;
    for (std::size_t c = 0; c < a; ++c) {
      std::vector<LabeledEdge> edges;
      for (std::size_t v = 0; v < n; ++v) edges.push_back({static_cast<Vertex>(v), static_cast<Vertex>((v + 1) % n), 0});
      parts.emplace_back(n, labels, std::move(edges));
    }
    std::size_t girth = n, attempts = 0;
    for (std::size_t c = a; c < b; ++c) {
      auto cubic = high_girth_cubic(n, girth_target, rng, max_attempts);
      girth = std::min(girth, cubic.girth);
      attempts += cubic.attempts;
      parts.push_back(std::move(cubic.graph));
    }
    Stage stage = Stage::from_graph(disjoint_union(parts), seed);
    stage.metadata["component_size"] = static_cast<double>(n);
    stage.metadata["girth_target"] = static_cast<double>(girth_target);
    if (b > a) {
      stage.metadata["girth_achieved"] = static_cast<double>(girth);
      stage.metadata["attempts"] = static_cast<double>(attempts);
    }
    family.stages.push_back(std::move(stage));
  }
  return family;
}

}  // namespace soficlab
