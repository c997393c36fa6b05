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
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "soficlab/errors.hpp"
#include "soficlab/family.hpp"
#include "soficlab/graph.hpp"
#include "soficlab/group.hpp"

namespace soficlab {

inline constexpr std::size_t kDefaultCodeCap = 512;

// Induced labelled subgraph on B_r(v), rooted at v (local index 0).
inline RootedBall extract_ball(const LabeledGraph& g, Vertex v, int r) {
  if (v >= g.vertex_count()) throw invalid_input("extract_ball: vertex out of range");
  if (r < 0) throw invalid_input("extract_ball: radius must be >= 0");
  const auto verts = ball_vertices(g, v, r);
  return {induced_subgraph(g, verts), 0, r};
}

namespace detail {

// Exact canonical form of a rooted labelled multigraph by colour refinement
// and exhaustive individualisation of the remaining ties. The code of a
// discrete colouring is its sorted relabelled edge list; the canonical code
// is the least such list over all search leaves.
class Canonicalizer {
 public:
  using EdgeKey = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>;

  Canonicalizer(const RootedBall& ball, std::size_t leaf_cap) : g_(ball.graph), leaf_cap_(leaf_cap) {
    const std::size_t n = g_.vertex_count();
    adj_.resize(n);
    for (Vertex v = 0; v < n; ++v) {
      for (const auto& inc : g_.incidences(v)) {
        const bool inv = g_.labels()[inc.label].involution;
        adj_[v].push_back({inc.other, 2 * inc.label + (inv || inc.outgoing ? 0u : 1u)});
      }
    }
    std::vector<std::uint32_t> colors(n, 1);
    colors[ball.root] = 0;
    search(colors);
  }

  std::string code() const {
    std::string out = std::to_string(g_.vertex_count()) + "|";
    bool first = true;
    for (const auto& [u, v, l] : best_) {
      if (!first) out += ',';
      first = false;
      out += std::to_string(u) + '.' + std::to_string(v) + '.' + std::to_string(l);
    }
    return out;
  }

 private:
  struct Arc {
    Vertex other;
    std::uint32_t key;
  };

  // Refines to the coarsest equitable colouring; colours become dense ranks
  // ordered by (old colour, neighbourhood signature).
  void refine(std::vector<std::uint32_t>& colors) const {
    const std::size_t n = colors.size();
    std::size_t classes = count_classes(colors);
    using Sig = std::pair<std::uint32_t, std::vector<std::pair<std::uint32_t, std::uint32_t>>>;
    std::vector<Sig> sigs(n);
    while (true) {
      for (Vertex v = 0; v < n; ++v) {
        sigs[v].first = colors[v];
        auto& nb = sigs[v].second;
        nb.clear();
        for (const auto& a : adj_[v]) nb.emplace_back(a.key, colors[a.other]);
        std::sort(nb.begin(), nb.end());
      }
      std::vector<Vertex> order(n);
      for (Vertex v = 0; v < n; ++v) order[v] = v;
      std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return sigs[a] < sigs[b]; });
      std::uint32_t rank = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && sigs[order[i]] != sigs[order[i - 1]]) ++rank;
        colors[order[i]] = rank;
      }
      const std::size_t next = n == 0 ? 0 : rank + 1;
      if (next == classes) return;
      classes = next;
    }
  }

  static std::size_t count_classes(const std::vector<std::uint32_t>& colors) {
    std::vector<std::uint32_t> c(colors);
    std::sort(c.begin(), c.end());
    return static_cast<std::size_t>(std::unique(c.begin(), c.end()) - c.begin());
  }

  void search(std::vector<std::uint32_t> colors) {
    refine(colors);
    const std::size_t n = colors.size();
    std::vector<std::size_t> count(n, 0);
    for (auto c : colors) ++count[c];
    std::uint32_t target = UINT32_MAX;
    for (std::uint32_t c = 0; c < n; ++c) {
      if (count[c] > 1) {
        target = c;
        break;
      }
    }
    if (target == UINT32_MAX) {
      leaf(colors);
      return;
    }
    for (Vertex v = 0; v < n; ++v) {
      if (colors[v] != target) continue;
      std::vector<std::uint32_t> next(n);
      for (Vertex u = 0; u < n; ++u) next[u] = 2 * colors[u] + (colors[u] == target && u != v ? 1 : 0);
      search(std::move(next));
    }
  }

  void leaf(const std::vector<std::uint32_t>& pos) {
    if (++leaves_ > leaf_cap_) throw resource_error("canonical search exceeded leaf cap", leaf_cap_);
    std::vector<EdgeKey> edges;
    edges.reserve(g_.edge_count());
    for (const auto& e : g_.edges()) {
      auto u = pos[e.u], v = pos[e.v];
      if (g_.labels()[e.label].involution && v < u) std::swap(u, v);
      edges.emplace_back(u, v, e.label);
    }
    std::sort(edges.begin(), edges.end());
    if (!have_best_ || edges < best_) {
      best_ = std::move(edges);
      have_best_ = true;
    }
  }

  const LabeledGraph& g_;
  std::size_t leaf_cap_;
  std::vector<std::vector<Arc>> adj_;
  std::vector<EdgeKey> best_;
  bool have_best_ = false;
  std::size_t leaves_ = 0;
};

}  // namespace detail

// Equal codes iff a root-preserving, label-preserving isomorphism exists.
inline std::string canonical_code(const RootedBall& ball, std::size_t cap = kDefaultCodeCap,
                                  std::size_t leaf_cap = 1'000'000) {
  if (ball.graph.vertex_count() > cap) throw resource_error("ball too large to canonicalise", cap);
  if (ball.root >= ball.graph.vertex_count()) throw invalid_input("ball root out of range");
  return detail::Canonicalizer(ball, leaf_cap).code();
}

// Inverse of canonical_code: vertex 0 is the root.
inline RootedBall decode_code(std::string_view code, const std::vector<EdgeLabel>& labels, int radius = 0) {
  const auto bar = code.find('|');
  if (bar == std::string_view::npos) throw invalid_input("malformed ball code");
  std::size_t n = 0;
  auto parse = [&](std::string_view s, auto& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || p != s.data() + s.size()) throw invalid_input("malformed ball code");
  };
  parse(code.substr(0, bar), n);
  std::vector<LabeledEdge> edges;
  std::string_view rest = code.substr(bar + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    const auto d1 = item.find('.');
    const auto d2 = item.find('.', d1 == std::string_view::npos ? 0 : d1 + 1);
    if (d1 == std::string_view::npos || d2 == std::string_view::npos) throw invalid_input("malformed ball code");
    LabeledEdge e;
    parse(item.substr(0, d1), e.u);
    parse(item.substr(d1 + 1, d2 - d1 - 1), e.v);
    parse(item.substr(d2 + 1), e.label);
    edges.push_back(e);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  if (n == 0) throw invalid_input("ball code with no vertices");
  return {LabeledGraph(n, labels, std::move(edges)), 0, radius};
}

// 64-bit FNV-1a of a code, for compact report columns.
inline std::string code_hash(std::string_view code) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : code) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Empirical distribution of rooted r-ball types; counts are exact.
struct BallDistribution {
  int radius = 0;
  std::size_t total = 0;
  std::map<std::string, std::size_t> counts;

  double frequency(const std::string& code) const {
    auto it = counts.find(code);
    return it == counts.end() || total == 0 ? 0.0
                                            : static_cast<double>(it->second) / static_cast<double>(total);
  }
};

// Canonical code of B_r(v) for every vertex v.
inline std::vector<std::string> ball_codes(const LabeledGraph& g, int r, std::size_t cap = kDefaultCodeCap) {
  std::vector<std::string> codes(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) codes[v] = canonical_code(extract_ball(g, v, r), cap);
  return codes;
}

inline BallDistribution ball_distribution(const LabeledGraph& g, int r, std::size_t cap = kDefaultCodeCap) {
  BallDistribution d;
  d.radius = r;
  d.total = g.vertex_count();
  for (auto& code : ball_codes(g, r, cap)) ++d.counts[std::move(code)];
  return d;
}

struct BsDefect {
  std::size_t mismatched = 0;
  std::size_t total = 0;
  double fraction() const { return total == 0 ? 0.0 : static_cast<double>(mismatched) / static_cast<double>(total); }
};

inline void check_labels_match(const LabeledGraph& g, const GroupModel& model) {
  if (g.labels().size() != model.rank()) throw invalid_input("graph labels do not match the model's generators");
  for (std::uint32_t s = 0; s < model.rank(); ++s) {
    if (g.labels()[s].name != model.generators().name(s)) {
      throw invalid_input("graph label '" + g.labels()[s].name + "' does not match generator '" +
                          model.generators().name(s) + "'");
    }
  }
}

namespace detail {

// Port key of an incidence: label, plus direction for non-involutions. The
// second copy of an involution loop is dropped.
inline bool port_key(const LabeledGraph& g, Vertex v, const Incidence& inc, std::uint32_t& key) {
  const bool inv = g.labels()[inc.label].involution;
  if (inv && inc.other == v && !inc.outgoing) return false;
  key = 2 * inc.label + (inv || inc.outgoing ? 0u : 1u);
  return true;
}

// True when no vertex has two incidences with the same port key.
inline bool label_deterministic(const LabeledGraph& g) {
  std::vector<std::uint32_t> keys;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    keys.clear();
    std::uint32_t k;
    for (const auto& inc : g.incidences(v)) {
      if (port_key(g, v, inc, k)) keys.push_back(k);
    }
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) return false;
  }
  return true;
}

// Rooted isomorphism test of B_r(v) against a fixed ball when both graphs
// are label-deterministic: the only candidate map is the one obtained by
// following equal ports from the roots, so one BFS decides it.
class ForcedMatcher {
 public:
  ForcedMatcher(const LabeledGraph& g, const RootedBall& target) : g_(g), t_(target.graph), root_(target.root) {
    const std::size_t m = t_.vertex_count();
    port_.assign(m * key_count(), kNone);
    std::uint32_t k;
    for (Vertex x = 0; x < m; ++x) {
      for (const auto& inc : t_.incidences(x)) {
        if (port_key(t_, x, inc, k)) {
          port_[x * key_count() + k] = inc.other;
          ++target_ports_;
        }
      }
    }
    tdist_ = bfs_distances(t_, root_);
    seen_.assign(g.vertex_count(), 0);
    image_.assign(g.vertex_count(), 0);
    dist_.assign(g.vertex_count(), 0);
    used_.assign(m, 0);
  }

  bool matches(Vertex v, int r) {
    ++stamp_;
    queue_.clear();
    visit(v, root_, 0);
    std::size_t ports = 0;
    std::uint32_t k;
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const Vertex x = queue_[head];
      const Vertex fx = image_[x];
      for (const auto& inc : g_.incidences(x)) {
        if (!port_key(g_, x, inc, k)) continue;
        const Vertex y = inc.other;
        const bool inside = seen_[y] == stamp_;
        if (!inside && dist_[x] == r) continue;  // leaves the ball
        const Vertex fy = port_[fx * key_count() + k];
        if (fy == kNone) return false;
        if (inside) {
          if (image_[y] != fy) return false;
        } else {
          if (used_[fy] == stamp_ || tdist_[fy] != dist_[x] + 1) return false;
          visit(y, fy, dist_[x] + 1);
        }
        ++ports;
      }
    }
    return queue_.size() == t_.vertex_count() && ports == target_ports_;
  }

 private:
  static constexpr Vertex kNone = static_cast<Vertex>(-1);

  std::size_t key_count() const { return 2 * std::max<std::size_t>(1, g_.labels().size()); }

  void visit(Vertex y, Vertex fy, int d) {
    seen_[y] = stamp_;
    used_[fy] = stamp_;
    image_[y] = fy;
    dist_[y] = d;
    queue_.push_back(y);
  }

  const LabeledGraph& g_;
  const LabeledGraph& t_;
  Vertex root_;
  std::vector<Vertex> port_;
  std::size_t target_ports_ = 0;
  std::vector<int> tdist_;
  std::uint64_t stamp_ = 0;
  std::vector<std::uint64_t> seen_, used_;
  std::vector<Vertex> image_;
  std::vector<int> dist_;
  std::vector<Vertex> queue_;
};

}  // namespace detail

// Vertices whose r-ball is not isomorphic (rooted, labelled) to the Cayley
// r-ball of the model. Label-deterministic graphs (all action graphs) take
// a linear-time matching path; others are compared by canonical code.
inline BsDefect bs_defect_counts(const LabeledGraph& g, int r, const GroupModel& model,
                                 std::size_t cap = kDefaultCodeCap, std::size_t ball_cap = kDefaultBallCap) {
  check_labels_match(g, model);
  if (r < 0) throw invalid_input("bs_defect: radius must be >= 0");
  const auto target = cayley_ball(model, r, ball_cap);
  if (target.graph.vertex_count() > cap) throw resource_error("ball too large to canonicalise", cap);
  BsDefect d;
  d.total = g.vertex_count();
  if (detail::label_deterministic(g) && detail::label_deterministic(target.graph)) {
    detail::ForcedMatcher match(g, target);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      if (!match.matches(v, r)) ++d.mismatched;
    }
    return d;
  }
  const auto code = canonical_code(target, cap);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (canonical_code(extract_ball(g, v, r), cap) != code) ++d.mismatched;
  }
  return d;
}

inline double bs_defect(const LabeledGraph& g, int r, const GroupModel& model, std::size_t cap = kDefaultCodeCap) {
  return bs_defect_counts(g, r, model, cap).fraction();
}

// Total variation distance (1/2) sum |p1 - p2|, evaluated exactly before the
// final division.
inline double compare_distributions(const BallDistribution& d1, const BallDistribution& d2) {
  if (d1.radius != d2.radius) throw invalid_input("compare_distributions: radius mismatch");
  if (d1.total == 0 || d2.total == 0) throw invalid_input("compare_distributions: empty distribution");
  unsigned __int128 sum = 0;
  auto term = [&](std::size_t c1, std::size_t c2) {
    const auto a = static_cast<unsigned __int128>(c1) * d2.total;
    const auto b = static_cast<unsigned __int128>(c2) * d1.total;
    sum += a > b ? a - b : b - a;
  };
  for (const auto& [code, c1] : d1.counts) {
    auto it = d2.counts.find(code);
    term(c1, it == d2.counts.end() ? 0 : it->second);
  }
  for (const auto& [code, c2] : d2.counts) {
    if (!d1.counts.contains(code)) term(0, c2);
  }
  return static_cast<double>(sum) / (2.0 * static_cast<double>(d1.total) * static_cast<double>(d2.total));
}

struct DominantBall {
  std::string code;
  std::vector<double> mass_by_stage;
  std::vector<std::pair<std::string, double>> last_stage_ranking;  // descending mass
};

// The most frequent r-ball type at the last stage and its mass at every
// stage; ties go to the lexicographically smaller code.
inline DominantBall dominant_limit_ball(const ApproximationFamily& family, int r, std::size_t cap = kDefaultCodeCap) {
  if (family.stages.size() < 2) throw invalid_input("dominant_limit_ball needs at least two stages");
  std::vector<BallDistribution> dists;
  for (const auto& s : family.stages) dists.push_back(ball_distribution(s.graph, r, cap));
  const auto& last = dists.back();
  DominantBall out;
  for (const auto& [code, count] : last.counts) {
    out.last_stage_ranking.emplace_back(code, static_cast<double>(count) / static_cast<double>(last.total));
  }
  std::stable_sort(out.last_stage_ranking.begin(), out.last_stage_ranking.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  out.code = out.last_stage_ranking.front().first;
  for (const auto& d : dists) out.mass_by_stage.push_back(d.frequency(out.code));
  return out;
}

}  // namespace soficlab
