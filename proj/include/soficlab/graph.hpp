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
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "soficlab/errors.hpp"

namespace soficlab {

using Vertex = std::uint32_t;
using Label = std::uint32_t;

inline constexpr int kUnreached = -1;

// An involution label marks edges whose direction carries no information
// (a generator with s = s^-1); such edges are compared as unordered pairs.
struct EdgeLabel {
  std::string name;
  bool involution = false;

  friend bool operator==(const EdgeLabel&, const EdgeLabel&) = default;
};

struct LabeledEdge {
  Vertex u = 0;
  Vertex v = 0;
  Label label = 0;

  friend bool operator==(const LabeledEdge&, const LabeledEdge&) = default;
  friend auto operator<=>(const LabeledEdge&, const LabeledEdge&) = default;
};

struct Incidence {
  Vertex other;
  Label label;
  bool outgoing;
};

// Finite edge-labelled multigraph. Loops and parallel edges are kept in the
// edge multiset; the metric is that of the simple underlying graph.
class LabeledGraph {
 public:
  LabeledGraph() = default;

  LabeledGraph(std::size_t vertex_count, std::vector<EdgeLabel> labels,
               std::vector<LabeledEdge> edges)
      : n_(vertex_count), labels_(std::move(labels)), edges_(std::move(edges)) {
    for (const auto& e : edges_) {
      if (e.u >= n_ || e.v >= n_) throw invalid_input("edge endpoint out of range");
      if (e.label >= labels_.size()) throw invalid_input("edge label out of range");
    }
    build_index();
  }

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const LabeledEdge> edges() const noexcept { return edges_; }
  const std::vector<EdgeLabel>& labels() const noexcept { return labels_; }

  std::span<const Incidence> incidences(Vertex v) const {
    return {incidences_.data() + inc_offsets_[v], incidences_.data() + inc_offsets_[v + 1]};
  }

  // Neighbours in the simple underlying graph, sorted, without v itself.
  std::span<const Vertex> neighbors(Vertex v) const {
    return {neighbors_.data() + nb_offsets_[v], neighbors_.data() + nb_offsets_[v + 1]};
  }

  std::size_t degree(Vertex v) const { return nb_offsets_[v + 1] - nb_offsets_[v]; }

  std::size_t max_degree() const {
    std::size_t d = 0;
    for (Vertex v = 0; v < n_; ++v) d = std::max(d, degree(v));
    return d;
  }

  // Number of edges of the simple underlying graph.
  std::size_t simple_edge_count() const { return neighbors_.size() / 2; }

  friend bool operator==(const LabeledGraph& a, const LabeledGraph& b) {
    return a.n_ == b.n_ && a.labels_ == b.labels_ && a.edges_ == b.edges_;
  }

 private:
  void build_index() {
    inc_offsets_.assign(n_ + 1, 0);
    for (const auto& e : edges_) {
      ++inc_offsets_[e.u + 1];
      ++inc_offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n_; ++i) inc_offsets_[i + 1] += inc_offsets_[i];
    incidences_.resize(inc_offsets_[n_]);
    std::vector<std::size_t> fill(inc_offsets_.begin(), inc_offsets_.end() - 1);
    for (const auto& e : edges_) {
      incidences_[fill[e.u]++] = {e.v, e.label, true};
      incidences_[fill[e.v]++] = {e.u, e.label, false};
    }

    nb_offsets_.assign(n_ + 1, 0);
    std::vector<Vertex> scratch;
    for (Vertex v = 0; v < n_; ++v) {
      scratch.clear();
      for (const auto& inc : incidences(v)) {
        if (inc.other != v) scratch.push_back(inc.other);
      }
      std::sort(scratch.begin(), scratch.end());
      scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
      neighbors_.insert(neighbors_.end(), scratch.begin(), scratch.end());
      nb_offsets_[v + 1] = neighbors_.size();
    }
  }

  std::size_t n_ = 0;
  std::vector<EdgeLabel> labels_;
  std::vector<LabeledEdge> edges_;
  std::vector<std::size_t> inc_offsets_{0};
  std::vector<Incidence> incidences_;
  std::vector<std::size_t> nb_offsets_{0};
  std::vector<Vertex> neighbors_;
};

struct RootedBall {
  LabeledGraph graph;
  Vertex root = 0;
  int radius = 0;
};

// Distances from the sources, truncated at max_radius (kUnreached beyond).
// A negative max_radius means unbounded.
inline std::vector<int> bfs_distances(const LabeledGraph& g, std::span<const Vertex> sources,
                                      int max_radius = -1) {
  std::vector<int> dist(g.vertex_count(), kUnreached);
  std::vector<Vertex> frontier;
  for (Vertex s : sources) {
    if (dist[s] == kUnreached) {
      dist[s] = 0;
      frontier.push_back(s);
    }
  }
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const Vertex v = frontier[head];
    if (max_radius >= 0 && dist[v] >= max_radius) continue;
    for (Vertex w : g.neighbors(v)) {
      if (dist[w] == kUnreached) {
        dist[w] = dist[v] + 1;
        frontier.push_back(w);
      }
    }
  }
  return dist;
}

inline std::vector<int> bfs_distances(const LabeledGraph& g, Vertex source, int max_radius = -1) {
  return bfs_distances(g, std::span<const Vertex>(&source, 1), max_radius);
}

// Vertices of the closed ball B_r(v) in breadth-first order; negative r is
// unbounded.
inline std::vector<Vertex> ball_vertices(const LabeledGraph& g, Vertex v, int r,
                                         std::vector<int>* dist_out = nullptr) {
  std::vector<Vertex> order{v};
  // Sparse BFS: only touched vertices are reset, so repeated calls stay cheap.
  static thread_local std::vector<int> mark;
  if (mark.size() < g.vertex_count()) mark.assign(g.vertex_count(), kUnreached);
  mark[v] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const Vertex x = order[head];
    if (r >= 0 && mark[x] >= r) continue;
    for (Vertex w : g.neighbors(x)) {
      if (mark[w] == kUnreached) {
        mark[w] = mark[x] + 1;
        order.push_back(w);
      }
    }
  }
  if (dist_out) {
    dist_out->resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) (*dist_out)[i] = mark[order[i]];
  }
  for (Vertex x : order) mark[x] = kUnreached;
  return order;
}

struct Components {
  std::vector<std::uint32_t> id;  // component index per vertex
  std::size_t count = 0;
};

inline Components connected_components(const LabeledGraph& g) {
  Components c;
  c.id.assign(g.vertex_count(), UINT32_MAX);
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < g.vertex_count(); ++s) {
    if (c.id[s] != UINT32_MAX) continue;
    const auto cid = static_cast<std::uint32_t>(c.count++);
    c.id[s] = cid;
    stack.assign(1, s);
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : g.neighbors(v)) {
        if (c.id[w] == UINT32_MAX) {
          c.id[w] = cid;
          stack.push_back(w);
        }
      }
    }
  }
  return c;
}

inline bool is_connected(const LabeledGraph& g) {
  return g.vertex_count() <= 1 || connected_components(g).count == 1;
}

// Induced labelled subgraph on `vertices`; vertex i of the result is
// vertices[i]. Edges keep their original orientation and label.
inline LabeledGraph induced_subgraph(const LabeledGraph& g, std::span<const Vertex> vertices) {
  std::vector<std::uint32_t> local(g.vertex_count(), UINT32_MAX);
  for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<std::uint32_t>(i);
  std::vector<LabeledEdge> edges;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (const auto& inc : g.incidences(vertices[i])) {
      if (!inc.outgoing || local[inc.other] == UINT32_MAX) continue;
      edges.push_back({static_cast<Vertex>(i), local[inc.other], inc.label});
    }
  }
  return LabeledGraph(vertices.size(), g.labels(), std::move(edges));
}

// Row-major all-pairs distance table (kUnreached across components).
inline std::vector<int> all_pairs_distances(const LabeledGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<int> table(n * n);
  for (Vertex v = 0; v < n; ++v) {
    const auto d = bfs_distances(g, v);
    std::copy(d.begin(), d.end(), table.begin() + static_cast<std::ptrdiff_t>(v * n));
  }
  return table;
}

// Convenience constructors used by tests, examples and generators.
inline LabeledGraph cycle_graph(std::size_t n, EdgeLabel label = {"a", false}) {
  std::vector<LabeledEdge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % n), 0});
  }
  return LabeledGraph(n, {std::move(label)}, std::move(edges));
}

inline LabeledGraph path_graph(std::size_t n, EdgeLabel label = {"a", false}) {
  std::vector<LabeledEdge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(i + 1), 0});
  }
  return LabeledGraph(n, {std::move(label)}, std::move(edges));
}

inline LabeledGraph complete_graph(std::size_t n) {
  std::vector<LabeledEdge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), 0});
    }
  }
  return LabeledGraph(n, {{"e", true}}, std::move(edges));
}

// Vertex-disjoint union; vertices of later graphs are shifted. Label sets
// must agree.
inline LabeledGraph disjoint_union(std::span<const LabeledGraph> parts) {
  if (parts.empty()) return {};
  std::vector<LabeledEdge> edges;
  std::size_t offset = 0;
  for (const auto& p : parts) {
    if (p.labels() != parts.front().labels()) throw invalid_input("disjoint_union: label sets differ");
    for (const auto& e : p.edges()) {
      edges.push_back({static_cast<Vertex>(e.u + offset), static_cast<Vertex>(e.v + offset), e.label});
    }
    offset += p.vertex_count();
  }
  return LabeledGraph(offset, parts.front().labels(), std::move(edges));
}

inline constexpr std::size_t kInfiniteGirth = std::numeric_limits<std::size_t>::max();

// Length of the shortest cycle of the simple underlying graph, or
// kInfiniteGirth for forests.
inline std::size_t girth(const LabeledGraph& g) {
  std::size_t best = kInfiniteGirth;
  const std::size_t n = g.vertex_count();
  std::vector<int> dist(n, kUnreached);
  std::vector<Vertex> parent(n), order;
  for (Vertex s = 0; s < n; ++s) {
    order.assign(1, s);
    dist[s] = 0;
    parent[s] = s;
    for (std::size_t head = 0; head < order.size(); ++head) {
      const Vertex v = order[head];
      if (best != kInfiniteGirth && static_cast<std::size_t>(2 * dist[v] + 1) >= best) break;
      for (Vertex w : g.neighbors(v)) {
        if (dist[w] == kUnreached) {
          dist[w] = dist[v] + 1;
          parent[w] = v;
          order.push_back(w);
        } else if (parent[v] != w) {
          best = std::min(best, static_cast<std::size_t>(dist[v] + dist[w] + 1));
        }
      }
    }
    for (Vertex v : order) dist[v] = kUnreached;
  }
  return best;
}

}  // namespace soficlab
