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
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "soficlab/errors.hpp"
#include "soficlab/family.hpp"
#include "soficlab/graph.hpp"
#include "soficlab/random.hpp"
#include "soficlab/rational.hpp"
#include "soficlab/spectral.hpp"

namespace soficlab {

// |{x not in F : d(x, F) <= R}|.
inline std::size_t r_boundary(const LabeledGraph& g, std::span<const Vertex> F, int radius) {
  const auto dist = bfs_distances(g, F, radius);
  std::size_t count = 0;
  for (int d : dist) count += d > 0 ? 1 : 0;
  return count;
}

struct FolnerWitness {
  std::vector<Vertex> vertices;  // ascending
  int radius = 1;
  std::size_t boundary = 0;

  std::size_t size() const { return vertices.size(); }
  double ratio() const { return static_cast<double>(boundary) / static_cast<double>(vertices.size()); }
};

enum class FolnerStrategy { kBalls, kSweep, kBoth };

struct FolnerOptions {
  FolnerStrategy strategy = FolnerStrategy::kBoth;
  std::size_t centers = 32;  // sampled ball centres; all vertices when n is smaller
  std::uint64_t seed = 0;
};

namespace detail {

// Keeps the witness with the smallest ratio; ties go to the smaller set.
class WitnessPool {
 public:
  explicit WitnessPool(int radius) : radius_(radius) {}

  void offer(std::size_t boundary, std::size_t size, const std::function<std::vector<Vertex>()>& materialise) {
    if (size == 0) return;
    if (best_) {
      const auto lhs = static_cast<__int128>(boundary) * best_->size();
      const auto rhs = static_cast<__int128>(best_->boundary) * size;
      if (lhs > rhs || (lhs == rhs && size >= best_->size())) return;
    }
    FolnerWitness w;
    w.vertices = materialise();
    std::sort(w.vertices.begin(), w.vertices.end());
    w.radius = radius_;
    w.boundary = boundary;
    best_ = std::move(w);
  }

  std::optional<FolnerWitness>& best() { return best_; }

 private:
  int radius_;
  std::optional<FolnerWitness> best_;
};

}  // namespace detail

// Bounded heuristic search for F with |d_R F| / |F| < eps, over balls around
// sampled centres and prefixes of per-component Fiedler orderings. Only sets
// of at most half their component are considered. nullopt means "not found".
inline std::optional<FolnerWitness> folner_search(const LabeledGraph& g, int radius, const Rational& eps,
                                                  const FolnerOptions& opt = {}) {
  if (radius < 1) throw invalid_input("folner_search: R must be >= 1");
  if (!eps.positive()) throw invalid_input("folner_search: eps must be > 0");
  const std::size_t n = g.vertex_count();
  if (n == 0) return std::nullopt;
  const auto comps = connected_components(g);
  std::vector<std::size_t> comp_size(comps.count, 0);
  for (auto c : comps.id) ++comp_size[c];
  detail::WitnessPool pool(radius);

  if (opt.strategy != FolnerStrategy::kSweep) {
    std::vector<Vertex> centers(n);
    for (std::size_t v = 0; v < n; ++v) centers[v] = static_cast<Vertex>(v);
    if (n > opt.centers) {
      Rng rng(opt.seed);
      shuffle(std::span<Vertex>(centers), rng);
      centers.resize(opt.centers);
      std::sort(centers.begin(), centers.end());
    }
    std::vector<int> dist;
    for (Vertex c : centers) {
      const auto order = ball_vertices(g, c, -1, &dist);
      const std::size_t half = comp_size[comps.id[c]] / 2;
      // cum[t] = |B_t(c)|; d(x, B_t(c)) <= R iff d(x, c) <= t + R.
      std::vector<std::size_t> cum;
      for (int d : dist) {
        if (static_cast<std::size_t>(d) >= cum.size()) cum.push_back(cum.empty() ? 0 : cum.back());
        ++cum[static_cast<std::size_t>(d)];
      }
      for (std::size_t t = 0; t < cum.size() && cum[t] <= half; ++t) {
        const std::size_t outer = cum[std::min(cum.size() - 1, t + static_cast<std::size_t>(radius))];
        pool.offer(outer - cum[t], cum[t], [&] {
          return std::vector<Vertex>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cum[t]));
        });
      }
    }
  }

  if (opt.strategy != FolnerStrategy::kBalls) {
    std::vector<std::vector<Vertex>> members(comps.count);
    for (std::size_t v = 0; v < n; ++v) members[comps.id[v]].push_back(static_cast<Vertex>(v));
    std::vector<std::size_t> cnt(n, 0);
    std::vector<bool> inside(n, false);
    for (const auto& comp : members) {
      if (comp.size() < 4) continue;
      const auto sub = induced_subgraph(g, comp);
      const auto vec = spectral_gap_pair(laplacian(sub, 1), 1).vector;
      std::vector<Vertex> order(comp.size());
      for (std::size_t i = 0; i < comp.size(); ++i) order[i] = static_cast<Vertex>(i);
      std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
        return vec(static_cast<Eigen::Index>(a)) < vec(static_cast<Eigen::Index>(b));
      });
      for (auto& v : order) v = comp[v];
      // Both ends of the ordering give candidate sets.
      for (int side = 0; side < 2; ++side) {
        if (side == 1) std::reverse(order.begin(), order.end());
        std::size_t boundary = 0;
        for (std::size_t k = 0; k < comp.size() / 2; ++k) {
          const Vertex v = order[k];
          if (cnt[v] > 0) --boundary;
          inside[v] = true;
          for (Vertex u : ball_vertices(g, v, radius)) {
            if (u != v && !inside[u] && cnt[u] == 0) ++boundary;
            ++cnt[u];
          }
          pool.offer(boundary, k + 1, [&] {
            return std::vector<Vertex>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k + 1));
          });
        }
        for (Vertex v : comp) {
          cnt[v] = 0;
          inside[v] = false;
        }
      }
    }
  }

  auto& best = pool.best();
  if (best && eps.exceeds_ratio(static_cast<std::int64_t>(best->boundary), static_cast<std::int64_t>(best->size()))) {
    return best;
  }
  return std::nullopt;
}

namespace detail {

inline void check_probability(std::span<const double> phi, std::size_t n) {
  if (phi.size() != n) throw invalid_input("probability vector has the wrong length");
  double sum = 0.0;
  for (double p : phi) {
    if (!(p >= 0.0)) throw invalid_input("probability vector has a negative entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw invalid_input("probability vector does not sum to 1");
}

}  // namespace detail

// Sum of |phi(x) - phi(y)| over ordered pairs with 0 < d(x, y) <= R.
inline double functional_check(const LabeledGraph& g, std::span<const double> phi, int radius) {
  detail::check_probability(phi, g.vertex_count());
  double total = 0.0;
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    const auto ball = ball_vertices(g, x, radius);
    for (std::size_t i = 1; i < ball.size(); ++i) total += std::abs(phi[x] - phi[ball[i]]);
  }
  return total;
}

// eta_x as a sparse probability vector for every vertex x.
struct ProbField {
  using Entry = std::pair<Vertex, double>;
  std::vector<std::vector<Entry>> eta;  // entries sorted by vertex, no duplicates
  int support_radius = 0;

  void validate(const LabeledGraph& g) const {
    if (eta.size() != g.vertex_count()) throw invalid_input("ProbField: wrong number of vectors");
    std::vector<int> dist;
    for (Vertex x = 0; x < eta.size(); ++x) {
      double sum = 0.0;
      const auto ball = ball_vertices(g, x, support_radius);
      std::vector<Vertex> sorted(ball);
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < eta[x].size(); ++i) {
        const auto [z, p] = eta[x][i];
        if (i > 0 && eta[x][i - 1].first >= z) throw invalid_input("ProbField: entries must be sorted and distinct");
        if (!(p >= 0.0)) throw invalid_input("ProbField: negative mass");
        if (!std::binary_search(sorted.begin(), sorted.end(), z)) {
          throw invalid_input("ProbField: support of eta_" + std::to_string(x) + " leaves the declared radius");
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-12) throw invalid_input("ProbField: eta_" + std::to_string(x) + " does not sum to 1");
    }
  }
};

// Largest closed R-ball.
inline std::size_t max_ball_size(const LabeledGraph& g, int radius) {
  std::size_t m = 0;
  for (Vertex x = 0; x < g.vertex_count(); ++x) m = std::max(m, ball_vertices(g, x, radius).size());
  return m;
}

struct PropAResult {
  std::vector<double> phi;
  Vertex z_star = 0;
  double ratio = 0.0;  // sum_{E_R} |phi(x) - phi(y)|, computed from the averaging ratio
  std::size_t n_r = 0;
  double max_variation = 0.0;
};

// Averaging step: with ||eta_x - eta_y||_1 <= eps / N_R on E_R, some z has
// sum_{E_R} |eta_x(z) - eta_y(z)| <= eps * sum_x eta_x(z); phi is the
// normalised column eta_.(z) for the smallest such ratio.
inline PropAResult propA_to_folner(const LabeledGraph& g, const ProbField& eta, int radius, double eps) {
  if (radius < 1) throw invalid_input("propA_to_folner: R must be >= 1");
  eta.validate(g);
  const std::size_t n = g.vertex_count();
  PropAResult out;
  out.n_r = max_ball_size(g, radius);
  const double allowed = eps / static_cast<double>(out.n_r);

  std::vector<double> num(n, 0.0), den(n, 0.0);
  for (Vertex x = 0; x < n; ++x) {
    for (const auto& [z, p] : eta.eta[x]) den[z] += p;
  }
  for (Vertex x = 0; x < n; ++x) {
    const auto ball = ball_vertices(g, x, radius);
    for (std::size_t i = 1; i < ball.size(); ++i) {
      const auto& a = eta.eta[x];
      const auto& b = eta.eta[ball[i]];
      double var = 0.0;
      std::size_t p = 0, q = 0;
      while (p < a.size() || q < b.size()) {
        Vertex z;
        double diff;
        if (q == b.size() || (p < a.size() && a[p].first < b[q].first)) {
          z = a[p].first;
          diff = a[p++].second;
        } else if (p == a.size() || b[q].first < a[p].first) {
          z = b[q].first;
          diff = b[q++].second;
        } else {
          z = a[p].first;
          diff = std::abs(a[p++].second - b[q++].second);
        }
        num[z] += diff;
        var += diff;
      }
      out.max_variation = std::max(out.max_variation, var);
      if (var > allowed) {
        std::ostringstream os;
        os << "propA_to_folner: variation " << var << " > eps/N_R = " << allowed << " at pair (" << x << ", "
           << ball[i] << ")";
        throw invalid_input(os.str());
      }
    }
  }
  bool found = false;
  for (Vertex z = 0; z < n; ++z) {
    if (den[z] <= 0.0) continue;
    if (!found || num[z] * den[out.z_star] < num[out.z_star] * den[z]) {
      out.z_star = z;
      found = true;
    }
  }
  if (!found) throw invalid_input("propA_to_folner: empty field");
  out.ratio = num[out.z_star] / den[out.z_star];
  out.phi.assign(n, 0.0);
  for (Vertex x = 0; x < n; ++x) {
    const auto& row = eta.eta[x];
    auto it = std::lower_bound(row.begin(), row.end(), out.z_star,
                               [](const ProbField::Entry& e, Vertex z) { return e.first < z; });
    if (it != row.end() && it->first == out.z_star) out.phi[x] = it->second / den[out.z_star];
  }
  return out;
}

struct HyperfinitePartition {
  std::size_t cap = 1;
  std::vector<std::vector<Vertex>> parts;  // each ascending; ordered by smallest vertex
  std::vector<std::size_t> part_of;
  std::size_t cut_edges = 0;
};

// Simple-graph edges whose endpoints lie in different parts.
inline std::size_t count_cut_edges(const LabeledGraph& g, std::span<const std::size_t> part_of) {
  std::size_t cut = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    for (Vertex u : g.neighbors(v)) cut += (u > v && part_of[u] != part_of[v]) ? 1 : 0;
  }
  return cut;
}

// BFS ball carving from the smallest unassigned vertex, then single-vertex
// moves into non-full neighbouring parts while they strictly reduce the cut.
inline HyperfinitePartition hyperfinite_partition(const LabeledGraph& g, std::size_t cap, int max_passes = 20) {
  if (cap < 1) throw invalid_input("hyperfinite_partition: K must be >= 1");
  const std::size_t n = g.vertex_count();
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> part(n, kNone);
  std::vector<std::size_t> size;
  for (Vertex s = 0; s < n; ++s) {
    if (part[s] != kNone) continue;
    const std::size_t id = size.size();
    std::vector<Vertex> queue{s};
    part[s] = id;
    for (std::size_t head = 0; head < queue.size() && queue.size() < cap; ++head) {
      for (Vertex u : g.neighbors(queue[head])) {
        if (part[u] == kNone && queue.size() < cap) {
          part[u] = id;
          queue.push_back(u);
        }
      }
    }
    size.push_back(queue.size());
  }

  std::vector<std::size_t> links;
  for (int pass = 0; pass < max_passes; ++pass) {
    bool moved = false;
    for (Vertex v = 0; v < n; ++v) {
      const auto nb = g.neighbors(v);
      links.clear();
      for (Vertex u : nb) links.push_back(part[u]);
      std::sort(links.begin(), links.end());
      const auto own = static_cast<std::size_t>(std::count(links.begin(), links.end(), part[v]));
      std::size_t best = part[v];
      std::size_t best_links = own;
      for (std::size_t i = 0; i < links.size();) {
        std::size_t j = i;
        while (j < links.size() && links[j] == links[i]) ++j;
        if (links[i] != part[v] && size[links[i]] < cap && j - i > best_links) {
          best = links[i];
          best_links = j - i;
        }
        i = j;
      }
      if (best != part[v]) {
        --size[part[v]];
        ++size[best];
        part[v] = best;
        moved = true;
      }
    }
    if (!moved) break;
  }

  HyperfinitePartition out;
  out.cap = cap;
  std::vector<std::size_t> renumber(size.size(), kNone);
  out.part_of.assign(n, 0);
  for (Vertex v = 0; v < n; ++v) {
    if (renumber[part[v]] == kNone) {
      renumber[part[v]] = out.parts.size();
      out.parts.emplace_back();
    }
    out.part_of[v] = renumber[part[v]];
    out.parts[out.part_of[v]].push_back(v);
  }
  out.cut_edges = count_cut_edges(g, out.part_of);
  return out;
}

struct MassStage {
  std::size_t amenable = 0;  // vertices whose r-ball has all degrees <= 2
  std::size_t total = 0;
  double fraction() const { return total ? static_cast<double>(amenable) / static_cast<double>(total) : 0.0; }
};

struct MassEstimate {
  int radius = 0;
  std::vector<MassStage> stages;
  double last() const { return stages.empty() ? 0.0 : stages.back().fraction(); }
};

// Line-like versus tree-like classification of rooted r-balls in families of
// maximum degree 3; counts are exact.
inline MassEstimate amenable_mass_estimate(const ApproximationFamily& family, int r) {
  if (r < 0) throw invalid_input("amenable_mass_estimate: r must be >= 0");
  MassEstimate est;
  est.radius = r;
  for (std::size_t i = 0; i < family.stages.size(); ++i) {
    const auto& g = family.stages[i].graph;
    if (g.max_degree() > 3) {
      throw invalid_input("amenable_mass_estimate: stage " + std::to_string(i) + " has a vertex of degree > 3");
    }
    MassStage s;
    s.total = g.vertex_count();
    for (Vertex x = 0; x < s.total; ++x) {
      const auto ball = ball_vertices(g, x, r);
      s.amenable += std::all_of(ball.begin(), ball.end(), [&](Vertex v) { return g.degree(v) <= 2; }) ? 1 : 0;
    }
    est.stages.push_back(s);
  }
  return est;
}

}  // namespace soficlab
