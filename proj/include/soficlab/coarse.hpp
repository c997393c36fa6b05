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
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "soficlab/errors.hpp"
#include "soficlab/family.hpp"
#include "soficlab/graph.hpp"
#include "soficlab/random.hpp"
#include "soficlab/spectral.hpp"

namespace soficlab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr std::size_t kExactPairLimit = 2000;

struct QIOptions {
  std::size_t exact_limit = kExactPairLimit;
  std::size_t sample_sources = 64;  // BFS sources when |X| exceeds exact_limit
  std::uint64_t seed = 0;
};

struct QIConstants {
  double L = 1.0;  // kInfinity when f collapses X to a point
  double A = 0.0;
  std::size_t codensity = 0;
  bool sampled = false;
  std::size_t pairs = 0;  // ordered pairs x != x' evaluated
  std::pair<Vertex, Vertex> L_pair{0, 0};
  std::pair<Vertex, Vertex> A_pair{0, 0};
};

// Constants with d(x,x')/L - A <= d(fx, fx') <= L d(x,x') + A on the
// evaluated pairs: L = max(1, max d_Y / d_X) and A is then the smallest
// additive constant for the lower bound.
inline QIConstants verify_qi(const LabeledGraph& X, const LabeledGraph& Y, std::span<const Vertex> f,
                             const QIOptions& opt = {}) {
  const std::size_t n = X.vertex_count();
  if (f.size() != n) throw invalid_input("verify_qi: map is not total on X");
  for (Vertex y : f) {
    if (y >= Y.vertex_count()) throw invalid_input("verify_qi: map leaves Y");
  }
  if (n == 0 || !is_connected(X) || !is_connected(Y)) throw invalid_input("verify_qi: graphs must be connected");

  QIConstants q;
  std::vector<Vertex> sources(n);
  for (std::size_t v = 0; v < n; ++v) sources[v] = static_cast<Vertex>(v);
  if (n > opt.exact_limit) {
    Rng rng(opt.seed);
    shuffle(std::span<Vertex>(sources), rng);
    sources.resize(std::min(n, opt.sample_sources));
    std::sort(sources.begin(), sources.end());
    q.sampled = true;
  }

  struct Sample {
    Vertex x, x2;
    int dx, dy;
  };
  std::vector<Sample> pairs;
  pairs.reserve(sources.size() * (n - 1));
  double L = 1.0;
  bool collapsed = true;
  for (Vertex x : sources) {
    const auto dx = bfs_distances(X, x);
    const auto dy = bfs_distances(Y, f[x]);
    for (Vertex x2 = 0; x2 < n; ++x2) {
      if (x2 == x) continue;
      const Sample s{x, x2, dx[x2], dy[f[x2]]};
      pairs.push_back(s);
      if (s.dy > 0) collapsed = false;
      if (static_cast<double>(s.dy) / s.dx > L) {
        L = static_cast<double>(s.dy) / s.dx;
        q.L_pair = {x, x2};
      }
    }
  }
  q.pairs = pairs.size();
  if (collapsed && !pairs.empty()) {
    q.L = kInfinity;
    q.A = kInfinity;
    const auto far = std::max_element(pairs.begin(), pairs.end(), [](const Sample& a, const Sample& b) { return a.dx < b.dx; });
    q.L_pair = q.A_pair = {far->x, far->x2};
  } else {
    q.L = L;
    for (const auto& s : pairs) {
      const double slack = s.dx / L - s.dy;
      if (slack > q.A) {
        q.A = slack;
        q.A_pair = {s.x, s.x2};
      }
    }
  }
  std::vector<Vertex> image(f.begin(), f.end());
  std::sort(image.begin(), image.end());
  image.erase(std::unique(image.begin(), image.end()), image.end());
  for (int d : bfs_distances(Y, image)) q.codensity = std::max(q.codensity, static_cast<std::size_t>(d));
  return q;
}

struct GrowthReport {
  std::vector<std::size_t> sizes;  // |N_m(A)| for m = 0..n
  bool recursion_ok = true;
  bool bound_ok = true;
  std::vector<std::string> violations;
};

// Checks N_m(A) = N_1(N_{m-1}(A)) and |N_m(A)| <= (1 + deg_max)^m |A|.
inline GrowthReport neighborhood_growth_check(const LabeledGraph& Y, std::span<const Vertex> A, int n) {
  if (A.empty()) throw invalid_input("neighborhood_growth_check: A must be nonempty");
  if (n < 0) throw invalid_input("neighborhood_growth_check: n must be >= 0");
  std::vector<Vertex> base(A.begin(), A.end());
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  const auto dist = bfs_distances(Y, base, n);
  auto direct = [&](int m) {
    std::vector<Vertex> s;
    for (Vertex v = 0; v < Y.vertex_count(); ++v) {
      if (dist[v] != kUnreached && dist[v] <= m) s.push_back(v);
    }
    return s;
  };
  GrowthReport rep;
  const long double step = 1.0L + static_cast<long double>(Y.max_degree());
  std::vector<Vertex> prev = direct(0);
  rep.sizes.push_back(prev.size());
  long double bound = static_cast<long double>(base.size());
  for (int m = 1; m <= n; ++m) {
    const auto now = direct(m);
    std::vector<Vertex> iterated;
    const auto d1 = bfs_distances(Y, prev, 1);
    for (Vertex v = 0; v < Y.vertex_count(); ++v) {
      if (d1[v] != kUnreached) iterated.push_back(v);
    }
    if (iterated != now) {
      rep.recursion_ok = false;
      rep.violations.push_back("recursion fails at m = " + std::to_string(m));
    }
    bound *= step;
    if (static_cast<long double>(now.size()) > bound) {
      rep.bound_ok = false;
      rep.violations.push_back("growth bound fails at m = " + std::to_string(m));
    }
    rep.sizes.push_back(now.size());
    prev = now;
  }
  return rep;
}

struct InvariantProfile {
  std::map<std::size_t, std::size_t> degree_histogram;
  std::size_t girth = kInfiniteGirth;
  std::size_t diameter = 0;
  bool diameter_exact = true;  // false: double-sweep lower bound
  double lambda2 = 0.0;
  std::vector<double> growth;  // mean |B_t(x)| for t = 0..r
  bool growth_sampled = false;
};

inline InvariantProfile invariant_profile(const LabeledGraph& g, int r, std::uint64_t seed = 0) {
  if (r < 0) throw invalid_input("invariant_profile: r must be >= 0");
  InvariantProfile p;
  const std::size_t n = g.vertex_count();
  for (Vertex v = 0; v < n; ++v) ++p.degree_histogram[g.degree(v)];
  p.girth = girth(g);

  auto eccentricity = [&](Vertex v, Vertex* far) {
    const auto d = bfs_distances(g, v);
    std::size_t e = 0;
    for (Vertex u = 0; u < n; ++u) {
      if (d[u] != kUnreached && static_cast<std::size_t>(d[u]) > e) {
        e = static_cast<std::size_t>(d[u]);
        if (far) *far = u;
      }
    }
    return e;
  };
  std::vector<Vertex> roots(n);
  for (std::size_t v = 0; v < n; ++v) roots[v] = static_cast<Vertex>(v);
  if (n <= kExactPairLimit) {
    for (Vertex v = 0; v < n; ++v) p.diameter = std::max(p.diameter, eccentricity(v, nullptr));
  } else {
    p.diameter_exact = false;
    const auto comps = connected_components(g);
    std::vector<bool> seen(comps.count, false);
    for (Vertex v = 0; v < n; ++v) {
      if (seen[comps.id[v]]) continue;
      seen[comps.id[v]] = true;
      Vertex far = v;
      eccentricity(v, &far);
      p.diameter = std::max(p.diameter, eccentricity(far, nullptr));
    }
    Rng rng(seed);
    shuffle(std::span<Vertex>(roots), rng);
    roots.resize(256);
    std::sort(roots.begin(), roots.end());
    p.growth_sampled = true;
  }
  if (n >= 2) p.lambda2 = spectral_gap(laplacian(g, 1), 1);

  p.growth.assign(static_cast<std::size_t>(r) + 1, 0.0);
  std::vector<int> dist;
  for (Vertex v : roots) {
    ball_vertices(g, v, r, &dist);
    for (int d : dist) {
      for (int t = d; t <= r; ++t) p.growth[static_cast<std::size_t>(t)] += 1.0;
    }
  }
  for (auto& x : p.growth) x /= roots.empty() ? 1.0 : static_cast<double>(roots.size());
  return p;
}

// Ratio of consecutive mean ball sizes at the outer radius: tends to 1 for
// polynomial growth and stays above 1 for exponential growth.
inline double growth_rate(const InvariantProfile& p) {
  if (p.growth.size() < 2 || p.growth[p.growth.size() - 2] <= 0) return 1.0;
  return p.growth.back() / p.growth[p.growth.size() - 2];
}

enum class VerdictKind { kVerified, kRefuted, kInconclusive };

struct CompareOptions {
  int profile_radius = 3;
  // Uniform bounds; unset means the stage-0 constants.
  std::optional<double> L_bound, A_bound;
  std::optional<std::size_t> codensity_bound;
  QIOptions qi;
};

struct Verdict {
  VerdictKind kind = VerdictKind::kInconclusive;
  double L = 0.0, A = 0.0;
  std::size_t codensity = 0;
  std::size_t stage = 0;
  std::pair<Vertex, Vertex> pair{0, 0};
  std::string reason;
  std::vector<QIConstants> constants;  // per stage, with witnesses
  std::vector<std::pair<InvariantProfile, InvariantProfile>> profiles;  // without witnesses

  std::string headline() const {
    std::ostringstream os;
    os.precision(12);
    switch (kind) {
      case VerdictKind::kVerified:
        os << "VERIFIED(L=" << L << ", A=" << A << ", codensity=" << codensity << ")";
        break;
      case VerdictKind::kRefuted:
        os << "REFUTED-BY-WITNESS-FAILURE(stage=" << stage << ", pair=(" << pair.first << "," << pair.second
           << "))";
        break;
      case VerdictKind::kInconclusive:
        os << "INCONCLUSIVE(profile deltas only; refutation evidence, not proof)";
        break;
    }
    return os.str();
  }

  std::string text() const {
    std::ostringstream os;
    os.precision(12);
    os << headline() << "\n";
    if (!reason.empty()) os << reason << "\n";
    for (std::size_t i = 0; i < constants.size(); ++i) {
      const auto& c = constants[i];
      os << "stage " << i << ": L=" << c.L << " A=" << c.A << " codensity=" << c.codensity
         << (c.sampled ? " sampled_pairs=" : " exact_pairs=") << c.pairs << "\n";
    }
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      const auto& [px, py] = profiles[i];
      os << "stage " << i << ": growth_rate X=" << growth_rate(px) << " Y=" << growth_rate(py)
         << " delta=" << growth_rate(py) - growth_rate(px) << "; lambda2 X=" << px.lambda2 << " Y=" << py.lambda2
         << " delta=" << py.lambda2 - px.lambda2 << "\n";
    }
    return os.str();
  }
};

inline Verdict compare_families(const ApproximationFamily& fx, const ApproximationFamily& fy,
                                const std::optional<std::vector<std::vector<Vertex>>>& witnesses,
                                const CompareOptions& opt = {}) {
  Verdict v;
  if (!witnesses) {
    const std::size_t k = std::min(fx.stages.size(), fy.stages.size());
    for (std::size_t i = 0; i < k; ++i) {
      v.profiles.emplace_back(invariant_profile(fx.stages[i].graph, opt.profile_radius),
                              invariant_profile(fy.stages[i].graph, opt.profile_radius));
    }
    v.kind = VerdictKind::kInconclusive;
    if (fx.stages.size() != fy.stages.size()) v.reason = "stage counts differ; first " + std::to_string(k) + " compared";
    return v;
  }
  if (witnesses->size() != fx.stages.size() || fx.stages.size() != fy.stages.size()) {
    throw invalid_input("compare_families: stage count mismatch");
  }
  for (std::size_t i = 0; i < fx.stages.size(); ++i) {
    v.constants.push_back(verify_qi(fx.stages[i].graph, fy.stages[i].graph, (*witnesses)[i], opt.qi));
  }
  if (v.constants.empty()) {
    v.kind = VerdictKind::kVerified;
    return v;
  }
  const double Lb = opt.L_bound.value_or(v.constants[0].L);
  const double Ab = opt.A_bound.value_or(v.constants[0].A);
  const std::size_t Cb = opt.codensity_bound.value_or(v.constants[0].codensity);
  for (std::size_t i = 0; i < v.constants.size(); ++i) {
    const auto& c = v.constants[i];
    std::string why;
    std::pair<Vertex, Vertex> pair = c.L_pair;
    if (std::isinf(c.L)) {
      why = "map collapses the stage to a point";
    } else if (c.L > Lb) {
      why = "multiplicative constant exceeds the uniform bound";
    } else if (c.A > Ab) {
      why = "additive constant exceeds the uniform bound";
      pair = c.A_pair;
    } else if (c.codensity > Cb) {
      why = "codensity exceeds the uniform bound";
    }
    if (!why.empty()) {
      v.kind = VerdictKind::kRefuted;
      v.stage = i;
      v.pair = pair;
      v.reason = why;
      return v;
    }
    v.L = std::max(v.L, c.L);
    v.A = std::max(v.A, c.A);
    v.codensity = std::max(v.codensity, c.codensity);
  }
  v.kind = VerdictKind::kVerified;
  return v;
}

}  // namespace soficlab
