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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <queue>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "soficlab.hpp"

using namespace soficlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Clock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// Plain BFS distance table, independent of the library.
std::vector<std::vector<int>> bfs_table(const LabeledGraph& g) {
  const auto adj = oracle::adjacency(g);
  const std::size_t n = adj.size();
  std::vector<std::vector<int>> d(n, std::vector<int>(n, oracle::kFar));
  for (std::size_t s = 0; s < n; ++s) {
    std::queue<Vertex> q;
    d[s][s] = 0;
    q.push(static_cast<Vertex>(s));
    while (!q.empty()) {
      const Vertex x = q.front();
      q.pop();
      for (Vertex y : adj[x]) {
        if (d[s][y] == oracle::kFar) {
          d[s][y] = d[s][x] + 1;
          q.push(y);
        }
      }
    }
  }
  return d;
}

Outcome ac1() {
  Clock clock;
  Outcome o;
  std::size_t checks = 0;
  for (int d : {1, 2}) {
    const auto model = GroupModel::free_abelian(d);
    const auto F = ball_elements(model, 2);
    std::vector<std::size_t> moduli;
    if (d == 1) {
      for (std::size_t n = 3; n <= 64; ++n) moduli.push_back(n);
    } else {
      moduli = {3, 4, 5, 8, 16, 32, 64};
    }
    const auto fam = quotient_approximation(model, moduli);
    for (std::size_t i = 0; i < moduli.size(); ++i) {
      const auto& st = fam.stages[i];
      const auto rep = good_set(*st.action, F);
      if (rep.defect != 0.0) {
        o.pass = false;
        o.detail += " good_set d=" + std::to_string(d) + " n=" + std::to_string(moduli[i]);
      }
      const int rmax = static_cast<int>((moduli[i] - 2) / 2);
      for (int r = 0; r <= rmax; ++r) {
        const auto bs = bs_defect_counts(st.graph, r, model, 1 << 14);
        ++checks;
        if (bs.mismatched != 0) {
          o.pass = false;
          o.detail += " bs d=" + std::to_string(d) + " n=" + std::to_string(moduli[i]) + " r=" + std::to_string(r);
        }
      }
    }
  }
  const double t = clock.seconds();
  if (t >= 10.0) o.pass = false;
  o.detail = std::to_string(checks) + " (n, r) bs_defect checks, time " + num(t) + " s (< 10 s)" + o.detail;
  return o;
}

Outcome ac2() {
  Outcome o;
  const auto Z = GroupModel::free_abelian(1);
  const auto F = ball_elements(Z, 2);
  std::vector<std::size_t> sizes;
  for (std::size_t n = 10; n <= 100; ++n) sizes.push_back(n);
  const auto fam = folner_approximation(Z, sizes);
  double prev = 1.0, worst = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const auto& act = *fam.stages[i].action;
    const auto rep = good_set(act, F);
    const auto expected = oracle::good_set_oracle(act, F);
    if (rep.good.size() != expected.size() || rep.good != expected) {
      o.pass = false;
      o.detail += " mismatch at n=" + std::to_string(sizes[i]);
    }
    if (i > 0 && rep.defect > prev + 1.0 / double(sizes[i])) {
      o.pass = false;
      o.detail += " non-monotone at n=" + std::to_string(sizes[i]);
    }
    prev = rep.defect;
    worst = std::max(worst, rep.defect);
  }
  o.detail = "91 stages n=10..100, oracle |Y| equal, max defect " + num(worst) + ", final " + num(prev) + o.detail;
  return o;
}

Outcome ac3() {
  Outcome o;
  struct Case {
    std::size_t a, b;
    std::vector<std::size_t> sizes;
  };
  for (const auto& c : {Case{1, 2, {100, 400, 1000}}, Case{2, 3, {100, 300, 666}}}) {
    const auto fam = mixed_family(c.a, c.b, c.sizes, 8, 2024);
    const auto est = amenable_mass_estimate(fam, 3);
    for (std::size_t i = 0; i < fam.stages.size(); ++i) {
      const auto& s = est.stages[i];
      const auto& g = fam.stages[i].graph;
      // The exact ratio, as integers.
      if (s.amenable * c.b != s.total * c.a) o.pass = false;
      // Cycle parts have girth >= 100, so the stage girth is the tree-part girth.
      const auto measured = oracle::girth(g);
      if (measured < 8 || double(measured) != fam.stages[i].metadata.at("girth_achieved")) o.pass = false;
      o.detail += " (" + std::to_string(c.a) + "," + std::to_string(c.b) + ") n=" + std::to_string(g.vertex_count()) +
                  " mass=" + std::to_string(s.amenable) + "/" + std::to_string(s.total) +
                  " girth=" + std::to_string(measured);
    }
  }
  return o;
}

Outcome ac4() {
  Clock clock;
  Outcome o;
  double worst_rel = 0.0, worst_pair = 0.0;
  std::vector<std::size_t> ns;
  for (std::size_t n = 3; n <= 64; ++n) ns.push_back(n);
  for (std::size_t n : {100u, 127u, 255u, 256u, 511u, 512u, 513u, 1000u, 1024u, 2047u, 2048u, 3000u, 4095u, 4096u}) ns.push_back(n);
  for (std::size_t n : ns) {
    const double expected = 2 - 2 * std::cos(2 * std::numbers::pi / double(n));
    const double got = spectral_gap(laplacian(cycle_graph(n), 1), 1);
    worst_rel = std::max(worst_rel, std::abs(got - expected) / expected);
  }
  if (worst_rel > 1e-6) o.pass = false;
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 20 + rng() % 493;
    const auto g = build_labeled_graph(random_permutation_approximation(1 + t % 3, n, rng()));
    const auto L = laplacian(g, 1 + t % 2);
    const auto c = laplacian_components(L).count;
    const double dense = spectral_gap(L, c, {EigenMethod::kDense});
    const double iter = spectral_gap(L, c, {EigenMethod::kIterative});
    worst_pair = std::max(worst_pair, std::abs(dense - iter));
  }
  if (worst_pair > 1e-6) o.pass = false;
  const double t = clock.seconds();
  if (t >= 60.0) o.pass = false;
  o.detail = std::to_string(ns.size()) + " cycles up to 4096, max rel err " + num(worst_rel) +
             "; 50 graphs, max |dense-iterative| " + num(worst_pair) + "; time " + num(t) + " s (< 60 s)";
  return o;
}

Outcome ac5() {
  Outcome o;
  std::mt19937_64 rng(5);
  std::size_t graphs = 0, violations = 0;
  while (graphs < 100) {
    const std::size_t n = 8 + rng() % 300;
    const auto g = build_labeled_graph(random_permutation_approximation(1 + rng() % 3, n, rng()));
    const int R = 1 + static_cast<int>(rng() % 2);
    const auto L = laplacian(g, R);
    if (laplacian_components(L).count != 1) continue;
    // The sweep runs on the entourage graph itself.
    const auto c = cheeger_sweep(L, g);
    const double lo = c.lambda2 / 2, hi = std::sqrt(2 * double(L.max_degree) * c.lambda2);
    if (lo > c.ratio + 1e-9 || c.ratio > hi + 1e-9) ++violations;
    ++graphs;
  }
  o.pass = violations == 0;
  o.detail = std::to_string(graphs) + " connected graphs, " + std::to_string(violations) + " violations";
  return o;
}

Outcome ac6() {
  Outcome o;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t trials = 0, failures = 0;
  double worst = 0.0;
  while (trials < 500) {
    LabeledGraph g;
    switch (trials % 3) {
      case 0: g = cycle_graph(10 + rng() % 247); break;
      case 1: g = build_labeled_graph(random_permutation_approximation(2, 10 + rng() % 247, rng())); break;
      default: {
        const std::size_t side = 3 + rng() % 14;
        g = quotient_approximation(GroupModel::free_abelian(2), std::vector<std::size_t>{side}).stages[0].graph;
      }
    }
    const std::size_t n = g.vertex_count();
    const auto d = bfs_table(g);
    const int R = 1 + static_cast<int>(rng() % 2);
    std::size_t nr = 0;
    for (std::size_t x = 0; x < n; ++x) {
      std::size_t b = 0;
      for (std::size_t y = 0; y < n; ++y) b += d[x][y] <= R ? 1 : 0;
      nr = std::max(nr, b);
    }
    // Dense field, then its sparse form.
    std::vector<std::vector<double>> eta(n, std::vector<double>(n, 0.0));
    double eps;
    int support = 0;
    if (trials % 2 == 0) {
      // Mixture (1 - alpha) mu + alpha nu_x: variation <= 2 alpha = eps / N_R.
      eps = 0.05 + unit(rng);
      const double alpha = eps / (2.0 * double(nr));
      // mu is a random measure on each connected component.
      std::vector<double> mu(n);
      for (auto& m : mu) m = unit(rng);
      const int s = 1 + static_cast<int>(rng() % 3);
      for (std::size_t x = 0; x < n; ++x) {
        std::vector<double> nu(n, 0.0);
        double w = 0, z = 0;
        for (std::size_t y = 0; y < n; ++y) {
          if (d[x][y] <= s) w += (nu[y] = unit(rng));
          if (d[x][y] < oracle::kFar) z += mu[y];
        }
        for (std::size_t y = 0; y < n; ++y) {
          eta[x][y] = (d[x][y] < oracle::kFar ? (1 - alpha) * mu[y] / z : 0.0) + alpha * nu[y] / w;
        }
      }
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) support = std::max(support, d[x][y] < oracle::kFar ? d[x][y] : 0);
      if (support == 0 && n > 1) continue;
    } else {
      // Uniform measure on B_s(x); eps is set from the measured variation.
      support = 1 + static_cast<int>(rng() % 6);
      for (std::size_t x = 0; x < n; ++x) {
        double b = 0;
        for (std::size_t y = 0; y < n; ++y) b += d[x][y] <= support ? 1 : 0;
        for (std::size_t y = 0; y < n; ++y) eta[x][y] = d[x][y] <= support ? 1.0 / b : 0.0;
      }
      double maxvar = 0;
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
          if (x == y || d[x][y] > R) continue;
          double v = 0;
          for (std::size_t z = 0; z < n; ++z) v += std::abs(eta[x][z] - eta[y][z]);
          maxvar = std::max(maxvar, v);
        }
      eps = double(nr) * maxvar * (1 + 1e-9);
      if (eps == 0) eps = 1e-9;
    }
    ProbField field;
    field.support_radius = support;
    for (std::size_t x = 0; x < n; ++x) {
      std::vector<ProbField::Entry> row;
      for (std::size_t y = 0; y < n; ++y) {
        if (eta[x][y] > 0) row.push_back({static_cast<Vertex>(y), eta[x][y]});
      }
      field.eta.push_back(std::move(row));
    }
    try {
      const auto res = propA_to_folner(g, field, R, eps);
      // Independent evaluation of sum over ordered pairs in E_R.
      double total = 0;
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          if (x != y && d[x][y] <= R) total += std::abs(res.phi[x] - res.phi[y]);
      worst = std::max(worst, total / eps);
      if (total > eps * (1 + 1e-9)) ++failures;
    } catch (const std::exception& e) {
      ++failures;
      if (o.detail.empty()) o.detail = std::string(" first error: ") + e.what();
    }
    ++trials;
  }
  o.pass = failures == 0;
  o.detail = std::to_string(trials) + " fields, " + std::to_string(failures) + " failures, max sum/eps " + num(worst) + o.detail;
  return o;
}

Outcome ac7() {
  Outcome o;
  std::size_t cycles = 0, corpus = 0;
  for (std::size_t n = 6; n <= 240; n += 6) {
    for (std::size_t K = 1; K <= n; ++K) {
      if (n % K) continue;
      const auto p = hyperfinite_partition(cycle_graph(n), K);
      ++cycles;
      const std::size_t want = K == n ? 0 : n / K;
      if (p.cut_edges != want) {
        o.pass = false;
        o.detail += " C" + std::to_string(n) + "/K=" + std::to_string(K) + " cut " + std::to_string(p.cut_edges);
      }
    }
  }
  std::mt19937_64 rng(7);
  for (int t = 0; t < 60; ++t) {
    LabeledGraph g = t % 2 ? build_labeled_graph(random_permutation_approximation(1 + t % 3, 50 + rng() % 500, rng()))
                           : quotient_approximation(GroupModel::free_abelian(2), std::vector<std::size_t>{3 + rng() % 20}).stages[0].graph;
    const std::size_t K = 1 + rng() % 40;
    const auto p = hyperfinite_partition(g, K);
    ++corpus;
    for (const auto& part : p.parts) {
      if (part.size() > K) o.pass = false;
    }
  }
  o.detail = std::to_string(cycles) + " cycle/divisor pairs at n/K cuts, " + std::to_string(corpus) + " corpus graphs within K" + o.detail;
  return o;
}

Outcome ac8() {
  Outcome o;
  std::size_t stages = 0;
  std::vector<ApproximationFamily> families;
  for (int d : {1, 2}) {
    const std::vector<std::size_t> moduli{3, 7, 16, 30};
    families.push_back(quotient_approximation(GroupModel::free_abelian(d), moduli));
    const std::vector<std::size_t> boxes{4, 9, 20, 40};
    families.push_back(folner_approximation(GroupModel::free_abelian(d), boxes));
  }
  for (int k : {1, 2, 3}) families.push_back(random_family(k, std::vector<std::size_t>{10, 50, 200, 1000}, 88 + k));
  for (const auto& fam : families) {
    for (const auto& st : fam.stages) {
      for (int r : {1, 2}) {
        const auto F = ball_elements(st.action->model(), r);
        const auto rep = good_set(*st.action, F);
        const auto core = finite_core(*st.action, F);
        const double n = double(st.size());
        ++stages;
        if (double(core.size()) < (1.0 - double(F.size()) * rep.defect) * n - 1e-9) {
          o.pass = false;
          o.detail += " " + fam.construction + " n=" + std::to_string(st.size()) + " r=" + std::to_string(r);
        }
      }
    }
  }
  o.detail = std::to_string(stages) + " (stage, F) checks" + o.detail;
  return o;
}

KernelTable table_of(const std::vector<std::vector<double>>& K) {
  KernelTable t;
  const auto n = static_cast<Eigen::Index>(K.size());
  t.values.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    t.points.push_back(static_cast<Vertex>(i));
    for (Eigen::Index j = 0; j < n; ++j) t.values(i, j) = K[std::size_t(i)][std::size_t(j)];
  }
  return t;
}

Outcome ac9() {
  Outcome o;
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  std::vector<std::pair<std::string, std::vector<std::vector<double>>>> kernels;
  auto metric = [](const LabeledGraph& g) {
    const auto d = oracle::distances(g);
    std::vector<std::vector<double>> K(d.size(), std::vector<double>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = 0; j < d.size(); ++j) K[i][j] = d[i][j];
    return K;
  };
  for (int t = 0; t < 13; ++t) {
    const std::size_t n = 5 + rng() % 16;
    std::vector<LabeledEdge> edges;
    for (std::size_t i = 1; i < n; ++i) edges.push_back({static_cast<Vertex>(rng() % i), static_cast<Vertex>(i), 0});
    kernels.emplace_back("tree", metric(LabeledGraph(n, {{"e", true}}, edges)));
  }
  for (int t = 0; t < 12; ++t) kernels.emplace_back("cycle", metric(cycle_graph(4 + rng() % 17)));
  for (int t = 0; t < 13; ++t) {
    // Squared Euclidean distances plus a small multiple of a tree metric
    // (still of negative type) or a small symmetric spike (not).
    const std::size_t n = 6 + rng() % 12;
    std::vector<std::array<double, 2>> p(n);
    for (auto& x : p) x = {normal(rng), normal(rng)};
    std::vector<std::vector<double>> K(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) K[i][j] = std::pow(p[i][0] - p[j][0], 2) + std::pow(p[i][1] - p[j][1], 2);
    if (t % 2 == 0) {
      const auto path = metric(path_graph(n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) K[i][j] += 0.05 * path[i][j];
    } else {
      const std::size_t a = rng() % n, b = (a + 1 + rng() % (n - 1)) % n;
      K[a][b] = K[b][a] = K[a][b] - 1.0;
    }
    kernels.emplace_back("perturbed", K);
  }
  for (int t = 0; t < 12; ++t) {
    const std::size_t n = 5 + rng() % 12;
    std::vector<std::vector<double>> K;
    if (t % 2 == 0) {
      K = metric(cycle_graph(n));
      for (auto& row : K)
        for (auto& x : row) x = -x;
    } else {
      // Tree metric plus a large rank-one term with zero diagonal.
      K = metric(path_graph(n));
      std::vector<double> w(n);
      for (auto& x : w) x = normal(rng);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) K[i][j] += 5.0 * double(n) * (w[i] * w[j]);
    }
    kernels.emplace_back("adversarial", K);
  }
  std::size_t disagreements = 0, cnd = 0;
  for (std::size_t k = 0; k < kernels.size(); ++k) {
    const auto& [kind, K] = kernels[k];
    const double exact = cnd_defect(table_of(K));
    const bool verdict = exact <= 1e-9;
    const double sampled = oracle::sampled_cnd_max(K, 10000, 1000 + k);
    const bool oracle_verdict = sampled <= 1e-9;
    cnd += verdict ? 1 : 0;
    if (verdict != oracle_verdict || sampled > exact + 1e-9) {
      ++disagreements;
      o.detail += " [" + kind + " #" + std::to_string(k) + " eigen " + num(exact) + " sampled " + num(sampled) + "]";
    }
  }
  o.pass = disagreements == 0;
  o.detail = std::to_string(kernels.size()) + " kernels (" + std::to_string(cnd) + " CND), " +
             std::to_string(disagreements) + " disagreements" + o.detail;
  return o;
}

Outcome ac10() {
  Outcome o;
  std::size_t identities = 0, coverings = 0, recursions = 0;
  std::mt19937_64 rng(10);
  for (int t = 0; t < 10; ++t) {
    const auto g = t % 2 ? cycle_graph(5 + rng() % 60)
                         : quotient_approximation(GroupModel::free_abelian(2), std::vector<std::size_t>{3 + rng() % 10}).stages[0].graph;
    std::vector<Vertex> id(g.vertex_count());
    for (std::size_t i = 0; i < id.size(); ++i) id[i] = static_cast<Vertex>(i);
    const auto q = verify_qi(g, g, id);
    ++identities;
    if (q.L != 1.0 || q.A != 0.0 || q.codensity != 0) o.pass = false;
  }
  for (std::size_t n = 3; n <= 64; ++n) {
    const auto X = cycle_graph(2 * n), Y = cycle_graph(n);
    std::vector<Vertex> f(2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i) f[i] = static_cast<Vertex>(i % n);
    const auto q = verify_qi(X, Y, f);
    const auto dx = oracle::distances(X), dy = oracle::distances(Y);
    double L = 1, A = 0;
    for (std::size_t a = 0; a < 2 * n; ++a)
      for (std::size_t b = 0; b < 2 * n; ++b)
        if (a != b) L = std::max(L, double(dy[f[a]][f[b]]) / dx[a][b]);
    for (std::size_t a = 0; a < 2 * n; ++a)
      for (std::size_t b = 0; b < 2 * n; ++b)
        if (a != b) A = std::max(A, dx[a][b] / L - dy[f[a]][f[b]]);
    ++coverings;
    if (q.L != L || q.A != A || q.codensity != 0) {
      o.pass = false;
      o.detail += " covering n=" + std::to_string(n);
    }
  }
  for (int t = 0; t < 40; ++t) {
    const auto Y = build_labeled_graph(random_permutation_approximation(1 + t % 3, 20 + rng() % 200, rng()));
    std::vector<Vertex> A;
    for (std::size_t k = 0, m = 1 + rng() % 4; k < m; ++k) A.push_back(static_cast<Vertex>(rng() % Y.vertex_count()));
    const int steps = 1 + static_cast<int>(rng() % 8);
    const auto rep = neighborhood_growth_check(Y, A, steps);
    const auto d = bfs_table(Y);
    ++recursions;
    bool ok = rep.recursion_ok;
    for (int m = 0; m <= steps; ++m) {
      std::size_t count = 0;
      for (std::size_t y = 0; y < Y.vertex_count(); ++y) {
        bool near = false;
        for (Vertex a : A) near = near || d[y][a] <= m;
        count += near ? 1 : 0;
      }
      ok = ok && rep.sizes[std::size_t(m)] == count;
    }
    if (!ok) o.pass = false;
  }
  o.detail = std::to_string(identities) + " identity witnesses at (1,0,0), " + std::to_string(coverings) +
             " coverings match the all-pairs oracle, " + std::to_string(recursions) + " recursion instances" + o.detail;
  return o;
}

int run(const std::string& args) {
  const int status = std::system((std::string(SOFICLAB_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome ac11() {
  Outcome o;
  const auto base = fs::temp_directory_path() / "soficlab_acceptance";
  fs::remove_all(base);
  const std::vector<std::pair<std::string, std::string>> specs{
      {"--construction quotient --rank 2 --sizes 4,8,16", "good_set,finite_core,bs_defect,ball_distribution,spectral_gap,folner_search,hyperfinite_partition,expander_certificate"},
      {"--construction folner --rank 1 --sizes 10,40,160", "good_set,finite_core,bs_defect,ball_distribution,spectral_gap,folner_search"},
      {"--construction random --rank 2 --sizes 100,400,1600", "good_set,bs_defect,ball_distribution,spectral_gap,folner_search,hyperfinite_partition"},
      {"--construction mixed --a 1 --b 2 --sizes 100,400 --girth 8", "ball_distribution,spectral_gap,folner_search,hyperfinite_partition,amenable_mass_estimate"},
  };
  std::size_t files = 0;
  for (std::size_t s = 0; s < specs.size(); ++s) {
    for (const char* runid : {"a", "b"}) {
      const auto dir = base / std::to_string(s) / runid;
      if (run("generate " + specs[s].first + " --seed 77 --out-dir " + (dir / "fam").string()) != 0 ||
          run("analyze " + (dir / "fam/manifest.json").string() + " --tasks " + specs[s].second + " --seed 77 --out-dir " +
              (dir / "an").string()) != 0) {
        o.pass = false;
        o.detail += " command failed for spec " + std::to_string(s);
      }
    }
    const auto a = base / std::to_string(s) / "a";
    for (const auto& e : fs::recursive_directory_iterator(a)) {
      if (!e.is_regular_file()) continue;
      ++files;
      const auto other = base / std::to_string(s) / "b" / fs::relative(e.path(), a);
      if (!fs::exists(other) || io::read_text(e.path()) != io::read_text(other)) {
        o.pass = false;
        o.detail += " differs: " + fs::relative(e.path(), base).string();
      }
    }
  }
  fs::remove_all(base);
  o.detail = std::to_string(files) + " files byte-identical across two runs" + o.detail;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9, ac10, ac11};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::cout << "AC" << i + 1 << ' ' << (o.pass ? "PASS" : "FAIL") << ' ' << o.detail << std::endl;
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
