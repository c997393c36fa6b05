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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "soficlab/coarse.hpp"
#include "soficlab/generators.hpp"

namespace soficlab {
namespace {

std::vector<Vertex> identity_map(std::size_t n) {
  std::vector<Vertex> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = static_cast<Vertex>(i);
  return f;
}

std::vector<Vertex> covering(std::size_t n) {
  std::vector<Vertex> f(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i) f[i] = static_cast<Vertex>(i % n);
  return f;
}

struct OracleQI {
  double L, A;
  int codensity;
};

// The same constants from Floyd-Warshall tables.
OracleQI qi_oracle(const LabeledGraph& X, const LabeledGraph& Y, const std::vector<Vertex>& f) {
  const auto dx = oracle::distances(X), dy = oracle::distances(Y);
  OracleQI o{1.0, 0.0, 0};
  for (std::size_t a = 0; a < f.size(); ++a)
    for (std::size_t b = 0; b < f.size(); ++b)
      if (a != b) o.L = std::max(o.L, double(dy[f[a]][f[b]]) / dx[a][b]);
  for (std::size_t a = 0; a < f.size(); ++a)
    for (std::size_t b = 0; b < f.size(); ++b)
      if (a != b) o.A = std::max(o.A, dx[a][b] / o.L - dy[f[a]][f[b]]);
  for (std::size_t y = 0; y < dy.size(); ++y) {
    int near = oracle::kFar;
    for (Vertex v : f) near = std::min(near, dy[y][v]);
    o.codensity = std::max(o.codensity, near);
  }
  return o;
}

TEST(QI, IdentityIsIsometry) {
  const auto g = build_labeled_graph(random_permutation_approximation(2, 60, 1));
  ASSERT_TRUE(is_connected(g));
  const auto q = verify_qi(g, g, identity_map(60));
  EXPECT_EQ(q.L, 1.0);
  EXPECT_EQ(q.A, 0.0);
  EXPECT_EQ(q.codensity, 0u);
  EXPECT_EQ(q.pairs, 60u * 59u);
  EXPECT_FALSE(q.sampled);
}

TEST(QI, CoveringMapAgainstOracle) {
  for (std::size_t n : {4u, 7u, 12u}) {
    const auto X = cycle_graph(2 * n), Y = cycle_graph(n);
    const auto f = covering(n);
    const auto q = verify_qi(X, Y, f);
    const auto o = qi_oracle(X, Y, f);
    EXPECT_DOUBLE_EQ(q.L, o.L);
    EXPECT_DOUBLE_EQ(q.A, o.A);
    EXPECT_EQ(q.codensity, std::size_t(o.codensity));
    EXPECT_DOUBLE_EQ(q.A, double(n));
  }
}

TEST(QI, RandomMapsAgainstOracle) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 30; ++t) {
    const auto X = cycle_graph(5 + rng() % 15);
    const auto Y = build_labeled_graph(random_permutation_approximation(2, 8 + rng() % 20, rng()));
    if (!is_connected(Y)) continue;
    std::vector<Vertex> f(X.vertex_count());
    for (auto& v : f) v = static_cast<Vertex>(rng() % Y.vertex_count());
    if (std::all_of(f.begin(), f.end(), [&](Vertex v) { return v == f[0]; })) continue;
    const auto q = verify_qi(X, Y, f);
    const auto o = qi_oracle(X, Y, f);
    EXPECT_NEAR(q.L, o.L, 1e-12);
    EXPECT_NEAR(q.A, o.A, 1e-12);
    EXPECT_EQ(q.codensity, std::size_t(o.codensity));
  }
}

TEST(QI, ConstantMapCollapses) {
  const auto q = verify_qi(cycle_graph(10), cycle_graph(3), std::vector<Vertex>(10, 1));
  EXPECT_TRUE(std::isinf(q.L));
  EXPECT_TRUE(std::isinf(q.A));
  EXPECT_EQ(q.codensity, 1u);
}

TEST(QI, RejectsBadMaps) {
  EXPECT_THROW(verify_qi(cycle_graph(4), cycle_graph(4), std::vector<Vertex>{0, 1, 2}), invalid_input);
  EXPECT_THROW(verify_qi(cycle_graph(4), cycle_graph(4), std::vector<Vertex>{0, 1, 2, 9}), invalid_input);
  EXPECT_THROW(verify_qi(path_graph(2), LabeledGraph(2, {{"a", false}}, {}), std::vector<Vertex>{0, 1}), invalid_input);
}

TEST(QI, LargeInputsAreSampled) {
  QIOptions opt;
  opt.exact_limit = 100;
  opt.sample_sources = 10;
  const auto q = verify_qi(cycle_graph(300), cycle_graph(300), identity_map(300), opt);
  EXPECT_TRUE(q.sampled);
  EXPECT_EQ(q.pairs, 10u * 299u);
  EXPECT_EQ(q.L, 1.0);
}

TEST(Growth, SingleVertexOnCycle) {
  const std::size_t n = 15;
  const std::vector<Vertex> A{3};
  const auto rep = neighborhood_growth_check(cycle_graph(n), A, 10);
  ASSERT_EQ(rep.sizes.size(), 11u);
  for (std::size_t m = 0; m <= 10; ++m) EXPECT_EQ(rep.sizes[m], std::min(2 * m + 1, n));
  EXPECT_TRUE(rep.recursion_ok);
  EXPECT_TRUE(rep.bound_ok);
  EXPECT_TRUE(rep.violations.empty());
}

TEST(Growth, SetsOnRandomGraphs) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 10; ++t) {
    const auto g = build_labeled_graph(random_permutation_approximation(2, 200, rng()));
    std::vector<Vertex> A{static_cast<Vertex>(rng() % 200), static_cast<Vertex>(rng() % 200)};
    const auto rep = neighborhood_growth_check(g, A, 6);
    EXPECT_TRUE(rep.recursion_ok && rep.bound_ok);
    EXPECT_TRUE(std::is_sorted(rep.sizes.begin(), rep.sizes.end()));
  }
  EXPECT_THROW(neighborhood_growth_check(cycle_graph(4), std::vector<Vertex>{}, 2), invalid_input);
}

TEST(Profile, CycleCompleteAndTree) {
  const std::size_t n = 20;
  const auto c = invariant_profile(cycle_graph(n), 3);
  EXPECT_EQ(c.degree_histogram, (std::map<std::size_t, std::size_t>{{2, n}}));
  EXPECT_EQ(c.girth, n);
  EXPECT_EQ(c.diameter, n / 2);
  EXPECT_TRUE(c.diameter_exact);
  EXPECT_NEAR(c.lambda2, 2 - 2 * std::cos(2 * std::numbers::pi / n), 1e-9);
  for (int t = 0; t <= 3; ++t) EXPECT_DOUBLE_EQ(c.growth[t], 2.0 * t + 1);
  EXPECT_DOUBLE_EQ(growth_rate(c), 7.0 / 5.0);

  const auto k = invariant_profile(complete_graph(4), 2);
  EXPECT_EQ(k.girth, 3u);
  EXPECT_EQ(k.diameter, 1u);
  EXPECT_NEAR(k.lambda2, 4.0, 1e-9);

  const auto p = invariant_profile(path_graph(6), 1);
  EXPECT_EQ(p.girth, kInfiniteGirth);
  EXPECT_EQ(p.diameter, 5u);
}

TEST(Profile, LargeGraphsUseEstimates) {
  const auto p = invariant_profile(cycle_graph(3000), 2, 1);
  EXPECT_FALSE(p.diameter_exact);
  EXPECT_TRUE(p.growth_sampled);
  EXPECT_EQ(p.diameter, 1500u);  // double sweep is exact on a cycle
  EXPECT_DOUBLE_EQ(p.growth[2], 5.0);
}

TEST(Compare, IdentityWitnessesVerify) {
  const auto fam = graph_family({cycle_graph(6), cycle_graph(12), cycle_graph(24)});
  std::vector<std::vector<Vertex>> w{identity_map(6), identity_map(12), identity_map(24)};
  const auto v = compare_families(fam, fam, w);
  EXPECT_EQ(v.kind, VerdictKind::kVerified);
  EXPECT_EQ(v.headline(), "VERIFIED(L=1, A=0, codensity=0)");
}

TEST(Compare, GrowingAdditiveConstantIsRefuted) {
  const auto fx = graph_family({cycle_graph(10), cycle_graph(20), cycle_graph(40)});
  const auto fy = graph_family({cycle_graph(5), cycle_graph(10), cycle_graph(20)});
  std::vector<std::vector<Vertex>> w{covering(5), covering(10), covering(20)};
  const auto v = compare_families(fx, fy, w);
  ASSERT_EQ(v.kind, VerdictKind::kRefuted);
  EXPECT_EQ(v.stage, 1u);
  EXPECT_NE(v.reason.find("additive"), std::string::npos);
  const auto o = qi_oracle(fx.stages[1].graph, fy.stages[1].graph, w[1]);
  EXPECT_DOUBLE_EQ(v.constants[1].A, o.A);
  // The reported pair realises the additive constant.
  const auto dx = oracle::distances(fx.stages[1].graph), dy = oracle::distances(fy.stages[1].graph);
  const auto [a, b] = v.pair;
  EXPECT_DOUBLE_EQ(dx[a][b] / v.constants[1].L - dy[w[1][a]][w[1][b]], o.A);
  EXPECT_EQ(v.headline().rfind("REFUTED-BY-WITNESS-FAILURE(stage=1, pair=", 0), 0u);

  CompareOptions loose;
  loose.A_bound = 100;
  EXPECT_EQ(compare_families(fx, fy, w, loose).kind, VerdictKind::kVerified);
}

TEST(Compare, NoWitnessesIsInconclusive) {
  const auto fx = graph_family({cycle_graph(16), cycle_graph(64)});
  const auto fy = random_family(2, std::vector<std::size_t>{16, 64}, 3);
  const auto v = compare_families(fx, fy, std::nullopt);
  EXPECT_EQ(v.kind, VerdictKind::kInconclusive);
  ASSERT_EQ(v.profiles.size(), 2u);
  EXPECT_NE(v.text().find("delta"), std::string::npos);
  EXPECT_NE(v.headline().find("not proof"), std::string::npos);
  EXPECT_THROW(compare_families(fx, fy, std::vector<std::vector<Vertex>>{identity_map(16)}), invalid_input);
}

}  // namespace
}  // namespace soficlab
