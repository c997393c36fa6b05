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
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "soficlab/errors.hpp"
#include "soficlab/family.hpp"
#include "soficlab/graph.hpp"
#include "soficlab/random.hpp"

namespace soficlab {

// Delta^{E_R}: -1 for each pair 0 < d(x, y) <= R, diagonal = number of
// such partners. R = 1 is the unnormalised graph Laplacian, R = 0 is zero.
struct SparseLaplacian {
  Eigen::SparseMatrix<double> matrix;
  int radius = 0;
  std::size_t max_degree = 0;  // largest diagonal entry

  std::size_t size() const { return static_cast<std::size_t>(matrix.rows()); }
};

inline SparseLaplacian laplacian(const LabeledGraph& g, int radius) {
  if (radius < 0) throw invalid_input("laplacian: radius must be >= 0");
  const std::size_t n = g.vertex_count();
  std::vector<Eigen::Triplet<double>> trips;
  SparseLaplacian L;
  L.radius = radius;
  for (Vertex x = 0; x < n; ++x) {
    const auto ball = ball_vertices(g, x, radius);
    for (std::size_t i = 1; i < ball.size(); ++i) trips.emplace_back(x, ball[i], -1.0);
    trips.emplace_back(x, x, static_cast<double>(ball.size() - 1));
    L.max_degree = std::max(L.max_degree, ball.size() - 1);
  }
  L.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  L.matrix.setFromTriplets(trips.begin(), trips.end());
  L.matrix.prune(0.0);
  return L;
}

// Connected components of the off-diagonal pattern of L.
inline Components laplacian_components(const SparseLaplacian& L) {
  const auto n = static_cast<Eigen::Index>(L.size());
  std::vector<LabeledEdge> edges;
  for (Eigen::Index k = 0; k < L.matrix.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(L.matrix, k); it; ++it) {
      if (it.row() < it.col() && it.value() != 0.0) {
        edges.push_back({static_cast<Vertex>(it.row()), static_cast<Vertex>(it.col()), 0});
      }
    }
  }
  return connected_components(LabeledGraph(static_cast<std::size_t>(n), {{"e", true}}, std::move(edges)));
}

enum class EigenMethod { kAuto, kIterative, kDense };

struct GapOptions {
  EigenMethod method = EigenMethod::kAuto;
  double tolerance = 1e-8;        // relative, on the eigenvalue
  std::size_t dense_limit = 512;  // kAuto uses the dense solver up to this size
  std::size_t max_iterations = 0; // 0 means 10 n
};

struct GapResult {
  double value = 0.0;
  Eigen::VectorXd vector;  // unit eigenvector (Fiedler vector for one component)
  std::size_t iterations = 0;
  EigenMethod method = EigenMethod::kDense;
};

namespace detail {

inline GapResult dense_gap(const SparseLaplacian& L, std::size_t components) {
  const Eigen::MatrixXd dense(L.matrix);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  GapResult r;
  r.value = solver.eigenvalues()(static_cast<Eigen::Index>(components));
  r.vector = solver.eigenvectors().col(static_cast<Eigen::Index>(components));
  r.method = EigenMethod::kDense;
  return r;
}

// Applies the pseudo-inverse of L on the orthogonal complement of its
// kernel. Each component is grounded at its first vertex; the grounded
// system is positive definite and factored once.
class PseudoInverse {
 public:
  PseudoInverse(const SparseLaplacian& L, const Components& comps) : comps_(comps), n_(L.size()) {
    comp_size_.assign(comps.count, 0);
    for (auto c : comps.id) ++comp_size_[c];
    std::vector<bool> grounded(comps.count, false);
    reduced_.assign(n_, -1);
    Eigen::Index m = 0;
    for (std::size_t v = 0; v < n_; ++v) {
      if (!grounded[comps.id[v]]) {
        grounded[comps.id[v]] = true;
        continue;
      }
      reduced_[v] = m++;
    }
    std::vector<Eigen::Triplet<double>> trips;
    for (Eigen::Index k = 0; k < L.matrix.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(L.matrix, k); it; ++it) {
        const auto r = reduced_[static_cast<std::size_t>(it.row())];
        const auto c = reduced_[static_cast<std::size_t>(it.col())];
        if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
      }
    }
    Eigen::SparseMatrix<double> M(m, m);
    M.setFromTriplets(trips.begin(), trips.end());
    if (m > 0) {
      solver_.compute(M);
      if (solver_.info() != Eigen::Success) throw invalid_input("grounded Laplacian factorisation failed");
    }
    m_ = m;
  }

  void project(Eigen::VectorXd& x) const {
    std::vector<double> sum(comps_.count, 0.0);
    for (std::size_t v = 0; v < n_; ++v) sum[comps_.id[v]] += x(static_cast<Eigen::Index>(v));
    for (std::size_t v = 0; v < n_; ++v) {
      x(static_cast<Eigen::Index>(v)) -= sum[comps_.id[v]] / static_cast<double>(comp_size_[comps_.id[v]]);
    }
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& b) const {
    Eigen::VectorXd rhs(m_);
    for (std::size_t v = 0; v < n_; ++v) {
      if (reduced_[v] >= 0) rhs(reduced_[v]) = b(static_cast<Eigen::Index>(v));
    }
    Eigen::VectorXd y = m_ > 0 ? Eigen::VectorXd(solver_.solve(rhs)) : Eigen::VectorXd(0);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_));
    for (std::size_t v = 0; v < n_; ++v) {
      if (reduced_[v] >= 0) x(static_cast<Eigen::Index>(v)) = y(reduced_[v]);
    }
    project(x);
    return x;
  }

 private:
  const Components& comps_;
  std::size_t n_;
  std::vector<std::size_t> comp_size_;
  std::vector<Eigen::Index> reduced_;
  Eigen::Index m_ = 0;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
};

// Lanczos with full reorthogonalisation on L^+ restricted to ker(L)^perp;
// the largest Ritz value is 1 / lambda_min^+.
inline GapResult lanczos_gap(const SparseLaplacian& L, const Components& comps, const GapOptions& opt) {
  const std::size_t n = L.size();
  const std::size_t dim = n - comps.count;
  PseudoInverse op(L, comps);
  const std::size_t cap = std::min(dim, opt.max_iterations ? opt.max_iterations : 10 * n);

  Eigen::VectorXd q(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) q(static_cast<Eigen::Index>(i)) = std::sin(1.0 + 1.618033988749895 * static_cast<double>(i)) + 0.5;
  op.project(q);
  q.normalize();

  std::vector<Eigen::VectorXd> basis{q};
  std::vector<double> alpha, beta;
  double best_theta = 0.0;
  Eigen::VectorXd best_vec;
  for (std::size_t j = 0; j < cap; ++j) {
    Eigen::VectorXd w = op.apply(basis[j]);
    alpha.push_back(basis[j].dot(w));
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) w -= b.dot(w) * b;
    }
    const double b_next = w.norm();

    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      T(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(T);
    const double theta = ritz.eigenvalues()(m - 1);
    const double residual = std::abs(b_next * ritz.eigenvectors()(m - 1, m - 1));
    best_theta = std::max(best_theta, theta);

    const bool exhausted = b_next <= 1e-14 * std::max(1.0, std::abs(theta)) || j + 1 == dim;
    if (residual <= opt.tolerance * theta || exhausted) {
      Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
      for (Eigen::Index i = 0; i < m; ++i) y += ritz.eigenvectors()(i, m - 1) * basis[static_cast<std::size_t>(i)];
      y.normalize();
      GapResult r;
      r.value = 1.0 / theta;
      r.vector = std::move(y);
      r.iterations = j + 1;
      r.method = EigenMethod::kIterative;
      return r;
    }
    beta.push_back(b_next);
    basis.push_back(w / b_next);
  }
  throw convergence_error("spectral gap: Lanczos did not converge", best_theta > 0 ? 1.0 / best_theta : 0.0);
}

}  // namespace detail

// Smallest eigenvalue above a kernel of dimension `components` (lambda_2 for
// a connected graph), with its eigenvector.
inline GapResult spectral_gap_pair(const SparseLaplacian& L, std::size_t components, const GapOptions& opt = {}) {
  const std::size_t n = L.size();
  if (components < 1) throw invalid_input("spectral_gap: components must be >= 1");
  if (components >= n) throw invalid_input("spectral_gap: no eigenvalue above the kernel");
  const bool dense = opt.method == EigenMethod::kDense || (opt.method == EigenMethod::kAuto && n <= opt.dense_limit);
  if (dense) return detail::dense_gap(L, components);

  const auto comps = laplacian_components(L);
  if (components < comps.count) {
    // The requested index is still inside the true kernel.
    GapResult r;
    r.method = EigenMethod::kIterative;
    r.vector = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t v = 0; v < n; ++v) r.vector(static_cast<Eigen::Index>(v)) = comps.id[v] == 0 ? 1.0 : 0.0;
    r.vector.array() -= r.vector.mean();
    r.vector.normalize();
    return r;
  }
  // Single-vector Lanczos resolves one copy of each eigenvalue, so indices
  // past the first non-zero eigenvalue go to the dense solver.
  if (components > comps.count) return detail::dense_gap(L, components);
  return detail::lanczos_gap(L, comps, opt);
}

inline double spectral_gap(const SparseLaplacian& L, std::size_t components, const GapOptions& opt = {}) {
  return spectral_gap_pair(L, components, opt).value;
}

struct CheegerResult {
  std::vector<Vertex> cut_set;  // the smaller side, ascending
  std::size_t boundary_edges = 0;
  double ratio = 0.0;  // |boundary| / |cut_set|
  double lambda2 = 0.0;
};

// Sweep over the Fiedler vector: every prefix S of the sorted order is scored
// by |E(S, S^c)| / min(|S|, |S^c|) on the edges of L; the best smaller side
// is returned.
inline CheegerResult cheeger_sweep(const SparseLaplacian& L, const LabeledGraph& graph, const GapOptions& opt = {}) {
  const std::size_t n = L.size();
  if (graph.vertex_count() != n) throw invalid_input("cheeger_sweep: graph and Laplacian sizes differ");
  if (n < 2) throw invalid_input("cheeger_sweep: need at least two vertices");
  if (laplacian_components(L).count != 1) throw invalid_input("cheeger_sweep: graph must be connected");
  const auto gap = spectral_gap_pair(L, 1, opt);

  std::vector<Vertex> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<Vertex>(i);
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    return gap.vector(static_cast<Eigen::Index>(a)) < gap.vector(static_cast<Eigen::Index>(b));
  });

  std::vector<bool> inside(n, false);
  long long boundary = 0;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_k = 0;
  long long best_boundary = 0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const Vertex v = order[k];
    for (Eigen::SparseMatrix<double>::InnerIterator it(L.matrix, v); it; ++it) {
      if (static_cast<Vertex>(it.row()) == v) continue;
      boundary += inside[static_cast<std::size_t>(it.row())] ? -1 : 1;
    }
    inside[v] = true;
    const std::size_t small = std::min(k + 1, n - k - 1);
    const double ratio = static_cast<double>(boundary) / static_cast<double>(small);
    if (ratio < best) {
      best = ratio;
      best_k = k + 1;
      best_boundary = boundary;
    }
  }
  CheegerResult r;
  r.lambda2 = gap.value;
  r.ratio = best;
  r.boundary_edges = static_cast<std::size_t>(best_boundary);
  if (best_k <= n - best_k) {
    r.cut_set.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_k));
  } else {
    r.cut_set.assign(order.begin() + static_cast<std::ptrdiff_t>(best_k), order.end());
  }
  std::sort(r.cut_set.begin(), r.cut_set.end());
  return r;
}

struct ExpanderStage {
  std::size_t size = 0;
  double lambda2 = 0.0;
  bool pass = false;
};

struct ExpanderReport {
  double bound = 0.0;
  int radius = 1;
  bool pass = true;
  std::vector<ExpanderStage> stages;

  std::string text() const {
    std::ostringstream os;
    os << "uniform spectral gap indicator (finite stages only; not a proof of property (T))\n";
    os << "bound c = " << bound << ", R = " << radius << ", verdict: " << (pass ? "PASS" : "FAIL") << "\n";
    for (std::size_t i = 0; i < stages.size(); ++i) {
      os << "stage " << i << ": n = " << stages[i].size << ", lambda2 = " << stages[i].lambda2 << " -> "
         << (stages[i].pass ? "pass" : "fail") << "\n";
    }
    return os.str();
  }
};

// Passes iff lambda_2(Delta^{E_R}(X_i)) >= c at every stage. Disconnected
// stages have lambda_2 = 0.
inline ExpanderReport expander_certificate(const ApproximationFamily& family, double c, int radius = 1,
                                           const GapOptions& opt = {}) {
  ExpanderReport rep;
  rep.bound = c;
  rep.radius = radius;
  for (const auto& stage : family.stages) {
    ExpanderStage s;
    s.size = stage.size();
    if (s.size >= 2) s.lambda2 = spectral_gap(laplacian(stage.graph, radius), 1, opt);
    s.pass = s.lambda2 >= c;
    rep.pass = rep.pass && s.pass;
    rep.stages.push_back(s);
  }
  return rep;
}

// Symmetric kernel with zero diagonal on a list of points.
struct KernelTable {
  std::vector<Vertex> points;
  Eigen::MatrixXd values;

  static KernelTable from_function(std::vector<Vertex> points, const std::function<double(Vertex, Vertex)>& k) {
    KernelTable t;
    const auto n = static_cast<Eigen::Index>(points.size());
    t.values.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) t.values(i, j) = k(points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)]);
    }
    t.points = std::move(points);
    return t;
  }

  KernelTable restrict_to(const std::vector<std::size_t>& idx) const {
    KernelTable t;
    const auto m = static_cast<Eigen::Index>(idx.size());
    t.values.resize(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      t.points.push_back(points[idx[static_cast<std::size_t>(i)]]);
      for (Eigen::Index j = 0; j < m; ++j) {
        t.values(i, j) = values(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(i)]),
                                static_cast<Eigen::Index>(idx[static_cast<std::size_t>(j)]));
      }
    }
    return t;
  }
};

// Largest eigenvalue of P K P with P the centring projector: the maximum of
// sum_ij l_i l_j K_ij over unit vectors l with sum l_i = 0.
inline double cnd_defect(const KernelTable& K) {
  const auto n = K.values.rows();
  if (K.values.cols() != n) throw invalid_input("kernel table must be square");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (K.values(i, i) != 0.0) throw invalid_input("kernel must vanish on the diagonal");
    for (Eigen::Index j = 0; j < i; ++j) {
      if (K.values(i, j) != K.values(j, i)) throw invalid_input("kernel is not symmetric");
    }
  }
  if (n < 2) return 0.0;
  const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  const Eigen::MatrixXd M = P * K.values * P;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (M + M.transpose()), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(n - 1);
}

inline bool verify_cnd(const KernelTable& K, double tol = 1e-9) { return cnd_defect(K) <= tol; }

struct EmbeddingStage {
  bool pass = true;
  bool sandwich_ok = true;
  bool cnd_ok = true;
  std::string counterexample;
};

struct EmbeddingReport {
  bool pass = true;
  std::vector<EmbeddingStage> stages;
};

// Per stage: rho1(d) <= K(x, y) <= rho2(d) over all pairs x != y, then
// `samples` random point sets of diameter <= radii[i] checked for
// conditional negative definiteness. Kernels are indexed by vertex.
inline EmbeddingReport verify_asymptotic_embedding(const ApproximationFamily& family,
                                                   const std::vector<KernelTable>& kernels,
                                                   const std::function<double(double)>& rho1,
                                                   const std::function<double(double)>& rho2,
                                                   const std::vector<int>& radii, std::size_t samples,
                                                   std::uint64_t seed = 0, double tol = 1e-9,
                                                   std::size_t max_subset = 64) {
  if (kernels.size() != family.stages.size() || radii.size() != family.stages.size()) {
    throw invalid_input("verify_asymptotic_embedding: stage/kernel count mismatch");
  }
  EmbeddingReport rep;
  for (std::size_t i = 0; i < family.stages.size(); ++i) {
    const auto& g = family.stages[i].graph;
    const std::size_t n = g.vertex_count();
    const auto& K = kernels[i];
    if (static_cast<std::size_t>(K.values.rows()) != n) throw invalid_input("kernel size does not match stage");
    const auto dist = all_pairs_distances(g);
    EmbeddingStage st;
    for (std::size_t x = 0; x < n && st.sandwich_ok; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (x == y) continue;
        const double d = dist[x * n + y];
        const double k = K.values(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
        if (d < 0 || rho1(d) > k || k > rho2(d)) {
          st.sandwich_ok = false;
          std::ostringstream os;
          os << "sandwich fails at (" << x << ", " << y << "): d = " << d << ", K = " << k;
          st.counterexample = os.str();
          break;
        }
      }
    }
    Rng rng(stage_seed(seed, i));
    for (std::size_t s = 0; s < samples && st.cnd_ok && n > 0; ++s) {
      std::vector<Vertex> order(n);
      for (std::size_t v = 0; v < n; ++v) order[v] = static_cast<Vertex>(v);
      shuffle(std::span<Vertex>(order), rng);
      std::vector<std::size_t> chosen;
      for (Vertex v : order) {
        bool ok = true;
        for (auto c : chosen) {
          const int d = dist[c * n + v];
          if (d < 0 || d > radii[i]) {
            ok = false;
            break;
          }
        }
        if (ok) chosen.push_back(v);
        if (chosen.size() >= max_subset) break;
      }
      std::sort(chosen.begin(), chosen.end());
      const double defect = cnd_defect(K.restrict_to(chosen));
      if (defect > tol) {
        st.cnd_ok = false;
        std::ostringstream os;
        os << "CND fails on a " << chosen.size() << "-point subset (max eigenvalue " << defect << ")";
        st.counterexample = os.str();
      }
    }
    st.pass = st.sandwich_ok && st.cnd_ok;
    rep.pass = rep.pass && st.pass;
    rep.stages.push_back(std::move(st));
  }
  return rep;
}

}  // namespace soficlab
