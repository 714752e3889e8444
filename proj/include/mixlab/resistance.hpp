#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/IterativeLinearSolvers>

#include "mixlab/errors.hpp"
#include "mixlab/graph.hpp"
#include "mixlab/rng.hpp"

namespace mixlab {

// Green data of the walk killed on exiting a vertex set B.
class KilledWalkData {
 public:
  KilledWalkData(const WeightedGraph& g, std::vector<int> B)
      : g_(&g), B_(std::move(B)) {
    std::sort(B_.begin(), B_.end());
    B_.erase(std::unique(B_.begin(), B_.end()), B_.end());
    int n = g.vertex_count();
    if (static_cast<int>(B_.size()) >= n)
      throw EmptyComplement("killed walk needs a nonempty complement");
    if (B_.empty()) throw Error("empty set");
    pos_.assign(n, -1);
    for (size_t i = 0; i < B_.size(); ++i) pos_[B_[i]] = static_cast<int>(i);

    int k = static_cast<int>(B_.size());
    // substochastic restriction P_B and the occupation matrix (I - P_B)^{-1}
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(k, k);
    for (int i = 0; i < k; ++i) {
      int x = B_[i];
      const int* nb = g.neighbors(x);
      const double* w = g.incident_weights(x);
      for (int d = 0; d < g.degree(x); ++d) {
        int j = pos_[nb[d]];
        if (j >= 0) M(i, j) -= w[d] / g.mu(x);
      }
    }
    occupation_ = M.partialPivLu().solve(Eigen::MatrixXd::Identity(k, k));
  }

  const std::vector<int>& set() const { return B_; }
  bool contains(int x) const { return pos_[x] >= 0; }

  // g_B(x,y) = mu_y^{-1} E_x[visits to y before exiting B]
  double green(int x, int y) const {
    int i = pos_.at(x), j = pos_.at(y);
    if (i < 0 || j < 0) return 0.0;
    return occupation_(i, j) / g_->mu(y);
  }

  double exit_expectation(int x) const {  // E_x tau_B
    int i = pos_.at(x);
    if (i < 0) return 0.0;
    return occupation_.row(i).sum();
  }

  // P_x(tau_B > n) for n = 0..horizon
  std::vector<double> exit_tail(int x, long horizon) const {
    int k = static_cast<int>(B_.size());
    std::vector<double> tail;
    tail.reserve(horizon + 1);
    if (pos_[x] < 0) {
      tail.assign(horizon + 1, 0.0);
      return tail;
    }
    Eigen::VectorXd u = Eigen::VectorXd::Zero(k);
    u(pos_[x]) = 1.0;
    for (long m = 0; m <= horizon; ++m) {
      tail.push_back(u.sum());
      // u <- u P_B
      Eigen::VectorXd next = Eigen::VectorXd::Zero(k);
      for (int i = 0; i < k; ++i) {
        if (u(i) == 0.0) continue;
        int xx = B_[i];
        double inv = u(i) / g_->mu(xx);
        const int* nb = g_->neighbors(xx);
        const double* w = g_->incident_weights(xx);
        for (int d = 0; d < g_->degree(xx); ++d) {
          int j = pos_[nb[d]];
          if (j >= 0) next(j) += inv * w[d];
        }
      }
      u.swap(next);
    }
    return tail;
  }

 private:
  const WeightedGraph* g_;
  std::vector<int> B_;
  std::vector<int> pos_;
  Eigen::MatrixXd occupation_;
};

// Dirichlet-form solver: effective resistances, Green functions, hitting
// probabilities, commute times. Factorization happens at construction;
// queries are const and safe to run from several threads.
struct ResistanceOptions {
  int dense_limit = 5000;          // dense factorization cutoff
  int exact_diameter_limit = 2000; // all-pairs diameter cutoff
  double cg_tol = 1e-10;
  int diameter_samples = 64;       // sampled pairs beyond the exact cutoff
};

class ResistanceOracle {
 public:
  struct DiameterResult {
    double value = 0.0;
    bool exact = true;
    int x = 0, y = 0;
  };

  explicit ResistanceOracle(const WeightedGraph& g, ResistanceOptions opt = {})
      : g_(&g), opt_(opt) {
    int n = g.vertex_count();
    tree_mode_ = g.is_tree();
    if (tree_mode_) build_tree_structure();
    if (n <= opt.dense_limit) {
      dense_ = true;
      Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n - 1, n - 1);
      for (const auto& e : g.edges()) {
        int u = e.u - 1, v = e.v - 1;  // vertex 0 grounded
        if (u >= 0) L(u, u) += e.w;
        if (v >= 0) L(v, v) += e.w;
        if (u >= 0 && v >= 0) {
          L(u, v) -= e.w;
          L(v, u) -= e.w;
        }
      }
      llt_ = std::make_shared<Eigen::LLT<Eigen::MatrixXd>>(L);
      if (llt_->info() != Eigen::Success) throw Error("Laplacian factorization failed");
    } else {
      sparse_.resize(n, n);
      std::vector<Eigen::Triplet<double>> trip;
      trip.reserve(4 * g.edges().size() + n);
      std::vector<double> diag(n, 0.0);
      for (const auto& e : g.edges()) {
        diag[e.u] += e.w;
        diag[e.v] += e.w;
        trip.emplace_back(e.u, e.v, -e.w);
        trip.emplace_back(e.v, e.u, -e.w);
      }
      for (int i = 0; i < n; ++i) trip.emplace_back(i, i, diag[i]);
      sparse_.setFromTriplets(trip.begin(), trip.end());
    }
  }

  const WeightedGraph& graph() const { return *g_; }

  // R_eff between two vertices
  double pair_resistance(int x, int y) const {
    if (x == y) return 0.0;
    if (tree_mode_) return tree_resistance(x, y);
    int n = g_->vertex_count();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n - 1);
    if (x > 0) b(x - 1) = 1.0;
    if (y > 0) b(y - 1) = -1.0;
    Eigen::VectorXd u = solve_grounded(b);
    double ux = x > 0 ? u(x - 1) : 0.0;
    double uy = y > 0 ? u(y - 1) : 0.0;
    return ux - uy;
  }

  // R_eff(A, B) = 1 / inf{E(f,f): f=1 on A, f=0 on B}
  double set_resistance(const std::vector<int>& A, const std::vector<int>& B) const {
    auto f = harmonic_extension(A, B);
    double energy = dirichlet_energy(f);
    if (!(energy > 0)) return std::numeric_limits<double>::infinity();
    return 1.0 / energy;
  }

  // potential f with f|_A = 1, f|_B = 0, harmonic elsewhere
  std::vector<double> harmonic_extension(const std::vector<int>& A,
                                         const std::vector<int>& B) const {
    const WeightedGraph& g = *g_;
    int n = g.vertex_count();
    std::vector<int> tag(n, 0);  // 0 interior, 1 in A, 2 in B
    for (int a : A) tag[a] = 1;
    for (int b : B) {
      if (tag[b] == 1) throw OverlappingSets("A and B overlap at vertex " + std::to_string(b));
      tag[b] = 2;
    }
    if (A.empty() || B.empty()) throw Error("A and B must be nonempty");

    std::vector<int> interior, pos(n, -1);
    for (int i = 0; i < n; ++i)
      if (tag[i] == 0) {
        pos[i] = static_cast<int>(interior.size());
        interior.push_back(i);
      }
    std::vector<double> f(n, 0.0);
    for (int a : A) f[a] = 1.0;
    int k = static_cast<int>(interior.size());
    if (k == 0) return f;

    if (k <= opt_.dense_limit) {
      Eigen::MatrixXd L = Eigen::MatrixXd::Zero(k, k);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
      for (int ii = 0; ii < k; ++ii) {
        int x = interior[ii];
        const int* nb = g.neighbors(x);
        const double* w = g.incident_weights(x);
        for (int d = 0; d < g.degree(x); ++d) {
          int y = nb[d];
          L(ii, ii) += w[d];
          if (pos[y] >= 0) L(ii, pos[y]) -= w[d];
          else if (tag[y] == 1) rhs(ii) += w[d];
        }
      }
      Eigen::VectorXd sol = L.ldlt().solve(rhs);
      for (int ii = 0; ii < k; ++ii) f[interior[ii]] = sol(ii);
    } else {
      Eigen::SparseMatrix<double> L(k, k);
      std::vector<Eigen::Triplet<double>> trip;
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
      std::vector<double> diag(k, 0.0);
      for (int ii = 0; ii < k; ++ii) {
        int x = interior[ii];
        const int* nb = g.neighbors(x);
        const double* w = g.incident_weights(x);
        for (int d = 0; d < g.degree(x); ++d) {
          int y = nb[d];
          diag[ii] += w[d];
          if (pos[y] >= 0) trip.emplace_back(ii, pos[y], -w[d]);
          else if (tag[y] == 1) rhs(ii) += w[d];
        }
      }
      for (int ii = 0; ii < k; ++ii) trip.emplace_back(ii, ii, diag[ii]);
      L.setFromTriplets(trip.begin(), trip.end());
      Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                               Eigen::Lower | Eigen::Upper> cg(L);
      cg.setTolerance(opt_.cg_tol);
      Eigen::VectorXd sol = cg.solve(rhs);
      for (int ii = 0; ii < k; ++ii) f[interior[ii]] = sol(ii);
    }
    return f;
  }

  double dirichlet_energy(const std::vector<double>& f) const {
    double e = 0.0;
    for (const auto& ed : g_->edges()) {
      double d = f[ed.u] - f[ed.v];
      e += ed.w * d * d;
    }
    return e;
  }

  // max R_eff over pairs; exact up to the configured size, otherwise a
  // double-sweep plus sampled pairs (reported with exact = false)
  DiameterResult diameter() const {
    const WeightedGraph& g = *g_;
    int n = g.vertex_count();
    DiameterResult res;
    if (tree_mode_) {
      // two Dijkstra sweeps in the (additive) resistance metric
      auto d0 = tree_dist_from(0);
      int a = int(std::max_element(d0.begin(), d0.end()) - d0.begin());
      auto da = tree_dist_from(a);
      int b = int(std::max_element(da.begin(), da.end()) - da.begin());
      res.value = da[b];
      res.x = a;
      res.y = b;
      res.exact = true;
      return res;
    }
    if (n <= opt_.exact_diameter_limit && dense_) {
      // columns of the grounded inverse give all pairwise resistances
      Eigen::MatrixXd G = llt_->solve(Eigen::MatrixXd::Identity(n - 1, n - 1));
      double best = 0.0;
      int bx = 0, by = 0;
      for (int x = 0; x < n; ++x) {
        double gxx = x > 0 ? G(x - 1, x - 1) : 0.0;
        for (int y = x + 1; y < n; ++y) {
          double gyy = y > 0 ? G(y - 1, y - 1) : 0.0;
          double gxy = (x > 0 && y > 0) ? G(x - 1, y - 1) : 0.0;
          double r = gxx + gyy - 2 * gxy;
          if (r > best) {
            best = r;
            bx = x;
            by = y;
          }
        }
      }
      res.value = best;
      res.x = bx;
      res.y = by;
      res.exact = true;
      return res;
    }
    // approximate: double sweep in the resistance metric + sampled pairs +
    // all pairs against the root
    res.exact = false;
    auto far_from = [&](int s) {
      double best = -1;
      int arg = s;
      for (int probe = 0; probe < n; probe += std::max(1, n / 256)) {
        double r = pair_resistance(s, probe);
        if (r > best) {
          best = r;
          arg = probe;
        }
      }
      return std::make_pair(arg, best);
    };
    auto [a, ra] = far_from(0);
    auto [b, rb] = far_from(a);
    res.value = rb;
    res.x = a;
    res.y = b;
    Rng rng(0x9a0cULL + n);
    for (int s = 0; s < opt_.diameter_samples; ++s) {
      int x = int(rng.below(n)), y = int(rng.below(n));
      double r = pair_resistance(x, y);
      if (r > res.value) {
        res.value = r;
        res.x = x;
        res.y = y;
      }
    }
    if (g.root()) {
      int rt = *g.root();
      for (int probe = 0; probe < n; probe += std::max(1, n / 128)) {
        double r = pair_resistance(rt, probe);
        if (r > res.value) {
          res.value = r;
          res.x = rt;
          res.y = probe;
        }
      }
    }
    return res;
  }

  KilledWalkData green_killed(const std::vector<int>& B) const {
    return KilledWalkData(*g_, B);
  }

  // P_x(T_A < T_B)
  double hitting_probability(int x, const std::vector<int>& A,
                             const std::vector<int>& B) const {
    for (int a : A)
      if (a == x) throw VertexInTargets("x lies in A");
    for (int b : B)
      if (b == x) throw VertexInTargets("x lies in B");
    auto f = harmonic_extension(A, B);
    return f[x];
  }

  // E_x sigma_y (expected hitting time of y from x)
  double hitting_time(int x, int y) const {
    const WeightedGraph& g = *g_;
    int n = g.vertex_count();
    if (x == y) return 0.0;
    // (L h)(v) = mu_v for v != y, h(y) = 0
    std::vector<int> keep, pos(n, -1);
    for (int i = 0; i < n; ++i)
      if (i != y) {
        pos[i] = static_cast<int>(keep.size());
        keep.push_back(i);
      }
    int k = n - 1;
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(k, k);
    Eigen::VectorXd rhs(k);
    for (int ii = 0; ii < k; ++ii) rhs(ii) = g.mu(keep[ii]);
    for (const auto& e : g.edges()) {
      int pu = pos[e.u], pv = pos[e.v];
      if (pu >= 0) L(pu, pu) += e.w;
      if (pv >= 0) L(pv, pv) += e.w;
      if (pu >= 0 && pv >= 0) {
        L(pu, pv) -= e.w;
        L(pv, pu) -= e.w;
      }
    }
    Eigen::VectorXd h = L.ldlt().solve(rhs);
    return h(pos[x]);
  }

  // E_x sigma_y + E_y sigma_x; equals R_eff(x,y) mu(G)
  double commute_time(int x, int y) const {
    if (x == y) throw Error("commute time needs distinct vertices");
    return hitting_time(x, y) + hitting_time(y, x);
  }

 private:
  void build_tree_structure() {
    const WeightedGraph& g = *g_;
    int n = g.vertex_count();
    parent_.assign(n, -1);
    rdepth_.assign(n, 0.0);
    depth_.assign(n, 0);
    std::vector<int> order;
    order.reserve(n);
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      order.push_back(v);
      const int* nb = g.neighbors(v);
      const double* w = g.incident_weights(v);
      for (int d = 0; d < g.degree(v); ++d) {
        int u = nb[d];
        if (!seen[u]) {
          seen[u] = 1;
          parent_[u] = v;
          depth_[u] = depth_[v] + 1;
          rdepth_[u] = rdepth_[v] + 1.0 / w[d];
          q.push(u);
        }
      }
    }
    // binary lifting for LCA
    int logn = 1;
    while ((1 << logn) < n) ++logn;
    up_.assign(logn, std::vector<int>(n, 0));
    for (int v = 0; v < n; ++v) up_[0][v] = parent_[v] < 0 ? v : parent_[v];
    for (int j = 1; j < logn; ++j)
      for (int v = 0; v < n; ++v) up_[j][v] = up_[j - 1][up_[j - 1][v]];
  }

  int lca(int x, int y) const {
    if (depth_[x] < depth_[y]) std::swap(x, y);
    int diff = depth_[x] - depth_[y];
    for (size_t j = 0; j < up_.size(); ++j)
      if (diff & (1 << j)) x = up_[j][x];
    if (x == y) return x;
    for (int j = int(up_.size()) - 1; j >= 0; --j)
      if (up_[j][x] != up_[j][y]) {
        x = up_[j][x];
        y = up_[j][y];
      }
    return parent_[x];
  }

  double tree_resistance(int x, int y) const {
    int a = lca(x, y);
    return rdepth_[x] + rdepth_[y] - 2 * rdepth_[a];
  }

  std::vector<double> tree_dist_from(int s) const {
    const WeightedGraph& g = *g_;
    int n = g.vertex_count();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    dist[s] = 0.0;
    // tree: plain BFS order works since paths are unique
    std::queue<int> q;
    q.push(s);
    std::vector<char> seen(n, 0);
    seen[s] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      const int* nb = g.neighbors(v);
      const double* w = g.incident_weights(v);
      for (int d = 0; d < g.degree(v); ++d) {
        int u = nb[d];
        if (!seen[u]) {
          seen[u] = 1;
          dist[u] = dist[v] + 1.0 / w[d];
          q.push(u);
        }
      }
    }
    return dist;
  }

  Eigen::VectorXd solve_grounded(const Eigen::VectorXd& b) const {
    if (dense_) return llt_->solve(b);
    // CG on the full Laplacian with the grounded row/col pinned: solve on the
    // grounded system assembled on the fly
    int n = g_->vertex_count();
    Eigen::SparseMatrix<double> L0 = sparse_.block(1, 1, n - 1, n - 1);
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg(L0);
    cg.setTolerance(opt_.cg_tol);
    return cg.solve(b);
  }

  const WeightedGraph* g_;
  ResistanceOptions opt_;
  bool dense_ = false;
  bool tree_mode_ = false;
  std::shared_ptr<Eigen::LLT<Eigen::MatrixXd>> llt_;
  Eigen::SparseMatrix<double> sparse_;

  std::vector<int> parent_, depth_;
  std::vector<double> rdepth_;
  std::vector<std::vector<int>> up_;
};

// free-function forms mirroring the oracle methods
inline double effective_resistance(const ResistanceOracle& o, const std::vector<int>& A,
                                   const std::vector<int>& B) {
  return o.set_resistance(A, B);
}
inline double effective_resistance(const ResistanceOracle& o, int x, int y) {
  return o.pair_resistance(x, y);
}
inline ResistanceOracle::DiameterResult resistance_diameter(const ResistanceOracle& o) {
  return o.diameter();
}

}  // namespace mixlab
