// Test-side oracles, kept independent of the library code paths they check.
#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include <gmpxx.h>

#include "mixlab/graph.hpp"
#include "mixlab/rng.hpp"

namespace oracle {

using mixlab::Rng;
using mixlab::WeightedGraph;

// ---- exact rational matrix-power oracle ------------------------------------
// Dense rational transition matrix built straight from the edge list; powers
// by repeated multiplication. Everything exact.
struct RatMat {
  int n;
  std::vector<std::vector<mpq_class>> a;
  explicit RatMat(int n_) : n(n_), a(n_, std::vector<mpq_class>(n_, mpq_class(0))) {}

  static RatMat transition(const WeightedGraph& g) {
    int n = g.vertex_count();
    RatMat P(n);
    std::vector<mpq_class> mu(n, mpq_class(0));
    for (size_t e = 0; e < g.edges().size(); ++e) {
      mpq_class w = g.exact_weight(e);
      mu[g.edges()[e].u] += w;
      mu[g.edges()[e].v] += w;
    }
    for (size_t e = 0; e < g.edges().size(); ++e) {
      auto ed = g.edges()[e];
      mpq_class w = g.exact_weight(e);
      P.a[ed.u][ed.v] = w / mu[ed.u];
      P.a[ed.v][ed.u] = w / mu[ed.v];
    }
    return P;
  }

  RatMat mul(const RatMat& o) const {
    RatMat r(n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        if (a[i][k] == 0) continue;
        for (int j = 0; j < n; ++j) r.a[i][j] += a[i][k] * o.a[k][j];
      }
    return r;
  }

  static RatMat identity(int n) {
    RatMat r(n);
    for (int i = 0; i < n; ++i) r.a[i][i] = 1;
    return r;
  }

  RatMat power(long m) const {
    RatMat r = identity(n);
    for (long i = 0; i < m; ++i) r = r.mul(*this);
    return r;
  }
};

inline std::vector<mpq_class> exact_pi(const WeightedGraph& g) {
  int n = g.vertex_count();
  std::vector<mpq_class> mu(n, mpq_class(0));
  for (size_t e = 0; e < g.edges().size(); ++e) {
    mpq_class w = g.exact_weight(e);
    mu[g.edges()[e].u] += w;
    mu[g.edges()[e].v] += w;
  }
  mpq_class mass = 0;
  for (auto& m : mu) mass += m;
  for (auto& m : mu) m /= mass;
  return mu;
}

// q_m(x, y) = (p_m + p_{m+1})/2 with p_m = P^m(x,y)/pi(y), all exact
inline mpq_class exact_q(const WeightedGraph& g, long m, int x, int y) {
  auto P = RatMat::transition(g);
  auto pi = exact_pi(g);
  auto Pm = P.power(m);
  auto Pm1 = Pm.mul(P);
  return (Pm.a[x][y] / pi[y] + Pm1.a[x][y] / pi[y]) / 2;
}

// D_1(x, m) = sum_y |q_m(x,y) - 1| pi(y), exact
inline mpq_class exact_d1(const WeightedGraph& g, long m, int x) {
  auto P = RatMat::transition(g);
  auto pi = exact_pi(g);
  auto Pm = P.power(m);
  auto Pm1 = Pm.mul(P);
  mpq_class s = 0;
  for (int y = 0; y < g.vertex_count(); ++y) {
    mpq_class q = (Pm.a[x][y] + Pm1.a[x][y]) / 2 / pi[y];
    s += abs(mpq_class((q - 1) * pi[y]));
  }
  return s;
}

// ---- random connected test graphs ------------------------------------------
// spanning tree + extra random edges; unit weights by default
inline WeightedGraph random_connected(int n, int extra_edges, std::uint64_t seed,
                                      bool random_weights = false) {
  Rng rng(seed);
  std::vector<mixlab::EdgeInput> edges;
  std::set<std::pair<long, long>> used;
  for (int v = 1; v < n; ++v) {
    long u = static_cast<long>(rng.below(v));
    edges.push_back({u, v, random_weights ? 0.25 + rng.u01() : 1.0});
    used.insert({u, v});
  }
  int attempts = 0;
  while (extra_edges > 0 && attempts < 50 * extra_edges) {
    ++attempts;
    long u = static_cast<long>(rng.below(n)), v = static_cast<long>(rng.below(n));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (used.count({u, v})) continue;
    used.insert({u, v});
    edges.push_back({u, v, random_weights ? 0.25 + rng.u01() : 1.0});
    --extra_edges;
  }
  return WeightedGraph(edges);
}

// ---- Monte Carlo walkers -----------------------------------------------------

inline int walk_step(const WeightedGraph& g, int x, Rng& rng) {
  double u = rng.u01() * g.mu(x);
  const int* nb = g.neighbors(x);
  const double* w = g.incident_weights(x);
  double acc = 0.0;
  for (int i = 0; i < g.degree(x); ++i) {
    acc += w[i];
    if (u < acc) return nb[i];
  }
  return nb[g.degree(x) - 1];
}

// empirical mu-normalized visit counts before exiting B, from x
inline std::vector<double> mc_green(const WeightedGraph& g, const std::vector<int>& B, int x,
                                    long walkers, std::uint64_t seed) {
  std::vector<char> inB(g.vertex_count(), 0);
  for (int b : B) inB[b] = 1;
  std::vector<double> visits(g.vertex_count(), 0.0);
  Rng rng(seed);
  for (long w = 0; w < walkers; ++w) {
    int cur = x;
    long guard = 0;
    while (inB[cur] && guard++ < 1000000) {
      visits[cur] += 1.0;
      cur = walk_step(g, cur, rng);
    }
  }
  for (int y = 0; y < g.vertex_count(); ++y) visits[y] /= double(walkers) * g.mu(y);
  return visits;
}

// empirical P_x(T_A < T_B)
inline double mc_hitting(const WeightedGraph& g, int x, const std::vector<int>& A,
                         const std::vector<int>& B, long walkers, std::uint64_t seed) {
  std::vector<char> inA(g.vertex_count(), 0), inB(g.vertex_count(), 0);
  for (int a : A) inA[a] = 1;
  for (int b : B) inB[b] = 1;
  Rng rng(seed);
  long hits = 0;
  for (long w = 0; w < walkers; ++w) {
    int cur = x;
    long guard = 0;
    while (!inA[cur] && !inB[cur] && guard++ < 1000000) cur = walk_step(g, cur, rng);
    if (inA[cur]) ++hits;
  }
  return double(hits) / double(walkers);
}

// empirical expected hitting time of y from x
inline double mc_hitting_time(const WeightedGraph& g, int x, int y, long walkers,
                              std::uint64_t seed) {
  Rng rng(seed);
  double total = 0.0;
  for (long w = 0; w < walkers; ++w) {
    int cur = x;
    long steps = 0;
    while (cur != y && steps < 1000000) {
      cur = walk_step(g, cur, rng);
      ++steps;
    }
    total += double(steps);
  }
  return total / double(walkers);
}

}  // namespace oracle
