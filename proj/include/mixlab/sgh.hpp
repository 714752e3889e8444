#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mixlab/errors.hpp"
#include "mixlab/graph.hpp"
#include "mixlab/kernel.hpp"
#include "mixlab/resistance.hpp"
#include "mixlab/rng.hpp"
#include "mixlab/stats.hpp"

namespace mixlab {

// Finite metric-measure-kernel triple: points with a metric, probability
// weights, and a symmetric kernel tensor sampled on a shared time grid
// (piecewise linear between knots).
struct FiniteTriple {
  std::vector<std::vector<double>> dist;           // n x n
  std::vector<double> weights;                     // sum 1
  std::vector<double> grid;                        // increasing, inside (0, inf)
  std::vector<std::vector<std::vector<double>>> kernel;  // [knot][x][y]
  std::optional<int> root;

  int size() const { return static_cast<int>(weights.size()); }

  void validate() const {
    int n = size();
    if (n < 1) throw Error("empty triple");
    if (static_cast<int>(dist.size()) != n) throw Error("distance matrix size mismatch");
    double mass = 0;
    for (double w : weights) {
      if (!(w > 0)) throw Error("weights must be positive");
      mass += w;
    }
    if (std::abs(mass - 1.0) > 1e-9) throw Error("weights must sum to 1");
    if (grid.empty() || grid.front() <= 0) throw Error("time grid must lie in (0, inf)");
    for (size_t k = 1; k < grid.size(); ++k)
      if (!(grid[k] > grid[k - 1])) throw Error("time grid must increase");
    if (kernel.size() != grid.size()) throw Error("kernel tensor / grid mismatch");
    const double tol = 1e-9;
    for (const auto& Q : kernel)
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          if (std::abs(Q[x][y] - Q[y][x]) > tol) throw Error("kernel tensor not symmetric");
    for (int i = 0; i < n; ++i) {
      if (std::abs(dist[i][i]) > 0) throw Error("metric diagonal must vanish");
      for (int j = 0; j < n; ++j)
        if (dist[i][j] != dist[j][i]) throw Error("metric not symmetric");
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (dist[i][j] > dist[i][k] + dist[k][j] + tol)
            throw Error("metric triangle inequality violated");
  }
};

// Relation between two point sets covering both sides.
struct Correspondence {
  std::vector<std::pair<int, int>> pairs;

  bool covers(int nA, int nB) const {
    std::vector<char> a(nA, 0), b(nB, 0);
    for (auto [x, y] : pairs) {
      if (x < 0 || x >= nA || y < 0 || y >= nB) return false;
      a[x] = 1;
      b[y] = 1;
    }
    return std::all_of(a.begin(), a.end(), [](char c) { return c == 1; }) &&
           std::all_of(b.begin(), b.end(), [](char c) { return c == 1; });
  }
};

// sup over pairs in C x C of |d_A(x,y) - d_B(x',y')|
inline double distortion(const Correspondence& c, const std::vector<std::vector<double>>& dA,
                         const std::vector<std::vector<double>>& dB) {
  double dis = 0.0;
  for (auto [x, xp] : c.pairs)
    for (auto [y, yp] : c.pairs)
      dis = std::max(dis, std::abs(dA[x][y] - dB[xp][yp]));
  return dis;
}

// two-sided Hausdorff distance between index sets in a common ambient metric
inline double hausdorff(const std::vector<int>& A, const std::vector<int>& B,
                        const std::vector<std::vector<double>>& ambient) {
  if (A.empty() || B.empty()) throw Error("hausdorff needs nonempty sets");
  double h = 0.0;
  for (int a : A) {
    double best = std::numeric_limits<double>::infinity();
    for (int b : B) best = std::min(best, ambient[a][b]);
    h = std::max(h, best);
  }
  for (int b : B) {
    double best = std::numeric_limits<double>::infinity();
    for (int a : A) best = std::min(best, ambient[a][b]);
    h = std::max(h, best);
  }
  return h;
}

struct ProhorovResult {
  double value = 0.0;
  bool exact = true;  // subset enumeration; false: optimal-coupling bound
};

namespace detail {

// exact Prohorov by subset enumeration (ambient <= 15 points):
// inf{eps: mu(A) <= nu(A^eps) + eps for all A, both ways}, closed enlargement
inline double prohorov_one_sided(const std::vector<double>& mu, const std::vector<double>& nu,
                                 const std::vector<std::vector<double>>& d) {
  int n = static_cast<int>(mu.size());
  double eps_needed = 0.0;
  std::vector<int> support;
  for (int i = 0; i < n; ++i)
    if (mu[i] > 0) support.push_back(i);
  int s = static_cast<int>(support.size());
  std::vector<double> dist_to_A(n);
  for (unsigned long mask = 1; mask < (1UL << s); ++mask) {
    double muA = 0.0;
    std::fill(dist_to_A.begin(), dist_to_A.end(), std::numeric_limits<double>::infinity());
    for (int b = 0; b < s; ++b)
      if (mask & (1UL << b)) {
        int a = support[b];
        muA += mu[a];
        for (int y = 0; y < n; ++y) dist_to_A[y] = std::min(dist_to_A[y], d[a][y]);
      }
    // sort points by distance to A; nu(A^eps) is a step function of eps with
    // closed enlargements, constant on [prev, next)
    std::vector<std::pair<double, double>> steps;  // (distance, nu mass)
    for (int y = 0; y < n; ++y)
      if (nu[y] > 0) steps.emplace_back(dist_to_A[y], nu[y]);
    std::sort(steps.begin(), steps.end());
    double acc = 0.0, need = std::numeric_limits<double>::infinity();
    double prev = 0.0;
    size_t i = 0;
    for (;;) {
      double next = i < steps.size() ? steps[i].first : std::numeric_limits<double>::infinity();
      // feasibility on [prev, next): muA - acc <= eps. Summation-order noise
      // in the mass defect is snapped to zero so matching measures report an
      // exact zero.
      double defect = muA - acc;
      if (defect < 1e-13 * std::max(1.0, muA)) defect = 0.0;
      double cand = std::max(prev, defect);
      if (cand < next) {
        need = cand;
        break;
      }
      if (i >= steps.size()) break;  // unreachable: total nu mass covers muA
      double dv = steps[i].first;
      while (i < steps.size() && steps[i].first == dv) acc += steps[i++].second;
      prev = dv;
    }
    eps_needed = std::max(eps_needed, need);
  }
  return eps_needed;
}

// max-flow (Dinic) on a tiny bipartite transport network
class TinyFlow {
 public:
  explicit TinyFlow(int nodes) : head_(nodes, -1) {}
  void add(int u, int v, double cap) {
    edges_.push_back({v, head_[u], cap});
    head_[u] = static_cast<int>(edges_.size()) - 1;
    edges_.push_back({u, head_[v], 0.0});
    head_[v] = static_cast<int>(edges_.size()) - 1;
  }
  double maxflow(int s, int t) {
    double flow = 0.0;
    while (bfs(s, t)) {
      iter_ = head_;
      double f;
      while ((f = dfs(s, t, std::numeric_limits<double>::infinity())) > 1e-15) flow += f;
    }
    return flow;
  }

 private:
  struct E {
    int to, next;
    double cap;
  };
  bool bfs(int s, int t) {
    level_.assign(head_.size(), -1);
    std::vector<int> q{s};
    level_[s] = 0;
    for (size_t qi = 0; qi < q.size(); ++qi) {
      int v = q[qi];
      for (int e = head_[v]; e >= 0; e = edges_[e].next)
        if (edges_[e].cap > 1e-15 && level_[edges_[e].to] < 0) {
          level_[edges_[e].to] = level_[v] + 1;
          q.push_back(edges_[e].to);
        }
    }
    return level_[t] >= 0;
  }
  double dfs(int v, int t, double f) {
    if (v == t) return f;
    for (int& e = iter_[v]; e >= 0; e = edges_[e].next) {
      auto& ed = edges_[e];
      if (ed.cap > 1e-15 && level_[ed.to] == level_[v] + 1) {
        double got = dfs(ed.to, t, std::min(f, ed.cap));
        if (got > 1e-15) {
          ed.cap -= got;
          edges_[e ^ 1].cap += got;
          return got;
        }
      }
    }
    return 0.0;
  }
  std::vector<E> edges_;
  std::vector<int> head_, level_, iter_;
};

// Strassen-style optimal-coupling bound: smallest eps on the breakpoint grid
// with a coupling moving mass only across distances <= eps up to defect eps
inline double prohorov_coupling_bound(const std::vector<double>& mu,
                                      const std::vector<double>& nu,
                                      const std::vector<std::vector<double>>& d) {
  int n = static_cast<int>(mu.size());
  std::vector<double> cands;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (mu[i] > 0 && nu[j] > 0) cands.push_back(d[i][j]);
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  double best = std::numeric_limits<double>::infinity();
  for (double eps : cands) {
    TinyFlow fl(2 * n + 2);
    int s = 2 * n, t = 2 * n + 1;
    for (int i = 0; i < n; ++i)
      if (mu[i] > 0) fl.add(s, i, mu[i]);
    for (int j = 0; j < n; ++j)
      if (nu[j] > 0) fl.add(n + j, t, nu[j]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (mu[i] > 0 && nu[j] > 0 && d[i][j] <= eps) fl.add(i, n + j, 2.0);
    double defect = 1.0 - fl.maxflow(s, t);
    best = std::min(best, std::max(eps, defect));
    if (defect <= eps) break;  // larger eps cannot improve max(eps, defect)
  }
  return best;
}

}  // namespace detail

// Prohorov distance between probability vectors on a common finite ambient
// metric; exact by subset enumeration up to 15 points, optimal-coupling
// bound beyond (flagged).
inline ProhorovResult prohorov(const std::vector<double>& mu, const std::vector<double>& nu,
                               const std::vector<std::vector<double>>& d,
                               bool force_exact = false) {
  int n = static_cast<int>(mu.size());
  if (n <= 15) {
    double v = std::max(detail::prohorov_one_sided(mu, nu, d),
                        detail::prohorov_one_sided(nu, mu, d));
    return {v, true};
  }
  if (force_exact)
    throw AmbientTooLargeForExact("exact prohorov limited to 15 points, got " +
                                  std::to_string(n));
  return {detail::prohorov_coupling_bound(mu, nu, d), false};
}

// Breakdown of the certified upper bound on the spectral Gromov-Hausdorff
// distance realized by one correspondence on the glued space.
struct DeltaBreakdown {
  double hausdorff_term = 0.0;
  double prohorov_term = 0.0;
  double correspondence_term = 0.0;  // 2 rho + sup over pairs/knots |q - q'|
  double total = 0.0;
  bool prohorov_exact = true;
};

namespace detail {

inline void require_same_grid(const FiniteTriple& A, const FiniteTriple& B) {
  if (A.grid.size() != B.grid.size()) throw GridMismatch("time grids differ in size");
  for (size_t k = 0; k < A.grid.size(); ++k)
    if (std::abs(A.grid[k] - B.grid[k]) > 1e-12 * std::max(1.0, std::abs(A.grid[k])))
      throw GridMismatch("time grids differ at knot " + std::to_string(k));
}

}  // namespace detail

// Evaluate the three-term upper bound for a given covering correspondence.
// The glue places the two spaces at cross distance
//   d(x, x') = min over (a,a') in C of d_A(x,a) + rho + d_B(a',x'),
// with rho = dis(C)/2, which keeps the glued space (pseudo)metric.
inline DeltaBreakdown delta_upper(const FiniteTriple& A, const FiniteTriple& B,
                                  const Correspondence& c) {
  detail::require_same_grid(A, B);
  int nA = A.size(), nB = B.size();
  if (!c.covers(nA, nB)) throw BadCorrespondence("correspondence does not cover both sides");

  double rho = 0.5 * distortion(c, A.dist, B.dist);

  int n = nA + nB;
  std::vector<std::vector<double>> Z(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < nA; ++i)
    for (int j = 0; j < nA; ++j) Z[i][j] = A.dist[i][j];
  for (int i = 0; i < nB; ++i)
    for (int j = 0; j < nB; ++j) Z[nA + i][nA + j] = B.dist[i][j];
  for (int x = 0; x < nA; ++x)
    for (int y = 0; y < nB; ++y) {
      double best = std::numeric_limits<double>::infinity();
      for (auto [a, ap] : c.pairs) {
        double da = A.dist[x][a], db = B.dist[ap][y];
        // canonical addition order keeps the value symmetric in (A, B)
        double v = (std::min(da, db) + std::max(da, db)) + rho;
        best = std::min(best, v);
      }
      Z[x][nA + y] = Z[nA + y][x] = best;
    }

  std::vector<int> IA(nA), IB(nB);
  for (int i = 0; i < nA; ++i) IA[i] = i;
  for (int i = 0; i < nB; ++i) IB[i] = nA + i;

  DeltaBreakdown out;
  out.hausdorff_term = hausdorff(IA, IB, Z);

  std::vector<double> mu(n, 0.0), nu(n, 0.0);
  for (int i = 0; i < nA; ++i) mu[i] = A.weights[i];
  for (int i = 0; i < nB; ++i) nu[nA + i] = B.weights[i];
  auto pr = prohorov(mu, nu, Z);
  out.prohorov_term = pr.value;
  out.prohorov_exact = pr.exact;

  double qsup = 0.0;
  for (auto [x, xp] : c.pairs)
    for (auto [y, yp] : c.pairs)
      for (size_t k = 0; k < A.grid.size(); ++k)
        qsup = std::max(qsup, std::abs(A.kernel[k][x][y] - B.kernel[k][xp][yp]));
  out.correspondence_term = 2.0 * rho + qsup;

  out.total = out.hausdorff_term + out.prohorov_term + out.correspondence_term;
  return out;
}

struct DeltaEstimate {
  double value = 0.0;
  Correspondence witness;
  DeltaBreakdown parts;
  bool exhaustive = true;
};

namespace detail {

inline Correspondence function_pair_correspondence(const std::vector<int>& f,
                                                   const std::vector<int>& g) {
  Correspondence c;
  c.pairs.reserve(f.size() + g.size());
  for (int x = 0; x < static_cast<int>(f.size()); ++x) c.pairs.emplace_back(x, f[x]);
  for (int y = 0; y < static_cast<int>(g.size()); ++y) c.pairs.emplace_back(g[y], y);
  std::sort(c.pairs.begin(), c.pairs.end());
  c.pairs.erase(std::unique(c.pairs.begin(), c.pairs.end()), c.pairs.end());
  return c;
}

// cheap lower bound on delta_upper(A,B,C): the correspondence term alone
inline double delta_lower_hint(const FiniteTriple& A, const FiniteTriple& B,
                               const Correspondence& c) {
  double rho = 0.5 * distortion(c, A.dist, B.dist);
  double qsup = 0.0;
  for (auto [x, xp] : c.pairs)
    for (auto [y, yp] : c.pairs)
      for (size_t k = 0; k < A.grid.size(); ++k)
        qsup = std::max(qsup, std::abs(A.kernel[k][x][y] - B.kernel[k][xp][yp]));
  return 2.0 * rho + qsup;
}

}  // namespace detail

// Minimize delta_upper over function-pair correspondences (graphs of
// f: A -> B union g: B -> A). Exhaustive when the family fits in the budget,
// seeded simulated annealing otherwise. When both triples carry roots, the
// pair (root_A, root_B) is forced into every correspondence.
inline DeltaEstimate delta_estimate(const FiniteTriple& A, const FiniteTriple& B,
                                    long budget = 2'000'000, std::uint64_t seed = 7) {
  detail::require_same_grid(A, B);
  int nA = A.size(), nB = B.size();
  bool rooted = A.root.has_value() && B.root.has_value();

  double family_size = nA * std::log(double(nB)) + nB * std::log(double(nA));
  bool exhaustive = family_size <= std::log(double(budget));

  DeltaEstimate best;
  best.value = std::numeric_limits<double>::infinity();
  best.exhaustive = exhaustive;

  auto consider = [&](const std::vector<int>& f, const std::vector<int>& g) {
    if (rooted && (f[*A.root] != *B.root || g[*B.root] != *A.root)) return;
    auto c = detail::function_pair_correspondence(f, g);
    if (detail::delta_lower_hint(A, B, c) >= best.value) return;
    auto bd = delta_upper(A, B, c);
    if (bd.total < best.value) {
      best.value = bd.total;
      best.witness = c;
      best.parts = bd;
    }
  };

  if (exhaustive) {
    std::vector<int> f(nA, 0), g(nB, 0);
    for (;;) {
      // inner loop over g for this f
      std::fill(g.begin(), g.end(), 0);
      for (;;) {
        consider(f, g);
        int i = 0;
        while (i < nB && ++g[i] == nA) g[i++] = 0;
        if (i == nB) break;
      }
      int i = 0;
      while (i < nA && ++f[i] == nB) f[i++] = 0;
      if (i == nA) break;
    }
    return best;
  }

  // simulated annealing over (f, g) with parallel-restart-free simple loop
  Rng rng(seed);
  std::vector<int> f(nA), g(nB);
  for (int r = 0; r < 8; ++r) {
    for (auto& v : f) v = static_cast<int>(rng.below(nB));
    for (auto& v : g) v = static_cast<int>(rng.below(nA));
    if (rooted) {
      f[*A.root] = *B.root;
      g[*B.root] = *A.root;
    }
    auto cur = delta_upper(A, B, detail::function_pair_correspondence(f, g)).total;
    long iters = budget / 8;
    for (long it = 0; it < iters; ++it) {
      double temp = 0.5 * std::exp(-3.0 * double(it) / double(iters));
      bool side = rng.below(2) == 0;
      int idx = side ? static_cast<int>(rng.below(nA)) : static_cast<int>(rng.below(nB));
      if (rooted && ((side && idx == *A.root) || (!side && idx == *B.root))) continue;
      int old = side ? f[idx] : g[idx];
      int cand = side ? static_cast<int>(rng.below(nB)) : static_cast<int>(rng.below(nA));
      (side ? f[idx] : g[idx]) = cand;
      double val = delta_upper(A, B, detail::function_pair_correspondence(f, g)).total;
      if (val <= cur || rng.u01() < std::exp((cur - val) / std::max(temp, 1e-12))) {
        cur = val;
      } else {
        (side ? f[idx] : g[idx]) = old;
      }
      if (val < best.value) consider(f, g);
    }
    consider(f, g);
  }
  return best;
}

// compose two correspondences through the middle space
inline Correspondence compose(const Correspondence& ab, const Correspondence& bc) {
  Correspondence ac;
  for (auto [x, y] : ab.pairs)
    for (auto [y2, z] : bc.pairs)
      if (y == y2) ac.pairs.emplace_back(x, z);
  std::sort(ac.pairs.begin(), ac.pairs.end());
  ac.pairs.erase(std::unique(ac.pairs.begin(), ac.pairs.end()), ac.pairs.end());
  return ac;
}

// Package a graph with its interpolated kernel as a finite triple:
// (V, d_G, pi, q_{gamma t}) sampled at the grid knots.
inline FiniteTriple graph_triple(const WeightedGraph& g, const KernelEvaluator& k,
                                 const std::vector<double>& grid, double gamma) {
  if (!(gamma > 0)) throw Error("time scale must be positive");
  if (grid.empty() || grid.front() <= 0) throw Error("grid must lie in (0, inf)");
  FiniteTriple t;
  int n = g.vertex_count();
  t.dist.assign(n, std::vector<double>(n, 0.0));
  for (int x = 0; x < n; ++x) t.dist[x] = g.distances_from(x);
  t.weights.resize(n);
  for (int x = 0; x < n; ++x) t.weights[x] = g.pi(x);
  t.grid = grid;
  t.kernel.resize(grid.size());
  for (size_t ki = 0; ki < grid.size(); ++ki) {
    auto& Q = t.kernel[ki];
    Q.assign(n, std::vector<double>(n, 0.0));
    double tt = gamma * grid[ki];
    long m = static_cast<long>(std::floor(tt));
    double s = tt - double(m);
    for (int x = 0; x < n; ++x) {
      auto qa = k.smoothed_row(m, x);
      if (s == 0.0) {
        Q[x] = qa;
      } else {
        auto qb = k.smoothed_row(m + 1, x);
        for (int y = 0; y < n; ++y) Q[x][y] = (1 - s) * qa[y] + s * qb[y];
      }
    }
    // symmetrize away roundoff so the tensor validates
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y) {
        double v = 0.5 * (Q[x][y] + Q[y][x]);
        Q[x][y] = Q[y][x] = v;
      }
  }
  t.root = g.root();
  return t;
}

// Equicontinuity modulus table: for each triple and each delta,
// sup over x, over pairs d(y,z) <= delta, over knots of |q(x,y) - q(x,z)|.
inline std::vector<std::vector<double>> tightness_modulus(
    const std::vector<FiniteTriple>& triples, const std::vector<double>& deltas) {
  if (triples.size() < 2) throw Error("tightness diagnostic needs >= 2 triples");
  std::vector<std::vector<double>> table;
  for (const auto& t : triples) {
    int n = t.size();
    std::vector<double> row;
    for (double delta : deltas) {
      double mod = 0.0;
      for (int y = 0; y < n; ++y)
        for (int z = y; z < n; ++z) {
          if (t.dist[y][z] > delta) continue;
          for (size_t k = 0; k < t.grid.size(); ++k)
            for (int x = 0; x < n; ++x)
              mod = std::max(mod, std::abs(t.kernel[k][x][y] - t.kernel[k][x][z]));
        }
      row.push_back(mod);
    }
    table.push_back(std::move(row));
  }
  return table;
}

// Resistance-based tightness check: fits/verifies
//   R(x,y) <= c1 (alpha(N) d(x,y))^kappa   and   c2 gamma <= alpha^kappa beta <= c3 gamma.
struct ResistanceTightnessReport {
  double kappa = 1.0;
  bool kappa_fitted = false;
  double r_squared = 1.0;
  double c1 = 0.0;
  double c2 = 0.0, c3 = 0.0;   // tightest sandwich constants over the sequence
  std::vector<double> sandwich_ratios;  // alpha^kappa beta / gamma per graph
  double ratio_trend = 0.0;    // slope of log ratio against log index
  bool sandwich_ok = true;
  int violation_witness = -1;  // index of the extreme graph when flagged
};

inline ResistanceTightnessReport resistance_tightness_check(
    const std::vector<const WeightedGraph*>& graphs, const std::vector<double>& alphas,
    std::optional<double> kappa, const std::vector<double>& gammas,
    double spread_tolerance = 4.0) {
  if (graphs.size() != alphas.size() || graphs.size() != gammas.size() || graphs.empty())
    throw Error("sequence size mismatch");
  ResistanceTightnessReport rep;

  // gather (log alpha d, log R) samples over all graphs
  std::vector<double> lx, ly;
  for (size_t i = 0; i < graphs.size(); ++i) {
    const WeightedGraph& g = *graphs[i];
    ResistanceOracle oracle(g);
    int n = g.vertex_count();
    Rng rng(0xf17 + i);
    long pairs = n <= 100 ? long(n) * (n - 1) / 2 : 2000;
    for (long s = 0; s < pairs; ++s) {
      int x, y;
      if (n <= 100) {
        // enumerate
        long k = s;
        x = 0;
        long off = 0;
        while (k - off >= n - 1 - x) {
          off += n - 1 - x;
          ++x;
        }
        y = x + 1 + static_cast<int>(k - off);
      } else {
        x = static_cast<int>(rng.below(n));
        y = static_cast<int>(rng.below(n));
        if (x == y) continue;
      }
      double dd = g.distance(x, y);
      double rr = oracle.pair_resistance(x, y);
      if (dd <= 0 || rr <= 0) continue;
      lx.push_back(std::log(alphas[i] * dd));
      ly.push_back(std::log(rr));
    }
  }
  auto fit = fit_linear(lx, ly);
  if (kappa) {
    rep.kappa = *kappa;
    rep.kappa_fitted = false;
  } else {
    rep.kappa = fit.slope;
    rep.kappa_fitted = true;
  }
  rep.r_squared = fit.r_squared;

  // tightest c1 for the chosen kappa
  rep.c1 = 0.0;
  for (size_t s = 0; s < lx.size(); ++s)
    rep.c1 = std::max(rep.c1, std::exp(ly[s] - rep.kappa * lx[s]));

  // sandwich over the sequence
  std::vector<double> li, lr;
  rep.c2 = std::numeric_limits<double>::infinity();
  rep.c3 = 0.0;
  for (size_t i = 0; i < graphs.size(); ++i) {
    double beta = graphs[i]->total_mass();
    double ratio = std::pow(alphas[i], rep.kappa) * beta / gammas[i];
    rep.sandwich_ratios.push_back(ratio);
    rep.c2 = std::min(rep.c2, ratio);
    rep.c3 = std::max(rep.c3, ratio);
    li.push_back(std::log(double(i + 1)));
    lr.push_back(std::log(ratio));
  }
  rep.ratio_trend = fit_linear(li, lr).slope;
  rep.sandwich_ok = rep.c3 / rep.c2 <= spread_tolerance && std::abs(rep.ratio_trend) <= 0.25;
  if (!rep.sandwich_ok) {
    auto mx = std::max_element(rep.sandwich_ratios.begin(), rep.sandwich_ratios.end());
    auto mn = std::min_element(rep.sandwich_ratios.begin(), rep.sandwich_ratios.end());
    rep.violation_witness = static_cast<int>(
        (*mx / rep.sandwich_ratios.back() > rep.sandwich_ratios.back() / *mn)
            ? (mx - rep.sandwich_ratios.begin())
            : (mn - rep.sandwich_ratios.begin()));
  }
  return rep;
}

}  // namespace mixlab
