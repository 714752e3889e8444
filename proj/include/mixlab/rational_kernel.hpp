#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "mixlab/errors.hpp"
#include "mixlab/graph.hpp"
#include "mixlab/kernel.hpp"

namespace mixlab {

// Which L^p norm a rational computation uses. p = 2 compares squared values,
// keeping every comparison inside Q.
enum class RationalP { One, Two, Inf };

// Exact-rational transition kernel. Weights are taken from the graph's exact
// weights (the binary expansion of the double weight when none were given),
// so every probability, density and threshold comparison is exact. Intended
// for small graphs where mixing thresholds can land exactly on the boundary.
class RationalKernel {
 public:
  explicit RationalKernel(const WeightedGraph& g) : g_(&g) {
    int n = g.vertex_count();
    rows_.resize(n);
    pi_.resize(n);
    std::vector<mpq_class> mu(n, mpq_class(0));
    for (size_t e = 0; e < g.edges().size(); ++e) {
      mpq_class w = g.exact_weight(e);
      mu[g.edges()[e].u] += w;
      mu[g.edges()[e].v] += w;
    }
    mpq_class mass = 0;
    for (int x = 0; x < n; ++x) mass += mu[x];
    for (int x = 0; x < n; ++x) pi_[x] = mu[x] / mass;
    for (size_t e = 0; e < g.edges().size(); ++e) {
      const auto& ed = g.edges()[e];
      mpq_class w = g.exact_weight(e);
      rows_[ed.u].push_back({ed.v, w / mu[ed.u]});
      rows_[ed.v].push_back({ed.u, w / mu[ed.v]});
    }
  }

  const WeightedGraph& graph() const { return *g_; }
  const mpq_class& pi(int x) const { return pi_[x]; }

  // u <- u P
  void step(std::vector<mpq_class>& u) const {
    int n = g_->vertex_count();
    std::vector<mpq_class> out(n, mpq_class(0));
    for (int x = 0; x < n; ++x) {
      if (u[x] == 0) continue;
      for (const auto& [y, pxy] : rows_[x]) out[y] += u[x] * pxy;
    }
    u.swap(out);
  }

  // p_m(x, .) exactly
  std::vector<mpq_class> density_row(long m, int x) const {
    int n = g_->vertex_count();
    std::vector<mpq_class> u(n, mpq_class(0));
    u[x] = 1;
    for (long i = 0; i < m; ++i) step(u);
    for (int y = 0; y < n; ++y) u[y] /= pi_[y];
    return u;
  }

  mpq_class density(long m, int x, int y) const { return density_row(m, x)[y]; }

  mpq_class smoothed(long m, int x, int y) const {
    return (density(m, x, y) + density(m + 1, x, y)) / 2;
  }

  // D_p(x, m) for p in {1, inf}; for p = 2 returns the squared norm
  mpq_class dp_distance(int x, long m, RationalP p) const {
    int n = g_->vertex_count();
    std::vector<mpq_class> u(n, mpq_class(0));
    u[x] = 1;
    for (long i = 0; i < m; ++i) step(u);
    std::vector<mpq_class> v = u;
    step(v);
    return dp_from(u, v, p);
  }

  // exact per-vertex and global integer mixing times
  struct Report {
    long t_global = 0;
    std::vector<long> per_vertex;
    mpq_class sup_at_t;  // sup_x D_p(x, t_global); squared for p = 2
  };

  Report mixing_time(RationalP p, mpq_class threshold = mpq_class(1, 4),
                     long horizon = -1) const {
    const WeightedGraph& g = *g_;
    int n = g.vertex_count();
    if (horizon <= 0) horizon = detail::default_horizon(g);
    mpq_class thr = p == RationalP::Two ? mpq_class(threshold * threshold) : threshold;

    Report rep;
    rep.per_vertex.resize(n);
    for (int x = 0; x < n; ++x) {
      std::vector<mpq_class> u(n, mpq_class(0)), v;
      u[x] = 1;
      v = u;
      step(v);
      long m = 0;
      for (;;) {
        ++m;
        if (m > horizon)
          throw NotMixedWithinHorizon("rational mixing exceeded horizon " +
                                      std::to_string(horizon));
        u.swap(v);
        v = u;
        step(v);
        if (dp_from(u, v, p) <= thr) break;
      }
      rep.per_vertex[x] = m;
      rep.t_global = std::max(rep.t_global, m);
    }
    rep.sup_at_t = sup_dp(rep.t_global, p);
    return rep;
  }

  // sup_x D_p(x, m) exactly (squared for p = 2)
  mpq_class sup_dp(long m, RationalP p) const {
    int n = g_->vertex_count();
    mpq_class sup = 0;
    for (int x = 0; x < n; ++x) {
      mpq_class d = dp_distance(x, m, p);
      if (d > sup) sup = d;
    }
    return sup;
  }

  // least m > 0 with max_x ||Q_m(x,.) - pi||_TV <= threshold, via the exact
  // positive-part sum
  long tv_mixing_time(mpq_class threshold = mpq_class(1, 8), long horizon = -1) const {
    const WeightedGraph& g = *g_;
    int n = g.vertex_count();
    if (horizon <= 0) horizon = detail::default_horizon(g);
    long answer = 0;
    for (int x = 0; x < n; ++x) {
      std::vector<mpq_class> u(n, mpq_class(0)), v;
      u[x] = 1;
      v = u;
      step(v);
      long m = 0;
      for (;;) {
        ++m;
        if (m > horizon) throw NotMixedWithinHorizon("rational tv mixing exceeded horizon");
        u.swap(v);
        v = u;
        step(v);
        mpq_class tv = 0;
        for (int y = 0; y < n; ++y) {
          mpq_class diff = (u[y] + v[y]) / 2 - pi_[y];
          if (diff > 0) tv += diff;
        }
        if (tv <= threshold) break;
      }
      answer = std::max(answer, m);
    }
    return answer;
  }

 private:
  mpq_class dp_from(const std::vector<mpq_class>& u, const std::vector<mpq_class>& v,
                    RationalP p) const {
    int n = g_->vertex_count();
    if (p == RationalP::One) {
      mpq_class s = 0;
      for (int y = 0; y < n; ++y) s += abs(mpq_class((u[y] + v[y]) / 2 - pi_[y]));
      return s;
    }
    if (p == RationalP::Inf) {
      mpq_class mx = 0;
      for (int y = 0; y < n; ++y) {
        mpq_class d = abs(mpq_class((u[y] + v[y]) / 2 / pi_[y] - 1));
        if (d > mx) mx = d;
      }
      return mx;
    }
    mpq_class s = 0;  // squared L2
    for (int y = 0; y < n; ++y) {
      mpq_class d = (u[y] + v[y]) / 2 / pi_[y] - 1;
      s += d * d * pi_[y];
    }
    return s;
  }

  const WeightedGraph* g_;
  std::vector<std::vector<std::pair<int, mpq_class>>> rows_;
  std::vector<mpq_class> pi_;
};

}  // namespace mixlab
