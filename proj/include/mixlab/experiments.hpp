#pragma once

#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mixlab/bounds.hpp"
#include "mixlab/ensembles.hpp"
#include "mixlab/errors.hpp"
#include "mixlab/graph.hpp"
#include "mixlab/kernel.hpp"
#include "mixlab/rational_kernel.hpp"
#include "mixlab/reflected_bm.hpp"
#include "mixlab/resistance.hpp"
#include "mixlab/stats.hpp"

namespace mixlab {

// run fn(i) for i in [0, count) on up to `jobs` threads; results land by
// index, so output is independent of scheduling
template <class Fn>
inline void parallel_for(long count, int jobs, Fn&& fn) {
  if (jobs <= 1 || count <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex err_mtx;
  int nthreads = static_cast<int>(std::min<long>(jobs, count));
  for (int t = 0; t < nthreads; ++t)
    pool.emplace_back([&]() {
      for (;;) {
        long i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mtx);
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failed.load()) std::rethrow_exception(error);
}

// ---- families --------------------------------------------------------------

struct FamilySpec {
  std::string name;  // path, box, cycle, er, gw, gasket, range
  int box_dim = 2;
  double er_lambda = 0.0;
  OffspringSpec offspring = OffspringSpec::poisson1();
  WeightLaw weight_law = WeightLaw::uniform(0.5, 1.5);
  int range_dim = 5;
};

inline bool family_is_deterministic(const FamilySpec& f) {
  return f.name == "path" || f.name == "box" || f.name == "cycle";
}

// marked vertex used by pointed experiments; falls back to vertex 0
inline int family_root(const WeightedGraph& g) { return g.root().value_or(0); }

inline Draw make_draw(const FamilySpec& f, double size, std::uint64_t seed, long index) {
  if (f.name == "path")
    return {path_graph(static_cast<int>(size)), "path", seed, index, {{"N", size}}};
  if (f.name == "box")
    return {deterministic_box(static_cast<int>(size), f.box_dim), "box", seed, index,
            {{"N", size}, {"d", double(f.box_dim)}}};
  if (f.name == "cycle")
    return {cycle_graph(static_cast<int>(size)), "cycle", seed, index, {{"N", size}}};
  if (f.name == "er") return er_giant(static_cast<long>(size), f.er_lambda, seed, index);
  if (f.name == "gw") return gw_conditioned(static_cast<long>(size), f.offspring, seed, index);
  if (f.name == "gasket")
    return sierpinski_level(static_cast<int>(size), f.weight_law, seed, index);
  if (f.name == "range") return srw_range(static_cast<long>(size), f.range_dim, seed, index);
  throw UnknownFamily("unknown family '" + f.name + "'");
}

// Rescaling gamma(N) applied to mixing times before comparing across sizes.
// Deterministic boxes and paths span N-1 lattice steps across the unit
// interval, hence the (N-1)^2 diffusive clock; gw uses the finite-variance
// normalization sqrt(2) N^{3/2} / sigma when sigma is finite.
inline double gamma_scale(const FamilySpec& f, double size) {
  if (f.name == "path") return (size - 1) * (size - 1);
  if (f.name == "box") return (size - 1) * (size - 1);
  if (f.name == "cycle") return size * size;
  if (f.name == "er") return size;
  if (f.name == "gw") {
    double sigma = f.offspring.sigma();
    if (std::isnan(sigma)) return std::pow(size, 2.0 - 1.0 / f.offspring.alpha);
    return std::sqrt(2.0) / sigma * std::pow(size, 1.5);
  }
  if (f.name == "gasket") return std::pow(5.0, size);
  if (f.name == "range") return size * size;
  throw UnknownFamily("unknown family '" + f.name + "'");
}

// whether the family's convergence statement is pointed (root) or global
inline bool family_pointed(const FamilySpec& f) { return f.name == "er" || f.name == "gw"; }

// ---- converge experiment ----------------------------------------------------

struct DrawRecord {
  long index = 0;
  long n = 0;
  double mass = 0.0;
  double tmix_integer = 0.0;
  double tmix_real = 0.0;
  std::map<std::string, double> meta;
};

struct SizeSummary {
  double size = 0.0;
  double gamma = 0.0;
  std::vector<double> rescaled;  // tmix_real / gamma per draw
  double mean = 0.0;
  double q10 = 0, q25 = 0, q50 = 0, q75 = 0, q90 = 0;
  double ks_prev = -1.0;  // KS distance to the previous size's empirical law
};

struct PathOracleComparison {
  double p = kPInf;
  double oracle_limit = 0.0;  // t_mix^p of the reflected-BM oracle
  double fitted_constant = 0.0;
  std::vector<double> rescaled;  // per size
  std::vector<double> rel_error; // |rescaled/c - limit| / limit
};

struct ConvergeResult {
  FamilySpec family;
  std::vector<double> sizes;
  long draws = 0;
  std::uint64_t seed = 0;
  double p = 1.0;
  bool pointed = false;
  std::vector<std::vector<DrawRecord>> per_size;
  std::vector<SizeSummary> summary;
  std::optional<PathOracleComparison> oracle;
};

struct ConvergeOptions {
  int jobs = 1;
  bool interpolated = true;
  std::optional<bool> pointed;  // override the family default
};

inline ConvergeResult run_converge(const FamilySpec& fam, const std::vector<double>& sizes,
                                   long draws, std::uint64_t seed, double p,
                                   const ConvergeOptions& opt = {}) {
  if (sizes.size() < 2) throw InsufficientSizes("need at least two sizes");
  if (draws < 1) throw Error("need at least one draw");
  ConvergeResult res;
  res.family = fam;
  res.sizes = sizes;
  res.draws = family_is_deterministic(fam) ? 1 : draws;
  res.seed = seed;
  res.p = p;
  res.pointed = opt.pointed.value_or(family_pointed(fam));

  for (size_t si = 0; si < sizes.size(); ++si) {
    double N = sizes[si];
    long ndraws = res.draws;
    std::vector<DrawRecord> recs(ndraws);
    parallel_for(ndraws, opt.jobs, [&](long i) {
      Draw d = make_draw(fam, N, seed, i);
      const WeightedGraph& g = d.graph;
      DrawRecord rec;
      rec.index = i;
      rec.n = g.vertex_count();
      rec.mass = g.total_mass();
      rec.meta = d.metadata;
      MixingOptions mo;
      mo.interpolated = opt.interpolated;
      if (res.pointed) {
        KernelEvaluator k(g, {KernelBackend::MatrixPower});
        auto pm = mixing_time_at(k, family_root(g), p, mo);
        rec.tmix_integer = double(pm.t_integer);
        rec.tmix_real = pm.t_real;
      } else {
        KernelOptions ko;
        if (g.vertex_count() > 512 && p != kPInf) ko.backend = KernelBackend::MatrixPower;
        KernelEvaluator k(g, ko);
        auto rep = mixing_time(k, p, mo);
        rec.tmix_integer = double(rep.t_integer);
        rec.tmix_real = rep.t_real;
      }
      recs[i] = std::move(rec);
    });
    res.per_size.push_back(std::move(recs));

    SizeSummary s;
    s.size = N;
    s.gamma = gamma_scale(fam, N);
    for (const auto& r : res.per_size.back()) s.rescaled.push_back(r.tmix_real / s.gamma);
    s.mean = mean(s.rescaled);
    s.q10 = quantile(s.rescaled, 0.10);
    s.q25 = quantile(s.rescaled, 0.25);
    s.q50 = quantile(s.rescaled, 0.50);
    s.q75 = quantile(s.rescaled, 0.75);
    s.q90 = quantile(s.rescaled, 0.90);
    if (si > 0) s.ks_prev = ks_distance(res.summary.back().rescaled, s.rescaled);
    res.summary.push_back(std::move(s));
  }

  if (fam.name == "path" || (fam.name == "box" && fam.box_dim == 1)) {
    ReflectedBmOracle oracle;
    PathOracleComparison cmp;
    cmp.p = p;
    cmp.oracle_limit = oracle.mixing_time(p);
    for (const auto& s : res.summary) cmp.rescaled.push_back(s.mean);
    cmp.fitted_constant = cmp.rescaled.front() / cmp.oracle_limit;
    for (double v : cmp.rescaled)
      cmp.rel_error.push_back(std::abs(v / cmp.fitted_constant - cmp.oracle_limit) /
                              cmp.oracle_limit);
    res.oracle = std::move(cmp);
  }
  return res;
}

// ---- tails experiment --------------------------------------------------------

struct TailPoint {
  double lambda = 0.0;
  double upper_tail = 0.0;       // P(t^inf / gamma >= lambda)
  double upper_lo = 0.0, upper_hi = 0.0;
  double lower_tail = 0.0;       // P(t^1 / gamma <= 1/lambda)
  double lower_lo = 0.0, lower_hi = 0.0;
};

struct TailsResult {
  FamilySpec family;
  double size = 0.0;
  long draws = 0;
  std::uint64_t seed = 0;
  double gamma = 0.0;
  std::vector<double> upper_samples;  // t^inf / gamma
  std::vector<double> lower_samples;  // t^1 / gamma (pointed for gw)
  std::vector<TailPoint> points;
  // fitted log-tail slopes; axis is lambda for "linear", lambda^2 for "quadratic"
  LinearFit upper_fit;
  std::string upper_axis;
  bool upper_monotone = true;
  bool lower_monotone = true;
};

inline TailsResult run_tails(const FamilySpec& fam, double size, long draws,
                             std::vector<double> lambdas, std::uint64_t seed, int jobs = 1) {
  if (draws < 50) throw InsufficientDraws("tails need >= 50 draws");
  TailsResult res;
  res.family = fam;
  res.size = size;
  res.draws = draws;
  res.seed = seed;
  res.gamma = gamma_scale(fam, size);
  res.upper_samples.resize(draws);
  res.lower_samples.resize(draws);

  bool pointed_lower = fam.name == "gw";
  parallel_for(draws, jobs, [&](long i) {
    Draw d = make_draw(fam, size, seed, i);
    const WeightedGraph& g = d.graph;
    MixingOptions mo;
    mo.interpolated = true;
    KernelEvaluator k(g);
    auto repinf = mixing_time(k, kPInf, mo);
    res.upper_samples[i] = repinf.t_real / res.gamma;
    if (pointed_lower) {
      auto pm = mixing_time_at(k, family_root(g), 1.0, mo);
      res.lower_samples[i] = pm.t_real / res.gamma;
    } else {
      auto rep1 = mixing_time(k, 1.0, mo);
      res.lower_samples[i] = rep1.t_real / res.gamma;
    }
  });

  if (lambdas.empty()) {
    for (double q : {0.50, 0.65, 0.80, 0.90, 0.95})
      lambdas.push_back(quantile(res.upper_samples, q));
  }
  std::sort(lambdas.begin(), lambdas.end());

  std::vector<double> fit_x, fit_y;
  bool quad = fam.name == "gw";
  res.upper_axis = quad ? "lambda^2" : "lambda";
  double prev_u = 1.0, prev_l = 1.0;
  for (double lam : lambdas) {
    TailPoint pt;
    pt.lambda = lam;
    size_t cu = 0, cl = 0;
    for (double v : res.upper_samples)
      if (v >= lam) ++cu;
    for (double v : res.lower_samples)
      if (v <= 1.0 / lam) ++cl;
    pt.upper_tail = double(cu) / draws;
    pt.lower_tail = double(cl) / draws;
    auto wu = wilson_interval(cu, draws);
    auto wl = wilson_interval(cl, draws);
    pt.upper_lo = wu.lo;
    pt.upper_hi = wu.hi;
    pt.lower_lo = wl.lo;
    pt.lower_hi = wl.hi;
    if (pt.upper_tail > prev_u + 1e-12) res.upper_monotone = false;
    if (pt.lower_tail > prev_l + 1e-12) res.lower_monotone = false;
    prev_u = pt.upper_tail;
    prev_l = pt.lower_tail;
    if (pt.upper_tail > 0) {
      fit_x.push_back(quad ? lam * lam : lam);
      fit_y.push_back(std::log(pt.upper_tail));
    }
    res.points.push_back(pt);
  }
  if (fit_x.size() >= 2) res.upper_fit = fit_linear(fit_x, fit_y);
  return res;
}

}  // namespace mixlab
