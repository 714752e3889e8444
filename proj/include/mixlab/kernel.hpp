#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mixlab/errors.hpp"
#include "mixlab/graph.hpp"
#include "mixlab/rng.hpp"

namespace mixlab {

inline constexpr double kPInf = std::numeric_limits<double>::infinity();

// integer power by squaring; std::pow on negative bases is avoided
inline double ipow(double x, long m) {
  double r = 1.0, b = x;
  for (long e = m; e > 0; e >>= 1) {
    if (e & 1) r *= b;
    b *= b;
  }
  return r;
}

enum class KernelBackend { MatrixPower, Spectral };

// Eigendecomposition of the pi-symmetrized transition operator.
// eigenvalues descending in [-1,1]; phi columns are L2(pi)-orthonormal.
struct SpectralData {
  std::vector<double> eigenvalues;
  Eigen::MatrixXd phi;  // phi(x, k)
  double gap = 0.0;     // 1 - second largest eigenvalue
};

// Exact transition densities p_m(x,y) = P_x(X_m = y)/pi(y), their smoothed
// version q_m = (p_m + p_{m+1})/2, and real-time linear interpolation.
// Immutable after construction.
struct KernelOptions {
  std::optional<KernelBackend> backend;  // default: spectral when n <= spectral_limit
  int spectral_limit = 5000;
};

class KernelEvaluator {
 public:
  explicit KernelEvaluator(const WeightedGraph& g, KernelOptions opt = {}) : g_(&g) {
    int n = g.vertex_count();
    backend_ = opt.backend.value_or(n <= opt.spectral_limit ? KernelBackend::Spectral
                                                            : KernelBackend::MatrixPower);
    spectral_limit_ = opt.spectral_limit;
    if (backend_ == KernelBackend::Spectral) {
      if (n > opt.spectral_limit)
        throw SizeLimitExceeded("graph too large for spectral backend (" +
                                std::to_string(n) + " > " +
                                std::to_string(opt.spectral_limit) + ")");
      build_spectral();
    }
  }

  const WeightedGraph& graph() const { return *g_; }
  KernelBackend backend() const { return backend_; }

  const SpectralData& spectral() const {
    if (backend_ != KernelBackend::Spectral)
      throw SizeLimitExceeded("spectral data unavailable on matrix-power backend");
    return spec_;
  }

  // one step of the walk: v <- v P (v a distribution over vertices)
  void step_distribution(std::vector<double>& v) const {
    const WeightedGraph& g = *g_;
    int n = g.vertex_count();
    scratch_.assign(n, 0.0);
    for (int x = 0; x < n; ++x) {
      double ux = v[x];
      if (ux == 0.0) continue;
      double inv = ux / g.mu(x);
      const int* nb = g.neighbors(x);
      const double* w = g.incident_weights(x);
      int deg = g.degree(x);
      for (int i = 0; i < deg; ++i) scratch_[nb[i]] += inv * w[i];
    }
    v.swap(scratch_);
  }

  // p_m(x, .) as a dense row
  std::vector<double> density_row(long m, int x) const {
    int n = g_->vertex_count();
    if (backend_ == KernelBackend::Spectral) {
      std::vector<double> row(n);
      Eigen::VectorXd c(n);
      for (int k = 0; k < n; ++k) c(k) = ipow(spec_.eigenvalues[k], m) * spec_.phi(x, k);
      Eigen::VectorXd r = spec_.phi * c;
      for (int y = 0; y < n; ++y) row[y] = r(y);
      return row;
    }
    std::vector<double> u(n, 0.0);
    u[x] = 1.0;
    for (long i = 0; i < m; ++i) step_distribution(u);
    for (int y = 0; y < n; ++y) u[y] /= g_->pi(y);
    return u;
  }

  double density(long m, int x, int y) const {
    if (backend_ == KernelBackend::Spectral) {
      double s = 0.0;
      int n = g_->vertex_count();
      for (int k = 0; k < n; ++k)
        s += ipow(spec_.eigenvalues[k], m) * spec_.phi(x, k) * spec_.phi(y, k);
      return s;
    }
    return density_row(m, x)[y];
  }

  double smoothed(long m, int x, int y) const {
    return 0.5 * (density(m, x, y) + density(m + 1, x, y));
  }

  std::vector<double> smoothed_row(long m, int x) const {
    auto a = density_row(m, x);
    auto b = density_row(m + 1, x);
    for (size_t i = 0; i < a.size(); ++i) a[i] = 0.5 * (a[i] + b[i]);
    return a;
  }

  // linear interpolation of m -> q_m between floor(t) and ceil(t)
  double interpolated(double t, int x, int y) const {
    if (t < 0) throw Error("negative time");
    long m = static_cast<long>(std::floor(t));
    double s = t - double(m);
    if (s == 0.0) return smoothed(m, x, y);
    return (1.0 - s) * smoothed(m, x, y) + s * smoothed(m + 1, x, y);
  }

  // ||q_m(x,.) - 1||_{L^p(pi)}; p = inf means max over vertices, unweighted
  double dp_distance(int x, long m, double p) const {
    auto q = smoothed_row(m, x);
    return lp_norm_minus_one(q, p);
  }

  double lp_norm_minus_one(const std::vector<double>& q, double p) const {
    int n = g_->vertex_count();
    if (p == kPInf) {
      double mx = 0.0;
      for (int y = 0; y < n; ++y) mx = std::max(mx, std::abs(q[y] - 1.0));
      return mx;
    }
    double s = 0.0;
    for (int y = 0; y < n; ++y) s += std::pow(std::abs(q[y] - 1.0), p) * g_->pi(y);
    return std::pow(s, 1.0 / p);
  }

  // Exact discrete L2 identity: D_2(x,m)^2 equals the interpolated diagonal
  // kernel at time 2m + 1/2 minus one, i.e. (q_{2m}(x,x)+q_{2m+1}(x,x))/2 - 1.
  // Returned as (lhs, rhs) for the caller to compare.
  std::pair<double, double> l2_identity_check(int x, long m) const {
    double d2 = dp_distance(x, m, 2.0);
    double rhs = interpolated(2 * m + 0.5, x, x) - 1.0;
    return {d2 * d2, rhs};
  }

 private:
  void build_spectral() {
    const WeightedGraph& g = *g_;
    int n = g.vertex_count();
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : g.edges()) {
      double v = e.w / std::sqrt(g.mu(e.u) * g.mu(e.v));
      S(e.u, e.v) = v;
      S(e.v, e.u) = v;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
    // ascending from Eigen; store descending
    spec_.eigenvalues.resize(n);
    spec_.phi.resize(n, n);
    for (int k = 0; k < n; ++k) {
      double lam = es.eigenvalues()(n - 1 - k);
      spec_.eigenvalues[k] = std::clamp(lam, -1.0, 1.0);
      for (int x = 0; x < n; ++x)
        spec_.phi(x, k) = es.eigenvectors()(x, n - 1 - k) / std::sqrt(g.pi(x));
    }
    // fix the constant eigenvector's sign
    if (spec_.phi(0, 0) < 0) spec_.phi.col(0) = -spec_.phi.col(0);
    spec_.gap = 1.0 - (n > 1 ? spec_.eigenvalues[1] : 1.0);
  }

  const WeightedGraph* g_;
  KernelBackend backend_;
  int spectral_limit_ = 5000;
  SpectralData spec_;
  mutable std::vector<double> scratch_;
};

// ---- mixing times ------------------------------------------------------

struct MixingOptions {
  double threshold = 0.25;
  bool interpolated = false;   // integer mode when false
  long horizon = -1;           // -1: 64 * mu(G) * (resistance diameter upper bound)
  double accept_tol = 1e-12;   // float comparisons biased toward acceptance
  int sup_sample = -1;         // -1: exact sup over all vertices
  std::uint64_t sample_seed = 1;
  int dense_limit = 512;       // full-matrix engine cutoff
};

struct MixingReport {
  double p = 1.0;
  double threshold = 0.25;
  bool interpolated_mode = false;
  long t_integer = 0;    // least m > 0 with sup_x D_p(x,m) <= threshold
  double t_real = 0.0;   // interpolated value; equals t_integer in integer mode
  std::vector<double> per_vertex_real;  // per-vertex mixing times when computed
  std::vector<std::pair<long, double>> sup_curve;  // (m, sup_x D_p(x,m))
  bool approximate_sup = false;
  bool rational_exact = false;
  long horizon = 0;
  std::string backend;
};

namespace detail {

// horizon cap from Lemma-style bound material: 64 * mu(G) * c1 * diam upper,
// where resistance <= (1/min weight) * hops and the double sweep is within 2x
inline long default_horizon(const WeightedGraph& g) {
  double diam_upper = 2.0 * std::max(1, g.hop_diameter_estimate());
  double cap = 64.0 * g.total_mass() * diam_upper / g.min_edge_weight();
  cap = std::min(cap, 4e18);
  return std::max<long>(64, static_cast<long>(cap));
}

// earliest s in [0,1] with f(s) <= thr, given f convex, f(0) > thr >= f(1)
template <class F>
double convex_crossing(F&& f, double thr) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) <= thr) hi = mid;
    else lo = mid;
  }
  return hi;
}

}  // namespace detail

// Mixing time from one starting vertex by sequential stepping.
// Returns (integer time, real time, curve of D_p(x, m)).
struct PointedMixing {
  long t_integer;
  double t_real;
  std::vector<double> curve;
};

inline PointedMixing mixing_time_at(const KernelEvaluator& k, int x, double p,
                                    const MixingOptions& opt = {}) {
  const WeightedGraph& g = k.graph();
  int n = g.vertex_count();
  long horizon = opt.horizon > 0 ? opt.horizon : detail::default_horizon(g);
  double thr = opt.threshold + opt.accept_tol;

  std::vector<double> u(n, 0.0), v;
  u[x] = 1.0;
  v = u;
  k.step_distribution(v);  // v = one step ahead of u

  auto dp_from = [&](const std::vector<double>& a, const std::vector<double>& b) {
    // q_m pi = (a + b)/2 with a = P_x(X_m = .), b = P_x(X_{m+1} = .)
    if (p == kPInf) {
      double mx = 0.0;
      for (int y = 0; y < n; ++y)
        mx = std::max(mx, std::abs(0.5 * (a[y] + b[y]) / g.pi(y) - 1.0));
      return mx;
    }
    if (p == 1.0) {
      double s = 0.0;
      for (int y = 0; y < n; ++y) s += std::abs(0.5 * (a[y] + b[y]) - g.pi(y));
      return s;
    }
    double s = 0.0;
    for (int y = 0; y < n; ++y)
      s += std::pow(std::abs(0.5 * (a[y] + b[y]) / g.pi(y) - 1.0), p) * g.pi(y);
    return std::pow(s, 1.0 / p);
  };

  PointedMixing out;
  out.curve.push_back(dp_from(u, v));  // m = 0
  std::vector<double> prev_u;
  long m = 0;
  for (;;) {
    ++m;
    if (m > horizon)
      throw NotMixedWithinHorizon("no m <= " + std::to_string(horizon) +
                                  " reached threshold from vertex " + std::to_string(x));
    prev_u = u;
    u = v;
    k.step_distribution(v);
    double d = dp_from(u, v);
    out.curve.push_back(d);
    if (d <= thr) break;
  }
  out.t_integer = m;
  if (!opt.interpolated) {
    out.t_real = double(m);
    return out;
  }
  // refine within (m-1, m]; kernels at m-1 need rows m-1, m, m+1
  double d_prev = out.curve[m - 1];
  if (m == 1 && out.curve[0] <= thr) {
    out.t_real = 0.0;  // stationary from the start; inf over t > 0
    return out;
  }
  if (d_prev <= thr) {  // only at m == 1 handled above; keep safe
    out.t_real = double(m) - 1.0;
    return out;
  }
  auto qrow = [&](const std::vector<double>& a, const std::vector<double>& b, int y) {
    return 0.5 * (a[y] + b[y]) / g.pi(y);
  };
  auto g_of_s = [&](double s) {
    if (p == kPInf) {
      double mx = 0.0;
      for (int y = 0; y < n; ++y) {
        double q = (1 - s) * qrow(prev_u, u, y) + s * qrow(u, v, y);
        mx = std::max(mx, std::abs(q - 1.0));
      }
      return mx;
    }
    double sacc = 0.0;
    for (int y = 0; y < n; ++y) {
      double q = (1 - s) * qrow(prev_u, u, y) + s * qrow(u, v, y);
      sacc += std::pow(std::abs(q - 1.0), p) * g.pi(y);
    }
    return std::pow(sacc, 1.0 / p);
  };
  out.t_real = double(m - 1) + detail::convex_crossing(g_of_s, thr);
  return out;
}

namespace detail {

// Full-matrix engine for small graphs: exact sup over vertices for any p,
// per-vertex mixing times, sup curve.
inline MixingReport mixing_dense(const KernelEvaluator& k, double p, const MixingOptions& opt) {
  const WeightedGraph& g = k.graph();
  int n = g.vertex_count();
  long horizon = opt.horizon > 0 ? opt.horizon : default_horizon(g);
  double thr = opt.threshold + opt.accept_tol;

  MixingReport rep;
  rep.p = p;
  rep.threshold = opt.threshold;
  rep.interpolated_mode = opt.interpolated;
  rep.horizon = horizon;
  rep.backend = "dense-power";
  rep.per_vertex_real.assign(n, -1.0);

  // U[m](x, .) = P_x(X_m = .), evolved in place row by row
  std::vector<std::vector<double>> U(n), V(n), W(n);
  for (int x = 0; x < n; ++x) {
    U[x].assign(n, 0.0);
    U[x][x] = 1.0;
    V[x] = U[x];
    k.step_distribution(V[x]);
  }

  auto dp_row = [&](const std::vector<double>& a, const std::vector<double>& b,
                    std::vector<double>* qout) {
    double val;
    std::vector<double> q(n);
    for (int y = 0; y < n; ++y) q[y] = 0.5 * (a[y] + b[y]) / g.pi(y);
    if (p == kPInf) {
      val = 0.0;
      for (int y = 0; y < n; ++y) val = std::max(val, std::abs(q[y] - 1.0));
    } else {
      double s = 0.0;
      for (int y = 0; y < n; ++y) s += std::pow(std::abs(q[y] - 1.0), p) * g.pi(y);
      val = std::pow(s, 1.0 / p);
    }
    if (qout) *qout = std::move(q);
    return val;
  };

  std::vector<long> per_vertex_int(n, -1);
  std::vector<std::vector<double>> prevU;
  long m = 0;
  long t_int = -1;
  for (;;) {
    double sup = 0.0;
    for (int x = 0; x < n; ++x) {
      double dx = dp_row(U[x], V[x], nullptr);
      sup = std::max(sup, dx);
      if (m > 0 && per_vertex_int[x] < 0 && dx <= thr) per_vertex_int[x] = m;
    }
    rep.sup_curve.emplace_back(m, sup);
    if (m > 0 && sup <= thr) {
      t_int = m;
      break;
    }
    if (m >= horizon)
      throw NotMixedWithinHorizon("no m <= " + std::to_string(horizon) +
                                  " reached threshold");
    prevU = U;
    for (int x = 0; x < n; ++x) {
      U[x] = V[x];
      k.step_distribution(V[x]);
    }
    ++m;
  }
  rep.t_integer = t_int;

  if (!opt.interpolated) {
    rep.t_real = double(t_int);
    for (int x = 0; x < n; ++x)
      rep.per_vertex_real[x] = double(per_vertex_int[x] < 0 ? t_int : per_vertex_int[x]);
    return rep;
  }

  // per-vertex interpolated refinement within (t_int - 1, t_int]; vertices
  // that crossed earlier keep their integer crossing refined from stored curve
  // data is not retained per vertex, so refine only within the final bracket
  // for vertices crossing at t_int, and re-run pointed refinement for others.
  for (int x = 0; x < n; ++x) {
    if (per_vertex_int[x] == t_int && t_int >= 1 && !prevU.empty()) {
      auto gs = [&](double s) {
        double acc = 0.0, mx = 0.0;
        for (int y = 0; y < n; ++y) {
          double qa = 0.5 * (prevU[x][y] + U[x][y]) / g.pi(y);
          double qb = 0.5 * (U[x][y] + V[x][y]) / g.pi(y);
          double q = (1 - s) * qa + s * qb;
          if (p == kPInf) mx = std::max(mx, std::abs(q - 1.0));
          else acc += std::pow(std::abs(q - 1.0), p) * g.pi(y);
        }
        return p == kPInf ? mx : std::pow(acc, 1.0 / p);
      };
      double d_prev = gs(0.0);
      rep.per_vertex_real[x] =
          d_prev <= thr ? double(t_int - 1) : double(t_int - 1) + convex_crossing(gs, thr);
    } else {
      MixingOptions po = opt;
      po.horizon = horizon;
      rep.per_vertex_real[x] = mixing_time_at(k, x, p, po).t_real;
    }
  }
  rep.t_real = *std::max_element(rep.per_vertex_real.begin(), rep.per_vertex_real.end());
  return rep;
}

// Spectral engine for p = inf on larger graphs. At even times the sup over
// (x,y) of |q_m(x,y)-1| is attained on the diagonal (Cauchy-Schwarz with
// nonnegative spectral coefficients), which gives a cheap exact bracket.
inline MixingReport mixing_spectral_inf(const KernelEvaluator& k, const MixingOptions& opt) {
  const WeightedGraph& g = k.graph();
  const SpectralData& sp = k.spectral();
  int n = g.vertex_count();
  long horizon = opt.horizon > 0 ? opt.horizon : default_horizon(g);
  double thr = opt.threshold + opt.accept_tol;

  MixingReport rep;
  rep.p = kPInf;
  rep.threshold = opt.threshold;
  rep.interpolated_mode = opt.interpolated;
  rep.horizon = horizon;
  rep.backend = "spectral";

  Eigen::MatrixXd phi2 = sp.phi.array().square();
  int K = n;
  Eigen::VectorXd w(K);  // smoothing weights (1 + lambda)/2, constant mode dropped
  for (int k2 = 0; k2 < K; ++k2) w(k2) = 0.5 * (1.0 + sp.eigenvalues[k2]);

  auto diag_sup = [&](long m) {  // exact sup_x D_inf(x, m) at even m
    Eigen::VectorXd c(K);
    c(0) = 0.0;
    for (int j = 1; j < K; ++j) c(j) = ipow(sp.eigenvalues[j], m) * w(j);
    return (phi2 * c).maxCoeff();
  };
  auto abs_sup_bound = [&](long m) {  // certified upper bound at any m
    Eigen::VectorXd c(K);
    c(0) = 0.0;
    for (int j = 1; j < K; ++j) c(j) = ipow(std::abs(sp.eigenvalues[j]), m) * w(j);
    return (phi2 * c).maxCoeff();
  };

  // bracket on even times
  long lo = 0, hi = 2;  // lo: fails, hi: first even success
  while (diag_sup(hi) > thr) {
    lo = hi;
    hi *= 2;
    if (hi > horizon + 1)
      throw NotMixedWithinHorizon("no m <= " + std::to_string(horizon) +
                                  " reached threshold");
  }
  while (hi - lo > 2) {
    long mid = lo + (hi - lo) / 2;
    mid -= mid % 2;
    if (mid == lo) mid += 2;
    if (diag_sup(mid) <= thr) hi = mid;
    else lo = mid;
  }

  // decide between hi - 1 (odd) and hi
  Eigen::MatrixXd Qm, Qm1;  // materialized q-matrices when needed
  long bracket_lo = -1;
  auto materialize = [&](long m) {
    Eigen::VectorXd cm(K), cm1(K);
    for (int j = 0; j < K; ++j) {
      cm(j) = ipow(sp.eigenvalues[j], m) * w(j);
      cm1(j) = ipow(sp.eigenvalues[j], m + 1) * w(j);
    }
    Qm = sp.phi * cm.asDiagonal() * sp.phi.transpose();
    Qm1 = sp.phi * cm1.asDiagonal() * sp.phi.transpose();
    bracket_lo = m;
  };
  auto exact_sup_at = [&](long m) {  // exact sup_{x,y} |q_m - 1| via GEMM
    Eigen::VectorXd c(K);
    for (int j = 0; j < K; ++j) c(j) = ipow(sp.eigenvalues[j], m) * w(j);
    Eigen::MatrixXd Q = sp.phi * c.asDiagonal() * sp.phi.transpose();
    return (Q.array() - 1.0).abs().maxCoeff();
  };

  long t_int;
  long odd = hi - 1;
  if (odd <= 0) {
    t_int = hi;
  } else if (abs_sup_bound(odd) <= thr) {
    t_int = odd;
  } else {
    // cheap bounds are inconclusive only while negative modes still matter;
    // the diagonal gives a lower bound on the sup at odd times
    Eigen::VectorXd c(K);
    c(0) = 0.0;
    for (int j = 1; j < K; ++j) c(j) = ipow(sp.eigenvalues[j], odd) * w(j);
    double lower = (phi2 * c).cwiseAbs().maxCoeff();
    if (lower > thr) t_int = hi;
    else t_int = (exact_sup_at(odd) <= thr) ? odd : hi;
  }
  rep.t_integer = t_int;

  if (!opt.interpolated) {
    rep.t_real = double(t_int);
    return rep;
  }

  // refine in (t_int - 1, t_int]
  long m0 = t_int - 1;
  if (m0 < 0) {
    rep.t_real = 0;
    return rep;
  }
  materialize(m0);
  auto g_of_s = [&](double s) {
    return (((1 - s) * Qm + s * Qm1).array() - 1.0).abs().maxCoeff();
  };
  double d0 = g_of_s(0.0);
  rep.t_real = d0 <= thr ? double(m0) : double(m0) + convex_crossing(g_of_s, thr);
  return rep;
}

}  // namespace detail

// Global L^p mixing time: least m > 0 (or real t > 0 in interpolated mode)
// with sup_x D_p(x, m) <= threshold.
inline MixingReport mixing_time(const KernelEvaluator& k, double p,
                                const MixingOptions& opt = {}) {
  const WeightedGraph& g = k.graph();
  int n = g.vertex_count();
  if (n <= opt.dense_limit) return detail::mixing_dense(k, p, opt);
  if (p == kPInf && k.backend() == KernelBackend::Spectral)
    return detail::mixing_spectral_inf(k, opt);

  // pointed runs over all vertices (exact sup) or a sample including the root
  MixingReport rep;
  rep.p = p;
  rep.threshold = opt.threshold;
  rep.interpolated_mode = opt.interpolated;
  rep.horizon = opt.horizon > 0 ? opt.horizon : detail::default_horizon(g);
  rep.backend = "pointed-power";
  std::vector<int> xs;
  if (opt.sup_sample > 0 && opt.sup_sample < n) {
    rep.approximate_sup = true;
    Rng rng(opt.sample_seed);
    std::vector<char> used(n, 0);
    if (g.root()) {
      xs.push_back(*g.root());
      used[*g.root()] = 1;
    }
    while (static_cast<int>(xs.size()) < opt.sup_sample) {
      int c = static_cast<int>(rng.below(n));
      if (!used[c]) {
        used[c] = 1;
        xs.push_back(c);
      }
    }
  } else {
    xs.resize(n);
    for (int i = 0; i < n; ++i) xs[i] = i;
  }
  long t_int = 0;
  double t_real = 0;
  for (int x : xs) {
    auto pm = mixing_time_at(k, x, p, opt);
    t_int = std::max(t_int, pm.t_integer);
    t_real = std::max(t_real, pm.t_real);
    rep.per_vertex_real.push_back(opt.interpolated ? pm.t_real : double(pm.t_integer));
  }
  rep.t_integer = t_int;
  rep.t_real = opt.interpolated ? t_real : double(t_int);
  return rep;
}

// Total-variation mixing time with the smoothed kernel: least m > 0 with
// max_x ||Q_m(x,.) - pi||_TV <= threshold. Computed through the one-sided
// positive-part sum, an independent route from dp_distance.
inline long tv_mixing_time(const KernelEvaluator& k, double threshold = 0.125,
                           const MixingOptions& opt = {}) {
  const WeightedGraph& g = k.graph();
  int n = g.vertex_count();
  long horizon = opt.horizon > 0 ? opt.horizon : detail::default_horizon(g);
  double thr = threshold + opt.accept_tol;
  long answer = 0;
  for (int x = 0; x < n; ++x) {
    std::vector<double> u(n, 0.0), v;
    u[x] = 1.0;
    v = u;
    k.step_distribution(v);
    long m = 0;
    for (;;) {
      ++m;
      if (m > horizon) throw NotMixedWithinHorizon("tv mixing exceeded horizon");
      u = v;
      k.step_distribution(v);
      double tv = 0.0;
      for (int y = 0; y < n; ++y) {
        double diff = 0.5 * (u[y] + v[y]) - g.pi(y);
        if (diff > 0) tv += diff;
      }
      if (tv <= thr) break;
    }
    answer = std::max(answer, m);
  }
  return answer;
}

}  // namespace mixlab
