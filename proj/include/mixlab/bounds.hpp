#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mixlab/errors.hpp"
#include "mixlab/graph.hpp"
#include "mixlab/resistance.hpp"
#include "mixlab/stats.hpp"

namespace mixlab {

// Volume and resistance growth profiles v, r with v(0)=r(0)=0, v(1)=r(1)=1,
// doubling-type regularity constants (C1, C2, d1, d2, a1, a2), and the
// derived constants used by the mixing-time bounds.
class GrowthSpec {
 public:
  // closed-form power laws v(R)=R^dv, r(R)=R^dr (constants are exact)
  static GrowthSpec power_law(double dv, double dr) {
    if (dv < 1.0) throw Error("volume exponent must be >= 1");
    if (!(dr > 0.0) || dr > 1.0) throw Error("resistance exponent must lie in (0,1]");
    GrowthSpec s;
    s.power_ = true;
    s.dv_ = dv;
    s.dr_ = dr;
    s.C1_ = 1.0;
    s.C2_ = 1.0;
    s.d1_ = dv;
    s.d2_ = dv;
    s.a1_ = dr;
    s.a2_ = dr;
    return s;
  }

  // tabulated profiles on {0,...,K}; normalized so v(1)=r(1)=1 and extended
  // by linear interpolation; constants fitted by exhaustive ratio scan
  static GrowthSpec tabulated(std::vector<double> v, std::vector<double> r) {
    if (v.size() != r.size() || v.size() < 2) throw Error("bad growth tables");
    if (v[0] != 0.0 || r[0] != 0.0) throw Error("growth tables need v(0)=r(0)=0");
    for (size_t i = 1; i < v.size(); ++i)
      if (!(v[i] > v[i - 1]) || !(r[i] > r[i - 1]))
        throw Error("growth tables must be strictly increasing");
    GrowthSpec s;
    s.power_ = false;
    double v1 = v[1], r1 = r[1];
    for (auto& x : v) x /= v1;
    for (auto& x : r) x /= r1;
    s.vt_ = std::move(v);
    s.rt_ = std::move(r);
    s.fit_constants();
    return s;
  }

  double v(double R) const { return power_ ? std::pow(std::max(R, 0.0), dv_) : interp(vt_, R); }
  double r(double R) const { return power_ ? std::pow(std::max(R, 0.0), dr_) : interp(rt_, R); }

  double C1() const { return C1_; }
  double C2() const { return C2_; }
  double d1() const { return d1_; }
  double d2() const { return d2_; }
  double alpha1() const { return a1_; }
  double alpha2() const { return a2_; }

  double C3() const { return std::pow(2.0, -2.0 / a1_) * std::pow(C2_, -1.0 / a2_); }
  double C4() const { return 0.125 / C1_ * std::pow(C3(), d2_); }

  double h2_prime(double H0, double H2) const { return H2 + (H0 + H2) * d2_ / a1_; }

  // eps0(lambda) = c1 * lambda^{-(H0 + sum_i H_i + H2')/a1}
  double eps0(double lambda, const std::array<double, 4>& H, double c1 = 1.0) const {
    double sum = H[0] + H[1] + H[2] + H[3];
    double expo = (H[0] + sum + h2_prime(H[0], H[2])) / a1_;
    return c1 * std::pow(lambda, -expo);
  }

  // verify the doubling sandwich on all grid pairs 0 < R' <= R <= hi
  // (exhaustive for grids <= 512, geometric subgrid beyond)
  bool check_sandwich(double hi, double tol = 1e-9) const {
    std::vector<double> grid;
    long n = lround(std::floor(hi));
    if (n <= 512) {
      for (long i = 1; i <= n; ++i) grid.push_back(double(i));
    } else {
      for (double x = 1.0; x < double(n); x *= 1.25) grid.push_back(std::floor(x));
      grid.push_back(double(n));
    }
    for (size_t i = 0; i < grid.size(); ++i)
      for (size_t j = i; j < grid.size(); ++j) {
        double Rlo = grid[i], Rhi = grid[j];
        double rat = Rhi / Rlo;
        double vr = v(Rhi) / v(Rlo), rr = r(Rhi) / r(Rlo);
        if (vr > C1_ * std::pow(rat, d2_) + tol) return false;
        if (vr < std::pow(rat, d1_) / C1_ - tol) return false;
        if (rr > C2_ * std::pow(rat, a2_) + tol) return false;
        if (rr < std::pow(rat, a1_) / C2_ - tol) return false;
      }
    return true;
  }

 private:
  void fit_constants() {
    // slopes over all grid pairs give the exponent range; constants then 1
    // up to clamping d1 >= 1 and a2 <= 1
    double lo_v = 1e300, hi_v = -1e300, lo_r = 1e300, hi_r = -1e300;
    size_t K = vt_.size() - 1;
    for (size_t i = 1; i <= K; ++i)
      for (size_t j = i + 1; j <= K; ++j) {
        double lr = std::log(double(j) / double(i));
        double sv = std::log(vt_[j] / vt_[i]) / lr;
        double sr = std::log(rt_[j] / rt_[i]) / lr;
        lo_v = std::min(lo_v, sv);
        hi_v = std::max(hi_v, sv);
        lo_r = std::min(lo_r, sr);
        hi_r = std::max(hi_r, sr);
      }
    d1_ = std::max(1.0, lo_v);
    d2_ = std::max(d1_, hi_v);
    a1_ = std::max(1e-9, std::min(1.0, lo_r));
    a2_ = std::min(1.0, std::max(a1_, hi_r));
    // smallest admissible constants for the clamped exponents
    C1_ = 1.0;
    C2_ = 1.0;
    for (size_t i = 1; i <= K; ++i)
      for (size_t j = i; j <= K; ++j) {
        double rat = double(j) / double(i);
        double vr = vt_[j] / vt_[i], rr = rt_[j] / rt_[i];
        C1_ = std::max({C1_, vr / std::pow(rat, d2_), std::pow(rat, d1_) / vr});
        C2_ = std::max({C2_, rr / std::pow(rat, a2_), std::pow(rat, a1_) / rr});
      }
  }

  static double interp(const std::vector<double>& t, double R) {
    if (R <= 0) return 0.0;
    double top = double(t.size() - 1);
    if (R >= top) {
      // linear continuation with the last slope
      double slope = t[t.size() - 1] - t[t.size() - 2];
      return t.back() + slope * (R - top);
    }
    long i = lround(std::floor(R));
    double s = R - double(i);
    return t[i] * (1 - s) + t[i + 1] * s;
  }

  bool power_ = true;
  double dv_ = 1.0, dr_ = 1.0;
  std::vector<double> vt_, rt_;
  double C1_ = 1, C2_ = 1, d1_ = 1, d2_ = 1, a1_ = 1, a2_ = 1;
};

// Outcome of checking the volume/resistance growth conditions at radius R
// from a root, for given lambda and exponents H0..H3.
struct BoundConditions {
  double lambda = 1.0;
  std::array<double, 4> H{1, 1, 1, 1};
  double h2_prime = 0.0;
  double R = 0.0;
  double inner_radius = 0.0;  // C3 lambda^{-(H0+H2)/a1} R

  bool res_upper = false;   // R_eff(rho,y) <= lambda^{H0} r(d(rho,y)) on B(R)
  bool vol_upper = false;   // V(R) <= lambda^{H1} v(R)
  bool res_lower = false;   // R_eff(rho, B(R)^c) >= lambda^{-H2} r(R)
  bool vol_inner = false;   // V(R_in) >= lambda^{-H3} v(R_in)

  double res_upper_margin = 0.0;  // min over y of rhs - lhs
  double vol_upper_margin = 0.0;
  double res_lower_margin = 0.0;
  double vol_inner_margin = 0.0;

  double V_R = 0.0;       // V(R)
  double V_inner = 0.0;   // V(R_in)
  double boundary_resistance = 0.0;  // R_eff(rho, B(R)^c)

  bool all() const { return res_upper && vol_upper && res_lower && vol_inner; }
};

namespace detail {

// ball in the hop metric (the bounds chapter fixes the shortest-path metric)
inline std::vector<int> hop_ball(const WeightedGraph& g, int root, double R,
                                 const std::vector<int>& hops) {
  std::vector<int> ball;
  for (int i = 0; i < g.vertex_count(); ++i)
    if (hops[i] < R) ball.push_back(i);
  return ball;
}

inline double ball_volume(const WeightedGraph& g, const std::vector<int>& ball) {
  double V = 0.0;
  for (int x : ball) V += g.mu(x);
  return V;
}

}  // namespace detail

// Check conditions at radius R. Throws BallIsWholeGraph when B(R) covers the
// graph (the boundary clause is then vacuous).
inline BoundConditions check_conditions(const WeightedGraph& g, const ResistanceOracle& oracle,
                                        int root, double R, double lambda,
                                        const std::array<double, 4>& H,
                                        const GrowthSpec& spec) {
  if (lambda < 1.0) throw Error("lambda must be >= 1");
  if (R <= 1.0) throw Error("R must exceed 1");
  BoundConditions c;
  c.lambda = lambda;
  c.H = H;
  c.R = R;
  c.h2_prime = spec.h2_prime(H[0], H[2]);
  c.inner_radius = spec.C3() * std::pow(lambda, -(H[0] + H[2]) / spec.alpha1()) * R;

  auto hops = g.hops_from(root);
  auto ball = detail::hop_ball(g, root, R, hops);
  if (static_cast<int>(ball.size()) == g.vertex_count())
    throw BallIsWholeGraph("B(R) covers the whole graph at R = " + std::to_string(R));

  // comparisons carry a small acceptance-biased tolerance so that exact
  // boundary cases (common on symmetric instances) are not lost to roundoff
  auto leq = [](double a, double b) { return a <= b + 1e-9 * std::max(1.0, std::abs(b)); };

  // (6.4) first clause: resistance to every vertex of the ball
  double lamH0 = std::pow(lambda, H[0]);
  c.res_upper = true;
  c.res_upper_margin = std::numeric_limits<double>::infinity();
  for (int y : ball) {
    if (y == root) continue;
    double lhs = oracle.pair_resistance(root, y);
    double rhs = lamH0 * spec.r(double(hops[y]));
    c.res_upper_margin = std::min(c.res_upper_margin, rhs - lhs);
    if (!leq(lhs, rhs)) c.res_upper = false;
  }
  if (ball.size() <= 1) c.res_upper_margin = 0.0;

  // (6.4) second clause: volume of the ball
  c.V_R = detail::ball_volume(g, ball);
  double vol_rhs = std::pow(lambda, H[1]) * spec.v(R);
  c.vol_upper = leq(c.V_R, vol_rhs);
  c.vol_upper_margin = vol_rhs - c.V_R;

  // (6.5) first clause: resistance from the root to the complement
  std::vector<int> complement;
  for (int i = 0; i < g.vertex_count(); ++i)
    if (hops[i] >= R) complement.push_back(i);
  c.boundary_resistance = oracle.set_resistance({root}, complement);
  double res_low_rhs = std::pow(lambda, -H[2]) * spec.r(R);
  c.res_lower = leq(res_low_rhs, c.boundary_resistance);
  c.res_lower_margin = c.boundary_resistance - res_low_rhs;

  // (6.5) second clause: volume of the inner ball
  auto inner = detail::hop_ball(g, root, c.inner_radius, hops);
  c.V_inner = detail::ball_volume(g, inner);
  double vin_rhs = std::pow(lambda, -H[3]) * spec.v(c.inner_radius);
  c.vol_inner = leq(vin_rhs, c.V_inner);
  c.vol_inner_margin = c.V_inner - vin_rhs;

  return c;
}

// Upper bound of the mixing time: 4 diam_R(G) mu(G).
struct UpperBoundReport {
  double bound;
  double diameter;
  bool diameter_exact;
  double mass;
};

inline UpperBoundReport upper_bound(const WeightedGraph& g, const ResistanceOracle& oracle) {
  auto d = oracle.diameter();
  return {4.0 * d.value * g.total_mass(), d.value, d.exact, g.total_mass()};
}

// Lower bound for the global mixing time, valid when the conditions hold at R
// and mu(G) >= 4 V(R): t_mix^1(G) > C4 lambda^{-H2'-H3} v(R) r(R).
inline double lower_bound_global(const WeightedGraph& g, const BoundConditions& c,
                                 const GrowthSpec& spec) {
  if (!c.res_upper) throw PreconditionFailed("resistance-upper (6.4) fails");
  if (!c.vol_upper) throw PreconditionFailed("volume-upper (6.4) fails");
  if (!c.res_lower) throw PreconditionFailed("resistance-lower (6.5) fails");
  if (!c.vol_inner) throw PreconditionFailed("inner-volume (6.5) fails");
  if (g.total_mass() < 4.0 * c.V_R) throw PreconditionFailed("mass: mu(G) < 4 V(R)");
  return spec.C4() * std::pow(c.lambda, -c.h2_prime - c.H[3]) * spec.v(c.R) * spec.r(c.R);
}

// Lower bound for the mixing time at the root, requiring the conditions at
// both R and eps0(lambda) R.
inline double lower_bound_point(const WeightedGraph& g, const BoundConditions& at_R,
                                const BoundConditions& at_epsR, const GrowthSpec& spec,
                                double c1 = 1.0) {
  double eps = spec.eps0(at_R.lambda, at_R.H, c1);
  double epsR = eps * at_R.R;
  if (epsR < 1.0) throw PreconditionFailed("radius-degenerate: eps0(lambda) R < 1");
  if (std::abs(at_epsR.R - epsR) > 1e-9 * std::max(1.0, epsR))
    throw PreconditionFailed("conditions not evaluated at eps0(lambda) R");
  if (!at_R.all()) throw PreconditionFailed("conditions at R fail");
  if (!at_epsR.all()) throw PreconditionFailed("conditions at eps0 R fail");
  if (g.total_mass() < 4.0 * at_R.V_R) throw PreconditionFailed("mass: mu(G) < 4 V(R)");
  return spec.C4() * std::pow(at_R.lambda, -at_R.h2_prime - at_R.H[3]) * spec.v(epsR) *
         spec.r(epsR);
}

// Exit-time inequalities from the killed-walk Green function: expectation
// upper bound on B(R), expectation lower bound on the inner ball, and the
// tail bound, each asserted only when its hypotheses verify. Also evaluates
// the bootstrap tail estimate and reports the implied constant.
struct ExitTimeReport {
  bool a5_applicable = false;  // needs (6.4)
  double a5_margin = 0.0;      // min over x in B(R) of bound - E_x tau
  bool a6_applicable = false;  // needs (6.4) and (6.5)
  double a6_margin = 0.0;      // min over x in inner ball of E_x tau - bound
  bool a7_applicable = false;
  double a7_margin = 0.0;      // min over x in inner ball, n >= 0
  double expectation_upper = 0.0;  // 2 lambda^{H0+H1} v(R) r(R)
  double expectation_lower = 0.0;  // 2 C4 lambda^{-H2'-H3} v(R) r(R)
  // bootstrap (tail estimate at eps0): observed sup_y P_y(tau_R <= t0) and
  // the polynomial factor; their ratio is the implied constant
  bool bootstrap_evaluated = false;
  double bootstrap_lhs = 0.0;
  double bootstrap_factor = 0.0;
  double bootstrap_implied_c1 = 0.0;
};

inline ExitTimeReport exit_time_bounds_check(const WeightedGraph& g,
                                             const ResistanceOracle& oracle, int root,
                                             double R, double lambda,
                                             const std::array<double, 4>& H,
                                             const GrowthSpec& spec, double eps_c1 = 1.0) {
  auto cond = check_conditions(g, oracle, root, R, lambda, H, spec);
  ExitTimeReport rep;
  auto hops = g.hops_from(root);
  auto ball = detail::hop_ball(g, root, R, hops);
  auto killed = oracle.green_killed(ball);

  double vr = spec.v(R) * spec.r(R);
  rep.expectation_upper = 2.0 * std::pow(lambda, H[0] + H[1]) * vr;
  rep.expectation_lower = 2.0 * spec.C4() * std::pow(lambda, -cond.h2_prime - H[3]) * vr;

  if (cond.res_upper && cond.vol_upper) {
    rep.a5_applicable = true;
    rep.a5_margin = std::numeric_limits<double>::infinity();
    for (int x : ball)
      rep.a5_margin = std::min(rep.a5_margin, rep.expectation_upper - killed.exit_expectation(x));
  }

  std::vector<int> inner = detail::hop_ball(g, root, cond.inner_radius, hops);
  if (cond.all() && !inner.empty()) {
    rep.a6_applicable = true;
    rep.a6_margin = std::numeric_limits<double>::infinity();
    for (int x : inner)
      rep.a6_margin = std::min(rep.a6_margin, killed.exit_expectation(x) - rep.expectation_lower);

    rep.a7_applicable = true;
    rep.a7_margin = std::numeric_limits<double>::infinity();
    long horizon = static_cast<long>(std::ceil(2.0 * rep.expectation_lower)) + 2;
    for (int x : inner) {
      auto tail = killed.exit_tail(x, horizon);
      for (long n = 0; n <= horizon; ++n) {
        double rhs = (rep.expectation_lower - double(n)) / rep.expectation_upper;
        rep.a7_margin = std::min(rep.a7_margin, tail[n] - rhs);
      }
    }
  }

  // bootstrap at eps = eps0(lambda)
  double eps = spec.eps0(lambda, H, eps_c1);
  double epsR = eps * R;
  if (epsR >= 1.0 && eps <= spec.C3() * std::pow(lambda, -(H[0] + H[2]) / spec.alpha1())) {
    try {
      auto cond_eps = check_conditions(g, oracle, root, epsR, lambda, H, spec);
      if (cond.all() && cond_eps.all()) {
        double t0 = spec.C4() * std::pow(lambda, -cond.h2_prime - H[3]) * spec.v(epsR) * spec.r(epsR);
        long n0 = static_cast<long>(std::floor(t0));
        auto inner_eps = detail::hop_ball(g, root, epsR, hops);
        double worst = 0.0;
        for (int y : inner_eps) {
          auto tail = killed.exit_tail(y, n0);
          worst = std::max(worst, 1.0 - tail[n0]);  // P_y(tau_R <= n0)... tail[n]=P(tau>n)
        }
        double sumH = H[0] + H[1] + H[2] + H[3];
        rep.bootstrap_evaluated = true;
        rep.bootstrap_lhs = worst;
        rep.bootstrap_factor =
            std::pow(lambda, H[0] + sumH + cond.h2_prime) * std::pow(eps, spec.alpha1());
        rep.bootstrap_implied_c1 =
            rep.bootstrap_factor > 0 ? rep.bootstrap_lhs / rep.bootstrap_factor : 0.0;
      }
    } catch (const BallIsWholeGraph&) {
    }
  }
  return rep;
}

// ---- exponent presets (Section-6 table rows) ----------------------------

struct ExponentPreset {
  std::string family;
  GrowthSpec spec;
  std::function<double(double)> h;
  double gamma(double N) const { return spec.v(h(N)) * spec.r(h(N)); }
  // preset parameters (for echo into reports)
  double K = 0, L = 0, lam = 0, alpha = 0;
};

inline ExponentPreset preset(const std::string& family, double alpha = 2.0, double K = 3,
                             double L = 2, double lam = 5.0 / 3.0) {
  ExponentPreset p;
  p.family = family;
  if (family == "er-critical") {
    p.spec = GrowthSpec::power_law(2.0, 1.0);
    p.h = [](double N) { return std::pow(N, 1.0 / 3.0); };
  } else if (family == "gw-tree") {
    if (!(alpha > 1.0) || alpha > 2.0) throw Error("gw-tree preset needs alpha in (1,2]");
    p.alpha = alpha;
    p.spec = GrowthSpec::power_law(alpha / (alpha - 1.0), 1.0);
    p.h = [alpha](double N) { return std::pow(N, 1.0 - 1.0 / alpha); };
  } else if (family == "gasket") {
    p.K = K;
    p.L = L;
    p.lam = lam;
    p.spec = GrowthSpec::power_law(std::log(K) / std::log(L), std::log(lam) / std::log(L));
    p.h = [L](double N) { return std::pow(L, N); };
  } else if (family == "srw-range") {
    p.spec = GrowthSpec::power_law(1.0, 1.0);
    p.h = [](double N) { return N; };
  } else {
    throw UnknownFamily("unknown preset family '" + family + "'");
  }
  return p;
}

// ---- random-ensemble tail framework --------------------------------------

struct DrawBoundStats {
  double diam_R = 0.0;
  double mass = 0.0;
  double tmix_inf = 0.0;    // t_mix^infty(G)
  double tmix_1 = 0.0;      // t_mix^1(G)
  double tmix_1_root = 0.0; // t_mix^1(rho)
  bool conditions_ok = false;       // (6.4) and (6.5) at R = c1 lambda^{-J} h(N)
  bool conditions_eps_ok = false;   // additionally at eps0(lambda) R
};

struct TailBoundsReport {
  double lambda = 0;
  // part (1)
  double upper_empirical = 0, upper_empirical_lo = 0;  // Wilson lower edge
  double upper_bound = 0;                              // inf over theta grid
  bool upper_ok = false;
  // part (2)
  double lower_empirical = 0, lower_empirical_lo = 0;
  double lower_bound = 0;
  double c2 = 0, p0 = 0;
  bool lower_ok = false;
  // part (3)
  double lower_point_empirical = 0, lower_point_empirical_lo = 0;
  double lower_point_bound = 0;
  bool lower_point_ok = false;
};

// Evaluates the three tail bounds on an ensemble of draws at one lambda.
// p1hat/p2hat are the empirical tail probabilities entering the bounds.
inline TailBoundsReport ensemble_tail_bounds(const std::vector<DrawBoundStats>& draws,
                                             const ExponentPreset& preset, double N,
                                             double lambda,
                                             const std::array<double, 4>& H, double J,
                                             double c1 = 1.0, int theta_grid = 21) {
  if (draws.size() < 50)
    throw InsufficientDraws("need >= 50 draws, got " + std::to_string(draws.size()));
  size_t n = draws.size();
  double hN = preset.h(N);
  double rh = preset.spec.r(hN), vh = preset.spec.v(hN), gamma = preset.gamma(N);

  auto tail = [&](auto&& pred) {
    size_t c = 0;
    for (const auto& d : draws)
      if (pred(d)) ++c;
    return std::make_pair(double(c) / double(n), c);
  };

  TailBoundsReport rep;
  rep.lambda = lambda;

  // empirical p1(s) = P(diam_R >= s r(h(N))), p2(s) = P(mass >= s v(h(N)))
  auto p1hat = [&](double s) {
    return tail([&](const DrawBoundStats& d) { return d.diam_R >= s * rh; }).first;
  };
  auto p2hat = [&](double s) {
    return tail([&](const DrawBoundStats& d) { return d.mass >= s * vh; }).first;
  };

  // part (1): P(tmix_inf >= lambda gamma) <= inf_theta p1(l^th/8) + p2(l^{1-th})
  auto [pu, cu] = tail([&](const DrawBoundStats& d) { return d.tmix_inf >= lambda * gamma; });
  rep.upper_empirical = pu;
  rep.upper_empirical_lo = wilson_interval(cu, n).lo;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < theta_grid; ++i) {
    double th = double(i) / double(theta_grid - 1);
    best = std::min(best, p1hat(std::pow(lambda, th) / 8.0) + p2hat(std::pow(lambda, 1.0 - th)));
  }
  rep.upper_bound = best;
  rep.upper_ok = rep.upper_bound >= rep.upper_empirical_lo;

  // parts (2)/(3): lower tails with R = c1 lambda^{-J} h(N)
  double d2 = preset.spec.d2(), a2 = preset.spec.alpha2();
  double h2p = preset.spec.h2_prime(H[0], H[2]);
  rep.p0 = h2p + H[3] + J * (d2 + a2);
  rep.c2 = preset.spec.C4() / preset.spec.C1() / (preset.spec.C2() * preset.spec.C2()) *
           std::pow(c1, d2 + a2);
  double tcut = rep.c2 * std::pow(lambda, -rep.p0) * gamma;

  double pc_fail = tail([&](const DrawBoundStats& d) { return !d.conditions_ok; }).first;
  double pc_eps_fail = tail([&](const DrawBoundStats& d) { return !d.conditions_eps_ok; }).first;
  // p2 term of parts (2)/(3): P(mu < lambda^{-1} v(h(N))) evaluated at
  // lambda / (4 C1 c1^{d2})
  double lam_eff = lambda / (4.0 * preset.spec.C1() * std::pow(c1, d2));
  double p2low = tail([&](const DrawBoundStats& d) { return d.mass < vh / lam_eff; }).first;

  auto [pl, cl] = tail([&](const DrawBoundStats& d) { return d.tmix_1 <= tcut; });
  rep.lower_empirical = pl;
  rep.lower_empirical_lo = wilson_interval(cl, n).lo;
  rep.lower_bound = 2.0 * pc_fail + p2low;
  rep.lower_ok = rep.lower_bound >= rep.lower_empirical_lo;

  auto [pp, cp] = tail([&](const DrawBoundStats& d) { return d.tmix_1_root <= tcut; });
  rep.lower_point_empirical = pp;
  rep.lower_point_empirical_lo = wilson_interval(cp, n).lo;
  rep.lower_point_bound = 2.0 * pc_eps_fail + p2low;
  rep.lower_point_ok = rep.lower_point_bound >= rep.lower_point_empirical_lo;

  return rep;
}

}  // namespace mixlab
