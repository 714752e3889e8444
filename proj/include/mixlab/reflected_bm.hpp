#pragma once

#include <cmath>
#include <vector>

#include "mixlab/errors.hpp"
#include "mixlab/kernel.hpp"

namespace mixlab {

// Analytic heat kernel on [0,1] with reflecting boundary:
//   q_t(x,y) = 1 + 2 sum_{k>=1} exp(-k^2 pi^2 t) cos(k pi x) cos(k pi y).
// Series truncated once terms drop below tail_tol; mixing times found by
// bisection of the strictly decreasing sup_x D_p(x, t).
class ReflectedBmOracle {
 public:
  int grid_points = 2048;
  double tail_tol = 1e-14;

  double q(double t, double x, double y) const {
    double s = 1.0;
    for (int k = 1;; ++k) {
      double e = std::exp(-double(k) * k * kPi2 * t);
      if (2.0 * e < tail_tol) break;
      s += 2.0 * e * std::cos(k * kPi * x) * std::cos(k * kPi * y);
    }
    return s;
  }

  // D_p(x,t) with Lebesgue measure; trapezoid quadrature on the y-grid
  double dp_distance(double x, double t, double p) const {
    int K = modes(t);
    std::vector<double> cx(K + 1);
    for (int k = 1; k <= K; ++k)
      cx[k] = 2.0 * std::exp(-double(k) * k * kPi2 * t) * std::cos(k * kPi * x);
    if (p == kPInf) {
      double mx = 0.0;
      for (int j = 0; j <= grid_points; ++j) {
        double y = double(j) / grid_points;
        mx = std::max(mx, std::abs(eval(cx, y)));
      }
      return mx;
    }
    double acc = 0.0;
    for (int j = 0; j <= grid_points; ++j) {
      double y = double(j) / grid_points;
      double v = std::pow(std::abs(eval(cx, y)), p);
      acc += (j == 0 || j == grid_points) ? 0.5 * v : v;
    }
    return std::pow(acc / grid_points, 1.0 / p);
  }

  double sup_dp(double t, double p) const {
    double s = 0.0;
    for (int j = 0; j <= grid_points; ++j)
      s = std::max(s, dp_distance(double(j) / grid_points, t, p));
    return s;
  }

  // numerical check that the sup over x is attained at the interval ends
  bool sup_attained_at_endpoints(double t, double p) const {
    double ends = std::max(dp_distance(0.0, t, p), dp_distance(1.0, t, p));
    return ends >= sup_dp(t, p) - 1e-12;
  }

  double mixing_time(double p, double threshold = 0.25, double tol = 1e-10) const {
    double lo = 1e-4, hi = 1e-4;
    while (sup_dp(hi, p) > threshold) {
      lo = hi;
      hi *= 2.0;
      if (hi > 64.0) throw Error("reflected bm oracle failed to bracket");
    }
    while (hi - lo > tol) {
      double mid = 0.5 * (lo + hi);
      if (sup_dp(mid, p) <= threshold) hi = mid;
      else lo = mid;
    }
    return hi;
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;
  static constexpr double kPi2 = kPi * kPi;

  int modes(double t) const {
    int k = 1;
    while (2.0 * std::exp(-double(k) * k * kPi2 * t) >= tail_tol) ++k;
    return k;
  }

  double eval(const std::vector<double>& cx, double y) const {
    double s = 0.0;
    for (size_t k = 1; k < cx.size(); ++k) s += cx[k] * std::cos(k * kPi * y);
    return s;
  }
};

}  // namespace mixlab
