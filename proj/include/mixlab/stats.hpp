#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace mixlab {

// Wilson score interval for a binomial proportion.
struct WilsonInterval {
  double lo, hi, center;
};

inline WilsonInterval wilson_interval(size_t successes, size_t n, double z = 1.959963984540054) {
  if (n == 0) return {0.0, 1.0, 0.5};
  double p = double(successes) / double(n);
  double z2 = z * z;
  double denom = 1.0 + z2 / double(n);
  double center = (p + z2 / (2.0 * double(n))) / denom;
  double half = z * std::sqrt(p * (1 - p) / double(n) + z2 / (4.0 * double(n) * double(n))) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half), center};
}

// Two-sample Kolmogorov-Smirnov distance.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    double fa = double(i) / a.size(), fb = double(j) / b.size();
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

struct LinearFit {
  double slope = 0.0, intercept = 0.0, r_squared = 0.0;
  size_t n = 0;
};

inline LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
  LinearFit f;
  f.n = x.size();
  if (x.size() != y.size() || x.size() < 2) return f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  double n = double(x.size());
  double vx = sxx - sx * sx / n, vy = syy - sy * sy / n, cxy = sxy - sx * sy / n;
  if (vx <= 0) return f;
  f.slope = cxy / vx;
  f.intercept = (sy - f.slope * sx) / n;
  f.r_squared = vy > 0 ? (cxy * cxy) / (vx * vy) : 1.0;
  return f;
}

inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  double idx = q * double(v.size() - 1);
  size_t lo = static_cast<size_t>(std::floor(idx));
  size_t hi = std::min(v.size() - 1, lo + 1);
  double s = idx - double(lo);
  return v[lo] * (1 - s) + v[hi] * s;
}

inline double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0;
  for (double x : v) s += x;
  return s / double(v.size());
}

}  // namespace mixlab
