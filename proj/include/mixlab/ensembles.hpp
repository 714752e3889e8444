#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mixlab/errors.hpp"
#include "mixlab/graph.hpp"
#include "mixlab/rng.hpp"

namespace mixlab {

// A sampled graph with provenance; (family, parameters, master seed, draw
// index) determine the draw bit-exactly no matter how work is scheduled.
struct Draw {
  WeightedGraph graph;
  std::string family;
  std::uint64_t master_seed = 0;
  long draw_index = 0;
  std::map<std::string, double> metadata;
};

// i.i.d. edge-weight law supported on [c1, c2] with 0 < c1 <= c2
struct WeightLaw {
  double lo = 1.0, hi = 1.0;
  static WeightLaw constant(double c) { return {c, c}; }
  static WeightLaw uniform(double a, double b) { return {a, b}; }
  double sample(Rng& rng) const { return lo == hi ? lo : rng.uniform(lo, hi); }
  void validate() const {
    if (!(lo > 0) || !(hi >= lo)) throw Error("weight law support must satisfy 0 < c1 <= c2");
  }
};

// ---- deterministic box ----------------------------------------------------

// {1..N}^d with nearest-neighbor unit weights; d = 1 is the path graph
inline WeightedGraph deterministic_box(int N, int d) {
  if (N < 2 || d < 1) throw Error("box needs side >= 2, dimension >= 1");
  long total = 1;
  for (int i = 0; i < d; ++i) total *= N;
  std::vector<EdgeInput> edges;
  std::vector<long> stride(d, 1);
  for (int i = 1; i < d; ++i) stride[i] = stride[i - 1] * N;
  for (long v = 0; v < total; ++v)
    for (int i = 0; i < d; ++i)
      if ((v / stride[i]) % N + 1 < N) edges.push_back({v, v + stride[i], 1.0});
  return WeightedGraph(edges, MetricSpec::graph_distance(), 0);
}

// ---- critical Erdos-Renyi giant -------------------------------------------

namespace detail {

struct UnionFind {
  std::vector<int> parent, size;
  explicit UnionFind(int n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
};

// flat index k in [0, N(N-1)/2) -> unordered pair (u, v), u < v, row-major
inline std::pair<long, long> pair_from_flat(long k, long N) {
  // row u occupies N-1-u slots; walk rows (called O(E) times with u cached
  // by the caller via monotone ks, so a direct scan stays linear overall)
  long u = 0, offset = 0;
  while (k - offset >= N - 1 - u) {
    offset += N - 1 - u;
    ++u;
  }
  return {u, u + 1 + (k - offset)};
}

}  // namespace detail

// Largest component of G(N, p) at p = N^{-1} + lambda N^{-4/3}; unit
// weights, root uniform over the component. Ties broken toward the component
// containing the smallest vertex label.
inline Draw er_giant(long N, double window_lambda, std::uint64_t seed, long index = 0) {
  if (N < 10) throw Error("er_giant needs N >= 10");
  double p = 1.0 / double(N) + window_lambda * std::pow(double(N), -4.0 / 3.0);
  p = std::clamp(p, 1e-12, 1.0 - 1e-12);

  Rng rng(seed, 0x45520000ULL + static_cast<std::uint64_t>(index));
  long total = N * (N - 1) / 2;
  std::vector<std::pair<int, int>> all_edges;
  detail::UnionFind uf(static_cast<int>(N));
  {
    long k = static_cast<long>(rng.geometric_skip(p));
    long u = 0, offset = 0;
    while (k < total) {
      while (k - offset >= N - 1 - u) {
        offset += N - 1 - u;
        ++u;
      }
      int v = static_cast<int>(u + 1 + (k - offset));
      all_edges.emplace_back(static_cast<int>(u), v);
      uf.unite(static_cast<int>(u), v);
      k += 1 + static_cast<long>(rng.geometric_skip(p));
    }
  }

  // largest component, ties by smallest minimum label
  std::unordered_map<int, std::pair<int, int>> comp;  // root -> (size, min label)
  for (long v = 0; v < N; ++v) {
    int r = uf.find(static_cast<int>(v));
    auto it = comp.find(r);
    if (it == comp.end()) comp[r] = {uf.size[r], static_cast<int>(v)};
  }
  int best_root = -1, best_size = 0, best_min = 0;
  for (auto& [r, info] : comp) {
    auto [sz, mn] = info;
    if (sz > best_size || (sz == best_size && mn < best_min)) {
      best_root = r;
      best_size = sz;
      best_min = mn;
    }
  }
  if (best_size < 2) {
    // degenerate draw (isolated vertices only); retry with a derived stream
    return er_giant(N, window_lambda, seed ^ 0xe5u, index + (1L << 40));
  }

  std::vector<EdgeInput> edges;
  for (auto [u, v] : all_edges)
    if (uf.find(u) == best_root) edges.push_back({u, v, 1.0});

  // compaction inside WeightedGraph keeps ascending label order; choose the
  // root uniformly over the component by compacted position
  Draw d{WeightedGraph(edges), "er-critical", seed, index, {}};
  int root_pos = static_cast<int>(rng.below(static_cast<std::uint64_t>(d.graph.vertex_count())));
  d.graph = WeightedGraph(edges, MetricSpec::graph_distance(), d.graph.labels()[root_pos]);
  d.metadata["component_size"] = best_size;
  d.metadata["N"] = double(N);
  d.metadata["lambda"] = window_lambda;
  d.metadata["p"] = p;
  return d;
}

// ---- conditioned Galton-Watson trees ---------------------------------------

enum class OffspringKind { Poisson1, GeometricHalf, Stable };

struct OffspringSpec {
  OffspringKind kind = OffspringKind::Poisson1;
  double alpha = 1.5;  // Stable only
  static OffspringSpec poisson1() { return {OffspringKind::Poisson1, 0}; }
  static OffspringSpec geometric_half() { return {OffspringKind::GeometricHalf, 0}; }
  static OffspringSpec stable(double alpha) {
    if (!(alpha > 1.0) || !(alpha < 2.0)) throw Error("stable offspring needs alpha in (1,2)");
    return {OffspringKind::Stable, alpha};
  }
  double sigma() const {
    // standard deviation when finite: poisson1 -> 1, geometric-half -> sqrt(2)
    switch (kind) {
      case OffspringKind::Poisson1: return 1.0;
      case OffspringKind::GeometricHalf: return std::sqrt(2.0);
      case OffspringKind::Stable: return std::numeric_limits<double>::quiet_NaN();
    }
    return 1.0;
  }
};

namespace detail {

// Mean-1 heavy-tailed law: P(k) = k^{-1-alpha}/zeta(1+alpha) for k >= 1 and
// an atom at zero fixing the mean. Zeta values via Euler-Maclaurin to ~1e-14.
class StableOffspringLaw {
 public:
  explicit StableOffspringLaw(double alpha) : alpha_(alpha) {
    double za = zeta(alpha);        // sum k^{-alpha} = mean numerator
    double za1 = zeta(alpha + 1.0); // sum k^{-1-alpha}
    c_ = 1.0 / za;                  // mean = c * zeta(alpha) = 1
    p0_ = 1.0 - c_ * za1;
    if (p0_ <= 0) throw Error("stable offspring normalization failed");
    cdf_.reserve(kTable);
    double acc = p0_;
    cdf_.push_back(acc);  // k = 0
    for (long k = 1; k <= kTable; ++k) {
      acc += c_ * std::pow(double(k), -1.0 - alpha_);
      cdf_.push_back(acc);
    }
  }

  double mean_error() const {
    // recompute the mean from the stored normalization (diagnostic)
    return std::abs(c_ * zeta(alpha_) - 1.0);
  }

  long sample(Rng& rng) const {
    double u = rng.u01();
    // binary search in the table
    if (u < cdf_.back()) {
      size_t lo = 0, hi = cdf_.size() - 1;
      while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (cdf_[mid] > u) hi = mid;
        else lo = mid + 1;
      }
      return static_cast<long>(lo);
    }
    // analytic tail continuation: P(X > k) ~ c k^{-alpha}/alpha (+EM term)
    double target = 1.0 - u;
    double k = std::pow(c_ / (alpha_ * target), 1.0 / alpha_);
    return std::max<long>(kTable + 1, llround(k));
  }

  double p0() const { return p0_; }

 private:
  static double zeta(double s) {
    // Euler-Maclaurin: partial sum + integral tail + correction terms
    const long K = 20000;
    double sum = 0;
    for (long k = 1; k <= K; ++k) sum += std::pow(double(k), -s);
    double Kd = double(K);
    sum += std::pow(Kd, 1 - s) / (s - 1) - 0.5 * std::pow(Kd, -s) +
           s / 12.0 * std::pow(Kd, -s - 1);
    return sum;
  }

  static constexpr long kTable = 1 << 16;
  double alpha_, c_, p0_;
  std::vector<double> cdf_;
};

}  // namespace detail

// Galton-Watson tree with mean-1 offspring conditioned on total progeny N,
// via the cycle construction: i.i.d. increments conditioned to sum to -1,
// rotated at the first minimum into a first-passage (Lukasiewicz) path.
inline Draw gw_conditioned(long N, const OffspringSpec& off, std::uint64_t seed,
                           long index = 0) {
  if (N < 2) throw Error("gw_conditioned needs N >= 2");
  Rng rng(seed, 0x47570000ULL + static_cast<std::uint64_t>(index));

  std::vector<long> xi(N);
  if (off.kind == OffspringKind::Poisson1) {
    // conditioned Poisson counts == N-1 balls dropped uniformly into N boxes
    std::fill(xi.begin(), xi.end(), 0);
    for (long b = 0; b + 1 < N; ++b) ++xi[rng.below(static_cast<std::uint64_t>(N))];
  } else if (off.kind == OffspringKind::GeometricHalf) {
    // conditioned geometric(1/2) counts are uniform over compositions of
    // N-1 into N parts: place N-1 stars among 2N-2 slots
    auto stars = rng.sample_ascending(static_cast<std::uint64_t>(N - 1),
                                      static_cast<std::uint64_t>(2 * N - 2));
    std::fill(xi.begin(), xi.end(), 0);
    long seen = 0;
    for (auto s : stars) {
      long part = static_cast<long>(s) - seen;  // bars before this star
      ++xi[part];
      ++seen;
    }
  } else {
    detail::StableOffspringLaw law(off.alpha);
    const long budget = 1000000;
    bool ok = false;
    for (long attempt = 0; attempt < budget; ++attempt) {
      long sum = 0;
      for (long i = 0; i < N; ++i) {
        xi[i] = law.sample(rng);
        sum += xi[i];
        if (sum > 2 * N) break;  // early bail on hopeless attempts
      }
      if (sum == N - 1) {
        ok = true;
        break;
      }
    }
    if (!ok) throw SamplingBudgetExceeded("gw rejection budget exhausted");
  }

  // rotate at the first minimum of the partial sums of xi - 1
  long best = std::numeric_limits<long>::max(), arg = 0, s = 0;
  for (long i = 0; i < N; ++i) {
    s += xi[i] - 1;
    if (s < best) {
      best = s;
      arg = i;
    }
  }
  long start = (arg + 1) % N;

  // build the tree from the rotated Lukasiewicz path (stack construction)
  std::vector<EdgeInput> edges;
  edges.reserve(N - 1);
  std::vector<long> stack;
  std::vector<long> pending;  // remaining children of the node on the stack
  long next_id = 1;
  stack.push_back(0);
  pending.push_back(xi[start]);
  long height = 0;
  std::vector<long> depth(N, 0);
  long maxdeg = xi[start];
  for (long i = 1; i < N; ++i) {
    long c = xi[(start + i) % N];
    maxdeg = std::max(maxdeg, c);
    while (!stack.empty() && pending.back() == 0) {
      stack.pop_back();
      pending.pop_back();
    }
    long parent = stack.back();
    --pending.back();
    long me = next_id++;
    edges.push_back({parent, me, 1.0});
    depth[me] = depth[parent] + 1;
    height = std::max(height, depth[me]);
    stack.push_back(me);
    pending.push_back(c);
  }

  Draw d{WeightedGraph(edges, MetricSpec::graph_distance(), 0), "gw-tree", seed, index, {}};
  d.metadata["N"] = double(N);
  d.metadata["height"] = double(height);
  d.metadata["max_degree"] = double(maxdeg);
  if (off.kind == OffspringKind::Stable) d.metadata["alpha"] = off.alpha;
  return d;
}

// ---- Sierpinski gasket graphs ----------------------------------------------

// Level-N gasket with i.i.d. random edge weights and the Euclidean metric
// from the exact lattice embedding, scaled to a unit outer triangle.
// Coordinates live in the triangular-lattice basis e1=(1,0), e2=(1/2,
// sqrt(3)/2) as exact integers.
inline Draw sierpinski_level(int level, const WeightLaw& law, std::uint64_t seed,
                             long index = 0) {
  if (level < 0) throw Error("level must be >= 0");
  law.validate();
  Rng rng(seed, 0x53470000ULL + static_cast<std::uint64_t>(index));

  long side = 1L << level;
  std::map<std::pair<long, long>, int> ids;
  std::vector<std::pair<long, long>> coords;
  auto vid = [&](long a, long b) {
    auto [it, fresh] = ids.emplace(std::make_pair(a, b), static_cast<int>(coords.size()));
    if (fresh) coords.emplace_back(a, b);
    return it->second;
  };
  // corner p1 first so it becomes vertex 0 (the root)
  vid(0, 0);
  vid(side, 0);
  vid(0, side);

  std::vector<EdgeInput> edges;
  struct Tri {
    long ax, ay, bx, by, cx, cy;
    int depth;
  };
  std::vector<Tri> work{{0, 0, side, 0, 0, side, 0}};
  while (!work.empty()) {
    Tri t = work.back();
    work.pop_back();
    if (t.depth == level) {
      int a = vid(t.ax, t.ay), b = vid(t.bx, t.by), c = vid(t.cx, t.cy);
      edges.push_back({a, b, 0.0});
      edges.push_back({b, c, 0.0});
      edges.push_back({c, a, 0.0});
      continue;
    }
    long mabx = (t.ax + t.bx) / 2, maby = (t.ay + t.by) / 2;
    long macx = (t.ax + t.cx) / 2, macy = (t.ay + t.cy) / 2;
    long mbcx = (t.bx + t.cx) / 2, mbcy = (t.by + t.cy) / 2;
    work.push_back({t.ax, t.ay, mabx, maby, macx, macy, t.depth + 1});
    work.push_back({mabx, maby, t.bx, t.by, mbcx, mbcy, t.depth + 1});
    work.push_back({macx, macy, mbcx, mbcy, t.cx, t.cy, t.depth + 1});
  }
  // deterministic weight order: sort edge keys, then draw
  for (auto& e : edges) {
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const EdgeInput& a, const EdgeInput& b) {
    return std::make_pair(a.u, a.v) < std::make_pair(b.u, b.v);
  });
  for (auto& e : edges) e.w = law.sample(rng);

  int n = static_cast<int>(coords.size());
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  double scale = 1.0 / double(side);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double da = double(coords[i].first - coords[j].first);
      double db = double(coords[i].second - coords[j].second);
      double d2 = da * da + da * db + db * db;  // |a e1 + b e2|^2 on the lattice
      dist[i][j] = dist[j][i] = std::sqrt(d2) * scale;
    }

  Draw d{WeightedGraph(edges, MetricSpec::explicit_matrix(std::move(dist)), 0),
         "gasket", seed, index, {}};
  d.metadata["level"] = level;
  d.metadata["vertices"] = n;
  d.metadata["edges"] = double(edges.size());
  return d;
}

// ---- range of a high-dimensional random walk -------------------------------

// Vertices are the sites visited by an N-step simple random walk on Z^d
// (d >= 5), edges the traversed bonds, root the origin.
inline Draw srw_range(long N, int d, std::uint64_t seed, long index = 0) {
  if (d < 5) throw DimensionTooLow("srw range requires dimension >= 5, got " + std::to_string(d));
  if (N < 1) throw Error("need at least one step");
  Rng rng(seed, 0x52570000ULL + static_cast<std::uint64_t>(index));

  struct ArrayHash {
    size_t operator()(const std::array<std::int32_t, 8>& a) const {
      std::uint64_t h = 0x9e3779b97f4a7c15ULL;
      for (auto v : a) {
        h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) + 0x9e3779b9U +
             (h << 6) + (h >> 2);
      }
      return static_cast<size_t>(h);
    }
  };

  std::array<std::int32_t, 8> pos{};
  std::unordered_map<std::array<std::int32_t, 8>, int, ArrayHash> site;
  site.reserve(static_cast<size_t>(N) * 2);
  site[pos] = 0;
  int next = 1;
  std::unordered_set<std::uint64_t> bonds;
  bonds.reserve(static_cast<size_t>(N) * 2);
  std::vector<EdgeInput> edges;
  int cur = 0;
  for (long step = 0; step < N; ++step) {
    auto dir = rng.below(static_cast<std::uint64_t>(2 * d));
    int axis = static_cast<int>(dir >> 1);
    pos[axis] += (dir & 1) ? 1 : -1;
    auto [it, fresh] = site.emplace(pos, next);
    if (fresh) ++next;
    int to = it->second;
    std::uint64_t key = (static_cast<std::uint64_t>(std::min(cur, to)) << 32) |
                        static_cast<std::uint32_t>(std::max(cur, to));
    if (bonds.insert(key).second) edges.push_back({std::min(cur, to), std::max(cur, to), 1.0});
    cur = to;
  }

  Draw out{WeightedGraph(edges, MetricSpec::graph_distance(), 0), "srw-range", seed, index, {}};
  out.metadata["N"] = double(N);
  out.metadata["dimension"] = d;
  out.metadata["distinct_sites"] = double(next);
  return out;
}

}  // namespace mixlab
