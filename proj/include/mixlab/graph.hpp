#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "mixlab/errors.hpp"

namespace mixlab {

enum class MetricMode { GraphDistance, ScaledGraphDistance, Explicit };

struct MetricSpec {
  MetricMode mode = MetricMode::GraphDistance;
  double scale = 1.0;
  std::vector<std::vector<double>> matrix;  // Explicit only

  static MetricSpec graph_distance() { return {}; }
  static MetricSpec scaled(double factor) {
    MetricSpec m;
    m.mode = MetricMode::ScaledGraphDistance;
    m.scale = factor;
    return m;
  }
  static MetricSpec explicit_matrix(std::vector<std::vector<double>> d) {
    MetricSpec m;
    m.mode = MetricMode::Explicit;
    m.matrix = std::move(d);
    return m;
  }
};

struct EdgeInput {
  long u, v;
  double w = 1.0;
  std::optional<mpq_class> exact;  // optional exact weight
};

// Finite connected weighted graph with symmetric positive edge weights, a
// vertex metric and an optional distinguished root. Immutable after
// construction; safe to share read-only across threads.
class WeightedGraph {
 public:
  struct Edge {
    int u, v;
    double w;
  };

  WeightedGraph(const std::vector<EdgeInput>& edges, MetricSpec metric = {},
                std::optional<long> root = std::nullopt) {
    if (edges.empty()) throw Error("edge list is empty");

    // compact arbitrary labels to dense indices 0..n-1 (ascending label order)
    std::map<long, int> ids;
    for (const auto& e : edges) {
      if (e.u == e.v) throw SelfLoop("self-loop at vertex " + std::to_string(e.u));
      ids.emplace(e.u, 0);
      ids.emplace(e.v, 0);
    }
    labels_.reserve(ids.size());
    for (auto& [label, id] : ids) {
      id = static_cast<int>(labels_.size());
      labels_.push_back(label);
    }
    n_ = static_cast<int>(labels_.size());
    if (n_ < 2) throw Error("graph must have at least two vertices");

    bool any_exact = false;
    for (const auto& e : edges)
      if (e.exact) any_exact = true;

    std::map<std::pair<int, int>, int> seen;
    edges_.reserve(edges.size());
    if (any_exact) exact_weights_.reserve(edges.size());
    for (const auto& e : edges) {
      int u = ids[e.u], v = ids[e.v];
      if (u == v) throw SelfLoop("self-loop at vertex " + std::to_string(e.u));
      if (u > v) std::swap(u, v);
      if (!seen.emplace(std::make_pair(u, v), 1).second)
        throw DuplicateEdge("duplicate edge {" + std::to_string(e.u) + "," +
                            std::to_string(e.v) + "}");
      mpq_class xw = e.exact ? *e.exact : mpq_class(e.w);
      double w = e.exact ? e.exact->get_d() : e.w;
      if (!(w > 0) || sgn(xw) <= 0)
        throw NonPositiveWeight("weight of edge {" + std::to_string(e.u) + "," +
                                std::to_string(e.v) + "} must be positive");
      edges_.push_back({u, v, w});
      if (any_exact) exact_weights_.push_back(xw);
    }

    build_adjacency();
    check_connected();

    if (root) {
      auto it = ids.find(*root);
      if (it == ids.end()) throw Error("root label not present in edge list");
      root_ = it->second;
    }

    metric_ = std::move(metric);
    if (metric_.mode == MetricMode::Explicit) validate_explicit_metric();
    if (metric_.mode == MetricMode::ScaledGraphDistance && !(metric_.scale > 0))
      throw BadMetric("scale factor must be positive");
  }

  int vertex_count() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::optional<int> root() const { return root_; }
  const MetricSpec& metric() const { return metric_; }
  const std::vector<long>& labels() const { return labels_; }
  bool has_exact_weights() const { return !exact_weights_.empty(); }
  bool is_tree() const { return edges_.size() + 1 == static_cast<size_t>(n_); }

  // exact weight of edge index e (binary expansion of the double when no
  // exact weight was supplied; always a faithful representation)
  mpq_class exact_weight(size_t e) const {
    return exact_weights_.empty() ? mpq_class(edges_[e].w) : exact_weights_[e];
  }

  // CSR adjacency
  int degree(int x) const { return head_[x + 1] - head_[x]; }
  const int* neighbors(int x) const { return adj_.data() + head_[x]; }
  const double* incident_weights(int x) const { return wts_.data() + head_[x]; }

  double mu(int x) const { return mu_[x]; }             // weighted degree
  double total_mass() const { return total_mass_; }     // mu(G)
  double pi(int x) const { return mu_[x] / total_mass_; }
  double min_edge_weight() const { return min_w_; }

  mpq_class exact_mu(int x) const {
    mpq_class s = 0;
    for (int i = head_[x]; i < head_[x + 1]; ++i) s += exact_weight(eidx_[i]);
    return s;
  }
  mpq_class exact_total_mass() const {
    mpq_class s = 0;
    for (size_t e = 0; e < edges_.size(); ++e) s += 2 * exact_weight(e);
    return s;
  }

  // hop counts from x (BFS)
  std::vector<int> hops_from(int x) const {
    std::vector<int> d(n_, -1);
    std::queue<int> q;
    d[x] = 0;
    q.push(x);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int i = head_[v]; i < head_[v + 1]; ++i) {
        int u = adj_[i];
        if (d[u] < 0) {
          d[u] = d[v] + 1;
          q.push(u);
        }
      }
    }
    return d;
  }

  int hop_distance(int x, int y) const { return hops_from(x)[y]; }

  // hop diameter; exact on trees, otherwise a double-sweep lower bound
  // (within a factor 2 of the truth on any graph)
  int hop_diameter_estimate() const {
    auto d0 = hops_from(0);
    int a = int(std::max_element(d0.begin(), d0.end()) - d0.begin());
    auto da = hops_from(a);
    return *std::max_element(da.begin(), da.end());
  }

  // metric distance per the chosen metric mode
  double distance(int x, int y) const {
    switch (metric_.mode) {
      case MetricMode::GraphDistance: return hop_distance(x, y);
      case MetricMode::ScaledGraphDistance: return metric_.scale * hop_distance(x, y);
      case MetricMode::Explicit: return metric_.matrix[x][y];
    }
    return 0;
  }

  std::vector<double> distances_from(int x) const {
    if (metric_.mode == MetricMode::Explicit) return metric_.matrix[x];
    auto h = hops_from(x);
    std::vector<double> d(n_);
    double s = metric_.mode == MetricMode::ScaledGraphDistance ? metric_.scale : 1.0;
    for (int i = 0; i < n_; ++i) d[i] = s * h[i];
    return d;
  }

  // ---- serialization -------------------------------------------------

  std::string serialize() const {
    std::ostringstream os;
    os.precision(17);
    os << "mixgraph v1 n=" << n_;
    if (root_) os << " root=" << *root_;
    os << " metric=";
    switch (metric_.mode) {
      case MetricMode::GraphDistance: os << "graph"; break;
      case MetricMode::ScaledGraphDistance: os << "scaled:" << metric_.scale; break;
      case MetricMode::Explicit: os << "explicit"; break;
    }
    os << "\n";
    for (size_t e = 0; e < edges_.size(); ++e) {
      os << edges_[e].u << " " << edges_[e].v << " ";
      if (!exact_weights_.empty())
        os << exact_weights_[e].get_num() << "/" << exact_weights_[e].get_den();
      else
        os << edges_[e].w;
      os << "\n";
    }
    if (metric_.mode == MetricMode::Explicit) {
      for (int i = 0; i < n_; ++i) {
        os << "d " << i;
        for (int j = 0; j < n_; ++j) os << " " << metric_.matrix[i][j];
        os << "\n";
      }
    }
    return os.str();
  }

  static WeightedGraph deserialize(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    long lineno = 0;
    if (!std::getline(is, line)) throw ParseError(1, "empty input");
    ++lineno;

    std::istringstream hs(line);
    std::string tag, ver;
    hs >> tag >> ver;
    if (tag != "mixgraph" || ver != "v1") throw ParseError(lineno, "bad header");
    long n = -1, root = -1;
    MetricSpec metric;
    std::string tok;
    while (hs >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) throw ParseError(lineno, "bad header token '" + tok + "'");
      std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
      if (key == "n") n = std::stol(val);
      else if (key == "root") root = std::stol(val);
      else if (key == "metric") {
        if (val == "graph") metric.mode = MetricMode::GraphDistance;
        else if (val.rfind("scaled:", 0) == 0) {
          metric.mode = MetricMode::ScaledGraphDistance;
          metric.scale = std::stod(val.substr(7));
        } else if (val == "explicit") {
          metric.mode = MetricMode::Explicit;
        } else throw ParseError(lineno, "unknown metric '" + val + "'");
      } else throw ParseError(lineno, "unknown header key '" + key + "'");
    }
    if (n < 2) throw ParseError(lineno, "missing or bad vertex count");

    std::vector<EdgeInput> edges;
    std::vector<std::vector<double>> dist;
    if (metric.mode == MetricMode::Explicit)
      dist.assign(n, std::vector<double>(n, 0.0));
    while (std::getline(is, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      if (line[0] == 'd') {
        if (metric.mode != MetricMode::Explicit)
          throw ParseError(lineno, "distance row without explicit metric");
        char c;
        long i;
        ls >> c >> i;
        if (!ls || i < 0 || i >= n) throw ParseError(lineno, "bad distance row index");
        for (long j = 0; j < n; ++j)
          if (!(ls >> dist[i][j])) throw ParseError(lineno, "short distance row");
        continue;
      }
      EdgeInput e;
      std::string wtok;
      if (!(ls >> e.u >> e.v >> wtok)) throw ParseError(lineno, "expected 'u v weight'");
      auto slash = wtok.find('/');
      if (slash != std::string::npos) {
        try {
          mpq_class q(wtok);
          q.canonicalize();
          e.exact = q;
          e.w = q.get_d();
        } catch (...) {
          throw ParseError(lineno, "bad rational weight '" + wtok + "'");
        }
      } else {
        try {
          size_t pos = 0;
          e.w = std::stod(wtok, &pos);
          if (pos != wtok.size()) throw std::invalid_argument("");
        } catch (...) {
          throw ParseError(lineno, "bad weight '" + wtok + "'");
        }
      }
      edges.push_back(e);
    }
    if (metric.mode == MetricMode::Explicit) metric.matrix = std::move(dist);
    return WeightedGraph(edges, std::move(metric),
                         root >= 0 ? std::optional<long>(root) : std::nullopt);
  }

 private:
  void build_adjacency() {
    head_.assign(n_ + 1, 0);
    for (const auto& e : edges_) {
      ++head_[e.u + 1];
      ++head_[e.v + 1];
    }
    for (int i = 0; i < n_; ++i) head_[i + 1] += head_[i];
    adj_.resize(2 * edges_.size());
    wts_.resize(2 * edges_.size());
    eidx_.resize(2 * edges_.size());
    std::vector<int> fill(head_.begin(), head_.end() - 1);
    for (size_t e = 0; e < edges_.size(); ++e) {
      const auto& ed = edges_[e];
      adj_[fill[ed.u]] = ed.v;
      wts_[fill[ed.u]] = ed.w;
      eidx_[fill[ed.u]++] = static_cast<int>(e);
      adj_[fill[ed.v]] = ed.u;
      wts_[fill[ed.v]] = ed.w;
      eidx_[fill[ed.v]++] = static_cast<int>(e);
    }
    mu_.assign(n_, 0.0);
    min_w_ = std::numeric_limits<double>::infinity();
    for (const auto& e : edges_) {
      mu_[e.u] += e.w;
      mu_[e.v] += e.w;
      min_w_ = std::min(min_w_, e.w);
    }
    total_mass_ = 0.0;
    for (double m : mu_) total_mass_ += m;
  }

  void check_connected() const {
    auto d = hops_from(0);
    for (int i = 0; i < n_; ++i)
      if (d[i] < 0)
        throw DisconnectedGraph("graph is not connected (vertex " +
                                std::to_string(labels_[i]) + " unreachable)");
  }

  void validate_explicit_metric() const {
    const auto& M = metric_.matrix;
    if (static_cast<int>(M.size()) != n_)
      throw BadMetric("distance matrix size mismatch");
    const double tol = 1e-9;
    for (int i = 0; i < n_; ++i) {
      if (static_cast<int>(M[i].size()) != n_) throw BadMetric("distance matrix not square");
      if (std::abs(M[i][i]) > 0) throw BadMetric("nonzero diagonal in distance matrix");
      for (int j = 0; j < n_; ++j) {
        if (M[i][j] != M[j][i]) throw BadMetric("distance matrix not symmetric");
        if (i != j && !(M[i][j] > 0)) throw BadMetric("non-positive off-diagonal distance");
      }
    }
    // triangle inequality: exhaustive for small n, sampled beyond
    if (n_ <= 800) {
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
          for (int k = 0; k < n_; ++k)
            if (M[i][j] > M[i][k] + M[k][j] + tol)
              throw BadMetric("triangle inequality violated");
    } else {
      sampled_triangle_check(M, tol);
    }
  }

  static void sampled_triangle_check(const std::vector<std::vector<double>>& M, double tol) {
    // deterministic strided sample of triples
    int n = static_cast<int>(M.size());
    int stride = std::max(1, n / 64);
    for (int i = 0; i < n; i += stride)
      for (int j = 0; j < n; j += stride)
        for (int k = 0; k < n; k += stride)
          if (M[i][j] > M[i][k] + M[k][j] + tol)
            throw BadMetric("triangle inequality violated");
  }

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<mpq_class> exact_weights_;  // parallel to edges_ when present
  std::vector<long> labels_;
  std::optional<int> root_;
  MetricSpec metric_;

  std::vector<int> head_, adj_, eidx_;
  std::vector<double> wts_, mu_;
  double total_mass_ = 0.0, min_w_ = 0.0;
};

// Invariant probability measure pi(x) = mu_x / mu(G).
struct StationaryMeasure {
  std::vector<double> weights_per_vertex;  // mu_x
  double total_mass;                       // mu(G)
  std::vector<double> probabilities;       // pi(x)
};

inline StationaryMeasure stationary(const WeightedGraph& g) {
  StationaryMeasure s;
  int n = g.vertex_count();
  s.weights_per_vertex.resize(n);
  s.probabilities.resize(n);
  s.total_mass = g.total_mass();
  for (int x = 0; x < n; ++x) {
    s.weights_per_vertex[x] = g.mu(x);
    s.probabilities[x] = g.pi(x);
  }
  return s;
}

inline WeightedGraph build_graph(const std::vector<EdgeInput>& edges,
                                 MetricSpec metric = {},
                                 std::optional<long> root = std::nullopt) {
  return WeightedGraph(edges, std::move(metric), root);
}

// small deterministic constructors used throughout tests and experiments
inline WeightedGraph path_graph(int n, double w = 1.0) {
  std::vector<EdgeInput> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, w});
  return WeightedGraph(e);
}

inline WeightedGraph cycle_graph(int n, double w = 1.0) {
  std::vector<EdgeInput> e;
  for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n, w});
  return WeightedGraph(e, MetricSpec::graph_distance(), 0);
}

inline WeightedGraph complete_graph(int n, double w = 1.0) {
  std::vector<EdgeInput> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.push_back({i, j, w});
  return WeightedGraph(e);
}

}  // namespace mixlab
